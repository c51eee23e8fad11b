//! Dense linear algebra over `F_d`: row reduction, solving, null spaces and
//! subspace intersection. Matrices are row lists `Vec<Vec<u32>>`.

use crate::field::Field;

pub type Rows = Vec<Vec<u32>>;

/// Reduced row echelon form in place. Returns pivot columns in order; zero
/// rows end up at the bottom.
pub fn rref(f: Field, rows: &mut [Vec<u32>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        let Some(p) = (top..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(top, p);
        let inv = f.inv(rows[top][col]).expect("pivot is nonzero");
        for v in rows[top].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == top || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = f.sub(*v, f.mul(factor, pv));
            }
        }
        pivots.push(col);
        top += 1;
    }
    pivots
}

pub fn rank(f: Field, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// A basis (RREF rows) of the span of `vecs`.
pub fn span_basis(f: Field, vecs: &[Vec<u32>]) -> Rows {
    let mut m = vecs.to_vec();
    let r = rref(f, &mut m).len();
    m.truncate(r);
    m
}

/// Whether `v` lies in the row span of `basis`.
pub fn in_span(f: Field, basis: &[Vec<u32>], v: &[u32]) -> bool {
    let mut m = basis.to_vec();
    let r = rref(f, &mut m).len();
    m.push(v.to_vec());
    rank(f, &m) == r
}

/// Solves `a x = b`, setting free variables to zero. `None` if inconsistent.
pub fn solve(f: Field, a: &[Vec<u32>], b: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(a.len(), b.len());
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Rows = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![0u32; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][ncols];
    }
    Some(x)
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace(f: Field, a: &[Vec<u32>], ncols: usize) -> Rows {
    let mut m = a.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0u32; ncols];
            x[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(m[i][fc]);
            }
            x
        })
        .collect()
}

/// Basis of the intersection of two row spans (Zassenhaus).
pub fn intersect(f: Field, a: &[Vec<u32>], b: &[Vec<u32>]) -> Rows {
    let dim = a.first().or(b.first()).map_or(0, |r| r.len());
    let mut block: Rows = Vec::with_capacity(a.len() + b.len());
    for r in a {
        let mut row = r.clone();
        row.extend_from_slice(r);
        block.push(row);
    }
    for r in b {
        let mut row = r.clone();
        row.extend(std::iter::repeat_n(0, dim));
        block.push(row);
    }
    rref(f, &mut block);
    block
        .into_iter()
        .filter(|row| row[..dim].iter().all(|&v| v == 0) && row[dim..].iter().any(|&v| v != 0))
        .map(|row| row[dim..].to_vec())
        .collect()
}

pub fn mat_vec(f: Field, m: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    m.iter().map(|row| dot(f, row, v)).collect()
}

pub fn mat_mul(f: Field, a: &[Vec<u32>], b: &[Vec<u32>]) -> Rows {
    let ncols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![0u32; ncols];
            for (k, &aik) in row.iter().enumerate() {
                if aik == 0 {
                    continue;
                }
                for (o, &bkj) in out.iter_mut().zip(&b[k]) {
                    *o = f.add(*o, f.mul(aik, bkj));
                }
            }
            out
        })
        .collect()
}

#[inline]
pub fn dot(f: Field, a: &[u32], b: &[u32]) -> u32 {
    let d = f.d() as u64;
    let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    (s % d) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(d: u32) -> Field {
        Field::new(d).unwrap()
    }

    #[test]
    fn solve_small_system() {
        let fd = f(5);
        // x + 2y = 3, 3x + 4y = 2  => x = 1, y = 1
        let a = vec![vec![1, 2], vec![3, 4]];
        assert_eq!(solve(fd, &a, &[3, 2]), Some(vec![1, 1]));
        let a = vec![vec![1, 1], vec![2, 2]];
        assert_eq!(solve(fd, &a, &[1, 3]), None);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let fd = f(7);
        let a = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 1]];
        let ns = nullspace(fd, &a, 4);
        assert_eq!(ns.len(), 4 - rank(fd, &a));
        for v in &ns {
            assert!(mat_vec(fd, &a, v).iter().all(|&x| x == 0));
        }
    }

    fn arb_rows(d: u32, r: usize, c: usize) -> impl Strategy<Value = Rows> {
        proptest::collection::vec(proptest::collection::vec(0..d, c), r)
    }

    proptest! {
        #[test]
        fn intersection_dimension_identity(a in arb_rows(3, 3, 5), b in arb_rows(3, 3, 5)) {
            let fd = f(3);
            let inter = intersect(fd, &a, &b);
            let mut sum = a.clone();
            sum.extend(b.iter().cloned());
            prop_assert_eq!(rank(fd, &a) + rank(fd, &b), rank(fd, &inter) + rank(fd, &sum));
            prop_assert_eq!(inter.len(), rank(fd, &inter));
            for v in &inter {
                prop_assert!(in_span(fd, &a, v));
                prop_assert!(in_span(fd, &b, v));
            }
        }

        #[test]
        fn solve_recovers_consistent_rhs(a in arb_rows(5, 4, 6), x in proptest::collection::vec(0u32..5, 6)) {
            let fd = f(5);
            let b = mat_vec(fd, &a, &x);
            let sol = solve(fd, &a, &b).expect("consistent");
            prop_assert_eq!(mat_vec(fd, &a, &sol), b);
        }
    }
}

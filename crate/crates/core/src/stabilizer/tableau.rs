use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;
use crate::symplectic::{find_transvections, CliffordLabel, SymplecticMatrix, Transvection};
use crate::weyl::{symp, SymplecticVector};

use super::GeneratingMatrix;

/// Stabilizer rows `u_i` with phases, plus destabilizer rows `v_i`, such that
/// `[u_i, u_j] = [v_i, v_j] = 0` and `[u_i, v_j] = delta_ij`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tableau {
    pub stab: GeneratingMatrix,
    pub destab: GeneratingMatrix,
}

impl Tableau {
    /// `Z_i` stabilizers and `X_i` destabilizers of `|0...0>`.
    pub fn zero_state(field: Field, n: usize) -> Self {
        let destab = (0..n)
            .map(|i| SymplecticVector::x_unit(field, n, i).into_coords())
            .collect();
        Tableau {
            stab: GeneratingMatrix::zero_state(field, n),
            destab: GeneratingMatrix::new(field, n, destab, vec![0; n]).expect("shape"),
        }
    }

    pub fn field(&self) -> Field {
        self.stab.field()
    }

    pub fn n(&self) -> usize {
        self.stab.n()
    }

    pub fn apply_clifford(&mut self, c: &CliffordLabel) -> Result<()> {
        self.stab.apply_clifford(c)?;
        self.destab.apply_clifford(c)
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        self.stab.apply_gate(g)?;
        self.destab.apply_gate(g)
    }

    /// Checks the commutation relations between all rows.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n();
        if self.stab.len() != n || self.destab.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.stab.len().min(self.destab.len()),
            });
        }
        let f = self.field();
        for i in 0..n {
            for j in 0..n {
                let (u, v) = (self.stab.row(i), self.destab.row(j));
                if symp(f, u, self.stab.row(j)) != 0 || symp(f, v, self.destab.row(i)) != 0 {
                    return Err(Error::NotCommuting(i, j));
                }
                if symp(f, u, v) != u32::from(i == j) {
                    return Err(Error::NotIndependent);
                }
            }
        }
        Ok(())
    }

    /// `m = -sum_i r_i v_i`, so that `[m, u_i] = r_i`.
    pub fn characteristic_vector(&self) -> SymplecticVector {
        characteristic_vector(self)
    }
}

pub fn characteristic_vector(t: &Tableau) -> SymplecticVector {
    let f = t.field();
    let mut m = vec![0u32; 2 * t.n()];
    for (v, &r) in t.destab.rows().iter().zip(t.stab.phases()) {
        if r == 0 {
            continue;
        }
        let c = f.neg(r);
        for (a, &b) in m.iter_mut().zip(v) {
            *a = f.add(*a, f.mul(c, b));
        }
    }
    SymplecticVector::from_coords(f, m).expect("even length")
}

/// Tableau of the state stabilized by `chi(p_i) W_{s_i}`.
///
/// The generators may be overcomplete as long as they span a Lagrangian
/// subspace; phases of redundant generators must be consistent.
pub fn build_tableau(stab_vectors: &[SymplecticVector], phases: &[u32]) -> Result<Tableau> {
    let first = stab_vectors.first().ok_or(Error::NotIndependent)?;
    let (f, n) = (first.field(), first.n());
    if phases.len() != stab_vectors.len() {
        return Err(Error::DimensionMismatch {
            expected: stab_vectors.len(),
            found: phases.len(),
        });
    }
    for s in stab_vectors {
        if s.field() != f {
            return Err(Error::FieldMismatch(f.d(), s.field().d()));
        }
        if s.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.n(),
            });
        }
    }
    for i in 0..stab_vectors.len() {
        for j in (i + 1)..stab_vectors.len() {
            if symp(f, stab_vectors[i].coords(), stab_vectors[j].coords()) != 0 {
                return Err(Error::NotCommuting(i, j));
            }
        }
    }

    let mut chosen: Vec<Vec<u32>> = Vec::with_capacity(n);
    for s in stab_vectors {
        if chosen.len() == n {
            break;
        }
        if !linalg::in_span(f, &chosen, s.coords()) {
            chosen.push(s.coords().to_vec());
        }
    }
    if chosen.len() < n {
        return Err(Error::NotIndependent);
    }

    let m = lagrangian_frame(f, n, chosen)?;
    let u: Vec<Vec<u32>> = (0..n).map(|k| m.column(k)).collect();
    let v: Vec<Vec<u32>> = (0..n).map(|k| m.column(n + k)).collect();

    // s_i = sum_j [s_i, v_j] u_j; solve sum_j c_ij r_j = p_i for r.
    let coeffs: Vec<Vec<u32>> = stab_vectors
        .iter()
        .map(|s| v.iter().map(|vj| symp(f, s.coords(), vj)).collect())
        .collect();
    let rhs: Vec<u32> = phases.iter().map(|&p| p % f.d()).collect();
    let r = linalg::solve(f, &coeffs, &rhs).ok_or(Error::InconsistentPhases)?;

    Ok(Tableau {
        stab: GeneratingMatrix::new(f, n, u, r)?,
        destab: GeneratingMatrix::new(f, n, v, vec![0; n])?,
    })
}

/// Symplectic `M` whose first `n` columns span the same subspace as `basis`.
fn lagrangian_frame(f: Field, n: usize, mut work: Vec<Vec<u32>>) -> Result<SymplecticMatrix> {
    let mut steps: Vec<Vec<Transvection>> = Vec::with_capacity(n);
    for i in 0..n {
        let target = SymplecticVector::from_coords(f, work[i].clone())?;
        if target.is_zero() {
            return Err(Error::NotIndependent);
        }
        let ts = find_transvections(&SymplecticVector::z_unit(f, n, i), &target)?;
        let inverses: Vec<Transvection> = ts.iter().rev().map(Transvection::inverse).collect();
        for w in work.iter_mut().skip(i + 1) {
            for t in &inverses {
                t.apply_in_place(w);
            }
            w[i] = 0;
            if w[n + i] != 0 {
                return Err(Error::NotCommuting(i, i + 1));
            }
        }
        steps.push(ts);
    }
    let mut m = SymplecticMatrix::identity(f, n);
    for ts in steps.iter().rev() {
        for t in ts {
            m.left_transvect(t);
        }
    }
    Ok(m)
}

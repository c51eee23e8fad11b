//! Symplectic matrices, transvections, Clifford labels `(M, g)` and uniform
//! sampling of `Sp(2n, d)` and the Clifford group.
//!
//! A label `(M, g)` stands for the Clifford unitary `C = W_g mu(M)` up to a
//! global phase, acting on Weyl operators as
//! `C W_u C^dagger = chi([g, M u]) W_{M u}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::weyl::{symp, SymplecticVector, WeylOperator};

/// `x -> x + lambda [x, h] h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transvection {
    pub lambda: u32,
    pub h: SymplecticVector,
}

impl Transvection {
    pub fn new(lambda: u32, h: SymplecticVector) -> Self {
        let lambda = lambda % h.field().d();
        Transvection { lambda, h }
    }

    pub fn inverse(&self) -> Self {
        Transvection::new(self.h.field().neg(self.lambda), self.h.clone())
    }

    /// Applies the transvection to raw global-layout coordinates in place.
    #[inline]
    pub fn apply_in_place(&self, x: &mut [u32]) {
        let f = self.h.field();
        let c = f.mul(self.lambda, symp(f, x, self.h.coords()));
        if c == 0 {
            return;
        }
        for (xi, &hi) in x.iter_mut().zip(self.h.coords()) {
            *xi = f.add(*xi, f.mul(c, hi));
        }
    }
}

pub fn transvection_apply(t: &Transvection, x: &SymplecticVector) -> Result<SymplecticVector> {
    if t.h.field() != x.field() {
        return Err(Error::FieldMismatch(t.h.field().d(), x.field().d()));
    }
    if t.h.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: t.h.n(),
            found: x.n(),
        });
    }
    let mut c = x.coords().to_vec();
    t.apply_in_place(&mut c);
    SymplecticVector::from_coords(x.field(), c)
}

/// Transvections (applied in order) mapping `x` to `y`.
///
/// At most two are needed. When `[x, y] = 0` the route passes through an
/// intermediate `w` with `[x, w] != 0 != [w, y]`, built from the first
/// coordinate vectors (in index order) that pair nontrivially with `x`
/// and `y`.
pub fn find_transvections(x: &SymplecticVector, y: &SymplecticVector) -> Result<Vec<Transvection>> {
    if x.field() != y.field() {
        return Err(Error::FieldMismatch(x.field().d(), y.field().d()));
    }
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: y.n(),
        });
    }
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroVector);
    }
    if x == y {
        return Ok(Vec::new());
    }
    let f = x.field();
    let xy = symp(f, x.coords(), y.coords());
    if xy != 0 {
        return Ok(vec![direct(x, y, xy)]);
    }
    let w = intermediate(x, y);
    let xw = symp(f, x.coords(), w.coords());
    let wy = symp(f, w.coords(), y.coords());
    Ok(vec![direct(x, &w, xw), direct(&w, y, wy)])
}

/// Single transvection with `h = y - x` when `[x, y] = s != 0`.
fn direct(x: &SymplecticVector, y: &SymplecticVector, s: u32) -> Transvection {
    let f = x.field();
    let h = y.sub(x).expect("same shape");
    Transvection::new(f.inv(s).expect("nonzero product"), h)
}

fn intermediate(x: &SymplecticVector, y: &SymplecticVector) -> SymplecticVector {
    let f = x.field();
    let dim = x.coords().len();
    let unit = |i: usize| {
        let mut c = vec![0; dim];
        c[i] = 1;
        c
    };
    let first_pairing = |v: &SymplecticVector| {
        (0..dim)
            .map(unit)
            .find(|e| symp(f, v.coords(), e) != 0)
            .expect("nonzero vector pairs with some coordinate vector")
    };
    let a = first_pairing(x);
    let b = first_pairing(y);
    let w = if symp(f, y.coords(), &a) != 0 {
        a
    } else if symp(f, x.coords(), &b) != 0 {
        b
    } else {
        a.iter().zip(&b).map(|(&p, &q)| f.add(p, q)).collect()
    };
    SymplecticVector::from_coords(f, w).expect("even length")
}

/// A `2n x 2n` matrix over `F_d` in the global layout, acting on columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymplecticMatrix {
    field: Field,
    n: usize,
    data: Vec<u32>,
}

impl SymplecticMatrix {
    pub fn identity(field: Field, n: usize) -> Self {
        let dim = 2 * n;
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1;
        }
        SymplecticMatrix { field, n, data }
    }

    /// From rows; checks the shape but not the symplectic condition.
    pub fn from_rows(field: Field, rows: &[Vec<u32>]) -> Result<Self> {
        let dim = rows.len();
        if !dim.is_multiple_of(2) || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::ShapeMismatch(format!(
                "expected an even square matrix, got {} rows",
                dim
            )));
        }
        let data = rows.iter().flatten().map(|&v| v % field.d()).collect();
        Ok(SymplecticMatrix {
            field,
            n: dim / 2,
            data,
        })
    }

    /// From column vectors (images of the coordinate basis).
    pub fn from_columns(field: Field, cols: &[Vec<u32>]) -> Result<Self> {
        let mut m = Self::from_rows(field, cols)?;
        m.transpose_in_place();
        Ok(m)
    }

    fn transpose_in_place(&mut self) {
        let dim = 2 * self.n;
        for i in 0..dim {
            for j in (i + 1)..dim {
                self.data.swap(i * dim + j, j * dim + i);
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * 2 * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.dim()).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.dim()).map(|i| self.get(i, j)).collect()
    }

    /// `M v` on raw coordinates.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let dim = self.dim();
        let d = self.field.d() as u64;
        self.data
            .chunks(dim)
            .map(|row| {
                let s: u64 = row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % d) as u32
            })
            .collect()
    }

    pub fn apply_vec(&self, v: &SymplecticVector) -> Result<SymplecticVector> {
        if v.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.n(),
            });
        }
        SymplecticVector::from_coords(self.field, self.apply(v.coords()))
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn mul(&self, other: &Self) -> Self {
        let dim = self.dim();
        let f = self.field;
        let mut data = vec![0u32; dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..dim {
                    let idx = i * dim + j;
                    data[idx] = f.add(data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        SymplecticMatrix {
            field: f,
            n: self.n,
            data,
        }
    }

    /// Left-multiplies by a transvection: every column is mapped.
    pub fn left_transvect(&mut self, t: &Transvection) {
        let dim = self.dim();
        let mut col = vec![0u32; dim];
        for j in 0..dim {
            for i in 0..dim {
                col[i] = self.data[i * dim + j];
            }
            t.apply_in_place(&mut col);
            for i in 0..dim {
                self.data[i * dim + j] = col[i];
            }
        }
    }

    /// `M^T Omega M = Omega`, equivalently columns pair like the basis.
    pub fn is_symplectic(&self) -> bool {
        let dim = self.dim();
        let cols: Vec<Vec<u32>> = (0..dim).map(|j| self.column(j)).collect();
        for i in 0..dim {
            for j in 0..dim {
                let want = if j == i + self.n && i < self.n {
                    1
                } else if i == j + self.n && j < self.n {
                    self.field.d() - 1
                } else {
                    0
                };
                if symp(self.field, &cols[i], &cols[j]) != want {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse of a symplectic matrix, `-Omega M^T Omega`.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let dim = self.dim();
        let f = self.field;
        let mut data = vec![0u32; dim * dim];
        // (Omega^{-1} M^T Omega) with Omega = [[0, I], [-I, 0]]
        for i in 0..dim {
            for j in 0..dim {
                let (si, ii) = if i < n { (n + i, false) } else { (i - n, true) };
                let (sj, jj) = if j < n { (n + j, true) } else { (j - n, false) };
                // entry = sign_i * sign_j * M[sj][si]
                let v = self.get(sj, si);
                let neg = !(ii ^ jj);
                data[i * dim + j] = if neg { f.neg(v) } else { v };
            }
        }
        SymplecticMatrix { field: f, n, data }
    }

    /// Embeds a `k`-qudit matrix acting on `sites` into `n_total` qudits.
    pub fn embed(&self, sites: &[usize], n_total: usize) -> Result<Self> {
        check_sites(sites, self.n, n_total)?;
        let mut out = Self::identity(self.field, n_total);
        let big = 2 * n_total;
        let map = |i: usize| {
            if i < self.n {
                sites[i]
            } else {
                n_total + sites[i - self.n]
            }
        };
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out.data[map(i) * big + map(j)] = self.get(i, j);
            }
        }
        Ok(out)
    }
}

pub(crate) fn check_sites(sites: &[usize], k: usize, n_total: usize) -> Result<()> {
    if sites.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: sites.len(),
        });
    }
    for (i, &s) in sites.iter().enumerate() {
        if s >= n_total {
            return Err(Error::BadSite {
                site: s,
                n: n_total,
            });
        }
        if sites[..i].contains(&s) {
            return Err(Error::ShapeMismatch(format!("site {s} repeated")));
        }
    }
    Ok(())
}

/// Uniformly random element of `Sp(2n, d)`.
///
/// Builds `M = S_0 S_1 ... S_{n-1}` where `S_j` fixes qudits `< j` and sends
/// the pair `(z_j, x_j)` to a uniformly random symplectic pair supported on
/// qudits `>= j`.
pub fn sample_symplectic<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> SymplecticMatrix {
    let mut m = SymplecticMatrix::identity(field, n);
    for j in (0..n).rev() {
        for t in coset_representative(field, n, j, rng) {
            m.left_transvect(&t);
        }
    }
    m
}

fn coset_representative<R: Rng + ?Sized>(
    field: Field,
    n: usize,
    j: usize,
    rng: &mut R,
) -> Vec<Transvection> {
    let d = field.d();
    let e = SymplecticVector::z_unit(field, n, j);
    let fx = SymplecticVector::x_unit(field, n, j);
    let random_tail = |rng: &mut R| {
        let mut c = vec![0u32; 2 * n];
        for s in j..n {
            c[s] = rng.random_range(0..d);
            c[n + s] = rng.random_range(0..d);
        }
        c
    };
    let v = loop {
        let c = random_tail(rng);
        if c.iter().any(|&x| x != 0) {
            break SymplecticVector::from_coords(field, c).expect("even");
        }
    };
    let mut wc = random_tail(rng);
    wc[n + j] = 1;
    let w = SymplecticVector::from_coords(field, wc).expect("even");

    let mut seq = Vec::with_capacity(4);
    if w != fx {
        let fw = symp(field, fx.coords(), w.coords());
        if fw != 0 {
            seq.push(direct(&fx, &w, fw));
        } else {
            // f -> f - e keeps e fixed and makes the pairing with w nonzero
            seq.push(Transvection::new(1, e.clone()));
            let u = fx.sub(&e).expect("same shape");
            let uw = symp(field, u.coords(), w.coords());
            seq.push(direct(&u, &w, uw));
        }
    }
    seq.extend(find_transvections(&e, &v).expect("nonzero vectors"));
    seq
}

/// `(M, g)` label of a Clifford unitary, up to global phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CliffordLabel {
    pub m: SymplecticMatrix,
    pub g: SymplecticVector,
}

impl CliffordLabel {
    pub fn new(m: SymplecticMatrix, g: SymplecticVector) -> Result<Self> {
        if m.n() != g.n() {
            return Err(Error::DimensionMismatch {
                expected: m.n(),
                found: g.n(),
            });
        }
        if m.field() != g.field() {
            return Err(Error::FieldMismatch(m.field().d(), g.field().d()));
        }
        Ok(CliffordLabel { m, g })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        CliffordLabel {
            m: SymplecticMatrix::identity(field, n),
            g: SymplecticVector::zero(field, n),
        }
    }

    pub fn field(&self) -> Field {
        self.m.field()
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    /// Image of `W_u`: returns `(phase, M u)` with `C W_u C^dagger = chi(phase) W_{Mu}`.
    pub fn conjugate_coords(&self, u: &[u32]) -> (u32, Vec<u32>) {
        let mu = self.m.apply(u);
        (symp(self.field(), self.g.coords(), &mu), mu)
    }

    pub fn conjugate(&self, w: &WeylOperator) -> Result<WeylOperator> {
        if w.vec.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: w.vec.n(),
            });
        }
        let (ph, mu) = self.conjugate_coords(w.vec.coords());
        let f = self.field();
        Ok(WeylOperator::new(
            SymplecticVector::from_coords(f, mu)?,
            f.add(w.phase, ph),
        ))
    }

    /// The label of `next * self` (apply `self`, then `next`).
    pub fn then(&self, next: &Self) -> Result<Self> {
        if next.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: next.n(),
            });
        }
        let m = next.m.mul(&self.m);
        let g = next.m.apply_vec(&self.g)?.add(&next.g)?;
        Ok(CliffordLabel { m, g })
    }

    pub fn inverse(&self) -> Self {
        let minv = self.m.inverse();
        let g = minv.apply_vec(&self.g).expect("same n").neg();
        CliffordLabel { m: minv, g }
    }

    /// Embeds a label on `sites` into a register of `n_total` qudits.
    pub fn embed(&self, sites: &[usize], n_total: usize) -> Result<Self> {
        let m = self.m.embed(sites, n_total)?;
        let mut g = vec![0u32; 2 * n_total];
        let k = self.n();
        for (i, &s) in sites.iter().enumerate() {
            g[s] = self.g.coords()[i];
            g[n_total + s] = self.g.coords()[k + i];
        }
        Ok(CliffordLabel {
            m,
            g: SymplecticVector::from_coords(self.field(), g)?,
        })
    }

    /// Single-qudit Fourier gate on qudit `q`: `(z, x) -> (x, -z)`.
    pub fn fourier(field: Field, n: usize, q: usize) -> Result<Self> {
        single_site(field, n, q, [[0, 1], [field.d() - 1, 0]], (0, 0))
    }

    /// `S(nu) = sum_a chi(nu a^2 / 2)|a><a|`: `(z, x) -> (z + nu x, x)`.
    pub fn phase_gate(field: Field, n: usize, q: usize, nu: u32) -> Result<Self> {
        single_site(field, n, q, [[1, nu % field.d()], [0, 1]], (0, 0))
    }

    /// `U(nu) = sum_a |nu a><a|`: `(z, x) -> (z / nu, nu x)`.
    pub fn multiply_gate(field: Field, n: usize, q: usize, nu: u32) -> Result<Self> {
        let inv = field.inv(nu)?;
        single_site(field, n, q, [[inv, 0], [0, nu % field.d()]], (0, 0))
    }

    /// `Z` on qudit `q`.
    pub fn weyl_z(field: Field, n: usize, q: usize) -> Result<Self> {
        single_site(field, n, q, [[1, 0], [0, 1]], (1, 0))
    }

    /// `X` on qudit `q`.
    pub fn weyl_x(field: Field, n: usize, q: usize) -> Result<Self> {
        single_site(field, n, q, [[1, 0], [0, 1]], (0, 1))
    }

    /// The Weyl operator `W_g` itself as a Clifford.
    pub fn weyl(g: SymplecticVector) -> Self {
        CliffordLabel {
            m: SymplecticMatrix::identity(g.field(), g.n()),
            g,
        }
    }

    /// `CX|a, b> = |a, a + b>` with control `c` and target `t`.
    pub fn cx(field: Field, n: usize, c: usize, t: usize) -> Result<Self> {
        check_sites(&[c, t], 2, n)?;
        let mut m = SymplecticMatrix::identity(field, n);
        let dim = 2 * n;
        // x_t' = x_t + x_c ; z_c' = z_c - z_t
        m.data[(n + t) * dim + (n + c)] = 1;
        m.data[c * dim + t] = field.d() - 1;
        Ok(CliffordLabel {
            m,
            g: SymplecticVector::zero(field, n),
        })
    }

    /// `CZ|a, b> = chi(ab)|a, b>`.
    pub fn cz(field: Field, n: usize, a: usize, b: usize) -> Result<Self> {
        check_sites(&[a, b], 2, n)?;
        let mut m = SymplecticMatrix::identity(field, n);
        let dim = 2 * n;
        m.data[a * dim + (n + b)] = 1;
        m.data[b * dim + (n + a)] = 1;
        Ok(CliffordLabel {
            m,
            g: SymplecticVector::zero(field, n),
        })
    }
}

fn single_site(
    field: Field,
    n: usize,
    q: usize,
    block: [[u32; 2]; 2],
    g: (u32, u32),
) -> Result<CliffordLabel> {
    if q >= n {
        return Err(Error::BadSite { site: q, n });
    }
    let m = SymplecticMatrix::from_rows(field, &[block[0].to_vec(), block[1].to_vec()])?;
    let g = SymplecticVector::new(field, &[g.0], &[g.1])?;
    CliffordLabel { m, g }.embed(&[q], n)
}

/// Uniformly random Clifford label: uniform `M` and uniform `g`.
pub fn sample_clifford<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> CliffordLabel {
    let m = sample_symplectic(field, n, rng);
    let g: Vec<u32> = (0..2 * n).map(|_| rng.random_range(0..field.d())).collect();
    CliffordLabel {
        m,
        g: SymplecticVector::from_coords(field, g).expect("even"),
    }
}

/// Every single-qudit Clifford label: `d(d^2 - 1)` matrices times `d^2` shifts.
pub fn single_qudit_cliffords(field: Field) -> Vec<CliffordLabel> {
    let d = field.d();
    let mut out = Vec::with_capacity((d * (d * d - 1) * d * d) as usize);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    if field.sub(field.mul(a, e), field.mul(b, c)) != 1 {
                        continue;
                    }
                    let m =
                        SymplecticMatrix::from_rows(field, &[vec![a, b], vec![c, e]]).expect("2x2");
                    for g0 in 0..d {
                        for g1 in 0..d {
                            out.push(CliffordLabel {
                                m: m.clone(),
                                g: SymplecticVector::from_coords(field, vec![g0, g1])
                                    .expect("even"),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::symplectic::CliffordLabel;
use crate::weyl::{SymplecticVector, WeylOperator};

use super::{omega, MAX_DENSE_DIM};

/// State vector on `n` qudits; qudit 0 is the most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    field: Field,
    n: usize,
    amps: Vec<C64>,
}

pub(crate) fn digits(d: usize, n: usize, mut idx: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for j in (0..n).rev() {
        out[j] = (idx % d) as u32;
        idx /= d;
    }
    out
}

pub(crate) fn index(d: usize, b: &[u32]) -> usize {
    b.iter().fold(0, |acc, &v| acc * d + v as usize)
}

pub(crate) fn dim(field: Field, n: usize) -> Result<usize> {
    let d = field.d() as usize;
    let mut dim = 1usize;
    for _ in 0..n {
        dim = dim
            .checked_mul(d)
            .filter(|&v| v <= MAX_DENSE_DIM)
            .ok_or_else(|| Error::TooLarge(format!("d^n with d={d}, n={n}")))?;
    }
    Ok(dim)
}

impl DenseState {
    pub fn zero(field: Field, n: usize) -> Result<Self> {
        Self::basis(field, &vec![0; n])
    }

    pub fn basis(field: Field, b: &[u32]) -> Result<Self> {
        let dm = dim(field, b.len())?;
        let mut amps = vec![C64::new(0.0, 0.0); dm];
        amps[index(field.d() as usize, b)] = C64::new(1.0, 0.0);
        Ok(DenseState {
            field,
            n: b.len(),
            amps,
        })
    }

    pub fn from_amplitudes(field: Field, n: usize, amps: Vec<C64>) -> Result<Self> {
        let dm = dim(field, n)?;
        if amps.len() != dm {
            return Err(Error::DimensionMismatch {
                expected: dm,
                found: amps.len(),
            });
        }
        Ok(DenseState { field, n, amps })
    }

    /// Product state from single-qudit vectors.
    pub fn product(field: Field, factors: &[Vec<C64>]) -> Result<Self> {
        let mut amps = vec![C64::new(1.0, 0.0)];
        for f in factors {
            amps = amps
                .iter()
                .flat_map(|a| f.iter().map(move |b| a * b))
                .collect();
        }
        Self::from_amplitudes(field, factors.len(), amps)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        for a in &mut self.amps {
            *a /= n;
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn overlap2(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn to_vector(&self) -> nalgebra::DVector<C64> {
        nalgebra::DVector::from_column_slice(&self.amps)
    }

    /// Applies a `d x d` matrix (row-major) to qudit `q`.
    pub fn apply_single(&mut self, q: usize, m: &[C64]) -> Result<()> {
        self.check_site(q)?;
        let d = self.field.d() as usize;
        let stride = d.pow((self.n - 1 - q) as u32);
        let block = stride * d;
        let mut buf = vec![C64::new(0.0, 0.0); d];
        for base in (0..self.amps.len()).step_by(block) {
            for off in 0..stride {
                for (b, v) in buf.iter_mut().enumerate() {
                    *v = self.amps[base + off + b * stride];
                }
                for a in 0..d {
                    let mut s = C64::new(0.0, 0.0);
                    for b in 0..d {
                        s += m[a * d + b] * buf[b];
                    }
                    self.amps[base + off + a * stride] = s;
                }
            }
        }
        Ok(())
    }

    /// Multiplies each amplitude by `phase(digits)`.
    fn apply_diagonal_fn(&mut self, f: impl Fn(&[u32]) -> C64) {
        let d = self.field.d() as usize;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= f(&digits(d, self.n, i));
        }
    }

    /// Permutes basis states: `|b> -> |perm(b)>`.
    fn apply_permutation(&mut self, perm: impl Fn(&mut [u32])) {
        let d = self.field.d() as usize;
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let mut b = digits(d, self.n, i);
            perm(&mut b);
            out[index(d, &b)] = a;
        }
        self.amps = out;
    }

    fn check_site(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::BadSite { site: q, n: self.n });
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.field, self.n)?;
        let f = self.field;
        let d = f.d();
        match g {
            Gate::F(q) => self.apply_single(*q, &fourier_matrix(f)),
            Gate::S { q, nu } => {
                let (q, nu) = (*q, *nu);
                self.apply_diagonal_fn(|b| omega(d, f.mul(f.mul(f.half(), nu), f.mul(b[q], b[q]))));
                Ok(())
            }
            Gate::U { q, nu } => {
                let (q, nu) = (*q, *nu);
                self.apply_permutation(|b| b[q] = f.mul(nu, b[q]));
                Ok(())
            }
            Gate::CX { control, target } => {
                let (c, t) = (*control, *target);
                self.apply_permutation(|b| b[t] = f.add(b[t], b[c]));
                Ok(())
            }
            Gate::CZ(a, b2) => {
                let (a, b2) = (*a, *b2);
                self.apply_diagonal_fn(|b| omega(d, f.mul(b[a], b[b2])));
                Ok(())
            }
            Gate::Z(q) => {
                let q = *q;
                self.apply_diagonal_fn(|b| omega(d, b[q]));
                Ok(())
            }
            Gate::X(q) => {
                let q = *q;
                self.apply_permutation(|b| b[q] = f.add(b[q], 1));
                Ok(())
            }
            Gate::T { q, spec } => {
                let q = *q;
                let diag = spec.diagonal();
                self.apply_diagonal_fn(|b| diag[b[q] as usize]);
                Ok(())
            }
            Gate::Clifford { label, sites } => {
                let u = clifford_unitary(label)?;
                self.apply_on_sites(sites, &u)
            }
        }
    }

    /// Applies a `d^k x d^k` matrix to the listed qudits (in order).
    pub fn apply_on_sites(&mut self, sites: &[usize], u: &DMatrix<C64>) -> Result<()> {
        let d = self.field.d() as usize;
        let k = sites.len();
        let dk = d.pow(k as u32);
        if u.nrows() != dk || u.ncols() != dk {
            return Err(Error::DimensionMismatch {
                expected: dk,
                found: u.nrows(),
            });
        }
        for &s in sites {
            self.check_site(s)?;
        }
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let mut b = digits(d, self.n, i);
            let col = index(d, &sites.iter().map(|&s| b[s]).collect::<Vec<_>>());
            for row in 0..dk {
                let coeff = u[(row, col)];
                if coeff == C64::new(0.0, 0.0) {
                    continue;
                }
                let rd = digits(d, k, row);
                for (j, &s) in sites.iter().enumerate() {
                    b[s] = rd[j];
                }
                out[index(d, &b)] += coeff * a;
            }
        }
        self.amps = out;
        Ok(())
    }

    /// `W(p, q)|b> = chi(-pq/2) omega^{p(b+q)} |b+q>` per qudit, times `omega^phase`.
    pub fn apply_weyl(&mut self, w: &WeylOperator) -> Result<()> {
        if w.vec.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: w.vec.n(),
            });
        }
        let f = self.field;
        let d = f.d() as usize;
        let n = self.n;
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        let z = w.vec.z();
        let x = w.vec.x();
        let mut base_phase = w.phase;
        for j in 0..n {
            base_phase = f.add(base_phase, f.neg(f.mul(f.half(), f.mul(z[j], x[j]))));
        }
        for (i, &a) in self.amps.iter().enumerate() {
            let mut b = digits(d, n, i);
            let mut ph = base_phase;
            for j in 0..n {
                b[j] = f.add(b[j], x[j]);
                ph = f.add(ph, f.mul(z[j], b[j]));
            }
            out[index(d, &b)] += omega(f.d(), ph) * a;
        }
        self.amps = out;
        Ok(())
    }

    pub fn expectation_weyl(&self, w: &WeylOperator) -> Result<C64> {
        let mut t = self.clone();
        t.apply_weyl(w)?;
        Ok(self.inner(&t))
    }
}

/// `F` as a row-major `d x d` matrix.
pub fn fourier_matrix(f: Field) -> Vec<C64> {
    let d = f.d();
    let s = 1.0 / (d as f64).sqrt();
    let mut m = Vec::with_capacity((d * d) as usize);
    for a in 0..d {
        for b in 0..d {
            m.push(omega(d, f.mul(a, b)) * s);
        }
    }
    m
}

/// Applies every gate of the circuit.
pub fn dense_apply(circuit: &Circuit, psi: &DenseState) -> Result<DenseState> {
    if circuit.n() != psi.n() || circuit.field() != psi.field() {
        return Err(Error::DimensionMismatch {
            expected: psi.n(),
            found: circuit.n(),
        });
    }
    let mut out = psi.clone();
    for g in circuit.gates() {
        out.apply_gate(g)?;
    }
    Ok(out)
}

/// Matrix of `omega^phase W_u`.
pub fn weyl_matrix(w: &WeylOperator) -> Result<DMatrix<C64>> {
    let f = w.vec.field();
    let n = w.vec.n();
    let dm = dim(f, n)?;
    let mut m = DMatrix::zeros(dm, dm);
    for col in 0..dm {
        let mut s = DenseState::basis(f, &digits(f.d() as usize, n, col))?;
        s.apply_weyl(w)?;
        for (row, a) in s.amps.iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    Ok(m)
}

/// Dense unitary of a Clifford label, fixed up to a global phase.
///
/// `C|0>` is the stabilizer state with stabilizers `chi([g, M z_i]) W_{M z_i}`;
/// the remaining columns follow from `C|j> = C X^j C^dagger C|0>`.
pub fn clifford_unitary(label: &CliffordLabel) -> Result<DMatrix<C64>> {
    let f = label.field();
    let n = label.n();
    let dm = dim(f, n)?;
    let gens: Vec<WeylOperator> = (0..n)
        .map(|i| {
            let (ph, mu) = label.conjugate_coords(SymplecticVector::z_unit(f, n, i).coords());
            WeylOperator::new(SymplecticVector::from_coords(f, mu).expect("even"), ph)
        })
        .collect();
    let psi0 = stabilizer_state_from_generators(f, n, &gens)?;
    let mut u = DMatrix::zeros(dm, dm);
    for j in 0..dm {
        let jd = digits(f.d() as usize, n, j);
        let xj = SymplecticVector::new(f, &vec![0; n], &jd)?;
        let (ph, mu) = label.conjugate_coords(xj.coords());
        let w = WeylOperator::new(SymplecticVector::from_coords(f, mu)?, ph);
        let mut col = psi0.clone();
        col.apply_weyl(&w)?;
        for (i, a) in col.amps.iter().enumerate() {
            u[(i, j)] = *a;
        }
    }
    Ok(u)
}

/// The state stabilized by `n` independent commuting Weyl operators, via a
/// nonzero column of the projector `prod_i (1/d) sum_k S_i^k`.
pub fn stabilizer_state_from_generators(
    field: Field,
    n: usize,
    gens: &[WeylOperator],
) -> Result<DenseState> {
    let d = field.d() as usize;
    let dm = dim(field, n)?;
    for start in 0..dm {
        let mut v = DenseState::basis(field, &digits(d, n, start))?;
        for g in gens {
            v = project_onto(&v, g)?;
        }
        if v.norm() > 1e-6 {
            v.normalize();
            return Ok(v);
        }
    }
    Err(Error::InconsistentPhases)
}

/// `(1/d) sum_k S^k |v>`.
fn project_onto(v: &DenseState, s: &WeylOperator) -> Result<DenseState> {
    let d = v.field.d();
    let mut acc = v.clone();
    let mut cur = v.clone();
    for _ in 1..d {
        cur.apply_weyl(s)?;
        for (a, c) in acc.amps.iter_mut().zip(&cur.amps) {
            *a += c;
        }
    }
    for a in &mut acc.amps {
        *a /= d as f64;
    }
    Ok(acc)
}

/// Dense matrix of a single gate on the full register.
pub fn gate_matrix(g: &Gate, field: Field, n: usize) -> Result<DMatrix<C64>> {
    let dm = dim(field, n)?;
    let mut m = DMatrix::zeros(dm, dm);
    for col in 0..dm {
        let mut s = DenseState::basis(field, &digits(field.d() as usize, n, col))?;
        s.apply_gate(g)?;
        for (row, a) in s.amps.iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    Ok(m)
}

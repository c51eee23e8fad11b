//! Third-moment operators `Q = E |psi><psi|^{(x)3}` and the exact shadow
//! norms they determine.

use std::collections::{HashMap, HashSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;

use super::state::{dim, index};
use super::{clifford_unitary, weyl_matrix, DenseState};
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;
use crate::magic::{magic_state_amplitudes, TGateSpec};
use crate::symplectic::{sample_clifford, CliffordLabel};
use crate::weyl::{weight_profile, SymplecticVector, WeylOperator};

/// Largest `D^3` for which a moment operator is materialized as a matrix.
pub const MAX_MOMENT_DIM: usize = 2187;
/// Largest orbit the BFS closure will build.
pub const MAX_ORBIT: usize = 500_000;
/// Largest `d^n` accepted by [`enumerate_stab_states`].
pub const MAX_STAB_ENUM_DIM: usize = 125;
/// Tolerance on `|tr O|` for shadow norms.
pub const TRACE_TOL: f64 = 1e-10;

const KEY_SCALE: f64 = 1e6;

/// Hashable form of a state modulo global phase: the first non-negligible
/// amplitude is rotated onto the positive real axis and everything is
/// rounded to a `1e-6` grid.
fn canonical_key(amps: &[C64]) -> Vec<i64> {
    let pivot = amps
        .iter()
        .find(|a| a.norm() > 1e-6)
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    let rot = pivot.conj() / pivot.norm();
    amps.iter()
        .flat_map(|a| {
            let b = a * rot;
            [
                (b.re * KEY_SCALE).round() as i64,
                (b.im * KEY_SCALE).round() as i64,
            ]
        })
        .collect()
}

fn generator_gates(n: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    for q in 0..n {
        gates.push(Gate::F(q));
        gates.push(Gate::S { q, nu: 1 });
        gates.push(Gate::Z(q));
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                gates.push(Gate::CX {
                    control: a,
                    target: b,
                });
            }
        }
    }
    gates
}

/// Orbit of `seed` (modulo global phase) under the Clifford group, by BFS
/// closure under `F`, `S`, `Z` and `CX`.
pub fn clifford_orbit(seed: &DenseState, cap: usize) -> Result<Vec<DenseState>> {
    let gates = generator_gates(seed.n());
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(canonical_key(seed.amplitudes()));
    queue.push_back(seed.clone());
    while let Some(s) = queue.pop_front() {
        for g in &gates {
            let mut t = s.clone();
            t.apply_gate(g)?;
            if seen.insert(canonical_key(t.amplitudes())) {
                if seen.len() > cap {
                    return Err(Error::TooLarge(format!(
                        "Clifford orbit exceeds {cap} states"
                    )));
                }
                queue.push_back(t);
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// All stabilizer states on `n` qudits, each once up to phase.
pub fn enumerate_stab_states(field: Field, n: usize) -> Result<Vec<DenseState>> {
    if dim(field, n)? > MAX_STAB_ENUM_DIM {
        return Err(Error::TooLarge(format!(
            "stabilizer enumeration needs d^n <= {MAX_STAB_ENUM_DIM}"
        )));
    }
    clifford_orbit(&DenseState::zero(field, n)?, MAX_ORBIT)
}

/// `d^n prod_{k=1..n} (d^k + 1)`.
pub fn stab_state_count(d: u64, n: u32) -> u64 {
    d.pow(n) * (1..=n).map(|k| d.pow(k) + 1).product::<u64>()
}

/// Tensor products of single-qudit stabilizer states.
pub fn product_stab_states(field: Field, n: usize) -> Result<Vec<DenseState>> {
    let singles: Vec<Vec<C64>> = enumerate_stab_states(field, 1)?
        .into_iter()
        .map(DenseState::into_amplitudes)
        .collect();
    let count = singles.len().checked_pow(n as u32).unwrap_or(usize::MAX);
    if count > MAX_ORBIT {
        return Err(Error::TooLarge(format!(
            "{count} product stabilizer states"
        )));
    }
    let mut out = Vec::with_capacity(count);
    let mut pick = vec![0usize; n];
    loop {
        let factors: Vec<Vec<C64>> = pick.iter().map(|&i| singles[i].clone()).collect();
        out.push(DenseState::product(field, &factors)?);
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            pick[j] += 1;
            if pick[j] < singles.len() {
                break;
            }
            pick[j] = 0;
        }
    }
}

/// `|T_1^dagger> (x) ... (x) |T_k^dagger> (x) |0>^{n-k}`.
pub fn magic_seed(field: Field, n: usize, specs: &[TGateSpec]) -> Result<DenseState> {
    if specs.len() > n {
        return Err(Error::ConfigError(format!(
            "{} T gates on {n} qudits",
            specs.len()
        )));
    }
    let mut factors: Vec<Vec<C64>> = specs
        .iter()
        .map(|s| magic_state_amplitudes(&s.adjoint()))
        .collect();
    let mut zero = vec![C64::new(0.0, 0.0); field.d() as usize];
    zero[0] = C64::new(1.0, 0.0);
    factors.resize(n, zero);
    DenseState::product(field, &factors)
}

/// Which states a moment operator averages over.
#[derive(Debug, Clone)]
pub enum Ensemble {
    StabOrbit,
    CliffordOrbitOf(DenseState),
    States(Vec<DenseState>),
}

/// Stochastic Lagrangian `T` in `F_d^6`: three-dimensional, totally isotropic
/// for `x.x' - y.y'`, containing the all-ones vector. Elements are stored as
/// `(x1, x2, x3, y1, y2, y3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochasticSubspace {
    pub elements: Vec<[u32; 6]>,
}

fn beta(f: Field, a: &[u32; 6], b: &[u32; 6]) -> u32 {
    let mut s = 0;
    for i in 0..3 {
        s = f.add(s, f.mul(a[i], b[i]));
        s = f.sub(s, f.mul(a[i + 3], b[i + 3]));
    }
    s
}

/// Enumerates every stochastic Lagrangian for three copies.
pub fn stochastic_subspaces(field: Field) -> Vec<StochasticSubspace> {
    let d = field.d();
    let ones = [1u32; 6];
    // every such T meets {v_0 = 0} in a plane containing no multiple of 1
    let cands: Vec<[u32; 6]> = (0..(d as usize).pow(5))
        .filter_map(|i| {
            let mut v = [0u32; 6];
            let mut r = i;
            for c in v.iter_mut().skip(1) {
                *c = (r % d as usize) as u32;
                r /= d as usize;
            }
            let ok = v != [0; 6] && beta(field, &v, &v) == 0 && beta(field, &v, &ones) == 0;
            ok.then_some(v)
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, v) in cands.iter().enumerate() {
        for w in &cands[i + 1..] {
            if beta(field, v, w) != 0 {
                continue;
            }
            let mut basis = vec![ones.to_vec(), v.to_vec(), w.to_vec()];
            if linalg::rref(field, &mut basis).len() < 3 {
                continue;
            }
            if !seen.insert(basis.clone()) {
                continue;
            }
            let mut elements = Vec::with_capacity((d * d * d) as usize);
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let mut e = [0u32; 6];
                        for k in 0..6 {
                            e[k] = field.add(
                                field.mul(a, basis[0][k]),
                                field.add(field.mul(b, basis[1][k]), field.mul(c, basis[2][k])),
                            );
                        }
                        elements.push(e);
                    }
                }
            }
            out.push(StochasticSubspace { elements });
        }
    }
    out
}

/// Calls `visit([X1, X2, X3, Y1, Y2, Y3])` for each term `|X1 X2 X3><Y1 Y2 Y3|`
/// of `r(T)^{(x)n}`.
fn for_each_term(elements: &[[u32; 6]], n: usize, d: usize, visit: &mut impl FnMut([usize; 6])) {
    fn rec(
        elements: &[[u32; 6]],
        left: usize,
        d: usize,
        acc: [usize; 6],
        visit: &mut impl FnMut([usize; 6]),
    ) {
        if left == 0 {
            visit(acc);
            return;
        }
        for e in elements {
            let mut next = acc;
            for k in 0..6 {
                next[k] = acc[k] * d + e[k] as usize;
            }
            rec(elements, left - 1, d, next, visit);
        }
    }
    rec(elements, n, d, [0; 6], visit);
}

#[derive(Debug, Clone)]
enum Repr {
    States(Vec<DVector<C64>>),
    Commutant {
        subspaces: Vec<StochasticSubspace>,
        coeffs: Vec<C64>,
    },
}

/// `Q = E |psi><psi|^{(x)3}` over a uniform ensemble of pure states.
///
/// Either an explicit state list, or an expansion `sum_T c_T r(T)^{(x)n}` over
/// stochastic Lagrangians, which spans the commutant of the third tensor
/// power of the Clifford group and so holds the average over any Clifford
/// orbit.
#[derive(Debug, Clone)]
pub struct MomentOperator {
    field: Field,
    n: usize,
    repr: Repr,
}

impl MomentOperator {
    pub fn from_states(field: Field, n: usize, states: &[DenseState]) -> Result<Self> {
        let dm = dim(field, n)?;
        if states.is_empty() {
            return Err(Error::ConfigError("empty ensemble".into()));
        }
        for s in states {
            if s.dim() != dm {
                return Err(Error::DimensionMismatch {
                    expected: dm,
                    found: s.dim(),
                });
            }
        }
        Ok(MomentOperator {
            field,
            n,
            repr: Repr::States(states.iter().map(DenseState::to_vector).collect()),
        })
    }

    /// Clifford-orbit average of `seed^{(x)3}` through the commutant.
    pub fn commutant(seed: &DenseState) -> Result<Self> {
        let field = seed.field();
        let n = seed.n();
        let d = field.d() as usize;
        if d.checked_pow(3 * n as u32).is_none_or(|c| c > 1 << 24) {
            return Err(Error::TooLarge(format!(
                "commutant expansion at d={d}, n={n}"
            )));
        }
        let subspaces = stochastic_subspaces(field);
        let m = subspaces.len();
        let sets: Vec<HashSet<[u32; 6]>> = subspaces
            .iter()
            .map(|t| t.elements.iter().copied().collect())
            .collect();
        let gram = DMatrix::<C64>::from_fn(m, m, |k, l| {
            let common = sets[k].intersection(&sets[l]).count();
            C64::new((common as f64).powi(n as i32), 0.0)
        });
        let psi = seed.amplitudes();
        let b = DVector::<C64>::from_iterator(
            m,
            subspaces.iter().map(|t| {
                let mut acc = C64::new(0.0, 0.0);
                for_each_term(&t.elements, n, d, &mut |[x1, x2, x3, y1, y2, y3]| {
                    acc += (psi[x1] * psi[x2] * psi[x3]).conj() * psi[y1] * psi[y2] * psi[y3];
                });
                acc.conj()
            }),
        );
        let pinv = gram
            .pseudo_inverse(1e-9)
            .map_err(|e| Error::ConfigError(format!("Gram pseudo-inverse: {e}")))?;
        let coeffs = (pinv * b).iter().copied().collect();
        Ok(MomentOperator {
            field,
            n,
            repr: Repr::Commutant { subspaces, coeffs },
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Single-copy dimension `D`.
    pub fn dim(&self) -> usize {
        (self.field.d() as usize).pow(self.n as u32)
    }

    /// `tr_BC[Q (I (x) O (x) O^dagger)]`.
    pub fn partial_contract(&self, o: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        let dm = self.dim();
        if o.nrows() != dm || o.ncols() != dm {
            return Err(Error::DimensionMismatch {
                expected: dm,
                found: o.nrows(),
            });
        }
        match &self.repr {
            Repr::States(states) => {
                let w = 1.0 / states.len() as f64;
                let mut m = DMatrix::zeros(dm, dm);
                for psi in states {
                    let e = psi.dotc(&(o * psi)).norm_sqr() * w;
                    m += psi * psi.adjoint() * C64::new(e, 0.0);
                }
                Ok(m)
            }
            Repr::Commutant { subspaces, coeffs } => {
                let d = self.field.d() as usize;
                let mut m = DMatrix::zeros(dm, dm);
                for (t, c) in subspaces.iter().zip(coeffs) {
                    let mut part = DMatrix::<C64>::zeros(dm, dm);
                    for_each_term(&t.elements, self.n, d, &mut |[x1, x2, x3, y1, y2, y3]| {
                        part[(x1, y1)] += o[(y2, x2)] * o[(x3, y3)].conj();
                    });
                    m += part * *c;
                }
                Ok(m)
            }
        }
    }

    /// The `D^3 x D^3` matrix, registers ordered `(A, B, C)`.
    pub fn to_matrix(&self) -> Result<DMatrix<C64>> {
        let dm = self.dim();
        let d3 = dm * dm * dm;
        if d3 > MAX_MOMENT_DIM {
            return Err(Error::TooLarge(format!("D^3 = {d3} > {MAX_MOMENT_DIM}")));
        }
        let mut q = DMatrix::zeros(d3, d3);
        match &self.repr {
            Repr::States(states) => {
                let w = C64::new(1.0 / states.len() as f64, 0.0);
                for psi in states {
                    let v = DVector::from_iterator(
                        d3,
                        (0..d3).map(|i| psi[i / (dm * dm)] * psi[(i / dm) % dm] * psi[i % dm]),
                    );
                    q += &v * v.adjoint() * w;
                }
            }
            Repr::Commutant { subspaces, coeffs } => {
                let d = self.field.d() as usize;
                for (t, c) in subspaces.iter().zip(coeffs) {
                    for_each_term(&t.elements, self.n, d, &mut |[x1, x2, x3, y1, y2, y3]| {
                        q[((x1 * dm + x2) * dm + x3, (y1 * dm + y2) * dm + y3)] += *c;
                    });
                }
            }
        }
        Ok(q)
    }

    /// `D(D+1)(D+2)/6 * Q`.
    pub fn normalized_matrix(&self) -> Result<DMatrix<C64>> {
        let dm = self.dim() as f64;
        Ok(self.to_matrix()? * C64::new(dm * (dm + 1.0) * (dm + 2.0) / 6.0, 0.0))
    }
}

/// Builds the moment operator of an ensemble.
pub fn moment_operator(ensemble: &Ensemble, field: Field, n: usize) -> Result<MomentOperator> {
    match ensemble {
        Ensemble::StabOrbit => {
            MomentOperator::from_states(field, n, &enumerate_stab_states(field, n)?)
        }
        Ensemble::CliffordOrbitOf(seed) => {
            if seed.n() != n || seed.field() != field {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: seed.n(),
                });
            }
            MomentOperator::from_states(field, n, &clifford_orbit(seed, MAX_ORBIT)?)
        }
        Ensemble::States(states) => MomentOperator::from_states(field, n, states),
    }
}

fn hermitian_norm(m: &DMatrix<C64>) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |a, &e| a.max(e.abs()))
}

fn check_traceless(o: &DMatrix<C64>) -> Result<()> {
    let tr = o.trace().norm();
    if tr > TRACE_TOL {
        return Err(Error::NotTraceless(tr));
    }
    Ok(())
}

/// `||O||_sh^2 = D (D+1)^2 ||tr_BC[Q (I (x) O (x) O^dagger)]||` for a traceless
/// `O` and a 2-design ensemble.
pub fn shadow_norm_exact(obs: &DMatrix<C64>, q: &MomentOperator) -> Result<f64> {
    check_traceless(obs)?;
    let dm = q.dim() as f64;
    Ok(dm * (dm + 1.0) * (dm + 1.0) * hermitian_norm(&q.partial_contract(obs)?))
}

/// `O - tr(O) I / D`.
pub fn traceless_part(o: &DMatrix<C64>) -> DMatrix<C64> {
    let dm = o.nrows();
    o - DMatrix::identity(dm, dm) * (o.trace() / dm as f64)
}

/// Applies `A -> (d+1) A - tr(A) I` on every site: the inverse of the
/// single-qudit depolarizing channel with parameter `1/(d+1)`.
pub fn local_inverse_channel(o: &DMatrix<C64>, field: Field, n: usize) -> Result<DMatrix<C64>> {
    let d = field.d() as usize;
    let dm = dim(field, n)?;
    if o.nrows() != dm || o.ncols() != dm {
        return Err(Error::DimensionMismatch {
            expected: dm,
            found: o.nrows(),
        });
    }
    let mut cur = o.clone();
    for site in 0..n {
        let stride = d.pow((n - 1 - site) as u32);
        let mut next = cur.clone() * C64::new(d as f64 + 1.0, 0.0);
        for row in 0..dm {
            for col in 0..dm {
                if (row / stride) % d != (col / stride) % d {
                    continue;
                }
                let r0 = row - ((row / stride) % d) * stride;
                let c0 = col - ((col / stride) % d) * stride;
                let tr: C64 = (0..d)
                    .map(|a| cur[(r0 + a * stride, c0 + a * stride)])
                    .sum();
                next[(row, col)] -= tr;
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// Shadow norm under random single-qudit Cliffords:
/// `max_sigma E_U sum_b <b|U sigma U^dagger|b> |<b|U O' U^dagger|b>|^2` with
/// `O'` the locally inverted observable.
pub fn local_shadow_norm(obs: &DMatrix<C64>, field: Field, n: usize) -> Result<f64> {
    let inv = local_inverse_channel(obs, field, n)?;
    let states = product_stab_states(field, n)?;
    let w = (field.d() as f64 + 1.0).powi(-(n as i32));
    let dm = inv.nrows();
    let mut m = DMatrix::<C64>::zeros(dm, dm);
    for s in &states {
        let psi = s.to_vector();
        let e = psi.dotc(&(&inv * &psi)).norm_sqr() * w;
        m += &psi * psi.adjoint() * C64::new(e, 0.0);
    }
    Ok(hermitian_norm(&m))
}

/// Average of `|psi><psi| <psi|W_u|psi> <psi|W_v|psi>^*` over product
/// stabilizer states.
pub fn product_moment_lhs(u: &SymplecticVector, v: &SymplecticVector) -> Result<DMatrix<C64>> {
    let field = u.field();
    let n = u.n();
    if n > 2 || field.d() > 5 {
        return Err(Error::TooLarge(format!(
            "exhaustive check at n={n}, d={}",
            field.d()
        )));
    }
    let wu = weyl_matrix(&WeylOperator::new(u.clone(), 0))?;
    let wv = weyl_matrix(&WeylOperator::new(v.clone(), 0))?;
    let states = product_stab_states(field, n)?;
    let dm = wu.nrows();
    let mut m = DMatrix::<C64>::zeros(dm, dm);
    for s in &states {
        let psi = s.to_vector();
        let c = psi.dotc(&(&wu * &psi)) * psi.dotc(&(&wv * &psi)).conj();
        m += &psi * psi.adjoint() * c;
    }
    Ok(m / C64::new(states.len() as f64, 0.0))
}

/// `d^{-n} (d+1)^{-|u v v|} W_{u-v}` when every site pair is linearly
/// dependent, zero otherwise.
pub fn product_moment_rhs(u: &SymplecticVector, v: &SymplecticVector) -> Result<DMatrix<C64>> {
    let p = weight_profile(u, v)?;
    let field = u.field();
    let n = u.n();
    let dm = dim(field, n)?;
    if !p.loc_commute {
        return Ok(DMatrix::zeros(dm, dm));
    }
    let d = field.d() as f64;
    let scale = d.powi(-(n as i32)) * (d + 1.0).powi(-(p.join as i32));
    Ok(weyl_matrix(&WeylOperator::new(u.sub(v)?, 0))? * C64::new(scale, 0.0))
}

/// Largest entrywise deviation between the two sides of the product-state
/// second-moment identity.
pub fn product_moment_check(u: &SymplecticVector, v: &SymplecticVector) -> Result<f64> {
    let l = product_moment_lhs(u, v)?;
    let r = product_moment_rhs(u, v)?;
    Ok(super::max_abs_diff(&l, &r))
}

/// Product-state second-moment identity with the product states and their
/// projectors computed once, for checking many `(u, v)` pairs.
pub struct ProductMomentChecker {
    field: Field,
    n: usize,
    states: Vec<DVector<C64>>,
    projectors: Vec<DMatrix<C64>>,
}

impl ProductMomentChecker {
    pub fn new(field: Field, n: usize) -> Result<Self> {
        if n > 2 || field.d() > 5 {
            return Err(Error::TooLarge(format!(
                "exhaustive check at n={n}, d={}",
                field.d()
            )));
        }
        let states: Vec<DVector<C64>> = product_stab_states(field, n)?
            .iter()
            .map(DenseState::to_vector)
            .collect();
        let projectors = states.iter().map(|psi| psi * psi.adjoint()).collect();
        Ok(ProductMomentChecker {
            field,
            n,
            states,
            projectors,
        })
    }

    fn expectations(&self, u: &SymplecticVector) -> Result<Vec<C64>> {
        if u.field() != self.field {
            return Err(Error::FieldMismatch(self.field.d(), u.field().d()));
        }
        if u.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: u.n(),
            });
        }
        let w = weyl_matrix(&WeylOperator::new(u.clone(), 0))?;
        Ok(self
            .states
            .iter()
            .map(|psi| psi.dotc(&(&w * psi)))
            .collect())
    }

    /// Largest entrywise deviation, as [`product_moment_check`].
    pub fn check(&self, u: &SymplecticVector, v: &SymplecticVector) -> Result<f64> {
        let eu = self.expectations(u)?;
        let ev = self.expectations(v)?;
        let r = product_moment_rhs(u, v)?;
        let mut l = DMatrix::<C64>::zeros(r.nrows(), r.ncols());
        for ((a, b), p) in eu.iter().zip(&ev).zip(&self.projectors) {
            let c = a * b.conj();
            if c.norm() > 1e-15 {
                l += p * c;
            }
        }
        l /= C64::new(self.states.len() as f64, 0.0);
        Ok(super::max_abs_diff(&l, &r))
    }
}

/// Monte-Carlo estimate of `E_C (C^dagger T^dagger F^dagger |0>)^{(x)3}` over
/// uniform Clifford labels `C` and the `T` layer on the first `specs.len()`
/// qudits, as a `D^3 x D^3` matrix.
pub fn magic_ensemble_moment_mc<R: Rng + ?Sized>(
    field: Field,
    n: usize,
    specs: &[TGateSpec],
    samples: usize,
    rng: &mut R,
) -> Result<DMatrix<C64>> {
    let dm = dim(field, n)?;
    if dm * dm * dm > MAX_MOMENT_DIM {
        return Err(Error::TooLarge(format!(
            "D^3 = {} > {MAX_MOMENT_DIM}",
            dm * dm * dm
        )));
    }
    if specs.len() > n {
        return Err(Error::ConfigError(format!(
            "{} T gates on {n} qudits",
            specs.len()
        )));
    }
    // V^dagger |0> with V = F T on the layer
    let mut base = DenseState::zero(field, n)?;
    for (q, s) in specs.iter().enumerate() {
        for _ in 0..3 {
            base.apply_gate(&Gate::F(q))?;
        }
        base.apply_gate(&Gate::T {
            q,
            spec: s.adjoint(),
        })?;
    }
    let base = base.to_vector();
    let mut counts: HashMap<CliffordLabel, usize> = HashMap::new();
    for _ in 0..samples {
        *counts.entry(sample_clifford(field, n, rng)).or_default() += 1;
    }
    let d3 = dm * dm * dm;
    let mut q = DMatrix::<C64>::zeros(d3, d3);
    for (label, c) in counts {
        let psi = clifford_unitary(&label)?.adjoint() * &base;
        let v = DVector::from_iterator(
            d3,
            (0..d3).map(|i| psi[i / (dm * dm)] * psi[(i / dm) % dm] * psi[i % dm]),
        );
        q += &v * v.adjoint() * C64::new(c as f64 / samples as f64, 0.0);
    }
    Ok(q)
}

/// Dense projector onto a computational basis state, as a convenience for
/// building fidelity observables.
pub fn basis_projector(field: Field, x: &[u32]) -> Result<DMatrix<C64>> {
    let dm = dim(field, x.len())?;
    let mut m = DMatrix::zeros(dm, dm);
    let i = index(field.d() as usize, x);
    m[(i, i)] = C64::new(1.0, 0.0);
    Ok(m)
}

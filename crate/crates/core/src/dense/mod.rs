//! Brute-force state-vector simulation and third-moment operators at small
//! `(n, d)`; the reference every faster routine is checked against.

mod moment;
mod outcomes;
mod state;

pub use moment::{
    basis_projector, clifford_orbit, enumerate_stab_states, local_inverse_channel,
    local_shadow_norm, magic_ensemble_moment_mc, magic_seed, moment_operator, product_moment_check,
    product_moment_lhs, product_moment_rhs, product_stab_states, shadow_norm_exact,
    stab_state_count, stochastic_subspaces, traceless_part, Ensemble, MomentOperator,
    ProductMomentChecker, StochasticSubspace, MAX_MOMENT_DIM, MAX_ORBIT, MAX_STAB_ENUM_DIM,
    TRACE_TOL,
};
pub use outcomes::{dense_outcome_distribution, direct_outcome_distribution, marginal};
pub(crate) use state::digits;
#[cfg(test)]
pub(crate) use state::index;
pub use state::{
    clifford_unitary, dense_apply, fourier_matrix, gate_matrix, stabilizer_state_from_generators,
    weyl_matrix, DenseState,
};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;
use crate::symplectic::{CliffordLabel, SymplecticMatrix};
use crate::weyl::{SymplecticVector, WeylOperator};

/// Largest state dimension the dense routines accept.
pub const MAX_DENSE_DIM: usize = 1 << 16;

/// `exp(2 pi i k / d)`.
#[inline]
pub fn omega(d: u32, k: u32) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % d) as f64 / d as f64)
}

/// Recovers `(M, g)` from a dense Clifford unitary by conjugating each
/// coordinate Weyl operator and matching it against all `W_v`.
pub fn label_from_dense(u: &DMatrix<C64>, field: Field, n: usize) -> Result<CliffordLabel> {
    let d = field.d();
    let dm = state::dim(field, n)?;
    if u.nrows() != dm {
        return Err(Error::DimensionMismatch {
            expected: dm,
            found: u.nrows(),
        });
    }
    let total = (d as usize).pow(2 * n as u32);
    // W_v as (row index, entry) per column
    let candidates: Vec<(Vec<u32>, Vec<(usize, C64)>)> = (0..total)
        .map(|i| {
            let v = digits(d as usize, 2 * n, i);
            let w = WeylOperator::new(SymplecticVector::from_coords(field, v.clone()).unwrap(), 0);
            let sparse = (0..dm)
                .map(|col| {
                    let mut s = DenseState::basis(field, &digits(d as usize, n, col)).unwrap();
                    s.apply_weyl(&w).unwrap();
                    let (row, a) = s
                        .amplitudes()
                        .iter()
                        .enumerate()
                        .find(|(_, a)| a.norm() > 0.5)
                        .unwrap();
                    (row, *a)
                })
                .collect();
            (v, sparse)
        })
        .collect();
    let mut cols = Vec::with_capacity(2 * n);
    let mut phases = Vec::with_capacity(2 * n);
    for i in 0..2 * n {
        let mut e = vec![0u32; 2 * n];
        e[i] = 1;
        let we = weyl_matrix(&WeylOperator::new(
            SymplecticVector::from_coords(field, e)?,
            0,
        ))?;
        let conj = u * we * u.adjoint();
        let (v, c) = candidates
            .iter()
            .find_map(|(v, sparse)| {
                let c: C64 = sparse
                    .iter()
                    .enumerate()
                    .map(|(col, (row, a))| a.conj() * conj[(*row, col)])
                    .sum::<C64>()
                    / dm as f64;
                (c.norm() > 1.0 - 1e-6).then(|| (v.clone(), c))
            })
            .ok_or_else(|| Error::UnsupportedSpec("matrix is not a Clifford unitary".into()))?;
        let k = (c.arg() * d as f64 / (2.0 * std::f64::consts::PI)).round() as i64;
        phases.push(field.reduce(k));
        cols.push(v);
    }
    let m = SymplecticMatrix::from_columns(field, &cols)?;
    // [g, m_i] = phase_i, i.e. (m_i^x, -m_i^z) . g = phase_i
    let rows: Vec<Vec<u32>> = cols
        .iter()
        .map(|c| {
            let mut r = c[n..].to_vec();
            r.extend(c[..n].iter().map(|&v| field.neg(v)));
            r
        })
        .collect();
    let g = linalg::solve(field, &rows, &phases)
        .ok_or_else(|| Error::UnsupportedSpec("inconsistent Weyl phases".into()))?;
    CliffordLabel::new(m, SymplecticVector::from_coords(field, g)?)
}

/// `max |a_ij - b_ij|`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Whether two unitaries agree up to a global phase.
pub fn equal_up_to_phase(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) -> bool {
    let Some((idx, _)) = a
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
    else {
        return true;
    };
    let bv = b.iter().nth(idx).copied().unwrap_or_default();
    if bv.norm() < 1e-12 {
        return false;
    }
    let phase = a.iter().nth(idx).unwrap() / bv;
    max_abs_diff(a, &(b * phase)) < tol
}

#[cfg(test)]
mod tests;

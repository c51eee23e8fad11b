use num_complex::Complex64 as C64;

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::magic::{magic_state_amplitudes, TGateSpec};

use super::state::{digits, DenseState};

/// Marginal of a full distribution over `F_d^n` onto the first `m` qudits.
pub fn marginal(d: u32, n: usize, probs: &[f64], m: usize) -> Vec<f64> {
    let d = d as usize;
    let block = d.pow((n - m) as u32);
    probs.chunks(block).map(|c| c.iter().sum()).collect()
}

/// Born probabilities of the first `m` data qudits of `V|0>` on `n + t`
/// qudits, with ancilla `n + i` post-selected on `|T_i^dagger>` and weighted by
/// `d^t`.
pub fn dense_outcome_distribution(
    field: Field,
    n: usize,
    gates: &[Gate],
    postselect: &[TGateSpec],
    m: usize,
) -> Result<Vec<f64>> {
    let t = postselect.len();
    if m > n {
        return Err(Error::ShapeMismatch(format!("{m} measured of {n} qudits")));
    }
    let mut psi = DenseState::zero(field, n + t)?;
    for g in gates {
        psi.apply_gate(g)?;
    }
    let d = field.d() as usize;
    let anc: Vec<Vec<C64>> = postselect
        .iter()
        .map(|s| magic_state_amplitudes(&s.adjoint()))
        .collect();
    let da = d.pow(t as u32);
    let mut probs = vec![0.0f64; d.pow(n as u32)];
    for (x, p) in probs.iter_mut().enumerate() {
        let mut amp = C64::new(0.0, 0.0);
        for a in 0..da {
            let ad = digits(d, t, a);
            let w: C64 = ad
                .iter()
                .zip(&anc)
                .map(|(&b, s)| s[b as usize].conj())
                .product();
            amp += w * psi.amplitudes()[x * da + a];
        }
        *p = amp.norm_sqr() * da as f64;
    }
    if probs.iter().sum::<f64>() < 1e-12 {
        return Err(Error::ZeroPostselectionWeight);
    }
    Ok(marginal(field.d(), n, &probs, m))
}

/// Born probabilities of the first `m` qudits after applying `gates`
/// (T gates included) to `|0...0>`.
pub fn direct_outcome_distribution(
    field: Field,
    n: usize,
    gates: &[Gate],
    m: usize,
) -> Result<Vec<f64>> {
    if m > n {
        return Err(Error::ShapeMismatch(format!("{m} measured of {n} qudits")));
    }
    let mut psi = DenseState::zero(field, n)?;
    for g in gates {
        psi.apply_gate(g)?;
    }
    Ok(marginal(field.d(), n, &psi.probabilities(), m))
}

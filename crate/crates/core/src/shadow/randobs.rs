use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::observable::gamma_tilde;
use crate::dense::{magic_seed, shadow_norm_exact, traceless_part, MomentOperator};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::magic::TGateSpec;

/// Largest `n` for random-observable norm sampling.
pub const RANDOBS_MAX_N: usize = 2;

/// Hermitian observable with Gaussian entries, projected onto its traceless
/// part and scaled to unit Hilbert-Schmidt norm. With `diagonal`, only the
/// diagonal (computational basis) entries are drawn.
pub fn random_traceless_observable<R: Rng + ?Sized>(
    dim: usize,
    diagonal: bool,
    rng: &mut R,
) -> DMatrix<C64> {
    let mut g = DMatrix::<C64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            if diagonal && i != j {
                continue;
            }
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if diagonal {
                0.0
            } else {
                rng.sample(StandardNormal)
            };
            g[(i, j)] = C64::new(re, im);
        }
    }
    let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    let o = traceless_part(&h);
    let hs = o.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    o / C64::new(hs, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandObsConfig {
    pub d: u32,
    pub n: usize,
    /// Layer T gates; the canonical gate is used on each of the `k` qudits.
    pub k: usize,
    pub samples: usize,
    pub diagonal: bool,
    pub seed: u64,
}

/// Exact squared shadow norm of one sampled observable with its theory bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandObsRecord {
    pub index: usize,
    pub d: u32,
    pub n: usize,
    pub k: usize,
    pub diagonal: bool,
    pub norm: f64,
    pub hs_norm2: f64,
    pub op_norm2: f64,
    pub bound: f64,
}

/// Applicable upper bound for a traceless observable with the given norms.
pub fn randobs_bound(d: u32, k: usize, diagonal: bool, hs: f64, op: f64) -> f64 {
    let df = d as f64;
    if k > 0 {
        gamma_tilde(d, k) * hs
    } else if diagonal {
        (df - 1.0) * hs + df * op
    } else {
        (2.0 * df - 3.0) * hs + 2.0 * op
    }
}

/// Samples observables and evaluates their exact shadow norms through the
/// Clifford-orbit moment of `|T^dagger>^{(x)k} (x) |0>^{(x)(n-k)}`.
pub fn randobs(config: &RandObsConfig) -> Result<Vec<RandObsRecord>> {
    let field = Field::new(config.d).map_err(|e| Error::ConfigError(e.to_string()))?;
    if config.n == 0 || config.n > RANDOBS_MAX_N {
        return Err(Error::TooLarge(format!(
            "random observables need 1 <= n <= {RANDOBS_MAX_N}"
        )));
    }
    if config.k > config.n {
        return Err(Error::ConfigError(format!(
            "k = {} exceeds n = {}",
            config.k, config.n
        )));
    }
    let specs = vec![TGateSpec::canonical(field); config.k];
    let q = MomentOperator::commutant(&magic_seed(field, config.n, &specs)?)?;
    let dim = q.dim();
    (0..config.samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(index as u64);
            let o = random_traceless_observable(dim, config.diagonal, &mut rng);
            let norm = shadow_norm_exact(&o, &q)?;
            let hs = 1.0;
            let op = o.clone().singular_values().max().powi(2);
            Ok(RandObsRecord {
                index,
                d: config.d,
                n: config.n,
                k: config.k,
                diagonal: config.diagonal,
                norm,
                hs_norm2: hs,
                op_norm2: op,
                bound: randobs_bound(config.d, config.k, config.diagonal, hs, op),
            })
        })
        .collect()
}

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::estimator::Scheme;
use crate::circuit::Circuit;
use crate::dense::{self, shadow_norm_exact, weyl_matrix, DenseState, MomentOperator};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::weyl::{SymplecticVector, WeylOperator};

/// Largest dimension for which Weyl sums are materialized densely.
const WEYL_SUM_DENSE_DIM: usize = 1024;
/// Largest `n` for the dense exact-norm route under the global scheme.
const EXACT_GLOBAL_MAX_N: usize = 2;

/// Observable whose traceless part `O_0 = O - tr(O) I / D` is estimated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObservableSpec {
    /// Projector onto the stabilizer state prepared by a Clifford circuit.
    StabilizerStateProjector(Circuit),
    /// A rank-`K` stabilizer projector.
    StabilizerProjector { rank: u64 },
    /// Projector onto a state prepared by a circuit with T gates.
    TModifiedTarget(Circuit),
    /// `sum_i c_i W_i`.
    WeylSum(Vec<(C64, WeylOperator)>),
}

impl ObservableSpec {
    /// Preparation circuit of a pure target.
    pub fn target_circuit(&self) -> Option<&Circuit> {
        match self {
            ObservableSpec::StabilizerStateProjector(c) | ObservableSpec::TModifiedTarget(c) => {
                Some(c)
            }
            _ => None,
        }
    }

    /// Whether the observable is diagonal in some stabilizer basis.
    pub fn is_stabilizer_diagonal(&self) -> bool {
        match self {
            ObservableSpec::StabilizerStateProjector(_)
            | ObservableSpec::StabilizerProjector { .. } => true,
            ObservableSpec::TModifiedTarget(_) => false,
            ObservableSpec::WeylSum(terms) => {
                // every nontrivial term must be a power of a single Weyl operator
                let vs: Vec<&SymplecticVector> = terms
                    .iter()
                    .map(|(_, w)| &w.vec)
                    .filter(|v| !v.is_zero())
                    .collect();
                match vs.first() {
                    None => true,
                    Some(v0) => vs.iter().all(|v| {
                        let f = v0.field();
                        (1..f.d()).any(|c| v0.scale(c) == **v)
                    }),
                }
            }
        }
    }
}

/// Nontrivial Weyl terms with duplicates merged, phases folded into the
/// coefficients.
fn merged_terms(terms: &[(C64, WeylOperator)]) -> Vec<(C64, SymplecticVector)> {
    let mut map: HashMap<SymplecticVector, C64> = HashMap::new();
    let mut order = Vec::new();
    for (c, w) in terms {
        if w.vec.is_zero() {
            continue;
        }
        let coeff = c * dense::omega(w.vec.field().d(), w.phase);
        map.entry(w.vec.clone())
            .and_modify(|a| *a += coeff)
            .or_insert_with(|| {
                order.push(w.vec.clone());
                coeff
            });
    }
    order.into_iter().map(|v| (map[&v], v)).collect()
}

fn check_weyl_terms(terms: &[(C64, WeylOperator)], field: Field, n: usize) -> Result<()> {
    for (_, w) in terms {
        if w.vec.field() != field {
            return Err(Error::FieldMismatch(field.d(), w.vec.field().d()));
        }
        if w.vec.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.vec.n(),
            });
        }
    }
    Ok(())
}

/// Dense matrix of `O_0` for Weyl sums, or of a projector spec at small `n`.
pub fn traceless_matrix(spec: &ObservableSpec, field: Field, n: usize) -> Result<DMatrix<C64>> {
    let dm = (field.d() as usize)
        .checked_pow(n as u32)
        .filter(|&m| m <= WEYL_SUM_DENSE_DIM)
        .ok_or_else(|| Error::TooLarge(format!("dense observable at d={}, n={n}", field.d())))?;
    match spec {
        ObservableSpec::WeylSum(terms) => {
            check_weyl_terms(terms, field, n)?;
            let mut m = DMatrix::<C64>::zeros(dm, dm);
            for (c, v) in merged_terms(terms) {
                m += weyl_matrix(&WeylOperator::new(v, 0))? * c;
            }
            Ok(m)
        }
        ObservableSpec::StabilizerStateProjector(c) | ObservableSpec::TModifiedTarget(c) => {
            check_circuit(c, field, n)?;
            let psi = dense::dense_apply(c, &DenseState::zero(field, n)?)?.to_vector();
            Ok(dense::traceless_part(&(&psi * psi.adjoint())))
        }
        ObservableSpec::StabilizerProjector { rank } => {
            check_rank(field.d(), n, *rank)?;
            let p = DMatrix::<C64>::from_fn(dm, dm, |i, j| {
                if i == j && (i as u64) < *rank {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            Ok(dense::traceless_part(&p))
        }
    }
}

fn check_circuit(c: &Circuit, field: Field, n: usize) -> Result<()> {
    if c.field() != field {
        return Err(Error::FieldMismatch(field.d(), c.field().d()));
    }
    if c.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.n(),
        });
    }
    Ok(())
}

fn check_rank(d: u32, n: usize, k: u64) -> Result<()> {
    let mut p = 1u64;
    let mut ok = false;
    for _ in 0..n {
        if p == k {
            ok = true;
            break;
        }
        match p.checked_mul(d as u64) {
            Some(q) => p = q,
            None => break,
        }
    }
    if !ok {
        return Err(Error::BadRank { k });
    }
    Ok(())
}

/// `||O_0||_sh^2 / ||O_0||_2^2 = (D+1)/(D+d) (d - 1 - d/D + d/K)` for a
/// rank-`K` stabilizer projector under global Cliffords.
pub fn norm_stab_projector(n: usize, d: u32, k: u64) -> Result<f64> {
    Field::new(d)?;
    check_rank(d, n, k)?;
    let df = d as f64;
    let dd = df.powi(n as i32);
    Ok((dd + 1.0) / (dd + df) * (df - 1.0 - df / dd + df / k as f64))
}

/// Upper-bound constant for Clifford circuits followed by `k` T gates.
pub fn gamma_tilde(d: u32, k: usize) -> f64 {
    let df = d as f64;
    let k = k as i32;
    if d % 3 == 1 {
        3.0 + 9.0 / 8.0 * 4f64.powi(k) / df.powi(k - 1)
    } else {
        3.0 + 2f64.powi(k + 1) * (df - 2.0) / df.powi(k)
    }
}

/// Which closed form or computation produced a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormSource {
    HilbertSchmidt,
    GlobalLinear,
    StabilizerDiagonal,
    SingleQuditDiagonal,
    StabilizerProjector,
    CliffordT,
    LocalWeyl,
    LocalLinear,
    DenseMoment,
    Trivial,
}

impl fmt::Display for NormSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NormSource::HilbertSchmidt => "||O_0||_2^2 lower bound",
            NormSource::GlobalLinear => "(2d-3)||O_0||_2^2 + 2||O_0||^2",
            NormSource::StabilizerDiagonal => "(d-1)||O_0||_2^2 + d||O_0||^2",
            NormSource::SingleQuditDiagonal => "(d+1)||O_0||^2",
            NormSource::StabilizerProjector => "stabilizer projector formula",
            NormSource::CliffordT => "gamma_tilde(d,k) ||O_0||_2^2",
            NormSource::LocalWeyl => "(d+1)^m",
            NormSource::LocalLinear => "d^m ||O~||_2^2",
            NormSource::DenseMoment => "dense third moment",
            NormSource::Trivial => "trivial",
        };
        f.write_str(s)
    }
}

/// Squared shadow-norm bounds for `O_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub exact: Option<f64>,
    pub exact_source: Option<NormSource>,
    pub lower: f64,
    pub lower_source: NormSource,
    pub upper: f64,
    pub upper_source: NormSource,
    /// `||O_0||_2^2`.
    pub hs_norm2: f64,
    /// `||O_0||^2` (operator norm).
    pub op_norm2: f64,
}

/// `(||O_0||_2^2, ||O_0||^2)`.
pub fn traceless_norms(spec: &ObservableSpec, field: Field, n: usize) -> Result<(f64, f64)> {
    let dd = (field.d() as f64).powi(n as i32);
    match spec {
        ObservableSpec::StabilizerStateProjector(c) | ObservableSpec::TModifiedTarget(c) => {
            check_circuit(c, field, n)?;
            let a = 1.0 - 1.0 / dd;
            Ok((a, a * a))
        }
        ObservableSpec::StabilizerProjector { rank } => {
            check_rank(field.d(), n, *rank)?;
            let k = *rank as f64;
            let op = 1.0 - k / dd;
            Ok((k - k * k / dd, op * op))
        }
        ObservableSpec::WeylSum(terms) => {
            check_weyl_terms(terms, field, n)?;
            let merged = merged_terms(terms);
            let hs = dd * merged.iter().map(|(c, _)| c.norm_sqr()).sum::<f64>();
            let op = match merged.len() {
                0 => 0.0,
                1 => merged[0].0.norm_sqr(),
                _ => {
                    let m = traceless_matrix(spec, field, n).map_err(|_| {
                        Error::UnsupportedSpec("operator norm of a large Weyl sum".into())
                    })?;
                    m.singular_values().max().powi(2)
                }
            };
            Ok((hs, op))
        }
    }
}

/// Support size of a Weyl sum: qudits touched by any nontrivial term.
fn weyl_support(terms: &[(C64, SymplecticVector)]) -> usize {
    let Some((_, v0)) = terms.first() else {
        return 0;
    };
    (0..v0.n())
        .filter(|&j| terms.iter().any(|(_, v)| v.site(j) != (0, 0)))
        .count()
}

/// Lower bound, upper bound and, when a closed form or a dense computation
/// applies, the exact squared shadow norm of `O_0`.
pub fn norm_bounds(spec: &ObservableSpec, scheme: &Scheme, d: u32, n: usize) -> Result<NormReport> {
    let field = Field::new(d)?;
    let (hs, op) = traceless_norms(spec, field, n)?;
    let df = d as f64;
    let mut r = NormReport {
        exact: None,
        exact_source: None,
        lower: hs,
        lower_source: NormSource::HilbertSchmidt,
        upper: (2.0 * df - 3.0) * hs + 2.0 * op,
        upper_source: NormSource::GlobalLinear,
        hs_norm2: hs,
        op_norm2: op,
    };
    match scheme {
        Scheme::GlobalClifford => {
            if spec.is_stabilizer_diagonal() {
                let diag = (df - 1.0) * hs + df * op;
                if diag < r.upper {
                    r.upper = diag;
                    r.upper_source = NormSource::StabilizerDiagonal;
                }
            }
            match spec {
                ObservableSpec::StabilizerStateProjector(_) => {
                    r.exact = Some(norm_stab_projector(n, d, 1)? * hs);
                    r.exact_source = Some(NormSource::StabilizerProjector);
                }
                ObservableSpec::StabilizerProjector { rank } => {
                    r.exact = Some(norm_stab_projector(n, d, *rank)? * hs);
                    r.exact_source = Some(NormSource::StabilizerProjector);
                }
                _ if n == 1 && spec.is_stabilizer_diagonal() => {
                    r.exact = Some((df + 1.0) * op);
                    r.exact_source = Some(NormSource::SingleQuditDiagonal);
                }
                ObservableSpec::WeylSum(_) if n <= EXACT_GLOBAL_MAX_N => {
                    let o = traceless_matrix(spec, field, n)?;
                    let q = MomentOperator::commutant(&DenseState::zero(field, n)?)?;
                    r.exact = Some(shadow_norm_exact(&o, &q)?);
                    r.exact_source = Some(NormSource::DenseMoment);
                }
                _ => {}
            }
        }
        Scheme::CliffordT(specs) => {
            if specs.is_empty() || specs.len() > n {
                return Err(Error::ConfigError(format!(
                    "k = {} T gates on {n} qudits",
                    specs.len()
                )));
            }
            r.upper = gamma_tilde(d, specs.len()) * hs;
            r.upper_source = NormSource::CliffordT;
        }
        Scheme::LocalClifford => {
            let ObservableSpec::WeylSum(terms) = spec else {
                return Err(Error::UnsupportedSpec(
                    "local scheme norms are available for Weyl sums only".into(),
                ));
            };
            let merged = merged_terms(terms);
            let m = weyl_support(&merged) as i32;
            let sum2: f64 = merged.iter().map(|(c, _)| c.norm_sqr()).sum();
            // ||O~||_2^2 on the m-qudit support
            r.upper = df.powi(m) * df.powi(m) * sum2;
            r.upper_source = NormSource::LocalLinear;
            r.lower = 0.0;
            r.lower_source = NormSource::Trivial;
            if merged.len() == 1 {
                let e = (df + 1.0).powi(merged[0].1.weight() as i32) * merged[0].0.norm_sqr();
                r.exact = Some(e);
                r.exact_source = Some(NormSource::LocalWeyl);
                r.lower = e;
                r.lower_source = NormSource::LocalWeyl;
            }
        }
    }
    Ok(r)
}

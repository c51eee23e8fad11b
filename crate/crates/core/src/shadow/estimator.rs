use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::observable::ObservableSpec;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::magic::{
    gadgetize, GadgetCircuit, MagicTable, OutcomeModel, TGateSpec, DEFAULT_ANCILLA_CAP,
};
use crate::stabilizer::{GeneratingMatrix, LagrangianState};
use crate::symplectic::{sample_clifford, CliffordLabel};
use crate::weyl::WeylOperator;

/// Measurement ensemble of a shadow protocol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    GlobalClifford,
    LocalClifford,
    /// Global Clifford, then `T_j` and `F` on qudit `j` for each listed gate.
    CliffordT(Vec<TGateSpec>),
}

impl Scheme {
    /// Number of layer T gates.
    pub fn k(&self) -> usize {
        match self {
            Scheme::CliffordT(s) => s.len(),
            _ => 0,
        }
    }

    pub fn t_layer(&self) -> &[TGateSpec] {
        match self {
            Scheme::CliffordT(s) => s,
            _ => &[],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::GlobalClifford => "global",
            Scheme::LocalClifford => "local",
            Scheme::CliffordT(_) => "clifford+t",
        }
    }
}

/// The Clifford part of one randomized measurement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShotUnitary {
    Global(CliffordLabel),
    /// One single-qudit label per site.
    Local(Vec<CliffordLabel>),
}

impl ShotUnitary {
    /// The label on all `n` qudits.
    pub fn label(&self) -> Result<CliffordLabel> {
        match self {
            ShotUnitary::Global(c) => Ok(c.clone()),
            ShotUnitary::Local(sites) => {
                let n = sites.len();
                let field = sites.first().ok_or(Error::ZeroArgument)?.field();
                let mut acc = CliffordLabel::identity(field, n);
                for (j, c) in sites.iter().enumerate() {
                    acc = acc.then(&c.embed(&[j], n)?)?;
                }
                Ok(acc)
            }
        }
    }
}

/// A single randomized measurement: `U = V C` applied, outcome `x` observed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowShot {
    pub scheme: Scheme,
    pub unitary: ShotUnitary,
    pub outcome: Vec<u32>,
}

/// Exact outcome statistics of `U|psi>` for a fixed input preparation and
/// T layer, with either the stabilizer or the gadget engine.
#[derive(Debug, Clone)]
pub struct ShotSimulator {
    field: Field,
    n: usize,
    engine: Engine,
}

#[derive(Debug, Clone)]
enum Engine {
    Stabilizer(LagrangianState),
    Gadget {
        circuit: GadgetCircuit,
        prep: GeneratingMatrix,
        table: MagicTable,
    },
}

impl ShotSimulator {
    pub fn new(prep: &Circuit, t_layer: &[TGateSpec]) -> Result<Self> {
        let field = prep.field();
        let n = prep.n();
        let engine = if prep.is_clifford() && t_layer.is_empty() {
            Engine::Stabilizer(LagrangianState::from_gates(field, n, prep.gates())?)
        } else {
            let circuit = gadgetize(prep, t_layer, DEFAULT_ANCILLA_CAP)?;
            let prep = circuit.prep_state()?;
            let table = MagicTable::new(field, &circuit.postselect())?;
            Engine::Gadget {
                circuit,
                prep,
                table,
            }
        };
        Ok(ShotSimulator { field, n, engine })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn model(&self, clifford: &CliffordLabel) -> Result<ModelOrState> {
        match &self.engine {
            Engine::Stabilizer(s) => {
                let mut s = s.clone();
                s.apply_clifford(clifford)?;
                Ok(ModelOrState::State(s))
            }
            Engine::Gadget {
                circuit,
                prep,
                table,
            } => {
                let mut g = prep.clone();
                circuit.apply_layer(&mut g, Some(clifford))?;
                Ok(ModelOrState::Model(OutcomeModel::new(
                    &g,
                    self.n,
                    table.clone(),
                )?))
            }
        }
    }

    /// Draws an outcome and returns it with its probability.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        clifford: &CliffordLabel,
        rng: &mut R,
    ) -> Result<(Vec<u32>, f64)> {
        match self.model(clifford)? {
            ModelOrState::State(s) => {
                let x = s.measure_all(rng);
                let p = s.outcome_probability(&x)?;
                Ok((x, p))
            }
            ModelOrState::Model(mut m) => m.sample(rng),
        }
    }

    /// `|<x| U |psi>|^2`.
    pub fn probability(&self, clifford: &CliffordLabel, x: &[u32]) -> Result<f64> {
        match self.model(clifford)? {
            ModelOrState::State(s) => s.outcome_probability(x),
            ModelOrState::Model(mut m) => m.probability(x),
        }
    }
}

enum ModelOrState {
    State(LagrangianState),
    Model(OutcomeModel),
}

/// Draws the Clifford part of a shot.
pub fn sample_unitary<R: Rng + ?Sized>(
    scheme: &Scheme,
    field: Field,
    n: usize,
    rng: &mut R,
) -> ShotUnitary {
    match scheme {
        Scheme::LocalClifford => {
            ShotUnitary::Local((0..n).map(|_| sample_clifford(field, 1, rng)).collect())
        }
        _ => ShotUnitary::Global(sample_clifford(field, n, rng)),
    }
}

/// Performs one randomized measurement on the state prepared by `prep`.
pub fn sample_shot<R: Rng + ?Sized>(
    prep: &Circuit,
    scheme: &Scheme,
    rng: &mut R,
) -> Result<ShadowShot> {
    let sim = ShotSimulator::new(prep, scheme.t_layer())?;
    let unitary = sample_unitary(scheme, prep.field(), prep.n(), rng);
    let (outcome, _) = sim.sample(&unitary.label()?, rng)?;
    Ok(ShadowShot {
        scheme: scheme.clone(),
        unitary,
        outcome,
    })
}

/// `(D+1) q - 1` with `q = |<x|U|target>|^2`: the single-shot fidelity
/// estimate under a 2-design reconstruction.
pub fn fidelity_shot(shot: &ShadowShot, target: &ObservableSpec) -> Result<f64> {
    if shot.scheme == Scheme::LocalClifford {
        return Err(Error::SchemeMismatch(
            "fidelity estimates need a global scheme".into(),
        ));
    }
    let prep = target.target_circuit().ok_or_else(|| {
        Error::SchemeMismatch("fidelity estimates need a pure target state".into())
    })?;
    let sim = ShotSimulator::new(prep, shot.scheme.t_layer())?;
    let q = sim.probability(&shot.unitary.label()?, &shot.outcome)?;
    Ok(fidelity_value(prep.field(), prep.n(), q))
}

/// `(D+1) q - 1`.
pub fn fidelity_value(field: Field, n: usize, q: f64) -> f64 {
    ((field.d() as f64).powi(n as i32) + 1.0) * q - 1.0
}

/// `tr(W_u rho_hat)` for the local reconstruction map: identity sites give 1,
/// the others `(d+1) <b_j| U_j W_{u_j} U_j^dagger |b_j>`.
pub fn weyl_local_shot(shot: &ShadowShot, term: &WeylOperator) -> Result<C64> {
    let ShotUnitary::Local(sites) = &shot.unitary else {
        return Err(Error::SchemeMismatch(
            "Weyl estimates need the local scheme".into(),
        ));
    };
    if shot.scheme != Scheme::LocalClifford {
        return Err(Error::SchemeMismatch(
            "Weyl estimates need the local scheme".into(),
        ));
    }
    let n = sites.len();
    if term.vec.n() != n || shot.outcome.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: term.vec.n(),
        });
    }
    let f = term.vec.field();
    let d = f.d();
    let mut value = crate::dense::omega(d, term.phase);
    for (j, c) in sites.iter().enumerate() {
        let (z, x) = term.vec.site(j);
        if (z, x) == (0, 0) {
            continue;
        }
        let (ph, mu) = c.conjugate_coords(&[z, x]);
        if mu[1] != 0 {
            return Ok(C64::new(0.0, 0.0));
        }
        let e = f.add(ph, f.mul(mu[0], shot.outcome[j]));
        value *= crate::dense::omega(d, e) * (d as f64 + 1.0);
    }
    Ok(value)
}

/// How single-shot values are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    Mean,
    MedianOfMeans { groups: usize },
}

/// An aggregated estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub n_shots: usize,
    pub aggregation: Aggregation,
    /// Unbiased sample variance of the single-shot values.
    pub variance_est: f64,
}

impl Estimate {
    /// Standard error of the plain mean.
    pub fn stderr(&self) -> f64 {
        (self.variance_est / self.n_shots as f64).sqrt()
    }
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn aggregate(values: &[f64], method: Aggregation) -> Result<Estimate> {
    let n = values.len();
    let groups = match method {
        Aggregation::Mean => 1,
        Aggregation::MedianOfMeans { groups } => groups,
    };
    if n == 0 || groups == 0 || !n.is_multiple_of(groups) {
        return Err(Error::BadGrouping { n, groups });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let variance_est = if n > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let value = match method {
        Aggregation::Mean => mean,
        Aggregation::MedianOfMeans { groups } => {
            let size = n / groups;
            let mut means: Vec<f64> = values
                .chunks(size)
                .map(|c| c.iter().sum::<f64>() / size as f64)
                .collect();
            median(&mut means)
        }
    };
    Ok(Estimate {
        value,
        n_shots: n,
        aggregation: method,
        variance_est,
    })
}

/// Genuine multipartite entanglement is certified when the GHZ fidelity
/// estimate exceeds `1/d` by three standard errors.
pub fn gme_verdict(estimate: &Estimate, d: u32) -> bool {
    estimate.value > 1.0 / d as f64 + 3.0 * estimate.stderr()
}

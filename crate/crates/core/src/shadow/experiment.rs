use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimator::{
    aggregate, fidelity_value, sample_unitary, Aggregation, Scheme, ShotSimulator,
};
use super::observable::{gamma_tilde, norm_bounds, ObservableSpec};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::magic::TGateSpec;

/// Version of the CSV/JSON result schema.
pub const SCHEMA_VERSION: &str = "1";

/// Input/target state of a fidelity experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StateFamily {
    Ghz,
    /// GHZ followed by T gates on the first `t_count` qudits.
    TGhz {
        t_count: usize,
        spec: TGateSpec,
    },
    /// Graph state on a periodic square lattice.
    Cluster {
        rows: usize,
        cols: usize,
    },
    /// `(1-p) |GHZ><GHZ| + p I/D`, target GHZ.
    DepolarizedGhz {
        p: f64,
    },
}

impl StateFamily {
    /// Preparation circuit of the pure target.
    pub fn target_circuit(&self, field: Field, n: usize) -> Result<Circuit> {
        match self {
            StateFamily::Ghz | StateFamily::DepolarizedGhz { .. } => Ok(Circuit::ghz(field, n)),
            StateFamily::TGhz { t_count, spec } => {
                if *t_count > n {
                    return Err(Error::ConfigError(format!(
                        "{t_count} T gates on {n} qudits"
                    )));
                }
                let mut c = Circuit::ghz(field, n);
                for q in 0..*t_count {
                    c.push(Gate::T { q, spec: *spec })?;
                }
                Ok(c)
            }
            StateFamily::Cluster { rows, cols } => {
                if rows * cols != n {
                    return Err(Error::ConfigError(format!(
                        "{rows}x{cols} lattice for n = {n}"
                    )));
                }
                Circuit::cluster(field, *rows, *cols)
            }
        }
    }

    pub fn mixing(&self) -> f64 {
        match self {
            StateFamily::DepolarizedGhz { p } => *p,
            _ => 0.0,
        }
    }

    /// `<target| rho |target>`.
    pub fn true_fidelity(&self, d: u32, n: usize) -> f64 {
        let p = self.mixing();
        1.0 - p + p / (d as f64).powi(n as i32)
    }

    pub fn observable(&self, field: Field, n: usize) -> Result<ObservableSpec> {
        let c = self.target_circuit(field, n)?;
        Ok(if c.is_clifford() {
            ObservableSpec::StabilizerStateProjector(c)
        } else {
            ObservableSpec::TModifiedTarget(c)
        })
    }
}

/// A fidelity-estimation experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub d: u32,
    pub n: usize,
    pub family: StateFamily,
    pub scheme: Scheme,
    /// Shot counts; each run draws `max(shots)` shots and every entry is
    /// evaluated on the corresponding prefix.
    pub shots: Vec<usize>,
    pub runs: usize,
    /// Number of groups for median of means, if requested.
    pub groups: Option<usize>,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<Field> {
        let field = Field::new(self.d).map_err(|e| Error::ConfigError(e.to_string()))?;
        if self.n == 0 {
            return Err(Error::ConfigError("n must be positive".into()));
        }
        if self.shots.is_empty() || self.shots.contains(&0) {
            return Err(Error::ConfigError("shot counts must be positive".into()));
        }
        if self.runs == 0 {
            return Err(Error::ConfigError("runs must be positive".into()));
        }
        if self.scheme == Scheme::LocalClifford {
            return Err(Error::ConfigError(
                "fidelity experiments use the global or clifford+T scheme".into(),
            ));
        }
        if self.scheme.k() > self.n {
            return Err(Error::ConfigError(format!(
                "k = {} exceeds n = {}",
                self.scheme.k(),
                self.n
            )));
        }
        if let Scheme::CliffordT(specs) = &self.scheme {
            if specs.is_empty() {
                return Err(Error::ConfigError(
                    "clifford+T needs at least one T gate".into(),
                ));
            }
            if let Some(s) = specs.iter().find(|s| s.field() != field) {
                return Err(Error::ConfigError(format!(
                    "T gate over d = {} in a d = {} run",
                    s.field().d(),
                    self.d
                )));
            }
        }
        let p = self.family.mixing();
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ConfigError(format!(
                "mixing probability {p} outside [0, 1]"
            )));
        }
        if let Some(g) = self.groups {
            for &n in &self.shots {
                if g == 0 || n % g != 0 {
                    return Err(Error::BadGrouping { n, groups: g });
                }
            }
        }
        Ok(field)
    }
}

/// One output line: statistics over all runs at one shot count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scheme: String,
    pub d: u32,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "N")]
    pub shots: usize,
    pub run_count: usize,
    pub estimate_mean: f64,
    pub mse: f64,
    pub theory_bound: f64,
    pub seed: u64,
}

/// Per-run estimates at one shot count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEstimates {
    pub shots: usize,
    pub mean: Vec<f64>,
    pub median_of_means: Option<Vec<f64>>,
    pub stderr: Vec<f64>,
}

impl RunEstimates {
    pub fn mse(&self, truth: f64) -> f64 {
        mse(&self.mean, truth)
    }

    pub fn mom_mse(&self, truth: f64) -> Option<f64> {
        self.median_of_means.as_ref().map(|v| mse(v, truth))
    }
}

fn mse(values: &[f64], truth: f64) -> f64 {
    values.iter().map(|v| (v - truth).powi(2)).sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub truth: f64,
    /// Squared shadow norm bounding `N * MSE`.
    pub theory_bound: f64,
    pub rows: Vec<ResultRow>,
    pub estimates: Vec<RunEstimates>,
}

impl ExperimentOutput {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        wr.flush()?;
        Ok(())
    }

    /// `{config, results, version}` envelope.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "results": self.rows,
            "version": SCHEMA_VERSION,
        })
    }
}

/// Squared shadow norm of the target projector's traceless part that bounds
/// `N * MSE` for this configuration.
pub fn theory_bound(config: &ExperimentConfig) -> Result<f64> {
    let field = config.validate()?;
    let obs = config.family.observable(field, config.n)?;
    let report = norm_bounds(&obs, &config.scheme, config.d, config.n)?;
    Ok(match &config.scheme {
        Scheme::CliffordT(specs) => gamma_tilde(config.d, specs.len()) * report.hs_norm2,
        _ => report.exact.unwrap_or(report.upper),
    })
}

/// Single-shot fidelity values of one run.
fn run_shots(
    config: &ExperimentConfig,
    target: &ShotSimulator,
    field: Field,
    count: usize,
    run: usize,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(run as u64);
    let n = config.n;
    let d = config.d;
    let p = config.family.mixing();
    let layer = config.scheme.t_layer();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let unitary = sample_unitary(&config.scheme, field, n, &mut rng);
        let label = unitary.label()?;
        let q = if p > 0.0 && rng.random::<f64>() < p {
            // maximally mixed component: a uniformly random basis state
            let mut prep = Circuit::new(field, n);
            for q in 0..n {
                for _ in 0..rng.random_range(0..d) {
                    prep.push(Gate::X(q))?;
                }
            }
            let (x, _) = ShotSimulator::new(&prep, layer)?.sample(&label, &mut rng)?;
            target.probability(&label, &x)?
        } else {
            target.sample(&label, &mut rng)?.1
        };
        out.push(fidelity_value(field, n, q));
    }
    Ok(out)
}

/// Runs the experiment; results depend only on the configuration, not on the
/// number of worker threads.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let field = config.validate()?;
    let target_circ = config.family.target_circuit(field, config.n)?;
    let target = ShotSimulator::new(&target_circ, config.scheme.t_layer())?;
    let bound = theory_bound(config)?;
    let truth = config.family.true_fidelity(config.d, config.n);
    let max_shots = *config.shots.iter().max().expect("validated");

    let per_run: Vec<Vec<(f64, Option<f64>, f64)>> = (0..config.runs)
        .into_par_iter()
        .map(|run| {
            let values = run_shots(config, &target, field, max_shots, run)?;
            config
                .shots
                .iter()
                .map(|&n| {
                    let prefix = &values[..n];
                    let mean = aggregate(prefix, Aggregation::Mean)?;
                    let mom = config
                        .groups
                        .map(|groups| {
                            aggregate(prefix, Aggregation::MedianOfMeans { groups })
                                .map(|e| e.value)
                        })
                        .transpose()?;
                    Ok((mean.value, mom, mean.stderr()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(config.shots.len());
    let mut estimates = Vec::with_capacity(config.shots.len());
    for (i, &n_shots) in config.shots.iter().enumerate() {
        let mean: Vec<f64> = per_run.iter().map(|r| r[i].0).collect();
        let stderr: Vec<f64> = per_run.iter().map(|r| r[i].2).collect();
        let mom: Option<Vec<f64>> = config.groups.map(|_| {
            per_run
                .iter()
                .map(|r| r[i].1.expect("groups set"))
                .collect()
        });
        let est = RunEstimates {
            shots: n_shots,
            mean,
            median_of_means: mom,
            stderr,
        };
        rows.push(ResultRow {
            scheme: config.scheme.name().to_string(),
            d: config.d,
            n: config.n,
            k: config.scheme.k(),
            shots: n_shots,
            run_count: config.runs,
            estimate_mean: est.mean.iter().sum::<f64>() / config.runs as f64,
            mse: est.mse(truth),
            theory_bound: bound,
            seed: config.seed,
        });
        estimates.push(est);
    }
    Ok(ExperimentOutput {
        config: config.clone(),
        truth,
        theory_bound: bound,
        rows,
        estimates,
    })
}

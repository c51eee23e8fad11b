//! Classical shadows with global, local and Clifford+T measurement
//! ensembles: single-shot estimators, aggregation, shadow-norm formulas and
//! fidelity-estimation experiments.

mod estimator;
mod experiment;
mod observable;
mod randobs;

pub use estimator::{
    aggregate, fidelity_shot, fidelity_value, gme_verdict, sample_shot, sample_unitary,
    weyl_local_shot, Aggregation, Estimate, Scheme, ShadowShot, ShotSimulator, ShotUnitary,
};
pub use experiment::{
    run_experiment, theory_bound, ExperimentConfig, ExperimentOutput, ResultRow, RunEstimates,
    StateFamily, SCHEMA_VERSION,
};
pub use observable::{
    gamma_tilde, norm_bounds, norm_stab_projector, traceless_matrix, traceless_norms, NormReport,
    NormSource, ObservableSpec,
};
pub use randobs::{
    randobs, randobs_bound, random_traceless_observable, RandObsConfig, RandObsRecord,
    RANDOBS_MAX_N,
};

#[cfg(test)]
mod tests;

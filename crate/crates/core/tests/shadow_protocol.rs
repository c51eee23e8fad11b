//! End-to-end fidelity estimation on small instances.

use qudit_shadow::field::Field;
use qudit_shadow::magic::TGateSpec;
use qudit_shadow::shadow::{
    run_experiment, ExperimentConfig, ExperimentOutput, Scheme, StateFamily,
};

fn run(
    d: u32,
    n: usize,
    family: StateFamily,
    scheme: Scheme,
    shots: usize,
    runs: usize,
    seed: u64,
) -> ExperimentOutput {
    run_experiment(&ExperimentConfig {
        d,
        n,
        family,
        scheme,
        shots: vec![shots],
        runs,
        groups: None,
        seed,
    })
    .unwrap()
}

fn canonical(d: u32, k: usize) -> Scheme {
    Scheme::CliffordT(vec![TGateSpec::canonical(Field::new(d).unwrap()); k])
}

/// Grand mean over runs within four standard errors of the truth.
fn assert_unbiased(o: &ExperimentOutput) {
    let e = &o.estimates[0];
    let runs = e.mean.len() as f64;
    let grand = e.mean.iter().sum::<f64>() / runs;
    let se = (e.mse(o.truth) / runs).sqrt();
    assert!(
        (grand - o.truth).abs() < 4.0 * se,
        "grand mean {grand}, truth {}, se {se}",
        o.truth
    );
}

#[test]
fn magic_layer_lowers_the_variance() {
    let base = run(5, 4, StateFamily::Ghz, Scheme::GlobalClifford, 2000, 40, 3);
    let magic = run(5, 4, StateFamily::Ghz, canonical(5, 1), 2000, 40, 3);
    let (v0, v1) = (base.rows[0].mse, magic.rows[0].mse);
    assert!(v1 < v0, "k=1 MSE {v1} not below k=0 MSE {v0}");
}

#[test]
fn t_modified_target_is_estimated_without_bias() {
    let f = Field::new(3).unwrap();
    let family = StateFamily::TGhz {
        t_count: 1,
        spec: TGateSpec::canonical(f),
    };
    assert_unbiased(&run(3, 3, family, canonical(3, 1), 500, 40, 5));
}

#[test]
fn cluster_state_is_estimated_without_bias() {
    assert_unbiased(&run(
        3,
        4,
        StateFamily::Cluster { rows: 2, cols: 2 },
        Scheme::GlobalClifford,
        500,
        40,
        6,
    ));
}

#[test]
fn depolarized_fidelity_is_estimated_without_bias() {
    let o = run(
        3,
        3,
        StateFamily::DepolarizedGhz { p: 0.5 },
        Scheme::GlobalClifford,
        500,
        40,
        8,
    );
    assert!((o.truth - (0.5 + 0.5 / 27.0)).abs() < 1e-12);
    assert_unbiased(&o);
}

#[test]
fn mse_matches_single_shot_variance_over_n() {
    let o = run(3, 4, StateFamily::Ghz, Scheme::GlobalClifford, 1000, 60, 9);
    let e = &o.estimates[0];
    let predicted = e.stderr.iter().map(|s| s * s).sum::<f64>() / e.stderr.len() as f64;
    let ratio = e.mse(o.truth) / predicted;
    assert!((0.6..1.6).contains(&ratio), "MSE / (Var/N) = {ratio}");
}

#[test]
fn empirical_variance_respects_the_theory_bound() {
    for (d, scheme) in [
        (3, Scheme::GlobalClifford),
        (5, Scheme::GlobalClifford),
        (3, canonical(3, 1)),
    ] {
        let o = run(d, 4, StateFamily::Ghz, scheme, 1000, 40, 10);
        let e = &o.estimates[0];
        let var = e.stderr.iter().map(|s| s * s * 1000.0).sum::<f64>() / e.stderr.len() as f64;
        assert!(
            var <= 1.2 * o.theory_bound,
            "d={d}: per-shot variance {var} vs bound {}",
            o.theory_bound
        );
    }
}

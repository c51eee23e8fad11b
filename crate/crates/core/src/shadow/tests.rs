use super::*;
use crate::circuit::{Circuit, Gate};
use crate::dense::{clifford_unitary, dense_apply, shadow_norm_exact, DenseState, MomentOperator};
use crate::field::Field;
use crate::magic::TGateSpec;
use crate::symplectic::{sample_clifford, CliffordLabel};
use crate::weyl::{SymplecticVector, WeylOperator};
use crate::Error;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fd(d: u32) -> Field {
    Field::new(d).unwrap()
}

fn all_single_labels(f: Field) -> Vec<CliffordLabel> {
    crate::symplectic::single_qudit_cliffords(f)
}

/// `|<x| F_j T_j ... C |psi>|^2` for every `x`, densely.
fn dense_probs(prep: &Circuit, c: &CliffordLabel, layer: &[TGateSpec]) -> Vec<f64> {
    let f = prep.field();
    let n = prep.n();
    let psi = dense_apply(prep, &DenseState::zero(f, n).unwrap()).unwrap();
    let v = clifford_unitary(c).unwrap() * psi.to_vector();
    let mut s = DenseState::from_amplitudes(f, n, v.iter().copied().collect()).unwrap();
    for (q, spec) in layer.iter().enumerate() {
        s.apply_gate(&Gate::T { q, spec: *spec }).unwrap();
        s.apply_gate(&Gate::F(q)).unwrap();
    }
    s.probabilities()
}

fn digits(d: usize, n: usize, mut i: usize) -> Vec<u32> {
    let mut v = vec![0u32; n];
    for x in v.iter_mut().rev() {
        *x = (i % d) as u32;
        i /= d;
    }
    v
}

#[test]
fn fidelity_shot_examples() {
    let f = fd(3);
    let target = ObservableSpec::StabilizerStateProjector(Circuit::new(f, 2));
    let shot = ShadowShot {
        scheme: Scheme::GlobalClifford,
        unitary: ShotUnitary::Global(CliffordLabel::identity(f, 2)),
        outcome: vec![0, 0],
    };
    assert_eq!(fidelity_shot(&shot, &target).unwrap(), 9.0);
    let shot = ShadowShot {
        outcome: vec![1, 0],
        ..shot
    };
    assert_eq!(fidelity_shot(&shot, &target).unwrap(), -1.0);
    let local = ShadowShot {
        scheme: Scheme::LocalClifford,
        unitary: ShotUnitary::Local(vec![CliffordLabel::identity(f, 1); 2]),
        outcome: vec![0, 0],
    };
    assert!(matches!(
        fidelity_shot(&local, &target),
        Err(Error::SchemeMismatch(_))
    ));
    let weyl = ObservableSpec::WeylSum(vec![]);
    assert!(matches!(
        fidelity_shot(&shot, &weyl),
        Err(Error::SchemeMismatch(_))
    ));
}

#[test]
fn shot_probabilities_match_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for case in 0..40 {
        let d = if case % 2 == 0 { 3 } else { 5 };
        let f = fd(d);
        let n = 1 + case % 3;
        let t_prep = case % 2;
        let prep = Circuit::random_clifford_t(f, n, 6, t_prep, &mut rng);
        let k = (case / 3) % (n + 1);
        let layer: Vec<TGateSpec> = (0..k.min(2))
            .map(|_| TGateSpec::random(f, &mut rng))
            .collect();
        let sim = ShotSimulator::new(&prep, &layer).unwrap();
        let c = sample_clifford(f, n, &mut rng);
        let probs = dense_probs(&prep, &c, &layer);
        for (i, p) in probs.iter().enumerate() {
            let x = digits(d as usize, n, i);
            assert!(
                (sim.probability(&c, &x).unwrap() - p).abs() < 1e-9,
                "case {case}"
            );
        }
    }
}

#[test]
fn fidelity_estimator_is_exactly_unbiased_single_qudit() {
    // rho and target differ; averaging over all labels and outcomes recovers <t|rho|t>
    for d in [3u32, 5] {
        let f = fd(d);
        let labels = all_single_labels(f);
        let rho = Circuit::new(f, 1)
            .with(Gate::F(0))
            .unwrap()
            .with(Gate::S { q: 0, nu: 1 })
            .unwrap();
        let spec = TGateSpec::canonical(f);
        for (target, layer) in [
            (Circuit::new(f, 1), vec![]),
            (Circuit::new(f, 1).with(Gate::F(0)).unwrap(), vec![spec]),
            (
                Circuit::new(f, 1)
                    .with(Gate::F(0))
                    .unwrap()
                    .with(Gate::T { q: 0, spec })
                    .unwrap(),
                vec![],
            ),
        ] {
            let rho_sim = ShotSimulator::new(&rho, &layer).unwrap();
            let t_sim = ShotSimulator::new(&target, &layer).unwrap();
            let mut mean = 0.0;
            for c in &labels {
                for x in 0..d {
                    let p = rho_sim.probability(c, &[x]).unwrap();
                    let q = t_sim.probability(c, &[x]).unwrap();
                    mean += p * fidelity_value(f, 1, q);
                }
            }
            mean /= labels.len() as f64;
            let a = dense_apply(&rho, &DenseState::zero(f, 1).unwrap()).unwrap();
            let b = dense_apply(&target, &DenseState::zero(f, 1).unwrap()).unwrap();
            assert!((mean - a.overlap2(&b)).abs() < 1e-10, "d={d}");
        }
    }
}

#[test]
fn ghz_fidelity_mean_is_one_within_three_sigma() {
    let f = fd(3);
    let n = 2;
    let target_c = Circuit::ghz(f, n);
    let sim = ShotSimulator::new(&target_c, &[]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let shots = 100_000;
    let values: Vec<f64> = (0..shots)
        .map(|_| {
            let c = sample_clifford(f, n, &mut rng);
            fidelity_value(f, n, sim.sample(&c, &mut rng).unwrap().1)
        })
        .collect();
    let est = aggregate(&values, Aggregation::Mean).unwrap();
    let norm = norm_stab_projector(n, 3, 1).unwrap() * (1.0 - 1.0 / 9.0);
    let sigma = (norm / shots as f64).sqrt();
    assert!(
        (est.value - 1.0).abs() < 3.0 * sigma,
        "{} vs sigma {sigma}",
        est.value
    );
}

#[test]
fn global_phase_of_target_is_irrelevant() {
    let f = fd(3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = Circuit::ghz(f, 3);
    let mut b = a.clone();
    for _ in 0..4 {
        b.push(Gate::F(1)).unwrap();
    }
    for _ in 0..20 {
        let shot = sample_shot(&a, &Scheme::GlobalClifford, &mut rng).unwrap();
        let va =
            fidelity_shot(&shot, &ObservableSpec::StabilizerStateProjector(a.clone())).unwrap();
        let vb =
            fidelity_shot(&shot, &ObservableSpec::StabilizerStateProjector(b.clone())).unwrap();
        assert_eq!(va, vb);
    }
}

fn weyl(f: Field, z: &[u32], x: &[u32]) -> WeylOperator {
    WeylOperator::new(SymplecticVector::new(f, z, x).unwrap(), 0)
}

#[test]
fn weyl_local_shot_identity_and_scheme() {
    let f = fd(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let prep = Circuit::ghz(f, 2);
    for _ in 0..10 {
        let shot = sample_shot(&prep, &Scheme::LocalClifford, &mut rng).unwrap();
        let v = weyl_local_shot(&shot, &WeylOperator::identity(f, 2)).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
    let global = sample_shot(&prep, &Scheme::GlobalClifford, &mut rng).unwrap();
    assert!(matches!(
        weyl_local_shot(&global, &weyl(f, &[1, 0], &[0, 0])),
        Err(Error::SchemeMismatch(_))
    ));
}

#[test]
fn weyl_local_shot_on_zero_state_averages_to_one() {
    let f = fd(3);
    let prep = Circuit::new(f, 1);
    let z = weyl(f, &[1], &[0]);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let shots = 100_000;
    let mut sum = C64::new(0.0, 0.0);
    let mut sum2 = 0.0;
    for _ in 0..shots {
        let shot = sample_shot(&prep, &Scheme::LocalClifford, &mut rng).unwrap();
        let v = weyl_local_shot(&shot, &z).unwrap();
        sum += v;
        sum2 += v.norm_sqr();
    }
    let mean = sum / shots as f64;
    let sigma = (sum2 / shots as f64 / shots as f64).sqrt();
    assert!((mean - C64::new(1.0, 0.0)).norm() < 4.0 * sigma);
}

#[test]
fn weyl_local_shot_exact_moments() {
    // exhaustive over single-qudit labels and outcomes, sites independent
    for d in [3u32, 5] {
        let f = fd(d);
        let labels = all_single_labels(f);
        let rho = Circuit::new(f, 1).with(Gate::F(0)).unwrap();
        let sim = ShotSimulator::new(&rho, &[]).unwrap();
        let psi = dense_apply(&rho, &DenseState::zero(f, 1).unwrap()).unwrap();
        for (z, x) in [(1u32, 0u32), (0, 1), (1, 2), (2, 2)] {
            let w = weyl(f, &[z], &[x]);
            let mut first = C64::new(0.0, 0.0);
            let mut second_mixed = 0.0;
            for c in &labels {
                for b in 0..d {
                    let shot = ShadowShot {
                        scheme: Scheme::LocalClifford,
                        unitary: ShotUnitary::Local(vec![c.clone()]),
                        outcome: vec![b],
                    };
                    let v = weyl_local_shot(&shot, &w).unwrap();
                    first += v * sim.probability(c, &[b]).unwrap();
                    second_mixed += v.norm_sqr() / d as f64;
                }
            }
            first /= labels.len() as f64;
            second_mixed /= labels.len() as f64;
            let truth = psi.expectation_weyl(&w).unwrap();
            assert!((first - truth).norm() < 1e-10);
            assert!(second_mixed <= d as f64 + 1.0 + 1e-9);
        }
    }
}

#[test]
fn aggregate_examples() {
    let e = aggregate(&[2.5; 8], Aggregation::Mean).unwrap();
    assert_eq!(e.value, 2.5);
    assert_eq!(e.variance_est, 0.0);
    let v = [5.0, 1.0, 9.0, 3.0, 7.0, 2.0, 8.0, 4.0, 6.0, 0.0];
    let e = aggregate(&v, Aggregation::MedianOfMeans { groups: 10 }).unwrap();
    assert_eq!(e.value, 4.5);
    let e = aggregate(&v, Aggregation::MedianOfMeans { groups: 5 }).unwrap();
    // group means 3, 6, 4.5, 6, 3
    assert_eq!(e.value, 4.5);
    assert!(matches!(
        aggregate(&v, Aggregation::MedianOfMeans { groups: 3 }),
        Err(Error::BadGrouping { n: 10, groups: 3 })
    ));
    assert!(matches!(
        aggregate(&[], Aggregation::Mean),
        Err(Error::BadGrouping { .. })
    ));
}

#[test]
fn stab_projector_formula_examples() {
    assert!((norm_stab_projector(1, 3, 1).unwrap() - 8.0 / 3.0).abs() < 1e-12);
    assert!((norm_stab_projector(2, 3, 3).unwrap() - 20.0 / 9.0).abs() < 1e-12);
    for d in [3u32, 5, 7] {
        let big = norm_stab_projector(60, d, 1).unwrap();
        assert!((big - (2 * d - 1) as f64).abs() < 1e-9);
    }
    assert!(matches!(
        norm_stab_projector(2, 3, 9),
        Err(Error::BadRank { k: 9 })
    ));
    assert!(matches!(
        norm_stab_projector(2, 3, 2),
        Err(Error::BadRank { k: 2 })
    ));
    assert!(matches!(
        norm_stab_projector(2, 3, 0),
        Err(Error::BadRank { k: 0 })
    ));
}

#[test]
fn stab_projector_formula_matches_dense_oracle() {
    for (d, n) in [(3u32, 1usize), (5, 1), (3, 2)] {
        let f = fd(d);
        let q = MomentOperator::commutant(&DenseState::zero(f, n).unwrap()).unwrap();
        let mut k = 1u64;
        while k < (d as u64).pow(n as u32) {
            let spec = ObservableSpec::StabilizerProjector { rank: k };
            let o = traceless_matrix(&spec, f, n).unwrap();
            let (hs, _) = traceless_norms(&spec, f, n).unwrap();
            let exact = shadow_norm_exact(&o, &q).unwrap();
            assert!((exact / hs - norm_stab_projector(n, d, k).unwrap()).abs() < 1e-9);
            k *= d as u64;
        }
    }
}

proptest! {
    #[test]
    fn stab_projector_formula_monotone(n in 2usize..12, e in 0usize..10) {
        let e = e.min(n - 2);
        for d in [3u32, 5, 7] {
            let k = (d as u64).pow(e as u32);
            let a = norm_stab_projector(n, d, k).unwrap();
            let b = norm_stab_projector(n, d, k * d as u64).unwrap();
            prop_assert!(b < a);
        }
        let k = 3u64.pow(e as u32);
        let r3 = norm_stab_projector(n, 3, k).unwrap();
        let r5 = norm_stab_projector(n, 5, 5u64.pow(e as u32)).unwrap();
        prop_assert!(r5 > r3);
    }
}

#[test]
fn gamma_tilde_examples() {
    assert!((gamma_tilde(3, 1) - 13.0 / 3.0).abs() < 1e-12);
    assert!((gamma_tilde(7, 1) - 7.5).abs() < 1e-12);
    for d in [3u32, 5, 7, 11, 13] {
        assert!((gamma_tilde(d, 60) - 3.0).abs() < 1e-9);
    }
}

#[test]
fn norm_report_examples() {
    let f = fd(3);
    let ghz = ObservableSpec::StabilizerStateProjector(Circuit::ghz(f, 4));
    let r = norm_bounds(&ghz, &Scheme::GlobalClifford, 3, 4).unwrap();
    let exact = r.exact.unwrap();
    assert!(r.lower <= exact && exact <= r.upper);
    assert_eq!(r.exact_source, Some(NormSource::StabilizerProjector));
    let single = ObservableSpec::StabilizerStateProjector(Circuit::new(f, 1));
    let r = norm_bounds(&single, &Scheme::GlobalClifford, 3, 1).unwrap();
    assert!((r.exact.unwrap() - 16.0 / 9.0).abs() < 1e-12);
    let zz = ObservableSpec::WeylSum(vec![(C64::new(1.0, 0.0), weyl(f, &[1, 1], &[0, 0]))]);
    let r = norm_bounds(&zz, &Scheme::LocalClifford, 3, 2).unwrap();
    assert_eq!(r.exact, Some(16.0));
    assert!(r.exact.unwrap() <= r.upper);
    let r = norm_bounds(&zz, &Scheme::GlobalClifford, 3, 2).unwrap();
    assert_eq!(r.exact_source, Some(NormSource::DenseMoment));
    let exact = r.exact.unwrap();
    assert!(r.lower - 1e-9 <= exact && exact <= r.upper + 1e-9);
    let t = ObservableSpec::StabilizerStateProjector(Circuit::ghz(f, 3));
    let r = norm_bounds(&t, &Scheme::CliffordT(vec![TGateSpec::canonical(f)]), 3, 3).unwrap();
    assert_eq!(r.exact, None);
    assert!((r.upper - 13.0 / 3.0 * (1.0 - 1.0 / 27.0)).abs() < 1e-12);
    assert!(matches!(
        norm_bounds(&t, &Scheme::LocalClifford, 3, 3),
        Err(Error::UnsupportedSpec(_))
    ));
}

#[test]
fn single_qudit_weyl_norm_matches_dense() {
    let f = fd(5);
    let x = ObservableSpec::WeylSum(vec![
        (C64::new(0.5, 0.0), weyl(f, &[0], &[1])),
        (C64::new(0.0, 0.3), weyl(f, &[0], &[2])),
    ]);
    let r = norm_bounds(&x, &Scheme::GlobalClifford, 5, 1).unwrap();
    assert_eq!(r.exact_source, Some(NormSource::SingleQuditDiagonal));
    let q = MomentOperator::commutant(&DenseState::zero(f, 1).unwrap()).unwrap();
    let dense = shadow_norm_exact(&traceless_matrix(&x, f, 1).unwrap(), &q).unwrap();
    assert!((dense - r.exact.unwrap()).abs() < 1e-9);
}

fn small_config(family: StateFamily, scheme: Scheme) -> ExperimentConfig {
    ExperimentConfig {
        d: 3,
        n: 3,
        family,
        scheme,
        shots: vec![20, 40],
        runs: 6,
        groups: Some(4),
        seed: 5,
    }
}

#[test]
fn experiment_is_deterministic_across_thread_counts() {
    let cfg = small_config(
        StateFamily::Ghz,
        Scheme::CliffordT(vec![TGateSpec::canonical(fd(3))]),
    );
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let three = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let a = one.install(|| run_experiment(&cfg)).unwrap();
    let b = three.install(|| run_experiment(&cfg)).unwrap();
    assert_eq!(a, b);
    let mut csv_a = Vec::new();
    a.write_csv(&mut csv_a).unwrap();
    let text = String::from_utf8(csv_a).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "scheme,d,n,k,N,run_count,estimate_mean,mse,theory_bound,seed"
    );
    assert_eq!(text.lines().count(), 3);
    let json = a.to_json();
    assert_eq!(json["version"], SCHEMA_VERSION);
    assert_eq!(json["results"].as_array().unwrap().len(), 2);
    assert_eq!(json["config"]["d"], 3);
}

#[test]
fn zero_mixing_reduces_to_pure_ghz() {
    let a = run_experiment(&small_config(StateFamily::Ghz, Scheme::GlobalClifford)).unwrap();
    let b = run_experiment(&small_config(
        StateFamily::DepolarizedGhz { p: 0.0 },
        Scheme::GlobalClifford,
    ))
    .unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.estimates, b.estimates);
}

#[test]
fn experiment_config_errors() {
    let mut cfg = small_config(StateFamily::Ghz, Scheme::LocalClifford);
    assert!(matches!(run_experiment(&cfg), Err(Error::ConfigError(_))));
    cfg.scheme = Scheme::GlobalClifford;
    cfg.groups = Some(3);
    assert!(matches!(
        run_experiment(&cfg),
        Err(Error::BadGrouping { .. })
    ));
    cfg.groups = None;
    cfg.family = StateFamily::Cluster { rows: 2, cols: 2 };
    assert!(matches!(run_experiment(&cfg), Err(Error::ConfigError(_))));
    cfg.family = StateFamily::DepolarizedGhz { p: 1.5 };
    assert!(matches!(run_experiment(&cfg), Err(Error::ConfigError(_))));
    cfg.family = StateFamily::Ghz;
    cfg.d = 9;
    assert!(matches!(run_experiment(&cfg), Err(Error::ConfigError(_))));
}

#[test]
fn depolarized_ghz_is_flagged_gme() {
    let cfg = ExperimentConfig {
        d: 3,
        n: 8,
        family: StateFamily::DepolarizedGhz { p: 0.3 },
        scheme: Scheme::GlobalClifford,
        shots: vec![2000],
        runs: 1,
        groups: None,
        seed: 7,
    };
    let out = run_experiment(&cfg).unwrap();
    assert!((out.truth - (0.7 + 0.3 / 6561.0)).abs() < 1e-12);
    let est = Estimate {
        value: out.estimates[0].mean[0],
        n_shots: 2000,
        aggregation: Aggregation::Mean,
        variance_est: (out.estimates[0].stderr[0]).powi(2) * 2000.0,
    };
    assert!(gme_verdict(&est, 3));
    let low = Estimate { value: 0.34, ..est };
    assert!(!gme_verdict(&low, 3));
}

#[test]
fn random_observables_are_normalized_and_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for diagonal in [false, true] {
        let o = random_traceless_observable(9, diagonal, &mut rng);
        assert!(o.trace().norm() < 1e-12);
        assert!((o.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(crate::dense::max_abs_diff(&o, &o.adjoint()) < 1e-15);
    }
    let recs = randobs(&RandObsConfig {
        d: 3,
        n: 2,
        k: 1,
        samples: 5,
        diagonal: false,
        seed: 1,
    })
    .unwrap();
    assert_eq!(recs.len(), 5);
    for r in &recs {
        assert!(r.norm >= r.hs_norm2 - 1e-9 && r.norm <= r.bound + 1e-9);
    }
    assert!(matches!(
        randobs(&RandObsConfig {
            d: 3,
            n: 3,
            k: 0,
            samples: 1,
            diagonal: false,
            seed: 0
        }),
        Err(Error::TooLarge(_))
    ));
}

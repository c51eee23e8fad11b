//! GHZ fidelity estimation on 8 qudits with global Clifford and Clifford+T
//! shadows, printing `N * MSE` next to the shadow-norm prediction.

use std::time::Instant;

use qudit_shadow::field::Field;
use qudit_shadow::magic::TGateSpec;
use qudit_shadow::shadow::{run_experiment, ExperimentConfig, Scheme, StateFamily};

fn main() -> qudit_shadow::Result<()> {
    for d in [3u32, 5] {
        let field = Field::new(d)?;
        for scheme in [
            Scheme::GlobalClifford,
            Scheme::CliffordT(vec![TGateSpec::canonical(field)]),
        ] {
            let cfg = ExperimentConfig {
                d,
                n: 8,
                family: StateFamily::Ghz,
                scheme,
                shots: vec![100, 1000],
                runs: 20,
                groups: Some(10),
                seed: 7,
            };
            let start = Instant::now();
            let out = run_experiment(&cfg)?;
            for row in &out.rows {
                println!(
                    "{:<10} d={} k={} N={:<5} N*MSE={:.3} bound={:.3}",
                    row.scheme,
                    row.d,
                    row.k,
                    row.shots,
                    row.shots as f64 * row.mse,
                    row.theory_bound
                );
            }
            println!("  ({:.1?})", start.elapsed());
        }
    }
    Ok(())
}

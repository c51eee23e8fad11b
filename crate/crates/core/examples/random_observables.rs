//! Exact shadow norms of random two-qudit observables relative to their bounds.

use qudit_shadow::shadow::{randobs, RandObsConfig};

fn main() -> qudit_shadow::Result<()> {
    for d in [3u32, 5] {
        for k in 0..=2 {
            for diagonal in [false, true] {
                let records = randobs(&RandObsConfig {
                    d,
                    n: 2,
                    k,
                    samples: 50,
                    diagonal,
                    seed: 1,
                })?;
                let ratios: Vec<f64> = records.iter().map(|r| r.norm / r.bound).collect();
                let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
                let max = ratios.iter().cloned().fold(0.0, f64::max);
                println!(
                    "d={d} k={k} {:<8} mean norm {:.3}  norm/bound mean {mean:.3} max {max:.3}",
                    if diagonal { "diagonal" } else { "general" },
                    records.iter().map(|r| r.norm).sum::<f64>() / records.len() as f64
                );
            }
        }
    }
    Ok(())
}

//! Closed-form shadow norms and bounds, checked against exact third-moment
//! operators where the dimension allows.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use qudit_shadow::dense::{
    magic_seed, moment_operator, shadow_norm_exact, traceless_part, Ensemble, MomentOperator,
};
use qudit_shadow::field::Field;
use qudit_shadow::magic::TGateSpec;
use qudit_shadow::shadow::{gamma_tilde, norm_bounds, norm_stab_projector, ObservableSpec, Scheme};

fn main() -> qudit_shadow::Result<()> {
    println!("stabilizer projectors, global Clifford (ratio to ||O_0||_2^2):");
    for (n, d) in [(1usize, 3u32), (2, 3), (1, 5), (8, 3), (8, 5)] {
        let dd = (d as u64).pow(n as u32);
        let ranks: Vec<u64> = (0..n as u32).map(|j| (d as u64).pow(j)).collect();
        let ratios: Vec<String> = ranks
            .iter()
            .map(|&k| norm_stab_projector(n, d, k).map(|r| format!("K={k}: {r:.4}")))
            .collect::<Result<_, _>>()?;
        println!("  n={n} d={d} (D={dd}) {}", ratios.join(", "));
    }

    let f = Field::new(3)?;
    let q = moment_operator(&Ensemble::StabOrbit, f, 2)?;
    let mut p = DMatrix::<C64>::zeros(9, 9);
    p[(0, 0)] = C64::new(1.0, 0.0);
    let o = traceless_part(&p);
    let hs: f64 = o.iter().map(|a| a.norm_sqr()).sum();
    println!(
        "n=2 d=3 K=1 from the orbit moment: {:.12} (formula {:.12})",
        shadow_norm_exact(&o, &q)? / hs,
        norm_stab_projector(2, 3, 1)?
    );

    let report = norm_bounds(
        &ObservableSpec::StabilizerProjector { rank: 1 },
        &Scheme::GlobalClifford,
        5,
        8,
    )?;
    println!(
        "GHZ-type projector, n=8 d=5: exact {:?} via {}, upper {:.3} via {}",
        report.exact,
        report.exact_source.unwrap(),
        report.upper,
        report.upper_source
    );

    println!("Clifford+T prefactors:");
    for d in [3u32, 5, 7, 11, 13] {
        let row: Vec<String> = (0..=3)
            .map(|k| format!("{:.3}", gamma_tilde(d, k)))
            .collect();
        println!("  d={d:<2} k=0..3: {}", row.join("  "));
    }

    let spec = TGateSpec::canonical(f);
    let qt = MomentOperator::commutant(&magic_seed(f, 2, &[spec])?)?;
    println!(
        "n=2 d=3 K=1 with one T gate: exact {:.4}, bound {:.4}",
        shadow_norm_exact(&o, &qt)?,
        gamma_tilde(3, 1) * hs
    );
    Ok(())
}

//! Simulates a random qutrit Clifford circuit three ways (Lagrangian state,
//! tableau, dense vector) and compares outcome statistics.

use qudit_shadow::circuit::Circuit;
use qudit_shadow::dense::{dense_apply, DenseState};
use qudit_shadow::field::Field;
use qudit_shadow::stabilizer::{LagrangianState, Tableau};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qudit_shadow::Result<()> {
    let f = Field::new(3)?;
    let n = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let circ = Circuit::random_clifford(f, n, 25, &mut rng);

    let state = LagrangianState::from_gates(f, n, circ.gates())?;
    let mut tableau = Tableau::zero_state(f, n);
    for g in circ.gates() {
        tableau.apply_gate(g)?;
    }
    tableau.check_invariants()?;
    let psi = dense_apply(&circ, &DenseState::zero(f, n)?)?;

    println!("support dimension: {}", state.support_dim());
    println!(
        "overlap with tableau state: {:.12}",
        state.overlap2(&LagrangianState::from_tableau(&tableau))?
    );
    let shots = 9000;
    let mut counts = vec![0usize; psi.dim()];
    for _ in 0..shots {
        let x = state.measure_all(&mut rng);
        counts[x.iter().fold(0, |a, &v| a * 3 + v as usize)] += 1;
    }
    println!(
        "{:>5} {:>10} {:>10} {:>10}",
        "x", "engine", "dense", "observed"
    );
    for (i, p) in psi
        .probabilities()
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > 1e-12)
    {
        let x = [i / 9, (i / 3) % 3, i % 3].map(|v| v as u32);
        println!(
            "{:>5} {:>10.6} {:>10.6} {:>10.6}",
            format!("{}{}{}", x[0], x[1], x[2]),
            state.outcome_probability(&x)?,
            p,
            counts[i] as f64 / shots as f64
        );
    }
    Ok(())
}

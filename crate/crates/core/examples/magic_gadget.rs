//! Outcome distribution of a Clifford+T circuit through the post-selected
//! gadget, next to the direct state-vector result.

use qudit_shadow::circuit::{Circuit, Gate};
use qudit_shadow::dense::direct_outcome_distribution;
use qudit_shadow::field::Field;
use qudit_shadow::magic::{
    gadgetize, outcome_model, prefix_distribution, TGateSpec, DEFAULT_ANCILLA_CAP,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qudit_shadow::Result<()> {
    let f = Field::new(5)?;
    let n = 2;
    let t = TGateSpec::canonical(f);
    let circ = Circuit::new(f, n)
        .with(Gate::F(0))?
        .with(Gate::T { q: 0, spec: t })?
        .with(Gate::CX {
            control: 0,
            target: 1,
        })?
        .with(Gate::T {
            q: 1,
            spec: t.adjoint(),
        })?
        .with(Gate::F(1))?
        .with(Gate::F(0))?;

    let gadget = gadgetize(&circ, &[], DEFAULT_ANCILLA_CAP)?;
    println!("{} data qudits, {} ancillas", gadget.n(), gadget.t());
    let mut model = outcome_model(&gadget, None)?;
    let engine = prefix_distribution(&mut model, n)?;
    let dense = direct_outcome_distribution(f, n, circ.gates(), n)?;
    let worst = engine
        .iter()
        .zip(&dense)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    for (i, (a, b)) in engine
        .iter()
        .zip(&dense)
        .enumerate()
        .filter(|(_, (a, _))| **a > 1e-12)
    {
        println!("x={}{}  gadget {a:.6}  dense {b:.6}", i / 5, i % 5);
    }
    println!("max deviation {worst:.2e}");

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (x, p) = model.sample(&mut rng)?;
    println!("sampled x = {x:?} with probability {p:.6}");
    Ok(())
}

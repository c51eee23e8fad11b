//! Local-Clifford shadows of a product state estimating Weyl expectations.

use num_complex::Complex64 as C64;
use qudit_shadow::circuit::{Circuit, Gate};
use qudit_shadow::dense::{dense_apply, DenseState};
use qudit_shadow::field::Field;
use qudit_shadow::shadow::{sample_shot, weyl_local_shot, Scheme};
use qudit_shadow::weyl::{SymplecticVector, WeylOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qudit_shadow::Result<()> {
    let f = Field::new(3)?;
    let n = 3;
    let prep = Circuit::new(f, n)
        .with(Gate::F(0))?
        .with(Gate::S { q: 0, nu: 1 })?
        .with(Gate::F(1))?
        .with(Gate::CX {
            control: 1,
            target: 2,
        })?;
    let psi = dense_apply(&prep, &DenseState::zero(f, n)?)?;
    let terms = [
        ("Z(0)", [1, 0, 0], [0, 0, 0]),
        ("X(0)", [0, 0, 0], [1, 0, 0]),
        ("Z(1) Z(2)^2", [0, 1, 2], [0, 0, 0]),
        ("X(1) X(2)", [0, 0, 0], [0, 1, 1]),
    ];
    let ops: Vec<WeylOperator> = terms
        .iter()
        .map(|(_, z, x)| SymplecticVector::new(f, z, x).map(|v| WeylOperator::new(v, 0)))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shots = 20_000;
    let mut sums = vec![C64::new(0.0, 0.0); ops.len()];
    for _ in 0..shots {
        let shot = sample_shot(&prep, &Scheme::LocalClifford, &mut rng)?;
        for (s, w) in sums.iter_mut().zip(&ops) {
            *s += weyl_local_shot(&shot, w)?;
        }
    }
    for ((name, _, _), (s, w)) in terms.iter().zip(sums.iter().zip(&ops)) {
        let est = s / shots as f64;
        let exact = psi.expectation_weyl(w)?;
        println!(
            "{name:<12} estimate {:+.3}{:+.3}i  exact {:+.3}{:+.3}i",
            est.re, est.im, exact.re, exact.im
        );
    }
    Ok(())
}

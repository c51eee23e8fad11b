//! Uniform random Clifford labels: symplectic checks, the conjugation rule on
//! a Weyl operator, and the empirical distribution on Sp(2, 3).

use std::collections::HashMap;

use qudit_shadow::field::Field;
use qudit_shadow::symplectic::{sample_clifford, sample_symplectic};
use qudit_shadow::weyl::{SymplecticVector, WeylOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qudit_shadow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = Field::new(7)?;
    let c = sample_clifford(f, 4, &mut rng);
    println!("n=4 d=7 label is symplectic: {}", c.m.is_symplectic());
    let w = WeylOperator::new(SymplecticVector::z_unit(f, 4, 0), 0);
    let img = c.conjugate(&w)?;
    println!(
        "C Z_0 C^dagger = chi({}) W{:?}",
        img.phase,
        img.vec.coords()
    );

    let f3 = Field::new(3)?;
    let mut counts: HashMap<Vec<Vec<u32>>, usize> = HashMap::new();
    for _ in 0..24_000 {
        *counts
            .entry(sample_symplectic(f3, 1, &mut rng).rows())
            .or_default() += 1;
    }
    let (lo, hi) = (
        counts.values().min().unwrap(),
        counts.values().max().unwrap(),
    );
    println!(
        "Sp(2,3): {} elements seen, counts between {lo} and {hi} (expected 1000)",
        counts.len()
    );
    Ok(())
}

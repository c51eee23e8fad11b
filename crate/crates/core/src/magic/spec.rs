use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{CubicCharacterTable, Field};

/// Cubic phase polynomial of a diagonal third-level gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CubicPhase {
    /// `f(b) = c3 b^3 + c2 b^2 + c1 b + c0` over `F_d`, `d >= 5`; phases in `omega_d`.
    Prime { c3: u32, c2: u32, c1: u32, c0: u32 },
    /// `f(b) = c3 b^3 + 3 c2 b^2 mod 9` for `d = 3`; phases in `omega_9`.
    Ternary { c3: u32, c2: u32 },
}

/// A diagonal T-type gate `T = sum_b omega~^{f(b)} |b><b|` (or its adjoint).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TGateSpec {
    field: Field,
    phase: CubicPhase,
    dagger: bool,
}

impl TGateSpec {
    /// `f(b) = b^3`.
    pub fn canonical(field: Field) -> Self {
        let phase = if field.d() == 3 {
            CubicPhase::Ternary { c3: 1, c2: 0 }
        } else {
            CubicPhase::Prime {
                c3: 1,
                c2: 0,
                c1: 0,
                c0: 0,
            }
        };
        TGateSpec {
            field,
            phase,
            dagger: false,
        }
    }

    /// General cubic over `F_d` for `d >= 5`; requires `c3 != 0`.
    pub fn cubic(field: Field, c3: u32, c2: u32, c1: u32, c0: u32) -> Result<Self> {
        if c3.is_multiple_of(field.d()) {
            return Err(Error::ConfigError(
                "cubic coefficient must be nonzero".into(),
            ));
        }
        Self::polynomial(field, c3, c2, c1, c0)
    }

    /// Like [`TGateSpec::cubic`] but accepts a vanishing cubic coefficient,
    /// which yields a Clifford (or identity) diagonal gate.
    pub fn polynomial(field: Field, c3: u32, c2: u32, c1: u32, c0: u32) -> Result<Self> {
        if field.d() == 3 {
            return Err(Error::ConfigError(
                "d = 3 gates use the mod-9 form, see TGateSpec::ternary".into(),
            ));
        }
        let d = field.d();
        Ok(TGateSpec {
            field,
            phase: CubicPhase::Prime {
                c3: c3 % d,
                c2: c2 % d,
                c1: c1 % d,
                c0: c0 % d,
            },
            dagger: false,
        })
    }

    /// `d = 3` gate `f(b) = c3 b^3 + 3 c2 b^2 mod 9`, `c3` a unit mod 3.
    pub fn ternary(c3: u32, c2: u32) -> Result<Self> {
        if c3.is_multiple_of(3) {
            return Err(Error::ConfigError("c3 must be nonzero mod 3".into()));
        }
        Ok(TGateSpec {
            field: Field::new(3)?,
            phase: CubicPhase::Ternary {
                c3: c3 % 9,
                c2: c2 % 3,
            },
            dagger: false,
        })
    }

    /// Gate `f(b) = nu^class b^3` whose cubic coefficient has the given cubic
    /// character. Classes other than 0 need `d = 1 mod 3`.
    pub fn from_character_class(field: Field, class: u8) -> Result<Self> {
        if class == 0 {
            return Ok(Self::canonical(field));
        }
        let table = CubicCharacterTable::new(field)?;
        Self::cubic(field, table.class_representative(class), 0, 0, 0)
    }

    /// Uniformly random genuine T gate (nonzero cubic term), daggered with probability 1/2.
    pub fn random<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Self {
        let d = field.d();
        let phase = if d == 3 {
            let c3 = [1, 2, 4, 5, 7, 8][rng.random_range(0..6)];
            CubicPhase::Ternary {
                c3,
                c2: rng.random_range(0..3),
            }
        } else {
            CubicPhase::Prime {
                c3: rng.random_range(1..d),
                c2: rng.random_range(0..d),
                c1: rng.random_range(0..d),
                c0: rng.random_range(0..d),
            }
        };
        TGateSpec {
            field,
            phase,
            dagger: rng.random(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn phase_poly(&self) -> CubicPhase {
        self.phase
    }

    pub fn is_dagger(&self) -> bool {
        self.dagger
    }

    pub fn adjoint(&self) -> Self {
        TGateSpec {
            dagger: !self.dagger,
            ..*self
        }
    }

    /// Order of the phase root: 9 for `d = 3`, otherwise `d`.
    pub fn base_order(&self) -> u32 {
        match self.phase {
            CubicPhase::Ternary { .. } => 9,
            CubicPhase::Prime { .. } => self.field.d(),
        }
    }

    /// Exponent `+-f(b)` modulo [`TGateSpec::base_order`].
    pub fn exponent(&self, b: u32) -> u32 {
        let base = self.base_order() as u64;
        let b = (b % self.field.d()) as u64;
        let e = match self.phase {
            CubicPhase::Ternary { c3, c2 } => (c3 as u64 * b * b * b + 3 * c2 as u64 * b * b) % 9,
            CubicPhase::Prime { c3, c2, c1, c0 } => {
                (c3 as u64 * b * b * b + c2 as u64 * b * b + c1 as u64 * b + c0 as u64) % base
            }
        };
        if self.dagger {
            ((base - e) % base) as u32
        } else {
            e as u32
        }
    }

    /// Diagonal entry on `|b>`.
    pub fn phase(&self, b: u32) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.exponent(b) as f64 / self.base_order() as f64;
        Complex64::from_polar(1.0, theta)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.field.d()).map(|b| self.phase(b)).collect()
    }
}

/// Amplitudes of `T|+>` (or `T^dagger|+>` when the spec is daggered).
pub fn magic_state_amplitudes(spec: &TGateSpec) -> Vec<Complex64> {
    let s = 1.0 / (spec.field.d() as f64).sqrt();
    spec.diagonal().into_iter().map(|p| p * s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ternary_canonical_exponents() {
        let t = TGateSpec::canonical(Field::new(3).unwrap());
        let e: Vec<u32> = (0..3).map(|b| t.exponent(b)).collect();
        assert_eq!(e, vec![0, 1, 8]);
        let amps = magic_state_amplitudes(&t);
        let w9 = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 9.0);
        let s = 1.0 / 3f64.sqrt();
        assert!((amps[1] - w9 * s).norm() < 1e-15);
        assert!((amps[2] - w9.powu(8) * s).norm() < 1e-15);
        let e: Vec<u32> = (0..3).map(|b| t.adjoint().exponent(b)).collect();
        assert_eq!(e, vec![0, 8, 1]);
    }

    #[test]
    fn zero_polynomial_gives_plus_state() {
        let f = Field::new(5).unwrap();
        let t = TGateSpec::polynomial(f, 0, 0, 0, 0).unwrap();
        for a in magic_state_amplitudes(&t) {
            assert!((a - Complex64::new(1.0 / 5f64.sqrt(), 0.0)).norm() < 1e-15);
        }
        assert!(TGateSpec::cubic(f, 0, 1, 0, 0).is_err());
        assert!(TGateSpec::ternary(3, 1).is_err());
    }

    #[test]
    fn random_specs_have_unit_norm() {
        for d in [5u32, 7, 11] {
            let f = Field::new(d).unwrap();
            for c3 in 1..d {
                for c2 in 0..d {
                    let t = TGateSpec::cubic(f, c3, c2, c3 * c2 % d, 1).unwrap();
                    let norm: f64 = magic_state_amplitudes(&t)
                        .iter()
                        .map(|a| a.norm_sqr())
                        .sum();
                    assert!((norm - 1.0).abs() < 1e-12);
                }
            }
        }
        for c3 in [1, 2, 4, 5, 7, 8] {
            for c2 in 0..3 {
                let t = TGateSpec::ternary(c3, c2).unwrap();
                let norm: f64 = magic_state_amplitudes(&t)
                    .iter()
                    .map(|a| a.norm_sqr())
                    .sum();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn character_classes_follow_primitive_powers() {
        let f = Field::new(7).unwrap();
        // nu = 3: class 2 gives cubic coefficient 9 = 2 mod 7
        let t = TGateSpec::from_character_class(f, 2).unwrap();
        assert_eq!(
            t.phase_poly(),
            CubicPhase::Prime {
                c3: 2,
                c2: 0,
                c1: 0,
                c0: 0
            }
        );
        assert!(TGateSpec::from_character_class(Field::new(5).unwrap(), 1).is_err());
    }
}

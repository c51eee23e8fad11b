//! Gate-level circuit description shared by the stabilizer, gadget and
//! dense simulators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::magic::TGateSpec;
use crate::symplectic::{check_sites, CliffordLabel};

/// One gate. Qudit indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    /// `F = d^{-1/2} sum chi(ab)|a><b|`.
    F(usize),
    /// `S(nu) = sum chi(nu a^2 / 2)|a><a|`.
    S {
        q: usize,
        nu: u32,
    },
    /// `U(nu)|a> = |nu a>`.
    U {
        q: usize,
        nu: u32,
    },
    /// `|a, b> -> |a, a + b>`.
    CX {
        control: usize,
        target: usize,
    },
    /// `|a, b> -> chi(ab)|a, b>`.
    CZ(usize, usize),
    Z(usize),
    X(usize),
    /// Diagonal cubic-phase gate (non-Clifford).
    T {
        q: usize,
        spec: TGateSpec,
    },
    /// Arbitrary Clifford label on the listed qudits.
    Clifford {
        label: CliffordLabel,
        sites: Vec<usize>,
    },
}

impl Gate {
    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::T { .. })
    }

    /// Sites touched by the gate.
    pub fn sites(&self) -> Vec<usize> {
        match self {
            Gate::F(q) | Gate::Z(q) | Gate::X(q) => vec![*q],
            Gate::S { q, .. } | Gate::U { q, .. } | Gate::T { q, .. } => vec![*q],
            Gate::CX { control, target } => vec![*control, *target],
            Gate::CZ(a, b) => vec![*a, *b],
            Gate::Clifford { sites, .. } => sites.clone(),
        }
    }

    /// Label on the full `n`-qudit register; `None` for T gates.
    pub fn label(&self, field: Field, n: usize) -> Result<Option<CliffordLabel>> {
        let l = match self {
            Gate::F(q) => CliffordLabel::fourier(field, n, *q)?,
            Gate::S { q, nu } => CliffordLabel::phase_gate(field, n, *q, *nu)?,
            Gate::U { q, nu } => CliffordLabel::multiply_gate(field, n, *q, *nu)?,
            Gate::CX { control, target } => CliffordLabel::cx(field, n, *control, *target)?,
            Gate::CZ(a, b) => CliffordLabel::cz(field, n, *a, *b)?,
            Gate::Z(q) => CliffordLabel::weyl_z(field, n, *q)?,
            Gate::X(q) => CliffordLabel::weyl_x(field, n, *q)?,
            Gate::Clifford { label, sites } => label.embed(sites, n)?,
            Gate::T { .. } => return Ok(None),
        };
        Ok(Some(l))
    }

    pub(crate) fn validate(&self, field: Field, n: usize) -> Result<()> {
        let sites = self.sites();
        check_sites(&sites, sites.len(), n)?;
        match self {
            Gate::S { nu, .. } | Gate::U { nu, .. } if nu % field.d() == 0 => {
                Err(Error::ConfigError("gate parameter must be nonzero".into()))
            }
            Gate::T { spec, .. } if spec.field() != field => {
                Err(Error::FieldMismatch(spec.field().d(), field.d()))
            }
            Gate::Clifford { label, sites } if label.n() != sites.len() => {
                Err(Error::DimensionMismatch {
                    expected: label.n(),
                    found: sites.len(),
                })
            }
            _ => Ok(()),
        }
    }
}

/// A gate sequence acting on `n` qudits initialised in `|0...0>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    field: Field,
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(field: Field, n: usize) -> Self {
        Circuit {
            field,
            n,
            gates: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, g: Gate) -> Result<&mut Self> {
        g.validate(self.field, self.n)?;
        self.gates.push(g);
        Ok(self)
    }

    pub fn with(mut self, g: Gate) -> Result<Self> {
        self.push(g)?;
        Ok(self)
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n || other.field != self.field {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_clifford()).count()
    }

    pub fn is_clifford(&self) -> bool {
        self.t_count() == 0
    }

    /// Overall label of a Clifford-only circuit.
    pub fn clifford_label(&self) -> Result<CliffordLabel> {
        let mut acc = CliffordLabel::identity(self.field, self.n);
        for g in &self.gates {
            let l = g
                .label(self.field, self.n)?
                .ok_or_else(|| Error::UnsupportedSpec("circuit contains T gates".into()))?;
            acc = acc.then(&l)?;
        }
        Ok(acc)
    }

    /// Random word of `len` named Clifford gates (`F`, `S`, `U`, `Z`, `X`,
    /// and `CX`, `CZ` when `n > 1`) with uniformly chosen qudits and parameters.
    pub fn random_clifford<R: Rng + ?Sized>(
        field: Field,
        n: usize,
        len: usize,
        rng: &mut R,
    ) -> Self {
        let mut c = Circuit::new(field, n);
        for _ in 0..len {
            c.gates.push(random_named_gate(field, n, rng));
        }
        c
    }

    /// Random Clifford word with `t` T gates (random specs) inserted at random positions.
    pub fn random_clifford_t<R: Rng + ?Sized>(
        field: Field,
        n: usize,
        len: usize,
        t: usize,
        rng: &mut R,
    ) -> Self {
        let mut c = Self::random_clifford(field, n, len, rng);
        for _ in 0..t {
            let pos = rng.random_range(0..=c.gates.len());
            let gate = Gate::T {
                q: rng.random_range(0..n),
                spec: TGateSpec::random(field, rng),
            };
            c.gates.insert(pos, gate);
        }
        c
    }

    /// `GHZ = d^{-1/2} sum_a |a...a>`: `F` on qudit 0 then a CX fan-out.
    pub fn ghz(field: Field, n: usize) -> Self {
        let mut c = Circuit::new(field, n);
        c.gates.push(Gate::F(0));
        for t in 1..n {
            c.gates.push(Gate::CX {
                control: 0,
                target: t,
            });
        }
        c
    }

    /// Graph state on the given edges: `|+>^n` followed by `CZ` per edge.
    pub fn graph_state(field: Field, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut c = Circuit::new(field, n);
        for q in 0..n {
            c.push(Gate::F(q))?;
        }
        for &(a, b) in edges {
            c.push(Gate::CZ(a, b))?;
        }
        Ok(c)
    }

    /// Cluster state on a `rows x cols` square lattice with periodic boundaries.
    pub fn cluster(field: Field, rows: usize, cols: usize) -> Result<Self> {
        let n = rows * cols;
        let idx = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if cols > 1 && (cols > 2 || c + 1 < cols) {
                    edges.push((idx(r, c), idx(r, (c + 1) % cols)));
                }
                if rows > 1 && (rows > 2 || r + 1 < rows) {
                    edges.push((idx(r, c), idx((r + 1) % rows, c)));
                }
            }
        }
        Self::graph_state(field, n, &edges)
    }
}

fn random_named_gate<R: Rng + ?Sized>(f: Field, n: usize, rng: &mut R) -> Gate {
    let q = rng.random_range(0..n);
    let nu = rng.random_range(1..f.d());
    let kinds = if n > 1 { 7 } else { 5 };
    let other = |rng: &mut R| (q + rng.random_range(1..n)) % n;
    match rng.random_range(0..kinds) {
        0 => Gate::F(q),
        1 => Gate::S { q, nu },
        2 => Gate::U { q, nu },
        3 => Gate::Z(q),
        4 => Gate::X(q),
        5 => Gate::CX {
            control: q,
            target: other(rng),
        },
        _ => Gate::CZ(q, other(rng)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_edge_count() {
        let f = Field::new(3).unwrap();
        let c = Circuit::cluster(f, 3, 3).unwrap();
        let cz = c
            .gates()
            .iter()
            .filter(|g| matches!(g, Gate::CZ(..)))
            .count();
        assert_eq!(cz, 18);
        let c = Circuit::cluster(f, 1, 2).unwrap();
        let cz = c
            .gates()
            .iter()
            .filter(|g| matches!(g, Gate::CZ(..)))
            .count();
        assert_eq!(cz, 1);
    }

    #[test]
    fn validation() {
        let f = Field::new(5).unwrap();
        let mut c = Circuit::new(f, 2);
        assert!(c.push(Gate::F(2)).is_err());
        assert!(c
            .push(Gate::CX {
                control: 1,
                target: 1
            })
            .is_err());
        assert!(c.push(Gate::S { q: 0, nu: 5 }).is_err());
        let t3 = TGateSpec::canonical(Field::new(3).unwrap());
        assert!(c.push(Gate::T { q: 0, spec: t3 }).is_err());
        assert!(c
            .push(Gate::T {
                q: 0,
                spec: TGateSpec::canonical(f)
            })
            .is_ok());
        assert_eq!(c.t_count(), 1);
    }
}

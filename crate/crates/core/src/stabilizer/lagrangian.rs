use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;
use crate::symplectic::CliffordLabel;
use crate::weyl::{symp, SymplecticVector, WeylOperator};

use super::{build_tableau, GeneratingMatrix, Tableau};

/// The projector `d^{-n} sum_{u in L} chi([m, u]) W_u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagrangianState {
    field: Field,
    n: usize,
    basis: Vec<Vec<u32>>,
    m: Vec<u32>,
}

impl LagrangianState {
    pub fn new(field: Field, basis: Vec<Vec<u32>>, m: Vec<u32>) -> Result<Self> {
        let n = m.len() / 2;
        if !m.len().is_multiple_of(2) || basis.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: basis.len(),
            });
        }
        if let Some(b) = basis.iter().find(|b| b.len() != 2 * n) {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: b.len(),
            });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if symp(field, &basis[i], &basis[j]) != 0 {
                    return Err(Error::NotCommuting(i, j));
                }
            }
        }
        if linalg::rank(field, &basis) != n {
            return Err(Error::NotIndependent);
        }
        Ok(LagrangianState { field, n, basis, m })
    }

    pub fn zero_state(field: Field, n: usize) -> Self {
        Self::basis_state(field, &vec![0; n])
    }

    /// `|x>` with `L = L_0` and `m = (0; x)`.
    pub fn basis_state(field: Field, x: &[u32]) -> Self {
        let n = x.len();
        let basis = (0..n)
            .map(|i| SymplecticVector::z_unit(field, n, i).into_coords())
            .collect();
        let mut m = vec![0u32; 2 * n];
        for (i, &xi) in x.iter().enumerate() {
            m[n + i] = xi % field.d();
        }
        LagrangianState { field, n, basis, m }
    }

    pub fn from_tableau(t: &Tableau) -> Self {
        LagrangianState {
            field: t.field(),
            n: t.n(),
            basis: t.stab.rows().to_vec(),
            m: t.characteristic_vector().into_coords(),
        }
    }

    pub fn from_generating(g: &GeneratingMatrix) -> Result<Self> {
        let vecs = g
            .rows()
            .iter()
            .map(|r| SymplecticVector::from_coords(g.field(), r.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_tableau(&build_tableau(&vecs, g.phases())?))
    }

    /// State prepared from `|0...0>` by a Clifford circuit.
    pub fn from_gates(field: Field, n: usize, gates: &[Gate]) -> Result<Self> {
        let mut g = GeneratingMatrix::zero_state(field, n);
        for gate in gates {
            g.apply_gate(gate)?;
        }
        Self::from_generating(&g)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    /// Stabilizer generators `chi([m, u_i]) W_{u_i}`.
    pub fn generators(&self) -> GeneratingMatrix {
        let phases = self
            .basis
            .iter()
            .map(|u| symp(self.field, &self.m, u))
            .collect();
        GeneratingMatrix::new(self.field, self.n, self.basis.clone(), phases).expect("shape")
    }

    pub fn generator_ops(&self) -> Vec<WeylOperator> {
        let g = self.generators();
        (0..g.len()).map(|i| g.weyl(i)).collect()
    }

    /// `u -> M u`, `m -> M m + g`.
    pub fn apply_clifford(&mut self, c: &CliffordLabel) -> Result<()> {
        if c.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: c.n(),
            });
        }
        let f = self.field;
        for b in &mut self.basis {
            *b = c.m.apply(b);
        }
        let mm = c.m.apply(&self.m);
        self.m = mm
            .iter()
            .zip(c.g.coords())
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(())
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.field, self.n)?;
        match g.label(self.field, self.n)? {
            Some(c) => self.apply_clifford(&c),
            None => Err(Error::UnsupportedSpec(
                "T gates need the gadget simulator".into(),
            )),
        }
    }

    /// Basis of `L_0 ∩ L` completed greedily by `z` unit vectors to a basis of `L_0`.
    fn z_frame(&self) -> (usize, Vec<Vec<u32>>) {
        let f = self.field;
        let n = self.n;
        let l0: Vec<Vec<u32>> = (0..n)
            .map(|i| SymplecticVector::z_unit(f, n, i).into_coords())
            .collect();
        let mut frame = linalg::intersect(f, &l0, &self.basis);
        let k = frame.len();
        for e in l0 {
            if frame.len() == n {
                break;
            }
            if !linalg::in_span(f, &frame, &e) {
                frame.push(e);
            }
        }
        (k, frame)
    }

    /// Samples a computational-basis outcome.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        let d = self.field.d();
        let (k, frame) = self.z_frame();
        let rhs: Vec<u32> = frame
            .iter()
            .enumerate()
            .map(|(i, w)| {
                if i < k {
                    symp(self.field, &self.m, w)
                } else {
                    rng.random_range(0..d)
                }
            })
            .collect();
        self.solve_outcome(&frame, &rhs)
    }

    /// Outcome for given right-hand sides `c_j` on the completion vectors.
    pub fn outcome_for(&self, c: &[u32]) -> Result<Vec<u32>> {
        let (k, frame) = self.z_frame();
        if c.len() != self.n - k {
            return Err(Error::DimensionMismatch {
                expected: self.n - k,
                found: c.len(),
            });
        }
        let rhs: Vec<u32> = frame
            .iter()
            .take(k)
            .map(|w| symp(self.field, &self.m, w))
            .chain(c.iter().map(|&v| v % self.field.d()))
            .collect();
        Ok(self.solve_outcome(&frame, &rhs))
    }

    /// Dimension of `L ∩ L_0`; the outcome distribution is uniform on `d^{n-k}` strings.
    pub fn support_dim(&self) -> usize {
        self.n - self.z_frame().0
    }

    fn solve_outcome(&self, frame: &[Vec<u32>], rhs: &[u32]) -> Vec<u32> {
        let f = self.field;
        let n = self.n;
        // [xt, w] = xt_z . w_x - xt_x . w_z as rows over the 2n unknowns.
        let rows: Vec<Vec<u32>> = frame
            .iter()
            .map(|w| {
                let mut row = w[n..].to_vec();
                row.extend(w[..n].iter().map(|&v| f.neg(v)));
                row
            })
            .collect();
        let xt = linalg::solve(f, &rows, rhs).expect("frame rows are independent");
        xt[n..].to_vec()
    }

    /// `|<self|other>|^2 = d^{-s}` as `Some(s)`, or `None` when orthogonal.
    pub fn overlap2_exponent(&self, other: &Self) -> Result<Option<usize>> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.d(), other.field.d()));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let f = self.field;
        let inter = linalg::intersect(f, &self.basis, &other.basis);
        let diff: Vec<u32> = self
            .m
            .iter()
            .zip(&other.m)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        if inter.iter().any(|w| symp(f, &diff, w) != 0) {
            return Ok(None);
        }
        Ok(Some(self.n - inter.len()))
    }

    pub fn overlap2(&self, other: &Self) -> Result<f64> {
        Ok(match self.overlap2_exponent(other)? {
            Some(s) => (self.field.d() as f64).powi(-(s as i32)),
            None => 0.0,
        })
    }

    /// Born probability of the outcome `x`.
    pub fn outcome_probability(&self, x: &[u32]) -> Result<f64> {
        self.overlap2(&Self::basis_state(self.field, x))
    }
}

pub fn measure_all<R: Rng + ?Sized>(state: &LagrangianState, rng: &mut R) -> Vec<u32> {
    state.measure_all(rng)
}

pub fn overlap2(a: &LagrangianState, b: &LagrangianState) -> Result<f64> {
    a.overlap2(b)
}

//! Phase-space labels of Weyl operators.
//!
//! A vector `u` over `F_d^{2n}` is stored in the global layout
//! `(z_1..z_n, x_1..x_n)` and labels `W_u = chi(-z.x/2) Z^z X^x`. Dense
//! matrices never appear here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// A phase-space vector in the global layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymplecticVector {
    field: Field,
    coords: Vec<u32>,
}

impl SymplecticVector {
    pub fn new(field: Field, z: &[u32], x: &[u32]) -> Result<Self> {
        if z.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: z.len(),
                found: x.len(),
            });
        }
        let mut coords: Vec<u32> = z.iter().map(|&v| v % field.d()).collect();
        coords.extend(x.iter().map(|&v| v % field.d()));
        Ok(SymplecticVector { field, coords })
    }

    /// From coordinates already in the global layout.
    pub fn from_coords(field: Field, coords: Vec<u32>) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: coords.len() + 1,
                found: coords.len(),
            });
        }
        let coords = coords.into_iter().map(|v| v % field.d()).collect();
        Ok(SymplecticVector { field, coords })
    }

    pub fn zero(field: Field, n: usize) -> Self {
        SymplecticVector {
            field,
            coords: vec![0; 2 * n],
        }
    }

    /// `Z` on qudit `i`.
    pub fn z_unit(field: Field, n: usize, i: usize) -> Self {
        let mut v = Self::zero(field, n);
        v.coords[i] = 1;
        v
    }

    /// `X` on qudit `i`.
    pub fn x_unit(field: Field, n: usize, i: usize) -> Self {
        let mut v = Self::zero(field, n);
        v.coords[n + i] = 1;
        v
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }

    pub fn z(&self) -> &[u32] {
        &self.coords[..self.n()]
    }

    pub fn x(&self) -> &[u32] {
        &self.coords[self.n()..]
    }

    /// The `(z, x)` pair on qudit `j`.
    pub fn site(&self, j: usize) -> (u32, u32) {
        (self.coords[j], self.coords[self.n() + j])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.d(), other.field.d()));
        }
        if self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coords.len(),
                found: other.coords.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = self.field;
        Ok(SymplecticVector {
            field: f,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.d() - 1)
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        SymplecticVector {
            field: f,
            coords: self.coords.iter().map(|&a| f.mul(a, c % f.d())).collect(),
        }
    }

    /// Number of qudits on which the vector is nontrivial.
    pub fn weight(&self) -> usize {
        (0..self.n()).filter(|&j| self.site(j) != (0, 0)).count()
    }

    /// Interleaved layout `(z_1, x_1, z_2, x_2, ...)`.
    pub fn to_local(&self) -> Vec<u32> {
        to_local(&self.coords)
    }

    pub fn from_local(field: Field, local: &[u32]) -> Result<Self> {
        Self::from_coords(field, from_local(local))
    }
}

/// Global layout to interleaved layout.
pub fn to_local(global: &[u32]) -> Vec<u32> {
    let n = global.len() / 2;
    (0..n).flat_map(|j| [global[j], global[n + j]]).collect()
}

/// Interleaved layout to global layout.
pub fn from_local(local: &[u32]) -> Vec<u32> {
    let n = local.len() / 2;
    let mut out = vec![0; 2 * n];
    for j in 0..n {
        out[j] = local[2 * j];
        out[n + j] = local[2 * j + 1];
    }
    out
}

/// Symplectic product on raw global-layout coordinates.
#[inline]
pub fn symp(f: Field, u: &[u32], v: &[u32]) -> u32 {
    let n = u.len() / 2;
    let d = f.d() as u64;
    let mut pos = 0u64;
    let mut neg = 0u64;
    for j in 0..n {
        pos += u[j] as u64 * v[n + j] as u64;
        neg += u[n + j] as u64 * v[j] as u64;
    }
    ((pos % d + d - neg % d) % d) as u32
}

/// `u^T Omega v = sum_j (u^z_j v^x_j - u^x_j v^z_j)`.
pub fn symplectic_product(u: &SymplecticVector, v: &SymplecticVector) -> Result<FieldElement> {
    u.check(v)?;
    Ok(u.field.elem(symp(u.field, &u.coords, &v.coords)))
}

/// `omega^phase W_vec`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylOperator {
    pub vec: SymplecticVector,
    pub phase: u32,
}

impl WeylOperator {
    pub fn new(vec: SymplecticVector, phase: u32) -> Self {
        let phase = phase % vec.field.d();
        WeylOperator { vec, phase }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        WeylOperator::new(SymplecticVector::zero(field, n), 0)
    }

    pub fn is_identity(&self) -> bool {
        self.vec.is_zero() && self.phase == 0
    }

    /// `(omega^a W_u)^dagger = omega^{-a} W_{-u}`.
    pub fn adjoint(&self) -> Self {
        let f = self.vec.field;
        WeylOperator::new(self.vec.neg(), f.neg(self.phase))
    }
}

/// Product `w1 w2` using `W_u W_v = omega^{[u,v]/2} W_{u+v}`.
pub fn weyl_compose(w1: &WeylOperator, w2: &WeylOperator) -> Result<WeylOperator> {
    let f = w1.vec.field;
    let sp = symplectic_product(&w1.vec, &w2.vec)?.value();
    let phase = f.add(f.add(w1.phase, w2.phase), f.mul(f.half(), sp));
    Ok(WeylOperator::new(w1.vec.add(&w2.vec)?, phase))
}

/// Site-wise support statistics of a pair of vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightProfile {
    pub wu: usize,
    pub wv: usize,
    /// Sites where either vector is nontrivial.
    pub join: usize,
    /// Sites where both vectors are nontrivial.
    pub meet: usize,
    /// Every `u_j` is a multiple of `v_j`.
    pub proportional: bool,
    /// Every pair `(u_j, v_j)` is linearly dependent.
    pub loc_commute: bool,
}

pub fn weight_profile(u: &SymplecticVector, v: &SymplecticVector) -> Result<WeightProfile> {
    u.check(v)?;
    let f = u.field;
    let mut p = WeightProfile {
        wu: 0,
        wv: 0,
        join: 0,
        meet: 0,
        proportional: true,
        loc_commute: true,
    };
    for j in 0..u.n() {
        let (uz, ux) = u.site(j);
        let (vz, vx) = v.site(j);
        let un = (uz, ux) != (0, 0);
        let vn = (vz, vx) != (0, 0);
        p.wu += un as usize;
        p.wv += vn as usize;
        p.join += (un || vn) as usize;
        p.meet += (un && vn) as usize;
        let det = f.sub(f.mul(uz, vx), f.mul(ux, vz));
        if det != 0 {
            p.loc_commute = false;
        }
        // u_j = c v_j: if v_j = 0 this needs u_j = 0, otherwise dependence suffices.
        if (!vn && un) || det != 0 {
            p.proportional = false;
        }
    }
    Ok(p)
}

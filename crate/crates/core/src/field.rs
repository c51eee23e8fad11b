//! Prime-field arithmetic and the number-theoretic tables used to classify
//! diagonal third-level gates.
//!
//! Values are kept as `u32` residues in `[0, d)`. [`Field`] is a tiny `Copy`
//! handle carrying the modulus; the rest of the crate works with raw residues
//! and routes every operation through it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primitive elements for the small primes, as tabulated in the literature
/// the T-gate classification is stated against.
const PRIMITIVE_TABLE: [(u32, u32); 14] = [
    (3, 2),
    (5, 2),
    (7, 3),
    (11, 2),
    (13, 2),
    (17, 3),
    (19, 2),
    (23, 5),
    (29, 2),
    (31, 3),
    (37, 2),
    (41, 6),
    (43, 3),
    (47, 5),
];

/// The prime field `F_d` for an odd prime `d < 2^16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    d: u32,
}

impl TryFrom<u32> for Field {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Field::new(d)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.d
    }
}

fn is_prime(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2u32;
    while p * p <= d {
        if d.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

impl Field {
    /// Validates that `d` is an odd prime below `2^16`.
    pub fn new(d: u32) -> Result<Self> {
        if d == 2 || d >= 1 << 16 || !is_prime(d) {
            return Err(Error::NotPrime(d));
        }
        Ok(Field { d })
    }

    #[inline]
    pub fn d(self) -> u32 {
        self.d
    }

    /// `2^{-1} mod d`, i.e. `(d+1)/2`.
    #[inline]
    pub fn half(self) -> u32 {
        self.d.div_ceil(2)
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.d as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.d {
            s - self.d
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.d - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.d - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.d
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.d;
        let mut acc = 1 % self.d;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.d) {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, (self.d - 2) as u64))
    }

    pub fn elem(self, v: u32) -> FieldElement {
        FieldElement {
            value: v % self.d,
            field: self,
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(self, a: u32) -> u32 {
        let mut x = a % self.d;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Tabulated primitive element for `d < 50`, smallest primitive root beyond.
    pub fn primitive_element(self) -> u32 {
        if let Some(&(_, nu)) = PRIMITIVE_TABLE.iter().find(|(p, _)| *p == self.d) {
            return nu;
        }
        (2..self.d)
            .find(|&g| self.order(g) == self.d - 1)
            .expect("every prime field has a primitive root")
    }
}

/// An element of `F_d` bundled with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: Field,
}

impl FieldElement {
    pub fn new(value: u32, d: u32) -> Result<Self> {
        Ok(Field::new(d)?.elem(value))
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<Self> {
        fe_inv(self)
    }

    pub fn pow(self, e: u64) -> Self {
        self.field.elem(self.field.pow(self.value, e))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn same_field(a: FieldElement, b: FieldElement) -> Field {
    assert_eq!(a.field, b.field, "operands from different fields");
    a.field
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let f = same_field(self, o);
        f.elem(f.add(self.value, o.value))
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let f = same_field(self, o);
        f.elem(f.sub(self.value, o.value))
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let f = same_field(self, o);
        f.elem(f.mul(self.value, o.value))
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.field.elem(self.field.neg(self.value))
    }
}

/// Multiplicative inverse of a nonzero field element.
pub fn fe_inv(a: FieldElement) -> Result<FieldElement> {
    Ok(a.field.elem(a.field.inv(a.value)?))
}

/// Primitive element of `F_d`.
pub fn primitive_element(d: u32) -> Result<FieldElement> {
    let f = Field::new(d)?;
    Ok(f.elem(f.primitive_element()))
}

/// Discrete-log table modulo 3 for a field with `d = 1 mod 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicCharacterTable {
    field: Field,
    nu: u32,
    chi3: Vec<u8>,
}

impl CubicCharacterTable {
    /// Builds the table with respect to the field's primitive element.
    pub fn new(field: Field) -> Result<Self> {
        Self::with_generator(field, field.primitive_element())
    }

    pub fn with_generator(field: Field, nu: u32) -> Result<Self> {
        let d = field.d();
        if d % 3 != 1 {
            return Err(Error::WrongResidueClass(d));
        }
        if nu.is_multiple_of(d) || field.order(nu) != d - 1 {
            return Err(Error::ConfigError(format!("{nu} is not primitive mod {d}")));
        }
        let mut chi3 = vec![0u8; d as usize];
        let mut x = 1u32;
        for j in 0..(d - 1) {
            chi3[x as usize] = (j % 3) as u8;
            x = field.mul(x, nu);
        }
        Ok(CubicCharacterTable { field, nu, chi3 })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generator(&self) -> u32 {
        self.nu
    }

    /// The representative `nu^class` of a character class in `{0, 1, 2}`.
    pub fn class_representative(&self, class: u8) -> u32 {
        self.field.pow(self.nu, (class % 3) as u64)
    }
}

/// Exponent `j mod 3` such that `c = nu^j`.
pub fn cubic_character(c: FieldElement, table: &CubicCharacterTable) -> Result<u8> {
    if c.field != table.field {
        return Err(Error::FieldMismatch(c.field.d(), table.field.d()));
    }
    if c.is_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok(table.chi3[c.value as usize])
}

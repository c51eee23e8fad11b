use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::stabilizer::GeneratingMatrix;

use super::{magic_state_amplitudes, TGateSpec};

/// `<T^dagger| W(z, x) |T^dagger>` for every single-qudit Weyl operator and
/// every ancilla, stored as `z * d + x`.
#[derive(Debug, Clone)]
pub struct MagicTable {
    field: Field,
    tables: Vec<Vec<Complex64>>,
    roots: Vec<Complex64>,
}

impl MagicTable {
    /// Tables for ancillas post-selected on `|T_i^dagger>`.
    pub fn new(field: Field, specs: &[TGateSpec]) -> Result<Self> {
        let mut tables = Vec::with_capacity(specs.len());
        for s in specs {
            if s.field() != field {
                return Err(Error::FieldMismatch(field.d(), s.field().d()));
            }
            tables.push(weyl_expectations(
                field,
                &magic_state_amplitudes(&s.adjoint()),
            ));
        }
        Ok(MagicTable {
            field,
            tables,
            roots: roots(field.d()),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn t(&self) -> usize {
        self.tables.len()
    }

    pub fn expectation(&self, ancilla: usize, z: u32, x: u32) -> Complex64 {
        self.tables[ancilla][(z * self.field.d() + x) as usize]
    }

    /// `tr[Pi_G |T^dagger><T^dagger|^{(x) t}]` with `Pi_G = d^{-k} sum_{W in <G>} W`.
    pub fn trace(&self, g: &GeneratingMatrix) -> Result<f64> {
        Ok(self.trace_counted(g)?.0)
    }

    /// Like [`MagicTable::trace`], also returning the number of group elements visited.
    pub fn trace_counted(&self, g: &GeneratingMatrix) -> Result<(f64, u64)> {
        let t = self.t();
        if g.n() != t {
            return Err(Error::DimensionMismatch {
                expected: t,
                found: g.n(),
            });
        }
        let f = self.field;
        let d = f.d();
        let du = d as usize;
        let k = g.len();
        let mut digits = vec![0u32; k];
        let mut acc = vec![0u32; 2 * t];
        let mut phase = 0u32;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut visits = 0u64;
        loop {
            let mut term = self.roots[phase as usize];
            for i in 0..t {
                term *= self.tables[i][acc[i] as usize * du + acc[t + i] as usize];
            }
            sum += term;
            visits += 1;
            // Odometer step; each touched digit adds its row once (d additions wrap to 0).
            let mut j = 0;
            loop {
                if j == k {
                    let total = sum.re / (d as f64).powi(k as i32);
                    return Ok((total.max(0.0), visits));
                }
                for (a, &b) in acc.iter_mut().zip(g.row(j)) {
                    *a = f.add(*a, b);
                }
                phase = f.add(phase, g.phase(j));
                digits[j] += 1;
                if digits[j] < d {
                    break;
                }
                digits[j] = 0;
                j += 1;
            }
        }
    }
}

fn roots(d: u32) -> Vec<Complex64> {
    (0..d)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64))
        .collect()
}

/// `<psi| W(z, x) |psi>` with `W(z, x)|b> = omega^{-zx/2} omega^{z(b+x)} |b+x>`.
fn weyl_expectations(f: Field, psi: &[Complex64]) -> Vec<Complex64> {
    let d = f.d();
    let w = roots(d);
    let mut out = Vec::with_capacity((d * d) as usize);
    for z in 0..d {
        for x in 0..d {
            let base = f.neg(f.mul(f.half(), f.mul(z, x)));
            let mut s = Complex64::new(0.0, 0.0);
            for b in 0..d {
                let c = f.add(b, x);
                let ph = f.add(base, f.mul(z, c));
                s += psi[c as usize].conj() * w[ph as usize] * psi[b as usize];
            }
            out.push(s);
        }
    }
    out
}

/// Free-function form of [`MagicTable::trace`].
pub fn magic_overlap_trace(g_gamma: &GeneratingMatrix, specs: &[TGateSpec]) -> Result<f64> {
    MagicTable::new(g_gamma.field(), specs)?.trace(g_gamma)
}

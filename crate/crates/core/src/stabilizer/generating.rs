use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;
use crate::symplectic::CliffordLabel;
use crate::weyl::{symp, SymplecticVector, WeylOperator};

/// Which block is brought to echelon form, and from which side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EchelonMode {
    /// Left echelon form of the `z` block.
    Z,
    /// Left echelon form of the `x` block.
    X,
    /// Right echelon form of the `z` block (columns scanned last to first).
    RZ,
    /// Right echelon form of the `x` block.
    RX,
}

impl EchelonMode {
    fn is_z(self) -> bool {
        matches!(self, EchelonMode::Z | EchelonMode::RZ)
    }

    fn reversed(self) -> bool {
        matches!(self, EchelonMode::RZ | EchelonMode::RX)
    }
}

/// Rows and qudit columns (both half-open) a normalization acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub rows: Range<usize>,
    pub cols: Range<usize>,
}

impl Window {
    pub fn new(rows: Range<usize>, cols: Range<usize>) -> Self {
        Window { rows, cols }
    }
}

/// Rows `chi(r_i) W_{u_i}` of a stabilizer group, `u_i` in the global layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratingMatrix {
    field: Field,
    n: usize,
    rows: Vec<Vec<u32>>,
    phases: Vec<u32>,
}

impl GeneratingMatrix {
    pub fn new(field: Field, n: usize, rows: Vec<Vec<u32>>, phases: Vec<u32>) -> Result<Self> {
        if rows.len() != phases.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: phases.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != 2 * n) {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: r.len(),
            });
        }
        let d = field.d();
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v % d).collect())
            .collect();
        let phases = phases.into_iter().map(|p| p % d).collect();
        Ok(GeneratingMatrix {
            field,
            n,
            rows,
            phases,
        })
    }

    pub fn from_weyl(field: Field, n: usize, ops: &[WeylOperator]) -> Result<Self> {
        Self::new(
            field,
            n,
            ops.iter().map(|w| w.vec.coords().to_vec()).collect(),
            ops.iter().map(|w| w.phase).collect(),
        )
    }

    /// `Z_1, ..., Z_n` with zero phases (the state `|0...0>`).
    pub fn zero_state(field: Field, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| SymplecticVector::z_unit(field, n, i).into_coords())
            .collect();
        GeneratingMatrix {
            field,
            n,
            rows,
            phases: vec![0; n],
        }
    }

    pub fn empty(field: Field, n: usize) -> Self {
        GeneratingMatrix {
            field,
            n,
            rows: Vec::new(),
            phases: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn phases(&self) -> &[u32] {
        &self.phases
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn phase(&self, i: usize) -> u32 {
        self.phases[i]
    }

    pub fn phases_mut(&mut self) -> &mut [u32] {
        &mut self.phases
    }

    pub fn push(&mut self, row: Vec<u32>, phase: u32) -> Result<()> {
        if row.len() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                found: row.len(),
            });
        }
        self.rows.push(row);
        self.phases.push(phase % self.field.d());
        Ok(())
    }

    pub fn weyl(&self, i: usize) -> WeylOperator {
        WeylOperator::new(
            SymplecticVector::from_coords(self.field, self.rows[i].clone()).expect("even"),
            self.phases[i],
        )
    }

    /// Rows `range` as a new matrix.
    pub fn slice_rows(&self, range: Range<usize>) -> Self {
        GeneratingMatrix {
            field: self.field,
            n: self.n,
            rows: self.rows[range.clone()].to_vec(),
            phases: self.phases[range].to_vec(),
        }
    }

    /// Restriction to the qudits `cols` (phases kept).
    pub fn restrict_cols(&self, cols: Range<usize>) -> Self {
        let n = self.n;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = r[cols.clone()].to_vec();
                out.extend_from_slice(&r[n + cols.start..n + cols.end]);
                out
            })
            .collect();
        GeneratingMatrix {
            field: self.field,
            n: cols.len(),
            rows,
            phases: self.phases.clone(),
        }
    }

    /// Checks pairwise symplectic orthogonality.
    pub fn check_commuting(&self) -> Result<()> {
        for i in 0..self.rows.len() {
            for j in (i + 1)..self.rows.len() {
                if symp(self.field, &self.rows[i], &self.rows[j]) != 0 {
                    return Err(Error::NotCommuting(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self.field, &self.rows)
    }

    /// Augmented rows `[u | r]`; row operations act linearly on them.
    pub fn augmented(&self) -> Vec<Vec<u32>> {
        self.rows
            .iter()
            .zip(&self.phases)
            .map(|(r, &p)| {
                let mut a = r.clone();
                a.push(p);
                a
            })
            .collect()
    }

    /// Canonical form of the generated group: RREF of the augmented rows.
    pub fn canonical(&self) -> Vec<Vec<u32>> {
        linalg::span_basis(self.field, &self.augmented())
    }

    /// Whether both matrices generate the same group (vectors and phases).
    pub fn same_group(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field && self.canonical() == other.canonical()
    }

    /// `u -> M u`, `r -> r + [g, M u]` on every row.
    pub fn apply_clifford(&mut self, c: &CliffordLabel) -> Result<()> {
        if c.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: c.n(),
            });
        }
        let f = self.field;
        for (row, ph) in self.rows.iter_mut().zip(self.phases.iter_mut()) {
            let (dp, mu) = c.conjugate_coords(row);
            *row = mu;
            *ph = f.add(*ph, dp);
        }
        Ok(())
    }

    /// Applies a label acting on the listed qudits only.
    pub fn apply_clifford_on(&mut self, c: &CliffordLabel, sites: &[usize]) -> Result<()> {
        crate::symplectic::check_sites(sites, c.n(), self.n)?;
        let f = self.field;
        let (n, k) = (self.n, c.n());
        let mut sub = vec![0u32; 2 * k];
        for (row, ph) in self.rows.iter_mut().zip(self.phases.iter_mut()) {
            for (i, &s) in sites.iter().enumerate() {
                sub[i] = row[s];
                sub[k + i] = row[n + s];
            }
            let (dp, mu) = c.conjugate_coords(&sub);
            for (i, &s) in sites.iter().enumerate() {
                row[s] = mu[i];
                row[n + s] = mu[k + i];
            }
            *ph = f.add(*ph, dp);
        }
        Ok(())
    }

    /// Named-gate update in `O(rows)`; equivalent to applying the gate's label.
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        let f = self.field;
        let n = self.n;
        g.validate(f, n)?;
        let rows = self.rows.iter_mut().zip(self.phases.iter_mut());
        match *g {
            Gate::F(q) => rows.for_each(|(r, _)| {
                let (z, x) = (r[q], r[n + q]);
                r[q] = x;
                r[n + q] = f.neg(z);
            }),
            Gate::S { q, nu } => rows.for_each(|(r, _)| r[q] = f.add(r[q], f.mul(nu, r[n + q]))),
            Gate::U { q, nu } => {
                let inv = f.inv(nu)?;
                rows.for_each(|(r, _)| {
                    r[q] = f.mul(r[q], inv);
                    r[n + q] = f.mul(r[n + q], nu);
                })
            }
            Gate::CX { control, target } => rows.for_each(|(r, _)| {
                r[n + target] = f.add(r[n + target], r[n + control]);
                r[control] = f.sub(r[control], r[target]);
            }),
            Gate::CZ(a, b) => rows.for_each(|(r, _)| {
                r[a] = f.add(r[a], r[n + b]);
                r[b] = f.add(r[b], r[n + a]);
            }),
            Gate::Z(q) => rows.for_each(|(r, p)| *p = f.add(*p, r[n + q])),
            Gate::X(q) => rows.for_each(|(r, p)| *p = f.sub(*p, r[q])),
            Gate::Clifford {
                ref label,
                ref sites,
            } => self.apply_clifford_on(label, sites)?,
            Gate::T { .. } => {
                return Err(Error::UnsupportedSpec(
                    "T gates need the gadget simulator".into(),
                ))
            }
        }
        Ok(())
    }

    fn check_window(&self, w: &Window) -> Result<()> {
        if w.rows.start > w.rows.end
            || w.rows.end > self.rows.len()
            || w.cols.start > w.cols.end
            || w.cols.end > self.n
        {
            return Err(Error::BadWindow);
        }
        Ok(())
    }

    /// Row operations within `window.rows` bringing the designated block to
    /// echelon form; returns the cut index.
    pub fn normalize_rows(&mut self, mode: EchelonMode, window: &Window) -> Result<usize> {
        self.check_window(window)?;
        let f = self.field;
        let offset = if mode.is_z() { 0 } else { self.n };
        let cols: Vec<usize> = if mode.reversed() {
            window.cols.clone().rev().map(|c| c + offset).collect()
        } else {
            window.cols.clone().map(|c| c + offset).collect()
        };
        let mut top = window.rows.start;
        for &c in &cols {
            if top >= window.rows.end {
                break;
            }
            let Some(p) = (top..window.rows.end).find(|&i| self.rows[i][c] != 0) else {
                continue;
            };
            self.rows.swap(top, p);
            self.phases.swap(top, p);
            let inv = f.inv(self.rows[top][c])?;
            for i in (top + 1)..window.rows.end {
                let v = self.rows[i][c];
                if v == 0 {
                    continue;
                }
                let factor = f.mul(v, inv);
                let (head, tail) = self.rows.split_at_mut(i);
                let pivot = &head[top];
                for (a, &b) in tail[0].iter_mut().zip(pivot) {
                    *a = f.sub(*a, f.mul(factor, b));
                }
                self.phases[i] = f.sub(self.phases[i], f.mul(factor, self.phases[top]));
            }
            top += 1;
        }
        self.cut(mode, window)
    }

    /// First row in `window.rows` whose designated block vanishes on `window.cols`.
    pub fn cut(&self, mode: EchelonMode, window: &Window) -> Result<usize> {
        self.check_window(window)?;
        let offset = if mode.is_z() { 0 } else { self.n };
        Ok(window
            .rows
            .clone()
            .find(|&i| window.cols.clone().all(|c| self.rows[i][offset + c] == 0))
            .unwrap_or(window.rows.end))
    }
}

/// Functional form of [`GeneratingMatrix::normalize_rows`].
pub fn normalize_rows(
    g: &GeneratingMatrix,
    mode: EchelonMode,
    window: &Window,
) -> Result<(GeneratingMatrix, usize)> {
    let mut out = g.clone();
    let cut = out.normalize_rows(mode, window)?;
    Ok((out, cut))
}

use rand::distr::{weighted::WeightedIndex, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stabilizer::{EchelonMode, GeneratingMatrix, Window};

use super::overlap::MagicTable;

/// Outcome of constraining the stabilizers of `V|0>` to a measured prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintResult {
    /// `false` means the prefix has probability zero.
    pub flag: bool,
    /// Number of generators that are `Z`-type on the measured register and
    /// trivial on the marginalized one.
    pub xi: usize,
    /// Generators acting on the ancilla register after fixing the prefix.
    pub g_gamma: GeneratingMatrix,
}

/// Per-prefix-length structure, independent of the outcome values.
#[derive(Debug, Clone)]
struct PrefixLevel {
    /// Rows after the three normalizations; phases do not include the outcome.
    g3: GeneratingMatrix,
    c4: usize,
    xi: usize,
}

/// Row-reduced views of a generating matrix `G_0` on `n` data qudits and
/// `t` ancillas, cached so that only phases change between candidate outcomes.
#[derive(Debug, Clone)]
pub struct Constrainer {
    n: usize,
    t: usize,
    /// Rows with no `x` component on the data register, in right `z` echelon form.
    g1: GeneratingMatrix,
    levels: Vec<Option<PrefixLevel>>,
}

impl Constrainer {
    pub fn new(g0: &GeneratingMatrix, n: usize) -> Result<Self> {
        let total = g0.n();
        if n > total {
            return Err(Error::ShapeMismatch(format!(
                "{n} data qudits in a {total}-qudit matrix"
            )));
        }
        if g0.len() != total {
            return Err(Error::ShapeMismatch(format!(
                "{} rows for {total} qudits",
                g0.len()
            )));
        }
        let mut g = g0.clone();
        let rows = 0..g.len();
        let c1 = g.normalize_rows(EchelonMode::X, &Window::new(rows.clone(), 0..n))?;
        let mut g1 = g.slice_rows(c1..g.len());
        g1.normalize_rows(EchelonMode::RZ, &Window::new(0..g1.len(), 0..n))?;
        Ok(Constrainer {
            n,
            t: total - n,
            g1,
            levels: vec![None; n + 1],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    fn level(&mut self, m: usize) -> Result<&PrefixLevel> {
        if m > self.n {
            return Err(Error::ShapeMismatch(format!(
                "prefix of length {m} on {} qudits",
                self.n
            )));
        }
        if self.levels[m].is_none() {
            let (n, t) = (self.n, self.t);
            let g1 = &self.g1;
            let c2 = g1.cut(EchelonMode::RZ, &Window::new(0..g1.len(), m..n))?;
            let mut g3 = g1.slice_rows(c2..g1.len());
            let xi = g3.len();
            let gamma = n..n + t;
            let c3 = g3.normalize_rows(EchelonMode::RX, &Window::new(0..xi, gamma.clone()))?;
            let c4 = g3.normalize_rows(EchelonMode::RZ, &Window::new(c3..xi, gamma))?;
            self.levels[m] = Some(PrefixLevel { g3, c4, xi });
        }
        Ok(self.levels[m].as_ref().expect("filled above"))
    }

    /// Constrains to the outcome prefix `x` on data qudits `0..x.len()`.
    pub fn constrain(&mut self, x: &[u32]) -> Result<ConstraintResult> {
        let (n, t) = (self.n, self.t);
        let level = self.level(x.len())?;
        let f = level.g3.field();
        let phases: Vec<u32> = level
            .g3
            .rows()
            .iter()
            .zip(level.g3.phases())
            .map(|(row, &r)| {
                row.iter()
                    .zip(x)
                    .fold(r, |acc, (&z, &xi)| f.add(acc, f.mul(z, xi)))
            })
            .collect();
        let flag = phases[level.c4..].iter().all(|&r| r == 0);
        let mut g_gamma = level.g3.slice_rows(0..level.c4).restrict_cols(n..n + t);
        g_gamma.phases_mut().copy_from_slice(&phases[..level.c4]);
        Ok(ConstraintResult {
            flag,
            xi: level.xi,
            g_gamma,
        })
    }
}

/// Constrains the stabilizers of `g0` (data qudits `0..n`) to the prefix `x`.
pub fn constrain_stabilizers(
    g0: &GeneratingMatrix,
    n: usize,
    x: &[u32],
) -> Result<ConstraintResult> {
    Constrainer::new(g0, n)?.constrain(x)
}

/// Probability of measuring the prefix `x` on the data register with the
/// ancillas post-selected on their magic states.
#[derive(Debug, Clone)]
pub struct OutcomeModel {
    constrainer: Constrainer,
    table: MagicTable,
}

impl OutcomeModel {
    pub fn new(g0: &GeneratingMatrix, n: usize, table: MagicTable) -> Result<Self> {
        let constrainer = Constrainer::new(g0, n)?;
        if table.t() != constrainer.t() {
            return Err(Error::DimensionMismatch {
                expected: constrainer.t(),
                found: table.t(),
            });
        }
        Ok(OutcomeModel { constrainer, table })
    }

    pub fn n(&self) -> usize {
        self.constrainer.n()
    }

    /// `p(x) = d^{xi - m} tr[Pi_{G_x} |T^dagger><T^dagger|^{(x) t}]` or 0.
    pub fn probability(&mut self, x: &[u32]) -> Result<f64> {
        let res = self.constrainer.constrain(x)?;
        if !res.flag {
            return Ok(0.0);
        }
        let d = res.g_gamma.field().d() as f64;
        let scale = d.powi(res.xi as i32 - x.len() as i32);
        Ok(scale * self.table.trace(&res.g_gamma)?)
    }

    /// Samples a full outcome qudit by qudit from the conditional distributions.
    pub fn sample<R: rand::Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(Vec<u32>, f64)> {
        let n = self.n();
        let d = self.table.field().d();
        let mut x = Vec::with_capacity(n);
        let mut p_prefix = 1.0;
        let mut probs = vec![0.0f64; d as usize];
        for _ in 0..n {
            x.push(0);
            let last = x.len() - 1;
            for y in 0..d {
                x[last] = y;
                probs[y as usize] = self.probability(&x)?.max(0.0);
            }
            let pick = WeightedIndex::new(&probs)
                .map_err(|_| Error::ZeroPostselection)?
                .sample(rng);
            x[last] = pick as u32;
            p_prefix = probs[pick];
        }
        Ok((x, p_prefix))
    }
}

/// Probabilities of all prefixes of length `m`, qudit 0 most significant.
pub fn prefix_distribution(model: &mut OutcomeModel, m: usize) -> Result<Vec<f64>> {
    let d = model.table.field().d() as usize;
    let count = d
        .checked_pow(m as u32)
        .ok_or_else(|| Error::TooLarge(format!("{d}^{m}")))?;
    (0..count)
        .map(|idx| {
            let mut x = vec![0u32; m];
            let mut rest = idx;
            for v in x.iter_mut().rev() {
                *v = (rest % d) as u32;
                rest /= d;
            }
            model.probability(&x)
        })
        .collect()
}

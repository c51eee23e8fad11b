use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::stabilizer::GeneratingMatrix;
use crate::symplectic::CliffordLabel;

use super::TGateSpec;

/// Default bound on the number of ancillas (T gates) per circuit.
pub const DEFAULT_ANCILLA_CAP: usize = 12;

/// Clifford-only rewrite of a circuit with T gates on `n + t` qudits.
///
/// Data qudits are `0..n`, ancillas `n..n+t`. A T gate on qudit `q` becomes
/// `CX(q -> a)` on a fresh ancilla `a` that is later post-selected on
/// `|T^dagger>`. The first `t_prep` ancillas belong to the input preparation,
/// the remaining ones to the measurement layer, which applies a Clifford `C`
/// on the data, then `T_j` and `F` on data qudit `j` for each layer spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetCircuit {
    field: Field,
    n: usize,
    prep: Vec<Gate>,
    prep_specs: Vec<TGateSpec>,
    layer_specs: Vec<TGateSpec>,
}

impl GadgetCircuit {
    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of data qudits.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of ancillas.
    pub fn t(&self) -> usize {
        self.prep_specs.len() + self.layer_specs.len()
    }

    pub fn t_prep(&self) -> usize {
        self.prep_specs.len()
    }

    pub fn layer_specs(&self) -> &[TGateSpec] {
        &self.layer_specs
    }

    /// T gates whose magic states the ancillas are post-selected on, in ancilla order.
    pub fn postselect(&self) -> Vec<TGateSpec> {
        self.prep_specs
            .iter()
            .chain(&self.layer_specs)
            .copied()
            .collect()
    }

    /// Gadgetized preparation gates on `n + t` qudits.
    pub fn prep_gates(&self) -> &[Gate] {
        &self.prep
    }

    /// Measurement-layer gates for a given data Clifford.
    pub fn layer_gates(&self, clifford: Option<&CliffordLabel>) -> Vec<Gate> {
        let mut gates = Vec::with_capacity(2 * self.layer_specs.len() + 1);
        if let Some(c) = clifford {
            gates.push(Gate::Clifford {
                label: c.clone(),
                sites: (0..self.n).collect(),
            });
        }
        let base = self.n + self.t_prep();
        for j in 0..self.layer_specs.len() {
            gates.push(Gate::CX {
                control: j,
                target: base + j,
            });
            gates.push(Gate::F(j));
        }
        gates
    }

    /// Full Clifford circuit `V` on `n + t` qudits.
    pub fn gates(&self, clifford: Option<&CliffordLabel>) -> Vec<Gate> {
        let mut g = self.prep.clone();
        g.extend(self.layer_gates(clifford));
        g
    }

    /// Generating matrix of `V_prep |0>` on all `n + t` qudits.
    pub fn prep_state(&self) -> Result<GeneratingMatrix> {
        let mut g = GeneratingMatrix::zero_state(self.field, self.n + self.t());
        for gate in &self.prep {
            g.apply_gate(gate)?;
        }
        Ok(g)
    }

    /// Applies the measurement layer to a prepared generating matrix.
    pub fn apply_layer(
        &self,
        g: &mut GeneratingMatrix,
        clifford: Option<&CliffordLabel>,
    ) -> Result<()> {
        for gate in self.layer_gates(clifford) {
            g.apply_gate(&gate)?;
        }
        Ok(())
    }

    /// Generating matrix of `V |0>`.
    pub fn output_state(&self, clifford: Option<&CliffordLabel>) -> Result<GeneratingMatrix> {
        let mut g = self.prep_state()?;
        self.apply_layer(&mut g, clifford)?;
        Ok(g)
    }
}

/// Replaces every T gate of `input_prep` and of the measurement layer by a
/// reversed gadget.
pub fn gadgetize(input_prep: &Circuit, layer: &[TGateSpec], cap: usize) -> Result<GadgetCircuit> {
    let field = input_prep.field();
    let n = input_prep.n();
    if layer.len() > n {
        return Err(Error::ConfigError(format!(
            "{} layer T gates on {n} qudits",
            layer.len()
        )));
    }
    let t = input_prep.t_count() + layer.len();
    if t > cap {
        return Err(Error::TooManyAncillas { t, cap });
    }
    for s in layer {
        if s.field() != field {
            return Err(Error::FieldMismatch(field.d(), s.field().d()));
        }
    }
    let mut prep = Vec::with_capacity(input_prep.gates().len());
    let mut prep_specs = Vec::new();
    for g in input_prep.gates() {
        match g {
            Gate::T { q, spec } => {
                prep.push(Gate::CX {
                    control: *q,
                    target: n + prep_specs.len(),
                });
                prep_specs.push(*spec);
            }
            other => prep.push(other.clone()),
        }
    }
    Ok(GadgetCircuit {
        field,
        n,
        prep,
        prep_specs,
        layer_specs: layer.to_vec(),
    })
}

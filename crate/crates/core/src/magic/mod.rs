//! Diagonal T-type gates, their reversed gadgets, and outcome sampling for
//! Clifford circuits with a few such gates.

mod constrain;
mod gadget;
mod overlap;
mod spec;

pub use constrain::{
    constrain_stabilizers, prefix_distribution, Constrainer, ConstraintResult, OutcomeModel,
};
pub use gadget::{gadgetize, GadgetCircuit, DEFAULT_ANCILLA_CAP};
pub use overlap::{magic_overlap_trace, MagicTable};
pub use spec::{magic_state_amplitudes, CubicPhase, TGateSpec};

use rand::Rng;

use crate::error::Result;
use crate::symplectic::CliffordLabel;

/// Exact outcome model for `V|0>` with the measurement-layer Clifford `clifford`.
pub fn outcome_model(
    circ: &GadgetCircuit,
    clifford: Option<&CliffordLabel>,
) -> Result<OutcomeModel> {
    let g0 = circ.output_state(clifford)?;
    let table = MagicTable::new(circ.field(), &circ.postselect())?;
    OutcomeModel::new(&g0, circ.n(), table)
}

/// Samples a data outcome of `circ` (measurement-layer Clifford `clifford`).
pub fn sample_outcome_sequential<R: Rng + ?Sized>(
    circ: &GadgetCircuit,
    clifford: Option<&CliffordLabel>,
    rng: &mut R,
) -> Result<Vec<u32>> {
    Ok(outcome_model(circ, clifford)?.sample(rng)?.0)
}

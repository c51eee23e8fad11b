//! Stabilizer states as generating matrices, tableaux and Lagrangian
//! subspaces with a characteristic vector.

mod generating;
mod lagrangian;
mod tableau;

pub use generating::{normalize_rows, EchelonMode, GeneratingMatrix, Window};
pub use lagrangian::{measure_all, overlap2, LagrangianState};
pub use tableau::{build_tableau, characteristic_vector, Tableau};

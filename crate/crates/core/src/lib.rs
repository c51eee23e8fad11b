pub mod circuit;
pub mod dense;
pub mod error;
pub mod field;
pub mod linalg;
pub mod magic;
pub mod shadow;
pub mod stabilizer;
pub mod symplectic;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};

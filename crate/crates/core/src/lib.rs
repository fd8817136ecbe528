//! Exact integer linear algebra for fan matrices and weight matrices of
//! Q-factorial complete toric varieties: Hermite and Smith forms, lattice
//! duality, Gale duality, F/W-matrix tests and reductions, simplicial fan
//! enumeration and divisor invariants.

pub mod cli;
pub mod error;
pub mod exact;
pub mod fans;
pub mod fw;
pub mod gale;
pub mod lattice;
pub mod lp;
pub mod normal_forms;
pub mod toric;

pub use error::{Error, Result};
pub use exact::{ExactLinAlg, IndexSet, IntMat, Matrix, RatMat};

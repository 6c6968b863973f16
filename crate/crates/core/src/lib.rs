//! Algebras attached to regular toric fans and their finite-dimensional
//! modules, with descent gluing over the affine chart cover and the
//! equivariant base change along a quotient of the torus.

pub mod algebra;
pub mod demos;
pub mod descent;
pub mod equivariant;
pub mod error;
pub mod fan;
pub mod io;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod pervmod;
pub mod report;

pub use error::{Error, Result};

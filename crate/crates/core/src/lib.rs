//! Exact un-convergence on concretely representable vector lattices.

pub mod error;
pub mod exec;
pub mod extraction;
pub mod gallery;
pub mod lattice;
pub mod laws;
pub mod convergence;
pub mod sample;
pub mod spaces;

pub use error::{Error, Result};
pub use lattice::{Element, ExtScalar, Kind, NormSpec, NormValue, Rational};

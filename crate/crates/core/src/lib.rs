//! Noncommutative integration on finite weighted-trace models: singular-value
//! functions, zeta and heat-kernel functionals, Cesàro means and Dixmier-trace
//! estimators, with verification suites for the identities and inequalities
//! relating them.

pub mod curve;
pub mod error;
pub mod extrapolate;
pub mod factory;
pub mod linalg;
pub mod quadrature;
pub mod random;
pub mod trace_space;
pub mod verify;
pub mod zeta_heat;

pub use error::{Error, Result};

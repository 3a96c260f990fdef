//! Constructors for every operator the verification suites use.

mod approximation;
mod counterexample;
mod lattice;
mod model;
mod profile;

pub use approximation::{approximation_from_decomposition, approximation_scheme, domination_margin, ApproximationPair, TIE_TOL};
pub use counterexample::{counterexample_pair, partial_trace, CounterexampleBlocks};
pub use lattice::{
    circulant_function, dirac_eigendecomposition, g_from_d, g_from_lattice, g_lattice_decomposition, lattice_dirac_1d,
    lattice_laplacian, multiplication_operator, GVariant, LatticeSpec,
};
pub use model::{model_diagonal, ModelKind, ModelSequence, TailPolicy, EXPLICIT_TERMS};
pub use profile::{fourier_derivative_l1, mollifier_fourier_constant, smooth_transition_profile};

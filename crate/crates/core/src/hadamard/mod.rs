//! Construction, validation and equivalence handling of complex Hadamard
//! matrices.

mod construct;
pub mod io;
mod matrix;
mod ops;
mod phase;

pub use construct::{
    chirp_eigenvalues, circulant_from_eigenvalues, deformed_tensor, f22, f23, fourier_matrix,
    haagerup_matrix, recombination_parameters, tao_matrix, tensor_product,
};
pub use matrix::{DeformationParameters, Entries, HadamardMatrix};
pub use ops::{
    apply_equivalence, dephase, design_array, profile_matrix, require_hadamard, verify_hadamard,
    DesignArray, Equivalence, ValidationReport, DEFAULT_HADAMARD_TOL,
};
pub use phase::{Phase, Unimodular};

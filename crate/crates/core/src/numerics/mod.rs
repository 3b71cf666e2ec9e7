//! Dense complex linear-algebra kernel shared by all modules.

mod linalg;
mod matrix;

pub use linalg::{
    expm, gaussian_matrix, herm_eig, kron, least_squares, null_space, partial_trace,
    polar_unitary, random_hermitian, random_isometry, random_unitary, rank, Keep,
};
pub use matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix, C64, I, ONE, ZERO};

//! Numerical toolkit for completely positive maps and their covariant
//! dilations: Kraus/Choi conversions, Stinespring isometries, finite
//! systems of imprimitivity for Z_n, group-covariant channel
//! construction, Lindblad generators with semigroup evolution and
//! ergodicity analysis, and a discretized light-cone module for the
//! Poincaré-group side (induced representations, invariant measures,
//! spinor fibers).
//!
//! Everything is dense, double-precision and desk-scale. All operator
//! data rides on [`ComplexMatrix`], a row-major complex matrix with a
//! fixed vectorization convention: `vec(AXB) = (A ⊗ Bᵀ) vec(X)`.
//!
//! The crate is data-parallel by default (feature `parallel`, backed by
//! rayon); building with `--no-default-features` swaps in sequential
//! loops with bit-identical results.

pub mod channels;
pub mod covariance;
pub mod error;
pub mod exec;
pub mod imprimitivity;
pub mod numerics;
pub mod poincare;
pub mod qms;
pub mod stinespring;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, C64};

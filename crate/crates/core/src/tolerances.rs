//! Numerical tolerances used across the crate and its test suites.
//!
//! All operator data is O(1) in magnitude (unitaries, projectors, Kraus
//! operators of unital maps), so these are absolute thresholds unless a
//! name says otherwise.

/// Hermiticity check before an eigendecomposition, `‖h − h†‖_F`.
pub const HERM: f64 = 1e-10;

/// Smallest admissible Choi eigenvalue for a map to count as CP.
pub const CP_MIN_EIG: f64 = -1e-10;

/// CP threshold for semigroup-evolved maps; matrix-exponential error
/// accumulates, so the floor is looser than [`CP_MIN_EIG`].
pub const CP_MIN_EIG_EVOLVED: f64 = -1e-8;

/// Unitality residual `‖T(1) − 1‖_F`.
pub const UNITAL: f64 = 1e-10;

/// Unitality residual for semigroup-evolved maps.
pub const UNITAL_EVOLVED: f64 = 1e-9;

/// Isometry / unitarity residual `‖V†V − I‖_F`.
pub const ISOMETRY: f64 = 1e-12;

/// Orthonormality of a supplied basis.
pub const ORTHONORMAL: f64 = 1e-12;

/// Stinespring reconstruction residual `max_X ‖T(X) − V†(X⊗1)V‖_F`.
pub const DILATION: f64 = 1e-10;

/// Relative truncation for Choi eigenvalues when extracting Kraus
/// operators: eigenvalues below `KRAUS_TRUNCATION_REL · λ_max` are
/// treated as numerical noise.
pub const KRAUS_TRUNCATION_REL: f64 = 1e-12;

/// Kraus ↔ Choi roundtrip distance in Choi Frobenius norm.
pub const CHOI_ROUNDTRIP: f64 = 1e-9;

/// Positive-definite-kernel floor: Gram matrices of CP maps may dip
/// this far below zero from rounding.
pub const KERNEL_PSD: f64 = -1e-9;

/// Weyl relation and finite-SI covariance residuals.
pub const WEYL: f64 = 1e-12;

/// Stone–von Neumann intertwiner residual.
pub const INTERTWINER: f64 = 1e-8;

/// Covariance residual of a twirled channel.
pub const TWIRLED_COVARIANCE: f64 = 1e-10;

/// Precondition ceiling for covariant dilation inputs.
pub const COVARIANCE_PRE: f64 = 1e-8;

/// Covariant-dilation intertwining and cocycle residuals.
pub const COVARIANT_DILATION: f64 = 1e-8;

/// Semigroup law residual `‖T̂_{s+t} − T̂_s T̂_t‖_F`.
pub const SEMIGROUP: f64 = 1e-9;

/// Relative kernel threshold for the generator's fixed-point space;
/// consistent with matrix-exponential accuracy.
pub const ERGODIC_KERNEL_REL: f64 = 1e-9;

/// Minkowski-form invariance and character duality residuals.
pub const MINKOWSKI: f64 = 1e-10;

/// SL(2,C) → SO⁺(3,1) covering-map consistency (η-orthogonality,
/// homomorphism property).
pub const LORENTZ: f64 = 1e-9;

/// Membership test for orbit equations.
pub const ORBIT_MEMBERSHIP: f64 = 1e-9;

/// Off-cone ceiling for pulled-back section arguments.
pub const CONE_PULLBACK: f64 = 1e-8;

/// Jacobian invariance defect of the standard cone density under
/// boosts (finite-difference Jacobian, relative step 1e−5).
pub const MEASURE_INVARIANCE: f64 = 1e-6;

/// Induced-representation composition residual on sampled sections.
pub const REP_COMPOSITION: f64 = 1e-8;

/// Grid-exact norm invariance under z-rotations that map the angular
/// grid to itself.
pub const GRID_NORM_INVARIANCE: f64 = 1e-10;

//! Desk-scale Poincaré-group side: Minkowski pairing and dual action,
//! semidirect-product group law, the SL(2,C) covering map, light-cone
//! orbits with invariant-measure candidates, induced representations
//! on discretized sections, little-group stabilizers, and spinor
//! fibers.

mod lorentz;
mod orbit;
mod section;

pub use lorentz::{
    dual_action_check, minkowski_form, poincare_compose, poincare_inverse, stabilizer_check,
    DualActionResiduals, FourVector, LorentzElement, PoincareElement,
};
pub use orbit::{
    build_orbit_grid, measure_invariance_check, measure_weight, orbit_membership,
    random_cone_points, Density, MeasureWeight, OrbitGrid, OrbitKind,
};
pub use section::{
    chirality_operator, fiber_space, gamma_matrices, induced_rep_apply, section_distance,
    section_norm, Chirality, Section,
};

//! Discretized sections of the light-cone spinor bundle, the induced
//! Poincaré representation acting on them, and the pointwise fiber
//! spaces cut out by the momentum-space Dirac condition.
//!
//! Sections are stored as evaluable closed-form samplers plus cached
//! grid values, so the pull-back `φ(δ(h)⁻¹p)` is exact — no
//! interpolation error enters representation tests, only quadrature
//! error enters norms. Gamma matrices are fixed in the Weyl (chiral)
//! basis with `Γ = diag(−I₂, I₂)`; the fiber of the light-like bundle
//! is the chiral 2-component factor transformed by `S(h*⁻¹) = (h†)⁻¹`.

use std::sync::Arc;

use nalgebra::Vector2;
use num_complex::Complex64;

use super::lorentz::{minkowski_form, FourVector, PoincareElement};
use super::orbit::OrbitGrid;
use crate::error::{Error, Result};
use crate::exec;
use crate::numerics::{null_space, ComplexMatrix, ONE, ZERO};
use crate::tolerances as tol;

type C64 = Complex64;

/// Gamma matrices `(γ⁰, γ¹, γ², γ³)` in the Weyl basis:
/// `γ⁰ = offdiag(I, I)`, `γⁱ = offdiag(σᵢ, −σᵢ)`.
pub fn gamma_matrices() -> [ComplexMatrix; 4] {
    let i = C64::new(0.0, 1.0);
    let block = |s: [[C64; 2]; 2], sign: f64| {
        ComplexMatrix::from_fn(4, 4, |r, c| {
            if r < 2 && c >= 2 {
                s[r][c - 2]
            } else if r >= 2 && c < 2 {
                s[r - 2][c] * C64::new(sign, 0.0)
            } else {
                ZERO
            }
        })
    };
    let id = [[ONE, ZERO], [ZERO, ONE]];
    let sx = [[ZERO, ONE], [ONE, ZERO]];
    let sy = [[ZERO, -i], [i, ZERO]];
    let sz = [[ONE, ZERO], [ZERO, -ONE]];
    [block(id, 1.0), block(sx, -1.0), block(sy, -1.0), block(sz, -1.0)]
}

/// Chirality operator `Γ = diag(−I₂, I₂)`.
pub fn chirality_operator() -> ComplexMatrix {
    ComplexMatrix::diag(&[-ONE, -ONE, ONE, ONE])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    /// `Γv = +v`.
    Plus,
    /// `Γv = −v`.
    Minus,
}

/// Orthonormal basis (columns) of the solution space of
/// `(Σ_r p_r γ_r − m)v = 0`, optionally intersected with a chirality
/// eigenspace. An empty solution space is a 4×0 result, not an error.
pub fn fiber_space(
    p: &FourVector,
    mass: f64,
    chirality: Option<Chirality>,
) -> ComplexMatrix {
    let gammas = gamma_matrices();
    let mut slash = ComplexMatrix::zeros(4, 4);
    for (r, gamma) in gammas.iter().enumerate() {
        slash = &slash + &gamma.scale(C64::new(p.0[r], 0.0));
    }
    let condition = &slash - &ComplexMatrix::identity(4).scale(C64::new(mass, 0.0));
    let stacked = match chirality {
        None => condition,
        Some(c) => {
            let sign = match c {
                Chirality::Plus => -1.0,
                Chirality::Minus => 1.0,
            };
            // Γv = ∓v ⇔ (Γ ± I)v = 0.
            let proj = &chirality_operator()
                + &ComplexMatrix::identity(4).scale(C64::new(sign, 0.0));
            ComplexMatrix::vstack(&[&condition, &proj])
        }
    };
    null_space(&stacked, 1e-8)
}

type Sampler = Arc<dyn Fn(&FourVector) -> Vector2<C64> + Send + Sync>;

/// A section of the chiral bundle over a fixed grid: a closed-form
/// sampler plus its cached grid values.
#[derive(Clone)]
pub struct Section {
    grid: Arc<OrbitGrid>,
    sampler: Sampler,
    values: Vec<Vector2<C64>>,
}

impl Section {
    pub fn new(grid: Arc<OrbitGrid>, sampler: Sampler) -> Self {
        let values = exec::map_slice(&grid.points, |p| sampler(p));
        Self { grid, sampler, values }
    }

    /// Constant unit fiber `(1, 0)` everywhere.
    pub fn constant_unit(grid: Arc<OrbitGrid>) -> Self {
        Self::new(grid, Arc::new(|_| Vector2::new(ONE, ZERO)))
    }

    pub fn grid(&self) -> &Arc<OrbitGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Vector2<C64>] {
        &self.values
    }

    /// Exact sampler evaluation (no interpolation).
    pub fn sample(&self, p: &FourVector) -> Vector2<C64> {
        (self.sampler)(p)
    }

    pub fn scale(&self, c: C64) -> Self {
        let inner = self.sampler.clone();
        Self::new(self.grid.clone(), Arc::new(move |p| inner(p) * c))
    }
}

/// Induced representation
/// `(U_{h,x}φ)(p) = e^{i{x,p}} · S(h*⁻¹) · φ(δ(h)⁻¹p)`.
///
/// Fails if any grid point pulls back off the numerical cone (which
/// only happens when the Lorentz part is corrupted).
pub fn induced_rep_apply(g: &PoincareElement, phi: &Section) -> Result<Section> {
    let l_inv = g.lorentz.inverse();
    for p in &phi.grid.points {
        let q = l_inv.apply(p);
        let dev = (q.time() * q.time() - q.spatial_norm_sq()).abs();
        if dev > tol::CONE_PULLBACK * q.time().max(1.0).powi(2) {
            return Err(Error::OffOrbit { deviation: dev });
        }
    }
    let spinor = g.lorentz.spinor_factor();
    let x = g.translation;
    let inner = phi.sampler.clone();
    let sampler: Sampler = Arc::new(move |p| {
        let phase = C64::from_polar(1.0, minkowski_form(&x, p));
        spinor * inner(&l_inv.apply(p)) * phase
    });
    Ok(Section::new(phi.grid.clone(), sampler))
}

/// Quadrature norm `‖φ‖² = Σ_p w(p) · p₀⁻¹ · ⟨φ(p), φ(p)⟩`; the square
/// root is returned.
pub fn section_norm(phi: &Section) -> f64 {
    let terms = exec::map_range(phi.values.len(), |i| {
        let p = &phi.grid.points[i];
        phi.grid.weights[i] / p.time() * phi.values[i].norm_squared()
    });
    terms.iter().sum::<f64>().sqrt()
}

/// Max pointwise fiber distance of two sections on their shared grid.
pub fn section_distance(a: &Section, b: &Section) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

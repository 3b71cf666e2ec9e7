//! Minkowski four-vectors, the SL(2,C) double cover of SO⁺(3,1), and
//! the semidirect-product (Poincaré) group law.
//!
//! The signature is (+,−,−,−). A Lorentz element carries both its
//! SL(2,C) representative `h` and the covering image `δ(h)` defined by
//! `h σ(p) h† = σ(δ(h)p)` with `σ(p) = p₀I + p₁σx + p₂σy + p₃σz`;
//! `δ(−h) = δ(h)`.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances as tol;

type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub fn new(k0: f64, k1: f64, k2: f64, k3: f64) -> Self {
        Self([k0, k1, k2, k3])
    }

    pub fn zero() -> Self {
        Self([0.0; 4])
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn spatial_norm_sq(&self) -> f64 {
        self.0[1] * self.0[1] + self.0[2] * self.0[2] + self.0[3] * self.0[3]
    }

    pub fn add(&self, other: &FourVector) -> FourVector {
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = self.0[i] + other.0[i];
        }
        FourVector(out)
    }

    pub fn neg(&self) -> FourVector {
        FourVector([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }

    pub fn dist(&self, other: &FourVector) -> f64 {
        (0..4).map(|i| (self.0[i] - other.0[i]).powi(2)).sum::<f64>().sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Minkowski pairing `{k,g} = k₀g₀ − k₁g₁ − k₂g₂ − k₃g₃`.
pub fn minkowski_form(k: &FourVector, g: &FourVector) -> f64 {
    k.0[0] * g.0[0] - k.0[1] * g.0[1] - k.0[2] * g.0[2] - k.0[3] * g.0[3]
}

fn sigma_matrices() -> [Matrix2<C64>; 4] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Matrix2::new(one, z, z, one),
        Matrix2::new(z, one, one, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(one, z, z, -one),
    ]
}

fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Inverse of a unimodular 2×2 matrix by its adjugate.
fn sl2_inverse(h: &Matrix2<C64>) -> Matrix2<C64> {
    Matrix2::new(h[(1, 1)], -h[(0, 1)], -h[(1, 0)], h[(0, 0)])
}

/// A proper orthochronous Lorentz transformation with its SL(2,C) lift.
#[derive(Clone, Debug)]
pub struct LorentzElement {
    sl2c: Matrix2<C64>,
    lorentz4: Matrix4<f64>,
}

impl LorentzElement {
    /// Covering map: `δ(h)_{μν} = ½ tr(σ_μ h σ_ν h†)`. Rejects
    /// non-unimodular input and (defensively) images that fail
    /// η-orthogonality.
    pub fn from_sl2c(h: Matrix2<C64>) -> Result<Self> {
        let det = h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)];
        if (det - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "SL(2,C) element must have det 1, got {det}"
            )));
        }
        let sigma = sigma_matrices();
        let hd = h.adjoint();
        let mut l = Matrix4::zeros();
        for mu in 0..4 {
            for nu in 0..4 {
                l[(mu, nu)] = 0.5 * (sigma[mu] * h * sigma[nu] * hd).trace().re;
            }
        }
        let defect = (l.transpose() * eta() * l - eta()).norm();
        if defect > tol::LORENTZ {
            return Err(Error::InvalidParameter(format!(
                "covering image fails η-orthogonality by {defect:.3e}"
            )));
        }
        Ok(Self { sl2c: h, lorentz4: l })
    }

    pub fn identity() -> Self {
        Self { sl2c: Matrix2::identity(), lorentz4: Matrix4::identity() }
    }

    /// Rotation by `angle` about the unit axis `n`:
    /// `h = cos(θ/2)·I − i sin(θ/2)·(n·σ)`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = normalize3(axis)?;
        let sigma = sigma_matrices();
        let ns = sigma[1].map(|z| z * C64::new(n[0], 0.0))
            + sigma[2].map(|z| z * C64::new(n[1], 0.0))
            + sigma[3].map(|z| z * C64::new(n[2], 0.0));
        let h = Matrix2::identity().map(|z: C64| z * C64::new((angle / 2.0).cos(), 0.0))
            + ns.map(|z| z * C64::new(0.0, -(angle / 2.0).sin()));
        Self::from_sl2c(h)
    }

    pub fn rotation_z(angle: f64) -> Self {
        Self::rotation([0.0, 0.0, 1.0], angle).expect("unit axis")
    }

    /// Boost of rapidity η along the unit axis `n`:
    /// `h = cosh(η/2)·I + sinh(η/2)·(n·σ)`.
    pub fn boost(axis: [f64; 3], rapidity: f64) -> Result<Self> {
        let n = normalize3(axis)?;
        let sigma = sigma_matrices();
        let ns = sigma[1].map(|z| z * C64::new(n[0], 0.0))
            + sigma[2].map(|z| z * C64::new(n[1], 0.0))
            + sigma[3].map(|z| z * C64::new(n[2], 0.0));
        let h = Matrix2::identity().map(|z: C64| z * C64::new((rapidity / 2.0).cosh(), 0.0))
            + ns.map(|z| z * C64::new((rapidity / 2.0).sinh(), 0.0));
        Self::from_sl2c(h)
    }

    pub fn boost_z(rapidity: f64) -> Self {
        Self::boost([0.0, 0.0, 1.0], rapidity).expect("unit axis")
    }

    /// Null translation `[[1, c], [0, 1]]` in the E(2)-like little
    /// group of the light-like reference momentum (1,0,0,1).
    pub fn null_translation(c: C64) -> Self {
        let h = Matrix2::new(C64::new(1.0, 0.0), c, C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::from_sl2c(h).expect("unimodular by construction")
    }

    /// Seeded generic element: rotation ∘ boost ∘ rotation with the
    /// boost rapidity drawn uniformly from `[0, max_rapidity]`.
    pub fn random(rng: &mut impl Rng, max_rapidity: f64) -> Self {
        fn axis(rng: &mut impl Rng) -> [f64; 3] {
            loop {
                let v = [
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                ];
                if v.iter().map(|x| x * x).sum::<f64>() > 1e-3 {
                    return v;
                }
            }
        }
        let (a1, t1) = (axis(rng), rng.random::<f64>() * std::f64::consts::TAU);
        let (a2, eta) = (axis(rng), rng.random::<f64>() * max_rapidity);
        let (a3, t2) = (axis(rng), rng.random::<f64>() * std::f64::consts::TAU);
        let r1 = Self::rotation(a1, t1).unwrap();
        let b = Self::boost(a2, eta).unwrap();
        let r2 = Self::rotation(a3, t2).unwrap();
        r1.compose(&b).compose(&r2)
    }

    pub fn sl2c(&self) -> &Matrix2<C64> {
        &self.sl2c
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.lorentz4
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { sl2c: self.sl2c * other.sl2c, lorentz4: self.lorentz4 * other.lorentz4 }
    }

    pub fn inverse(&self) -> Self {
        Self {
            sl2c: sl2_inverse(&self.sl2c),
            lorentz4: eta() * self.lorentz4.transpose() * eta(),
        }
    }

    pub fn apply(&self, p: &FourVector) -> FourVector {
        let v = self.lorentz4 * Vector4::new(p.0[0], p.0[1], p.0[2], p.0[3]);
        FourVector([v[0], v[1], v[2], v[3]])
    }

    /// Spinor factor `S(h*⁻¹) = (h†)⁻¹` acting on the chiral
    /// 2-component fiber.
    pub fn spinor_factor(&self) -> Matrix2<C64> {
        sl2_inverse(&self.sl2c.adjoint())
    }

    /// `‖δ(h₁)δ(h₂) − δ(h₁h₂)‖`, the covering-homomorphism defect.
    pub fn homomorphism_defect(&self, other: &Self) -> f64 {
        let composed = Self::from_sl2c(self.sl2c * other.sl2c).expect("product stays unimodular");
        (self.lorentz4 * other.lorentz4 - composed.lorentz4).norm()
    }
}

fn normalize3(axis: [f64; 3]) -> Result<[f64; 3]> {
    let n = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n < 1e-12 {
        return Err(Error::InvalidParameter("zero axis".into()));
    }
    Ok([axis[0] / n, axis[1] / n, axis[2] / n])
}

/// Element `(h, a)` of the semidirect product, multiplying as
/// `(h₁,a₁)(h₂,a₂) = (h₁h₂, a₁ + δ(h₁)a₂)`.
#[derive(Clone, Debug)]
pub struct PoincareElement {
    pub lorentz: LorentzElement,
    pub translation: FourVector,
}

impl PoincareElement {
    pub fn new(lorentz: LorentzElement, translation: FourVector) -> Self {
        Self { lorentz, translation }
    }

    pub fn identity() -> Self {
        Self { lorentz: LorentzElement::identity(), translation: FourVector::zero() }
    }

    pub fn pure_translation(a: FourVector) -> Self {
        Self { lorentz: LorentzElement::identity(), translation: a }
    }

    pub fn pure_lorentz(l: LorentzElement) -> Self {
        Self { lorentz: l, translation: FourVector::zero() }
    }
}

pub fn poincare_compose(g1: &PoincareElement, g2: &PoincareElement) -> PoincareElement {
    PoincareElement {
        lorentz: g1.lorentz.compose(&g2.lorentz),
        translation: g1.translation.add(&g1.lorentz.apply(&g2.translation)),
    }
}

/// `(h,a)⁻¹ = (h⁻¹, δ(h⁻¹)(−a))`.
pub fn poincare_inverse(g: &PoincareElement) -> PoincareElement {
    let inv = g.lorentz.inverse();
    let translation = inv.apply(&g.translation.neg());
    PoincareElement { lorentz: inv, translation }
}

/// Residuals of the dual (adjoint) action: form invariance
/// `|{Lx,Lp} − {x,p}|` and character duality
/// `|e^{i{p,L⁻¹x}} − e^{i{Lp,x}}|`.
#[derive(Clone, Copy, Debug)]
pub struct DualActionResiduals {
    pub form_invariance: f64,
    pub character_duality: f64,
}

pub fn dual_action_check(
    l: &LorentzElement,
    x: &FourVector,
    p: &FourVector,
) -> DualActionResiduals {
    let lx = l.apply(x);
    let lp = l.apply(p);
    let form_invariance = (minkowski_form(&lx, &lp) - minkowski_form(x, p)).abs();
    let linv_x = l.inverse().apply(x);
    let lhs = C64::from_polar(1.0, minkowski_form(p, &linv_x));
    let rhs = C64::from_polar(1.0, minkowski_form(&lp, x));
    DualActionResiduals { form_invariance, character_duality: (lhs - rhs).norm() }
}

/// `‖δ(h)p_ref − p_ref‖`: zero exactly on the little group of `p_ref`.
pub fn stabilizer_check(l: &LorentzElement, p_ref: &FourVector) -> f64 {
    l.apply(p_ref).dist(p_ref)
}

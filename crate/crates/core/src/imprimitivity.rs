//! Finite systems of imprimitivity for Z_n: clock/shift Weyl pairs,
//! projection valued measures, the covariance relation
//! `U_g E(S) U_g⁻¹ = E(g⁻¹S)`, homogeneity and multiplicity, unitary
//! transport, and the Stone–von Neumann intertwiner search.
//!
//! Conventions: `U = diag(1, ω, …, ω^{n−1})` with `ω = e^{2πi/n}`,
//! `V e_j = e_{j+1 mod n}`, which realizes `UV = e^{2πi/n} VU`. The
//! group acts on the base set `M = {0,…,n−1}` by right translation
//! `g·j = j − g mod n`, so `E(g⁻¹S)` is `E(S + g)`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{kron, null_space, polar_unitary, rank, ComplexMatrix, C64, ONE, ZERO};
use crate::tolerances as tol;

/// Clock-and-shift pair generating the Weyl relations for Z_n.
pub fn standard_weyl_pair(n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n ≥ 2, got {n}")));
    }
    let omega = |k: usize| C64::from_polar(1.0, TAU * k as f64 / n as f64);
    let clock = ComplexMatrix::diag(&(0..n).map(omega).collect::<Vec<_>>());
    let shift = ComplexMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { ONE } else { ZERO });
    Ok((clock, shift))
}

/// `max(‖UV − e^{2πi/n}VU‖_F, ‖Uⁿ − I‖_F, ‖Vⁿ − I‖_F)` plus unitarity.
pub fn weyl_relation_residual(u: &ComplexMatrix, v: &ComplexMatrix, n: usize) -> f64 {
    let omega = C64::from_polar(1.0, TAU / n as f64);
    let mut r = u.matmul(v).dist_fro(&v.matmul(u).scale(omega));
    let id = ComplexMatrix::identity(u.rows());
    let mut upow = id.clone();
    let mut vpow = id.clone();
    for _ in 0..n {
        upow = upow.matmul(u);
        vpow = vpow.matmul(v);
    }
    r = r.max(upow.dist_fro(&id)).max(vpow.dist_fro(&id));
    r.max(u.unitarity_residual()).max(v.unitarity_residual())
}

/// Projection valued measure over `M = {0,…,n−1}` in finite form: a
/// complete family of mutually orthogonal Hermitian idempotents.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Pvm {
    projections: Vec<ComplexMatrix>,
}

impl Pvm {
    pub fn new(projections: Vec<ComplexMatrix>) -> Result<Self> {
        if projections.is_empty() {
            return Err(Error::InvalidParameter("empty PVM".into()));
        }
        let dim = projections[0].rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (j, e) in projections.iter().enumerate() {
            if !e.is_square() || e.rows() != dim {
                return Err(Error::DimensionMismatch("PVM projections differ in size".into()));
            }
            let herm = e.herm_residual();
            let idem = e.matmul(e).dist_fro(e);
            if herm > tol::HERM || idem > tol::HERM {
                return Err(Error::InvalidParameter(format!(
                    "projection {j} fails Hermitian idempotence (herm {herm:.2e}, idem {idem:.2e})"
                )));
            }
            for (l, f) in projections.iter().enumerate() {
                if l != j && e.matmul(f).norm_fro() > tol::HERM {
                    return Err(Error::InvalidParameter(format!(
                        "projections {j} and {l} are not orthogonal"
                    )));
                }
            }
            sum = &sum + e;
        }
        if sum.dist_fro(&ComplexMatrix::identity(dim)) > tol::HERM {
            return Err(Error::InvalidParameter("PVM does not sum to the identity".into()));
        }
        Ok(Self { projections })
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projections[0].rows()
    }

    pub fn point(&self, j: usize) -> &ComplexMatrix {
        &self.projections[j]
    }

    /// `E(S) = Σ_{j∈S} E({j})`.
    pub fn set_projection(&self, s: &[usize]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for &j in s {
            out = &out + &self.projections[j];
        }
        out
    }
}

/// A Weyl system of imprimitivity: a unitary representation of Z_n
/// together with a PVM satisfying the covariance relation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeylSi {
    n: usize,
    #[serde(rename = "D")]
    dim: usize,
    #[serde(rename = "U")]
    u_rep: Vec<ComplexMatrix>,
    #[serde(rename = "E")]
    pvm: Vec<ComplexMatrix>,
}

impl WeylSi {
    pub fn new(u_rep: Vec<ComplexMatrix>, pvm: Pvm) -> Result<Self> {
        let n = u_rep.len();
        if n < 2 || pvm.len() != n {
            return Err(Error::InvalidParameter(
                "representation and PVM must share the base set Z_n".into(),
            ));
        }
        let dim = pvm.dim();
        for (g, u) in u_rep.iter().enumerate() {
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::DimensionMismatch(format!("U_{g} has the wrong size")));
            }
            let resid = u.unitarity_residual();
            if resid > tol::WEYL * 10.0 {
                return Err(Error::NotUnitary { residual: resid });
            }
        }
        Ok(Self { n, dim, u_rep, pvm: pvm.projections })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unitary(&self, g: usize) -> &ComplexMatrix {
        &self.u_rep[g % self.n]
    }

    pub fn pvm(&self) -> Pvm {
        Pvm { projections: self.pvm.clone() }
    }

    pub fn projection(&self, j: usize) -> &ComplexMatrix {
        &self.pvm[j % self.n]
    }

    /// Right-translation action `g·j = j − g mod n`.
    pub fn action(&self, g: usize, j: usize) -> usize {
        (j + self.n - g % self.n) % self.n
    }

    /// Inverse action `g⁻¹·j = j + g mod n`, the index appearing in the
    /// covariance relation.
    pub fn action_inv(&self, g: usize, j: usize) -> usize {
        (j + g) % self.n
    }
}

/// The canonical SI on `ℂⁿ ⊗ ℂᵐ`: blocks of rank `multiplicity`,
/// shifted by the regular representation (induced from the trivial
/// subgroup `{0}`, so the action on M is transitive).
pub fn canonical_si(n: usize, multiplicity: usize) -> Result<WeylSi> {
    if n < 2 || multiplicity == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n ≥ 2 and multiplicity ≥ 1, got n={n}, multiplicity={multiplicity}"
        )));
    }
    let id_m = ComplexMatrix::identity(multiplicity);
    let shift = ComplexMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { ONE } else { ZERO });
    let mut u_rep = Vec::with_capacity(n);
    let mut power = ComplexMatrix::identity(n);
    for _ in 0..n {
        u_rep.push(kron(&power, &id_m));
        power = power.matmul(&shift);
    }
    let projections = (0..n)
        .map(|j| kron(&ComplexMatrix::matrix_unit(n, j, j), &id_m))
        .collect();
    WeylSi::new(u_rep, Pvm::new(projections)?)
}

/// Max covariance defect `‖U_g E({j}) U_g⁻¹ − E(g⁻¹·{j})‖_F` over all
/// group elements and singletons.
pub fn verify_si(si: &WeylSi) -> f64 {
    let mut max: f64 = 0.0;
    for g in 0..si.n() {
        let u = si.unitary(g);
        let udag = u.dagger();
        for j in 0..si.n() {
            let lhs = u.matmul(si.projection(j)).matmul(&udag);
            let rhs = si.projection(si.action_inv(g, j));
            max = max.max(lhs.dist_fro(rhs));
        }
    }
    max
}

/// Point ranks, homogeneity and common multiplicity of a PVM.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityReport {
    pub ranks: Vec<usize>,
    pub homogeneous: bool,
    pub multiplicity: Option<usize>,
}

pub fn pvm_multiplicity(p: &Pvm) -> MultiplicityReport {
    let ranks: Vec<usize> = (0..p.len()).map(|j| rank(p.point(j), 1e-10)).collect();
    let homogeneous = ranks.windows(2).all(|w| w[0] == w[1]);
    let multiplicity = if homogeneous { Some(ranks[0]) } else { None };
    MultiplicityReport { ranks, homogeneous, multiplicity }
}

/// Conjugate both the representation and the PVM by a unitary; the
/// covariance residual is invariant.
pub fn transport_si(si: &WeylSi, g: &ComplexMatrix) -> Result<WeylSi> {
    if g.rows() != si.dim() || g.cols() != si.dim() {
        return Err(Error::DimensionMismatch("transport unitary has the wrong size".into()));
    }
    let resid = g.unitarity_residual();
    if resid > 1e-8 {
        return Err(Error::NotUnitary { residual: resid });
    }
    let gdag = g.dagger();
    let u_rep = (0..si.n())
        .map(|h| g.matmul(si.unitary(h)).matmul(&gdag))
        .collect();
    let projections = (0..si.n())
        .map(|j| g.matmul(si.projection(j)).matmul(&gdag))
        .collect();
    WeylSi::new(u_rep, Pvm::new(projections)?)
}

/// Unitary intertwiner between two irreducible Weyl pairs.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub g: ComplexMatrix,
    pub residual: f64,
    pub kernel_dim: usize,
}

/// Solve `gU_a = U_b g`, `gV_a = V_b g` through the kernel of the
/// stacked Sylvester operator, then unitarize the kernel vector by
/// polar decomposition. For irreducible pairs the kernel is
/// 1-dimensional (the scalar gauge).
pub fn find_intertwiner(
    a: &(ComplexMatrix, ComplexMatrix),
    b: &(ComplexMatrix, ComplexMatrix),
    tol_eq: f64,
) -> Result<Intertwiner> {
    let n = a.0.rows();
    if [&a.0, &a.1, &b.0, &b.1].iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::DimensionMismatch("pairs must share one dimension".into()));
    }
    let id = ComplexMatrix::identity(n);
    // Row-major vec: g·A ↦ (I ⊗ Aᵀ)vec(g), B·g ↦ (B ⊗ I)vec(g).
    let sylvester = |x: &ComplexMatrix, y: &ComplexMatrix| {
        &kron(&id, &x.transpose()) - &kron(y, &id)
    };
    let stacked = ComplexMatrix::vstack(&[&sylvester(&a.0, &b.0), &sylvester(&a.1, &b.1)]);
    let kernel = null_space(&stacked, tol_eq.max(1e-12));
    let kernel_dim = kernel.cols();
    if kernel_dim == 0 {
        return Err(Error::NotEquivalent);
    }
    let seed: Vec<C64> = (0..n * n).map(|r| kernel.at(r, 0)).collect();
    let g = polar_unitary(&ComplexMatrix::from_vec_row_major(n, &seed));
    let residual = g
        .matmul(&a.0)
        .dist_fro(&b.0.matmul(&g))
        .max(g.matmul(&a.1).dist_fro(&b.1.matmul(&g)));
    if residual > tol_eq {
        return Err(Error::NotEquivalent);
    }
    Ok(Intertwiner { g, residual, kernel_dim })
}

/// Orbits of the subgroup of Z_n generated by `generators`, acting on
/// `M = {0,…,n−1}` by translation; transitive ⇔ a single orbit.
pub fn action_orbits(n: usize, generators: &[usize]) -> Vec<Vec<usize>> {
    let step = generators
        .iter()
        .fold(n, |acc, &g| gcd(acc, g % n));
    let step = if step == 0 { n } else { step };
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut j = start;
        loop {
            seen[j] = true;
            orbit.push(j);
            j = (j + step) % n;
            if j == start {
                break;
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

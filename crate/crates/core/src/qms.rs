//! Lindblad generators and the uniformly continuous semigroups they
//! generate, in the Heisenberg picture and without a Hamiltonian term:
//!
//! `Θ(X) = −(λ/2) Σ_j (L†_j L_j X + X L†_j L_j − 2 L†_j X L_j)`
//!
//! so `Θ(1) = 0` and `T_t = e^{tΘ}` is CP and unital. The superoperator
//! form uses the global row-major vectorization,
//! `vec(AXB) = (A ⊗ Bᵀ)vec(X)`.

use serde::{Deserialize, Serialize};

use crate::channels::{kraus_from_choi, ChoiMatrix, QuantumChannel};
use crate::covariance::{check_covariance, GroupRep};
use crate::error::{Error, Result};
use crate::exec;
use crate::numerics::{expm, kron, null_space, ComplexMatrix, C64};
use crate::tolerances as tol;

/// Jump operators with one overall rate λ (the rate multiplies the
/// whole dissipator sum; per-jump rates can be absorbed by rescaling
/// individual jumps).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LindbladGenerator {
    dim: usize,
    lambda: f64,
    jumps: Vec<ComplexMatrix>,
}

impl LindbladGenerator {
    pub fn new(jumps: Vec<ComplexMatrix>, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("rate must be positive, got {lambda}")));
        }
        if jumps.is_empty() {
            return Err(Error::InvalidParameter("empty jump list".into()));
        }
        let d = jumps[0].rows();
        for l in &jumps {
            if !l.is_square() || l.rows() != d {
                return Err(Error::DimensionMismatch("jump operators must share one size".into()));
            }
        }
        Ok(Self { dim: d, lambda, jumps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }
}

/// `Θ(X)` evaluated directly from the jump operators.
pub fn lindblad_apply(gen: &LindbladGenerator, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = gen.dim;
    if x.rows() != d || x.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, generator dimension is {d}",
            x.rows(),
            x.cols()
        )));
    }
    let mut acc = ComplexMatrix::zeros(d, d);
    for l in &gen.jumps {
        let ldl = l.dagger().matmul(l);
        let term = &(&ldl.matmul(x) + &x.matmul(&ldl))
            - &l.dagger().matmul(x).matmul(l).scale(C64::new(2.0, 0.0));
        acc = &acc + &term;
    }
    Ok(acc.scale(C64::new(-0.5 * gen.lambda, 0.0)))
}

/// A linear map on operators, stored as its d²×d² matrix on row-major
/// vectorizations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn identity(dim: usize) -> Self {
        Self { dim, matrix: ComplexMatrix::identity(dim * dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch("operator/superoperator size mismatch".into()));
        }
        let v = self.matrix.apply_vec(&x.vec_row_major());
        Ok(ComplexMatrix::from_vec_row_major(self.dim, &v))
    }

    pub fn compose(&self, rhs: &Superoperator) -> Superoperator {
        Superoperator { dim: self.dim, matrix: self.matrix.matmul(&rhs.matrix) }
    }

    pub fn dist_fro(&self, other: &Superoperator) -> f64 {
        self.matrix.dist_fro(&other.matrix)
    }

    /// Choi matrix of the Schrödinger adjoint of this (Heisenberg)
    /// superoperator. Row-major vectorization is a Hilbert–Schmidt
    /// isometry, so the adjoint is the plain conjugate transpose.
    pub fn choi(&self) -> ChoiMatrix {
        let adj = self.matrix.dagger();
        let d = self.dim;
        ChoiMatrix::from_schrodinger_map(d, |e| {
            ComplexMatrix::from_vec_row_major(d, &adj.apply_vec(&e.vec_row_major()))
        })
    }
}

/// Matrix form `Θ̂` with `Θ̂ vec(X) = vec(Θ(X))`.
pub fn superop_matrix(gen: &LindbladGenerator) -> Superoperator {
    let d = gen.dim;
    let id = ComplexMatrix::identity(d);
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for l in &gen.jumps {
        let ldl = l.dagger().matmul(l);
        let term = &(&kron(&ldl, &id) + &kron(&id, &ldl.transpose()))
            - &kron(&l.dagger(), &l.transpose()).scale(C64::new(2.0, 0.0));
        acc = &acc + &term;
    }
    Superoperator { dim: d, matrix: acc.scale(C64::new(-0.5 * gen.lambda, 0.0)) }
}

/// `T̂_t = exp(t·Θ̂)`.
pub fn evolve(gen: &LindbladGenerator, t: f64) -> Result<Superoperator> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let theta = superop_matrix(gen);
    Ok(Superoperator {
        dim: gen.dim,
        matrix: expm(&theta.matrix.scale(C64::new(t, 0.0))),
    })
}

/// The evolved map as a Kraus channel, extracted from the Choi matrix
/// of `T̂_t` with the relaxed CP tolerance for exponentiation error.
pub fn evolved_channel(gen: &LindbladGenerator, t: f64) -> Result<QuantumChannel> {
    let choi = evolve(gen, t)?.choi();
    kraus_from_choi(&choi, -tol::CP_MIN_EIG_EVOLVED)
}

/// `‖T̂_{s+t} − T̂_s T̂_t‖_F`.
pub fn semigroup_residual(gen: &LindbladGenerator, s: f64, t: f64) -> Result<f64> {
    if s < 0.0 || t < 0.0 {
        return Err(Error::InvalidParameter("semigroup times must be nonnegative".into()));
    }
    let whole = evolve(gen, s + t)?;
    let split = evolve(gen, s)?.compose(&evolve(gen, t)?);
    Ok(whole.dist_fro(&split))
}

/// Kernel of `Θ̂`: the fixed-point space of the semigroup.
#[derive(Clone, Debug)]
pub struct FixedPointSpace {
    pub dimension: usize,
    pub basis: Vec<ComplexMatrix>,
    pub ergodic: bool,
}

impl FixedPointSpace {
    /// Orthogonal projector onto the fixed-point space in vec
    /// coordinates (the kernel basis is orthonormal).
    pub fn projector(&self, dim: usize) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(dim * dim, dim * dim);
        for b in &self.basis {
            let v = b.vec_row_major();
            for i in 0..dim * dim {
                for j in 0..dim * dim {
                    let add = v[i] * v[j].conj();
                    p.set(i, j, p.at(i, j) + add);
                }
            }
        }
        p
    }
}

/// Fixed points via the numerical kernel of `Θ̂`; ergodic ⇔ the kernel
/// is one-dimensional (the span of the identity).
pub fn fixed_point_space(gen: &LindbladGenerator, kernel_tol: f64) -> FixedPointSpace {
    let theta = superop_matrix(gen);
    let kernel = null_space(&theta.matrix, kernel_tol);
    let basis = (0..kernel.cols())
        .map(|j| {
            let v: Vec<C64> = (0..gen.dim * gen.dim).map(|i| kernel.at(i, j)).collect();
            ComplexMatrix::from_vec_row_major(gen.dim, &v)
        })
        .collect::<Vec<_>>();
    FixedPointSpace { dimension: kernel.cols(), basis, ergodic: kernel.cols() == 1 }
}

/// Covariance of the generator and of the evolved maps it produces.
#[derive(Clone, Debug, Serialize)]
pub struct QmsCovarianceReport {
    /// `max_g max_X ‖Θ(U_g X U†_g) − U_g Θ(X) U†_g‖_F`.
    pub generator_residual: f64,
    /// `max_t check_covariance(T_t, r)` over the sampled times.
    pub semigroup_residual: f64,
}

pub fn qms_covariance_check(
    gen: &LindbladGenerator,
    r: &GroupRep,
    times: &[f64],
) -> Result<QmsCovarianceReport> {
    if gen.dim != r.dim() {
        return Err(Error::DimensionMismatch("generator/representation dimension".into()));
    }
    let d = gen.dim;
    let per_g = exec::map_range(r.order(), |g| {
        let u = r.unitary(g);
        let udag = u.dagger();
        let mut max: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let x = ComplexMatrix::matrix_unit(d, i, j);
                let lhs = lindblad_apply(gen, &u.matmul(&x).matmul(&udag))?;
                let rhs = u.matmul(&lindblad_apply(gen, &x)?).matmul(&udag);
                max = max.max(lhs.dist_fro(&rhs));
            }
        }
        Ok(max)
    });
    let mut generator_residual: f64 = 0.0;
    for r in per_g {
        generator_residual = generator_residual.max(r?);
    }

    let per_t = exec::map_slice(times, |&t| {
        if t == 0.0 {
            return Ok(0.0);
        }
        check_covariance(&evolved_channel(gen, t)?, r)
    });
    let mut semigroup_residual: f64 = 0.0;
    for r in per_t {
        semigroup_residual = semigroup_residual.max(r?);
    }
    Ok(QmsCovarianceReport { generator_residual, semigroup_residual })
}

/// Conjugation orbit `{U†_g L U_g}` of a jump operator: the resulting
/// jump set is permuted (up to phases that cancel in `Θ`) by the group
/// action, so the generator built from it is covariant.
pub fn covariant_jump_set(l: &ComplexMatrix, r: &GroupRep) -> Vec<ComplexMatrix> {
    (0..r.order())
        .map(|g| {
            let u = r.unitary(g);
            u.dagger().matmul(l).matmul(u)
        })
        .collect()
}

//! Kronecker products, partial traces, Hermitian eigendecomposition,
//! matrix exponential, null spaces and seeded random operators.
//!
//! Dense decompositions (eigen, SVD, QR, exp) are delegated to nalgebra;
//! everything enters and leaves as [`ComplexMatrix`].

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{C64, ComplexMatrix, ZERO};
#[cfg(test)]
use super::matrix::ONE;
use crate::error::{Error, Result};
use crate::tolerances as tol;

fn to_na(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

fn from_na(m: &DMatrix<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Kronecker product with block structure `a[i,j]·b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.at(i, j);
            if aij == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, aij * b.at(k, l));
                }
            }
        }
    }
    out
}

/// Which tensor factor [`partial_trace`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of a `(dim_a·dim_b)`-square matrix over the discarded
/// factor, with the row-major index convention `(a, b) ↦ a·dim_b + b`.
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Keep,
) -> Result<ComplexMatrix> {
    let d = dim_a * dim_b;
    if m.rows() != d || m.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix does not factor as ({dim_a}·{dim_b})²",
            m.rows(),
            m.cols()
        )));
    }
    Ok(match keep {
        Keep::A => ComplexMatrix::from_fn(dim_a, dim_a, |a, a2| {
            (0..dim_b).map(|b| m.at(a * dim_b + b, a2 * dim_b + b)).sum()
        }),
        Keep::B => ComplexMatrix::from_fn(dim_b, dim_b, |b, b2| {
            (0..dim_a).map(|a| m.at(a * dim_b + b, a * dim_b + b2)).sum()
        }),
    })
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized before factorization; inputs farther than
/// `1e-10·max(1, ‖h‖_F)` from Hermitian are rejected. Eigenvalues come
/// back sorted descending with matching orthonormal eigenvector columns.
/// No ordering is guaranteed inside a degenerate cluster, so callers
/// must compare subspaces or reconstructed operators, never vector
/// lists.
pub fn herm_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch("herm_eig needs a square matrix".into()));
    }
    let resid = h.herm_residual();
    if resid > tol::HERM * h.norm_fro().max(1.0) {
        return Err(Error::NotHermitian { residual: resid });
    }
    let sym = h.symmetrize();
    let eig = to_na(&sym).symmetric_eigen();
    let n = h.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors =
        ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Matrix exponential by scaling-and-squaring with a Padé approximant.
///
/// Accurate to ~1e-10 relative for `‖m‖ ≤ 100`; the a-posteriori check
/// `expm(m)·expm(−m) ≈ I` holds to 1e-8 in that range.
pub fn expm(m: &ComplexMatrix) -> ComplexMatrix {
    assert!(m.is_square(), "expm needs a square matrix");
    from_na(&to_na(m).exp())
}

/// Seeded random isometry: an m×n matrix `W` with `W†W = I_n`, obtained
/// by QR-orthonormalizing Gaussian complex columns. Deterministic for a
/// fixed seed.
pub fn random_isometry(n: usize, m: usize, seed: u64) -> Result<ComplexMatrix> {
    if m < n {
        return Err(Error::InvalidParameter(format!(
            "isometry needs codomain at least as large as domain (m={m} < n={n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(m, n, &mut rng);
    let qr = to_na(&g).qr();
    Ok(from_na(&qr.q()))
}

/// Orthonormal basis of the (numerical) kernel: singular directions
/// with `σ ≤ tol·σ_max`. Returns an n×k matrix whose columns span the
/// kernel (k may be zero); for the zero matrix the full basis comes
/// back.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let n = m.cols();
    // Pad with zero rows so the SVD carries a full V factor.
    let padded = if m.rows() < n {
        ComplexMatrix::vstack(&[m, &ComplexMatrix::zeros(n - m.rows(), n)])
    } else {
        m.clone()
    };
    let svd = to_na(&padded).svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut kernel: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol * sigma_max)
        .map(|(i, s)| (*s, i))
        .collect();
    kernel.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    ComplexMatrix::from_fn(n, kernel.len(), |i, j| v_t[(kernel[j].1, i)].conj())
}

/// Numerical rank: singular values above `rel_tol·σ_max`.
pub fn rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let sv = to_na(m).svd(false, false).singular_values;
    let sigma_max = sv.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * sigma_max).count()
}

/// Unitary factor of the polar decomposition `m = W·P`.
pub fn polar_unitary(m: &ComplexMatrix) -> ComplexMatrix {
    let svd = to_na(m).svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    from_na(&(u * v_t))
}

/// Minimum-norm least-squares solution of `a·x = b` and its residual.
pub fn least_squares(a: &ComplexMatrix, b: &[C64]) -> (Vec<C64>, f64) {
    assert_eq!(a.rows(), b.len());
    let svd = to_na(a).svd(true, true);
    let rhs = DMatrix::from_column_slice(b.len(), 1, b);
    let x = svd.solve(&rhs, 1e-13).expect("SVD solve");
    let resid = (to_na(a) * &x - rhs).norm();
    (x.iter().cloned().collect(), resid)
}

/// Standard complex Gaussian matrix (entries re, im ~ N(0, 1/2)).
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let scale = 0.5f64.sqrt();
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    })
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    gaussian_matrix(d, d, rng).symmetrize()
}

/// Haar-like random unitary from the QR of a Gaussian matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let qr = to_na(&gaussian_matrix(d, d, rng)).qr();
    from_na(&qr.q())
}

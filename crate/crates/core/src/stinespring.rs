//! Dilation of CP unital maps through an explicit ancilla isometry,
//! the positive-definite kernel behind it, and the system–bath
//! embedding.
//!
//! The isometry is assembled directly from the canonically ordered
//! Kraus list (`V u = ⊕_j L_j u`, ancilla index innermost) rather than
//! through an abstract GNS construction; the kernel Gram matrix stays
//! available as the independent positivity cross-check. Tensor legs in
//! `T(X) = V†(X ⊗ 1_k)V` are ordered system first, ancilla second.

use serde::{Deserialize, Serialize};

use crate::channels::{kraus_from_choi, QuantumChannel};
use crate::error::{Error, Result};
use crate::exec;
use crate::numerics::{herm_eig, kron, rank, ComplexMatrix, C64, ZERO};
use crate::tolerances as tol;

/// One evaluation point `(X, Y, u)` of the dilation kernel.
#[derive(Clone, Debug)]
pub struct KernelSample {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub u: Vec<C64>,
}

/// Gram matrix `G[i,j] = ⟨u_i, Y†_i T(X†_i X_j) Y_j u_j⟩` of the kernel
/// induced by a channel; positive semidefinite exactly when the map is
/// CP.
pub fn kernel_gram(t: &QuantumChannel, samples: &[KernelSample]) -> Result<ComplexMatrix> {
    kernel_gram_map(t.dim(), |x| t.apply_heisenberg(x), samples)
}

/// [`kernel_gram`] for an arbitrary Heisenberg-picture map; used to
/// probe non-CP maps that admit no Kraus form.
pub fn kernel_gram_map(
    dim: usize,
    map: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix> + Sync,
    samples: &[KernelSample],
) -> Result<ComplexMatrix> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("empty sample list".into()));
    }
    for s in samples {
        if s.x.rows() != dim || s.x.cols() != dim || s.y.rows() != dim || s.y.cols() != dim
            || s.u.len() != dim
        {
            return Err(Error::DimensionMismatch(
                "kernel sample does not match channel dimension".into(),
            ));
        }
    }
    let n = samples.len();
    let entries = exec::map_range(n * n, |idx| {
        let (i, j) = (idx / n, idx % n);
        let si = &samples[i];
        let sj = &samples[j];
        let txx = map(&si.x.dagger().matmul(&sj.x))?;
        let m = si.y.dagger().matmul(&txx).matmul(&sj.y);
        let mu = m.apply_vec(&sj.u);
        Ok(si.u.iter().zip(&mu).map(|(a, b)| a.conj() * b).sum::<C64>())
    });
    let mut g = ComplexMatrix::zeros(n, n);
    for (idx, e) in entries.into_iter().enumerate() {
        g.set(idx / n, idx % n, e?);
    }
    Ok(g)
}

/// Minimum Gram eigenvalue over the matrix-unit sample family
/// `{(E_kl, I, e_m)}`; a CP map stays ≥ −1e−9 while a non-CP map such
/// as the transpose produces a strictly negative witness.
pub fn kernel_witness_min_eig(
    dim: usize,
    map: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix> + Sync,
) -> Result<f64> {
    let id = ComplexMatrix::identity(dim);
    let mut samples = Vec::with_capacity(dim * dim * dim);
    for k in 0..dim {
        for l in 0..dim {
            for m in 0..dim {
                let mut u = vec![ZERO; dim];
                u[m] = crate::numerics::ONE;
                samples.push(KernelSample {
                    x: ComplexMatrix::matrix_unit(dim, k, l),
                    y: id.clone(),
                    u,
                });
            }
        }
    }
    let g = kernel_gram_map(dim, map, &samples)?;
    let (vals, _) = herm_eig(&g)?;
    Ok(*vals.last().expect("non-empty spectrum"))
}

/// Explicit Stinespring dilation `T(X) = V†(X ⊗ 1_k)V`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DilationResult {
    pub ancilla_dim: usize,
    #[serde(rename = "isometry")]
    pub isometry_v: ComplexMatrix,
    pub residual: f64,
}

/// Canonically ordered Kraus list of a channel, re-extracted from its
/// Choi matrix (deterministic under the unitary gauge freedom).
pub fn canonical_kraus(t: &QuantumChannel) -> Result<QuantumChannel> {
    let choi = t.choi();
    kraus_from_choi(&choi, choi.default_truncation()?)
}

/// Stack a Kraus list into the dilation isometry, system leg first:
/// `V[(a·k + j), u] = L_j[a, u]`.
pub fn isometry_from_kraus(kraus: &[ComplexMatrix]) -> ComplexMatrix {
    let k = kraus.len();
    let d = kraus[0].rows();
    ComplexMatrix::from_fn(d * k, d, |row, u| kraus[row % k].at(row / k, u))
}

/// Dilate a CP unital channel; the ancilla dimension is the Choi rank.
pub fn dilate(t: &QuantumChannel) -> Result<DilationResult> {
    let choi = t.choi();
    let min_eig = choi.min_eigenvalue()?;
    if min_eig < tol::CP_MIN_EIG {
        return Err(Error::NotCp { min_eigenvalue: min_eig });
    }
    let unital = t.unitality_residual();
    if unital > tol::UNITAL {
        return Err(Error::NotUnital { residual: unital });
    }
    let canonical = kraus_from_choi(&choi, choi.default_truncation()?)?;
    let v = isometry_from_kraus(canonical.kraus());
    let k = canonical.kraus().len();
    let residual = reconstruction_residual(t, &v, k)?;
    Ok(DilationResult { ancilla_dim: k, isometry_v: v, residual })
}

fn reconstruction_residual(t: &QuantumChannel, v: &ComplexMatrix, k: usize) -> Result<f64> {
    let d = t.dim();
    let id_k = ComplexMatrix::identity(k);
    let residuals = exec::map_range(d * d, |idx| {
        let x = ComplexMatrix::matrix_unit(d, idx / d, idx % d);
        let lhs = t.apply_heisenberg(&x)?;
        let rhs = v.dagger().matmul(&kron(&x, &id_k)).matmul(v);
        Ok(lhs.dist_fro(&rhs))
    });
    let mut max: f64 = 0.0;
    for r in residuals {
        max = max.max(r?);
    }
    Ok(max)
}

/// Outcome of [`verify_dilation`]: the reconstruction residual plus the
/// totality surrogate — the span of `{(X⊗1)Vu}` over matrix units and
/// basis vectors must fill the dilated space of dimension `d·k`.
#[derive(Clone, Debug, Serialize)]
pub struct DilationCheck {
    pub residual: f64,
    pub isometry_residual: f64,
    pub totality_rank: usize,
    pub full_rank: usize,
}

pub fn verify_dilation(t: &QuantumChannel, dil: &DilationResult) -> Result<DilationCheck> {
    let d = t.dim();
    let k = dil.ancilla_dim;
    let v = &dil.isometry_v;
    if v.rows() != d * k || v.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "isometry is {}x{}, expected {}x{d}",
            v.rows(),
            v.cols(),
            d * k
        )));
    }
    let residual = reconstruction_residual(t, v, k)?;
    let isometry_residual = v.unitarity_residual();

    // Columns (E_ab ⊗ 1)V e_u, all a, b, u.
    let id_k = ComplexMatrix::identity(k);
    let mut span = ComplexMatrix::zeros(d * k, d * d * d);
    let mut col = 0;
    for a in 0..d {
        for b in 0..d {
            let xv = kron(&ComplexMatrix::matrix_unit(d, a, b), &id_k).matmul(v);
            for u in 0..d {
                for r in 0..d * k {
                    span.set(r, col, xv.at(r, u));
                }
                col += 1;
            }
        }
    }
    let totality_rank = rank(&span, 1e-10);
    Ok(DilationCheck { residual, isometry_residual, totality_rank, full_rank: d * k })
}

/// System–bath embedding `W(u ⊗ v) = ⊕_i ⟨f_i, v⟩ u`, a unitary from
/// `h₀ ⊗ H` onto the `dim H`-fold direct sum of `h₀`. The pairing index
/// runs over an orthonormal basis of the factor carrying `v`.
pub fn system_bath_embedding(
    u: &[C64],
    v: &[C64],
    basis_f: &[Vec<C64>],
) -> Result<Vec<C64>> {
    let nh = v.len();
    if basis_f.len() != nh || basis_f.iter().any(|f| f.len() != nh) {
        return Err(Error::DimensionMismatch(
            "basis must have dim(H) vectors of length dim(H)".into(),
        ));
    }
    let mut gram_residual: f64 = 0.0;
    for (i, fi) in basis_f.iter().enumerate() {
        for (j, fj) in basis_f.iter().enumerate() {
            let g: C64 = fi.iter().zip(fj).map(|(a, b)| a.conj() * b).sum();
            let expect = if i == j { crate::numerics::ONE } else { ZERO };
            gram_residual = gram_residual.max((g - expect).norm());
        }
    }
    if gram_residual > tol::ORTHONORMAL {
        return Err(Error::NotOrthonormal { residual: gram_residual });
    }
    let mut out = Vec::with_capacity(nh * u.len());
    for f in basis_f {
        let coeff: C64 = f.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        out.extend(u.iter().map(|x| coeff * x));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::random_unital_cp;
    use crate::numerics::{gaussian_matrix, random_isometry, ONE};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn basis_vec(d: usize, i: usize) -> Vec<C64> {
        let mut v = vec![ZERO; d];
        v[i] = ONE;
        v
    }

    #[test]
    fn kernel_gram_of_identity_is_vector_gram() {
        let t = QuantumChannel::identity(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples: Vec<KernelSample> = (0..6)
            .map(|_| KernelSample {
                x: gaussian_matrix(2, 2, &mut rng),
                y: gaussian_matrix(2, 2, &mut rng),
                u: gaussian_matrix(2, 1, &mut rng).data().to_vec(),
            })
            .collect();
        let g = kernel_gram(&t, &samples).unwrap();
        // Oracle: ⟨X_i Y_i u_i, X_j Y_j u_j⟩ directly.
        let vecs: Vec<Vec<C64>> = samples
            .iter()
            .map(|s| s.x.matmul(&s.y).apply_vec(&s.u))
            .collect();
        for i in 0..6 {
            for j in 0..6 {
                let expect: C64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a.conj() * b).sum();
                assert!((g.at(i, j) - expect).norm() < 1e-12);
            }
        }
        let (vals, _) = herm_eig(&g).unwrap();
        assert!(*vals.last().unwrap() > -1e-12);
    }

    #[test]
    fn kernel_gram_single_unital_sample() {
        let t = random_unital_cp(3, 2, 1).unwrap();
        let s = KernelSample {
            x: ComplexMatrix::identity(3),
            y: ComplexMatrix::identity(3),
            u: basis_vec(3, 0),
        };
        let g = kernel_gram(&t, &[s]).unwrap();
        assert!((g.at(0, 0) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kernel_gram_psd_for_random_cp() {
        let t = random_unital_cp(3, 4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let samples: Vec<KernelSample> = (0..20)
            .map(|_| KernelSample {
                x: gaussian_matrix(3, 3, &mut rng),
                y: gaussian_matrix(3, 3, &mut rng),
                u: gaussian_matrix(3, 1, &mut rng).data().to_vec(),
            })
            .collect();
        let g = kernel_gram(&t, &samples).unwrap();
        let (vals, _) = herm_eig(&g).unwrap();
        assert!(*vals.last().unwrap() >= -1e-9);
    }

    #[test]
    fn transpose_map_has_kernel_witness() {
        let min = kernel_witness_min_eig(2, |x| Ok(x.transpose())).unwrap();
        assert!(min < -1e-3);
        assert!((min + 1.0).abs() < 1e-10);
    }

    #[test]
    fn dilate_identity_channel() {
        let dil = dilate(&QuantumChannel::identity(3)).unwrap();
        assert_eq!(dil.ancilla_dim, 1);
        assert!(dil.isometry_v.dist_fro(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(dil.residual < 1e-12);
    }

    #[test]
    fn dilate_dephasing() {
        let dil = dilate(&QuantumChannel::dephasing_qubit()).unwrap();
        assert_eq!(dil.ancilla_dim, 2);
        assert!(dil.isometry_v.unitarity_residual() < 1e-12);
        assert!(dil.residual < 1e-12);
    }

    #[test]
    fn dilate_random_channel() {
        let t = random_unital_cp(3, 4, 13).unwrap();
        let dil = dilate(&t).unwrap();
        assert_eq!(dil.ancilla_dim, 4);
        assert!(dil.residual < 1e-10);
        let check = verify_dilation(&t, &dil).unwrap();
        assert!(check.residual < 1e-10);
        assert!(check.isometry_residual < 1e-12);
        assert_eq!(check.totality_rank, check.full_rank);
    }

    #[test]
    fn dilate_rejects_non_unital() {
        let t = QuantumChannel::from_kraus(vec![ComplexMatrix::identity(2).scale(c(2.0, 0.0))])
            .unwrap();
        assert!(matches!(dilate(&t), Err(Error::NotUnital { .. })));
    }

    #[test]
    fn wrong_isometry_has_large_residual() {
        let t = random_unital_cp(2, 2, 21).unwrap();
        let mut dil = dilate(&t).unwrap();
        dil.isometry_v = random_isometry(2, 4, 999).unwrap();
        let check = verify_dilation(&t, &dil).unwrap();
        assert!(check.residual > 0.1);
    }

    #[test]
    fn unitary_channel_totality_rank_is_d() {
        let t = random_unital_cp(3, 1, 4).unwrap();
        let dil = dilate(&t).unwrap();
        assert_eq!(dil.ancilla_dim, 1);
        let check = verify_dilation(&t, &dil).unwrap();
        assert_eq!(check.totality_rank, 3);
    }

    #[test]
    fn minimality_matches_choi_rank() {
        for (seed, d, k) in [(1u64, 2usize, 3usize), (2, 3, 2), (3, 4, 5)] {
            let t = random_unital_cp(d, k, seed).unwrap();
            let dil = dilate(&t).unwrap();
            let choi_rank = rank(t.choi().matrix(), 1e-10);
            assert_eq!(dil.ancilla_dim, choi_rank);
        }
    }

    #[test]
    fn embedding_basis_case() {
        // u = e₁ (of ℂ²), v = f₂ in a 3-dim bath: block 2 carries u.
        let u = basis_vec(2, 0);
        let basis: Vec<Vec<C64>> = (0..3).map(|i| basis_vec(3, i)).collect();
        let w = system_bath_embedding(&u, &basis[1], &basis).unwrap();
        assert_eq!(w.len(), 6);
        assert!((w[2] - ONE).norm() < 1e-15);
        let rest: f64 = w.iter().enumerate().filter(|(i, _)| *i != 2).map(|(_, z)| z.norm()).sum();
        assert!(rest < 1e-15);
    }

    #[test]
    fn embedding_is_isometric_and_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let u = gaussian_matrix(2, 1, &mut rng).data().to_vec();
        let v1 = gaussian_matrix(3, 1, &mut rng).data().to_vec();
        let v2 = gaussian_matrix(3, 1, &mut rng).data().to_vec();
        let basis: Vec<Vec<C64>> = {
            let q = crate::numerics::random_unitary(3, &mut rng);
            (0..3).map(|j| (0..3).map(|i| q.at(i, j)).collect()).collect()
        };
        let norm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let w1 = system_bath_embedding(&u, &v1, &basis).unwrap();
        assert!((norm(&w1) - norm(&u) * norm(&v1)).abs() < 1e-12);

        let vsum: Vec<C64> = v1.iter().zip(&v2).map(|(a, b)| a + b).collect();
        let wsum = system_bath_embedding(&u, &vsum, &basis).unwrap();
        let w2 = system_bath_embedding(&u, &v2, &basis).unwrap();
        for i in 0..wsum.len() {
            assert!((wsum[i] - (w1[i] + w2[i])).norm() < 1e-12);
        }
    }

    #[test]
    fn embedding_rejects_skew_basis() {
        let u = basis_vec(2, 0);
        let bad = vec![basis_vec(2, 0), vec![c(0.9, 0.0), c(0.1, 0.0)]];
        assert!(matches!(
            system_bath_embedding(&u, &basis_vec(2, 1), &bad),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn dilation_json_fields() {
        let dil = dilate(&QuantumChannel::identity(2)).unwrap();
        let s = serde_json::to_string(&dil).unwrap();
        assert!(s.contains("\"ancilla_dim\":1"));
        assert!(s.contains("\"isometry\":"));
        assert!(s.contains("\"residual\":"));
    }
}

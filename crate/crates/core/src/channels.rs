//! Completely positive unital maps in the Heisenberg picture, with
//! conversions among Kraus, Choi and composed forms.
//!
//! A channel is stored as its Kraus list `{L_j}` acting as
//! `T(X) = Σ_j L†_j X L_j`; the Schrödinger adjoint `Φ_S(ρ) = Σ_j L_j ρ L†_j`
//! is derived on demand. Channel equality is always judged by Choi
//! Frobenius distance — Kraus lists carry a unitary gauge freedom.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{herm_eig, random_isometry, ComplexMatrix, C64};
use crate::tolerances as tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    Heisenberg,
    Schrodinger,
}

/// A quantum channel as a finite Kraus family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantumChannel {
    dim: usize,
    picture: Picture,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    /// Heisenberg-picture channel from a Kraus list.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidParameter("empty Kraus list".into()));
        }
        let d = kraus[0].rows();
        for l in &kraus {
            if !l.is_square() || l.rows() != d {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, expected {d}x{d}",
                    l.rows(),
                    l.cols()
                )));
            }
        }
        Ok(Self { dim: d, picture: Picture::Heisenberg, kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self { dim: d, picture: Picture::Heisenberg, kraus: vec![ComplexMatrix::identity(d)] }
    }

    /// Qubit dephasing `{|0⟩⟨0|, |1⟩⟨1|}`.
    pub fn dephasing_qubit() -> Self {
        Self::from_kraus(vec![
            ComplexMatrix::matrix_unit(2, 0, 0),
            ComplexMatrix::matrix_unit(2, 1, 1),
        ])
        .unwrap()
    }

    /// Completely depolarizing qubit map `X ↦ tr(X)/2 · I`, Kraus
    /// `{I, X, Y, Z}/2`.
    pub fn depolarizing_qubit() -> Self {
        let half = C64::new(0.5, 0.0);
        Self::from_kraus(vec![
            ComplexMatrix::identity(2).scale(half),
            crate::numerics::pauli_x().scale(half),
            crate::numerics::pauli_y().scale(half),
            crate::numerics::pauli_z().scale(half),
        ])
        .unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `T(X) = Σ_j L†_j X L_j`.
    pub fn apply_heisenberg(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.picture != Picture::Heisenberg {
            return Err(Error::InvalidParameter(
                "apply_heisenberg on a Schrödinger-picture channel".into(),
            ));
        }
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, channel dimension is {}",
                x.rows(),
                x.cols(),
                self.dim
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for l in &self.kraus {
            out = &out + &l.dagger().matmul(x).matmul(l);
        }
        Ok(out)
    }

    /// Schrödinger adjoint `Φ_S(ρ) = Σ_j L_j ρ L†_j`.
    pub fn apply_schrodinger_adjoint(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch("state dimension mismatch".into()));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for l in &self.kraus {
            out = &out + &l.matmul(rho).matmul(&l.dagger());
        }
        Ok(out)
    }

    /// `‖Σ_j L†_j L_j − I‖_F`.
    pub fn unitality_residual(&self) -> f64 {
        let mut s = ComplexMatrix::zeros(self.dim, self.dim);
        for l in &self.kraus {
            s = &s + &l.dagger().matmul(l);
        }
        s.dist_fro(&ComplexMatrix::identity(self.dim))
    }

    /// Composition `(t1 ∘ t2)(X) = t1(t2(X))`, Kraus set of pairwise
    /// products.
    pub fn compose(&self, inner: &QuantumChannel) -> Result<QuantumChannel> {
        if self.dim != inner.dim {
            return Err(Error::DimensionMismatch(format!(
                "composing dim {} with dim {}",
                self.dim, inner.dim
            )));
        }
        if self.picture != inner.picture {
            return Err(Error::InvalidParameter("composing mixed pictures".into()));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for l in &self.kraus {
            for m in &inner.kraus {
                kraus.push(m.matmul(l));
            }
        }
        QuantumChannel::from_kraus(kraus)
    }

    pub fn choi(&self) -> ChoiMatrix {
        ChoiMatrix::from_schrodinger_map(self.dim, |e| {
            self.apply_schrodinger_adjoint(e).expect("dims fixed")
        })
    }
}

/// Random unital CP map: a Haar-ish isometry `V: ℂᵈ → ℂᵈ ⊗ ℂᵏ` sliced
/// into `k` Kraus blocks, so `Σ L†_j L_j = V†V = I` by construction.
pub fn random_unital_cp(d: usize, k: usize, seed: u64) -> Result<QuantumChannel> {
    if d == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "need d ≥ 1 and k ≥ 1, got d={d}, k={k}"
        )));
    }
    let v = random_isometry(d, d * k, seed)?;
    // System leg first: row (a, j) of V sits at a·k + j.
    let kraus = (0..k)
        .map(|j| ComplexMatrix::from_fn(d, d, |a, u| v.at(a * k + j, u)))
        .collect();
    QuantumChannel::from_kraus(kraus)
}

/// Choi matrix `C = Σ_ij E_ij ⊗ Φ_S(E_ij)` of the Schrödinger adjoint,
/// so that PSD ⇔ the map is CP under the global row-major reshuffle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// Assemble the Choi matrix of an arbitrary linear map given in the
    /// Schrödinger picture (`phi_s` receives matrix units).
    pub fn from_schrodinger_map(
        d: usize,
        mut phi_s: impl FnMut(&ComplexMatrix) -> ComplexMatrix,
    ) -> Self {
        let mut c = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let block = phi_s(&ComplexMatrix::matrix_unit(d, i, j));
                for a in 0..d {
                    for b in 0..d {
                        c.set(i * d + a, j * d + b, block.at(a, b));
                    }
                }
            }
        }
        Self { dim: d, matrix: c }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(herm_eig(&self.matrix)?.0)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let vals = self.eigenvalues()?;
        Ok(*vals.last().expect("non-empty spectrum"))
    }

    pub fn distance(&self, other: &ChoiMatrix) -> f64 {
        self.matrix.dist_fro(&other.matrix)
    }

    /// Default Kraus truncation threshold, `1e-12·λ_max`.
    pub fn default_truncation(&self) -> Result<f64> {
        let vals = self.eigenvalues()?;
        Ok(tol::KRAUS_TRUNCATION_REL * vals[0].max(0.0))
    }
}

/// Extract a canonically ordered Kraus list from a PSD Choi matrix.
///
/// Eigenpairs with `λ > tol` become `√λ · reshape(v)`; ordering is by
/// descending eigenvalue, ties broken lexicographically on the reshaped
/// matrix after normalizing its first nonzero entry to be real
/// positive. The tie-break pins the output despite the unitary mixing
/// freedom of degenerate Choi spectra.
pub fn kraus_from_choi(c: &ChoiMatrix, tol_cut: f64) -> Result<QuantumChannel> {
    let d = c.dim;
    let (vals, vecs) = herm_eig(&c.matrix)?;
    let min_eig = *vals.last().expect("non-empty spectrum");
    if min_eig < -tol_cut {
        return Err(Error::NotCp { min_eigenvalue: min_eig });
    }
    let lambda_max = vals[0].max(0.0);

    struct Candidate {
        lambda: f64,
        normalized: ComplexMatrix,
    }
    let mut cands = Vec::new();
    for (idx, &lambda) in vals.iter().enumerate() {
        if lambda <= tol_cut {
            continue;
        }
        let w: Vec<C64> = (0..d * d).map(|r| vecs.at(r, idx)).collect();
        // Column i of the Kraus operator is block i of the eigenvector.
        let m = ComplexMatrix::from_vec_row_major(d, &w).transpose();
        cands.push(Candidate { lambda, normalized: phase_normalize(&m) });
    }
    if cands.is_empty() {
        return Err(Error::InvalidParameter(
            "Choi matrix has no eigenvalue above the truncation threshold".into(),
        ));
    }

    // Stable descending order is already given; re-sort degenerate
    // clusters lexicographically.
    let cluster_tol = tol::HERM * lambda_max.max(1.0);
    let mut start = 0;
    while start < cands.len() {
        let mut end = start + 1;
        while end < cands.len() && (cands[start].lambda - cands[end].lambda).abs() <= cluster_tol {
            end += 1;
        }
        cands[start..end].sort_by(|a, b| lex_cmp(&a.normalized, &b.normalized));
        start = end;
    }

    let kraus = cands
        .iter()
        .map(|c| c.normalized.scale(C64::new(c.lambda.sqrt(), 0.0)))
        .collect();
    QuantumChannel::from_kraus(kraus)
}

/// Rotate the global phase so the first entry above noise is real
/// positive.
fn phase_normalize(m: &ComplexMatrix) -> ComplexMatrix {
    let cutoff = 1e-12 * m.max_abs();
    for z in m.data() {
        if z.norm() > cutoff {
            return m.scale(z.conj() / z.norm());
        }
    }
    m.clone()
}

fn lex_cmp(a: &ComplexMatrix, b: &ComplexMatrix) -> std::cmp::Ordering {
    for (x, y) in a.data().iter().zip(b.data()) {
        match x.re.partial_cmp(&y.re).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
        match x.im.partial_cmp(&y.im).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Findings of [`validate_channel`]; the booleans interpret the
/// residuals at the crate tolerances.
#[derive(Clone, Debug, Serialize)]
pub struct ChannelReport {
    pub cp: bool,
    pub unital: bool,
    pub trace_preserving_adjoint: bool,
    pub choi_min_eigenvalue: f64,
    pub unitality_residual: f64,
    pub adjoint_trace_residual: f64,
}

/// Check complete positivity (Choi PSD), unitality `T(1) = 1` and trace
/// preservation of the Schrödinger adjoint.
pub fn validate_channel(t: &QuantumChannel) -> Result<ChannelReport> {
    let choi_min = t.choi().min_eigenvalue()?;
    let id = ComplexMatrix::identity(t.dim());
    let unitality_residual = t.apply_heisenberg(&id)?.dist_fro(&id);
    // Adjoint trace preservation ⇔ Σ L†L = I, computed on its own path.
    let adjoint_trace_residual = t.unitality_residual();
    Ok(ChannelReport {
        cp: choi_min >= tol::CP_MIN_EIG,
        unital: unitality_residual < tol::UNITAL,
        trace_preserving_adjoint: adjoint_trace_residual < tol::UNITAL,
        choi_min_eigenvalue: choi_min,
        unitality_residual,
        adjoint_trace_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{gaussian_matrix, pauli_x, random_hermitian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn apply_identity_channel() {
        let t = QuantumChannel::identity(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = gaussian_matrix(2, 2, &mut rng);
        assert!(t.apply_heisenberg(&x).unwrap().dist_fro(&x) < 1e-15);
    }

    #[test]
    fn unital_channel_fixes_identity() {
        let t = random_unital_cp(3, 4, 7).unwrap();
        let id = ComplexMatrix::identity(3);
        assert!(t.apply_heisenberg(&id).unwrap().dist_fro(&id) < 1e-12);
    }

    #[test]
    fn dephasing_kills_sigma_x() {
        let t = QuantumChannel::dephasing_qubit();
        let out = t.apply_heisenberg(&pauli_x()).unwrap();
        assert!(out.norm_fro() < 1e-15);
    }

    #[test]
    fn apply_preserves_hermiticity() {
        let t = random_unital_cp(3, 2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let x = gaussian_matrix(3, 3, &mut rng);
            let lhs = t.apply_heisenberg(&x).unwrap().dagger();
            let rhs = t.apply_heisenberg(&x.dagger()).unwrap();
            assert!(lhs.dist_fro(&rhs) < 1e-12);
        }
    }

    #[test]
    fn choi_of_identity_channel() {
        let choi = QuantumChannel::identity(2).choi();
        assert!((choi.matrix().trace() - c(2.0, 0.0)).norm() < 1e-14);
        let vals = choi.eigenvalues().unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-12);
        assert!(vals[1].abs() < 1e-12); // rank 1
    }

    #[test]
    fn choi_of_depolarizing_is_half_identity() {
        let choi = QuantumChannel::depolarizing_qubit().choi();
        // Oracle: direct summation Σ E_ii ⊗ I/2 = I₄/2.
        let expect = ComplexMatrix::identity(4).scale(c(0.5, 0.0));
        assert!(choi.matrix().dist_fro(&expect) < 1e-12);
    }

    #[test]
    fn random_cp_choi_is_psd() {
        for seed in 0..5 {
            let t = random_unital_cp(3, 4, seed).unwrap();
            assert!(t.choi().min_eigenvalue().unwrap() >= -1e-10);
        }
    }

    #[test]
    fn kraus_from_choi_identity() {
        let choi = QuantumChannel::identity(2).choi();
        let t = kraus_from_choi(&choi, choi.default_truncation().unwrap()).unwrap();
        assert_eq!(t.kraus().len(), 1);
        assert!(t.kraus()[0].dist_fro(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn kraus_from_choi_roundtrip_dephasing() {
        let choi = QuantumChannel::dephasing_qubit().choi();
        let back = kraus_from_choi(&choi, choi.default_truncation().unwrap()).unwrap();
        assert_eq!(back.kraus().len(), 2);
        assert!(back.choi().distance(&choi) < 1e-12);
    }

    #[test]
    fn negative_choi_rejected() {
        let choi = ChoiMatrix {
            dim: 2,
            matrix: ComplexMatrix::diag(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-0.1, 0.0)]),
        };
        assert!(matches!(
            kraus_from_choi(&choi, 1e-10),
            Err(Error::NotCp { .. })
        ));
    }

    #[test]
    fn roundtrip_distance_over_dims() {
        let mut seed = 0;
        for d in [2usize, 3, 4] {
            for k in 1..=d {
                seed += 1;
                let t = random_unital_cp(d, k, seed).unwrap();
                let choi = t.choi();
                let back = kraus_from_choi(&choi, choi.default_truncation().unwrap()).unwrap();
                assert!(back.choi().distance(&choi) < 1e-9);
                // Unitality survives the roundtrip.
                assert!(back.unitality_residual() < 1e-9);
            }
        }
    }

    #[test]
    fn transpose_map_choi_has_negative_eigenvalue() {
        let choi = ChoiMatrix::from_schrodinger_map(2, |e| e.transpose());
        let min = choi.min_eigenvalue().unwrap();
        assert!((min + 1.0).abs() < 1e-12);
    }

    #[test]
    fn validate_reports() {
        let rep = validate_channel(&QuantumChannel::identity(2)).unwrap();
        assert!(rep.cp && rep.unital && rep.trace_preserving_adjoint);

        let bloated = QuantumChannel::from_kraus(vec![
            ComplexMatrix::identity(2).scale(c(2.0, 0.0)),
        ])
        .unwrap();
        let rep = validate_channel(&bloated).unwrap();
        assert!(rep.cp && !rep.unital);
        assert!((rep.adjoint_trace_residual - 3.0 * 2.0_f64.sqrt()).abs() < 1e-12);

        let rep = validate_channel(&random_unital_cp(2, 3, 11).unwrap()).unwrap();
        assert!(rep.cp && rep.unital && rep.trace_preserving_adjoint);
    }

    #[test]
    fn compose_with_identity() {
        let t = random_unital_cp(2, 2, 3).unwrap();
        let id = QuantumChannel::identity(2);
        let composed = id.compose(&t).unwrap();
        assert!(composed.choi().distance(&t.choi()) < 1e-12);
    }

    #[test]
    fn compose_matches_sequential_application() {
        let t1 = random_unital_cp(3, 2, 8).unwrap();
        let t2 = random_unital_cp(3, 3, 9).unwrap();
        let composed = t1.compose(&t2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_hermitian(3, &mut rng);
        let lhs = composed.apply_heisenberg(&x).unwrap();
        let rhs = t1
            .apply_heisenberg(&t2.apply_heisenberg(&x).unwrap())
            .unwrap();
        assert!(lhs.dist_fro(&rhs) < 1e-12);
        assert!(composed.unitality_residual() < 1e-12);
    }

    #[test]
    fn dephasing_compose_idempotent() {
        let deph = QuantumChannel::dephasing_qubit();
        let twice = deph.compose(&deph).unwrap();
        assert!(twice.choi().distance(&deph.choi()) < 1e-14);
    }

    #[test]
    fn random_unital_cp_cases() {
        let t = random_unital_cp(2, 1, 5).unwrap();
        assert_eq!(t.kraus().len(), 1);
        assert!(t.kraus()[0].unitarity_residual() < 1e-12);

        assert_eq!(
            random_unital_cp(2, 3, 5).unwrap().kraus()[0],
            random_unital_cp(2, 3, 5).unwrap().kraus()[0]
        );
        assert!(random_unital_cp(2, 0, 5).is_err());
    }

    #[test]
    fn channel_json_wire_format() {
        let t = QuantumChannel::identity(2);
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with(r#"{"dim":2,"picture":"heisenberg","kraus":"#));
        let back: QuantumChannel = serde_json::from_str(&s).unwrap();
        assert_eq!(back.dim(), 2);
        assert!(back.choi().distance(&t.choi()) < 1e-15);
    }
}

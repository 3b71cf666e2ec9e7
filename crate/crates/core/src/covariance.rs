//! Group-covariant channels: finite (projective) unitary
//! representations, twirling, covariance certification, and the
//! covariant-dilation construction that lifts a group action to the
//! Stinespring ancilla.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::exec;
use crate::numerics::{
    kron, least_squares, polar_unitary, ComplexMatrix, C64, ONE,
};
use crate::stinespring::{canonical_kraus, isometry_from_kraus, DilationResult};
use crate::tolerances as tol;

/// A finite unitary representation `g ↦ U_g`, possibly projective:
/// `U_g U_h = ω(g,h) U_{gh}` with a recorded 2-cocycle `ω` (identically
/// 1 for ordinary representations). Group structure is carried by an
/// explicit Cayley table with the identity at index 0.
#[derive(Clone, Debug)]
pub struct GroupRep {
    order: usize,
    dim: usize,
    unitaries: Vec<ComplexMatrix>,
    mult: Vec<Vec<usize>>,
    phases: Option<Vec<Vec<C64>>>,
}

impl GroupRep {
    pub fn new(
        unitaries: Vec<ComplexMatrix>,
        mult: Vec<Vec<usize>>,
        phases: Option<Vec<Vec<C64>>>,
    ) -> Result<Self> {
        Self::with_rep_tolerance(unitaries, mult, phases, tol::UNITAL)
    }

    /// Like [`GroupRep::new`] with a caller-chosen ceiling on the
    /// representation residual (numerically constructed ancilla
    /// representations sit above machine precision).
    pub fn with_rep_tolerance(
        unitaries: Vec<ComplexMatrix>,
        mult: Vec<Vec<usize>>,
        phases: Option<Vec<Vec<C64>>>,
        rep_tol: f64,
    ) -> Result<Self> {
        let order = unitaries.len();
        if order == 0 {
            return Err(Error::InvalidParameter("empty representation".into()));
        }
        if mult.len() != order || mult.iter().any(|row| row.len() != order) {
            return Err(Error::InvalidParameter("Cayley table shape mismatch".into()));
        }
        let dim = unitaries[0].rows();
        for u in &unitaries {
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::DimensionMismatch("representation matrices differ".into()));
            }
            let resid = u.unitarity_residual();
            if resid > 1e-10 {
                return Err(Error::NotUnitary { residual: resid });
            }
        }
        for g in 0..order {
            if mult[0][g] != g || mult[g][0] != g {
                return Err(Error::InvalidParameter("identity must sit at index 0".into()));
            }
        }
        let rep = Self { order, dim, unitaries, mult, phases };
        let resid = rep.rep_residual();
        if resid > rep_tol {
            return Err(Error::InvalidParameter(format!(
                "not a (projective) representation: residual {resid:.3e}"
            )));
        }
        Ok(rep)
    }

    /// Ordinary cyclic representation `{I, u, u², …, u^{n−1}}`; `u` must
    /// close up, `uⁿ = I`.
    pub fn cyclic(u: ComplexMatrix, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("order must be positive".into()));
        }
        let mut unitaries = Vec::with_capacity(n);
        let mut pow = ComplexMatrix::identity(u.rows());
        for _ in 0..n {
            unitaries.push(pow.clone());
            pow = pow.matmul(&u);
        }
        let mult = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        Self::new(unitaries, mult, None)
    }

    /// Projective Pauli representation of Z₂×Z₂ on a qubit:
    /// `U_(a,b) = XᵃZᵇ`, cocycle `ω((a,b),(c,d)) = (−1)^{bc}`.
    pub fn pauli_qubit() -> Self {
        let x = crate::numerics::pauli_x();
        let z = crate::numerics::pauli_z();
        let elems = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
        let unitaries = elems
            .iter()
            .map(|&(a, b)| {
                let mut m = ComplexMatrix::identity(2);
                if a == 1 {
                    m = m.matmul(&x);
                }
                if b == 1 {
                    m = m.matmul(&z);
                }
                m
            })
            .collect();
        let idx = |a: usize, b: usize| 2 * a + b;
        let mut mult = vec![vec![0; 4]; 4];
        let mut phases = vec![vec![ONE; 4]; 4];
        for (g, &(a, b)) in elems.iter().enumerate() {
            for (h, &(c, d)) in elems.iter().enumerate() {
                mult[g][h] = idx((a + c) % 2, (b + d) % 2);
                if b * c % 2 == 1 {
                    phases[g][h] = -ONE;
                }
            }
        }
        Self::new(unitaries, mult, Some(phases)).expect("Pauli table is consistent")
    }

    /// Projective clock-shift (Weyl–Heisenberg) representation of
    /// Zₙ×Zₙ on ℂⁿ: `U_(a,b) = VᵃUᵇ` with cocycle `ω^{bc}`.
    pub fn weyl_heisenberg(n: usize) -> Result<Self> {
        let (clock, shift) = crate::imprimitivity::standard_weyl_pair(n)?;
        let order = n * n;
        let mut unitaries = Vec::with_capacity(order);
        for a in 0..n {
            for b in 0..n {
                let mut m = ComplexMatrix::identity(n);
                for _ in 0..a {
                    m = m.matmul(&shift);
                }
                for _ in 0..b {
                    m = m.matmul(&clock);
                }
                unitaries.push(m);
            }
        }
        let idx = |a: usize, b: usize| a * n + b;
        let omega = C64::from_polar(1.0, std::f64::consts::TAU / n as f64);
        let mut mult = vec![vec![0; order]; order];
        let mut phases = vec![vec![ONE; order]; order];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        mult[idx(a, b)][idx(c, d)] = idx((a + c) % n, (b + d) % n);
                        phases[idx(a, b)][idx(c, d)] = omega.powu((b * c) as u32);
                    }
                }
            }
        }
        Self::new(unitaries, mult, Some(phases))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unitary(&self, g: usize) -> &ComplexMatrix {
        &self.unitaries[g]
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn product(&self, g: usize, h: usize) -> usize {
        self.mult[g][h]
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn phases(&self) -> Option<&Vec<Vec<C64>>> {
        self.phases.as_ref()
    }

    /// `max_{g,h} ‖U_g U_h − ω(g,h) U_{gh}‖_F`.
    pub fn rep_residual(&self) -> f64 {
        let mut max: f64 = 0.0;
        for g in 0..self.order {
            for h in 0..self.order {
                let omega = self
                    .phases
                    .as_ref()
                    .map_or(ONE, |p| p[g][h]);
                let lhs = self.unitaries[g].matmul(&self.unitaries[h]);
                let rhs = self.unitaries[self.mult[g][h]].scale(omega);
                max = max.max(lhs.dist_fro(&rhs));
            }
        }
        max
    }
}

/// Wire format `{"order": n, "unitaries": [...], "phases": table?}`;
/// the Cayley table is reconstructed on load by matching products
/// against the listed unitaries.
#[derive(Serialize, Deserialize)]
struct GroupRepJson {
    order: usize,
    unitaries: Vec<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phases: Option<Vec<Vec<[f64; 2]>>>,
}

impl Serialize for GroupRep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepJson {
            order: self.order,
            unitaries: self.unitaries.clone(),
            phases: self
                .phases
                .as_ref()
                .map(|p| p.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupRep {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = GroupRepJson::deserialize(deserializer)?;
        if raw.unitaries.len() != raw.order {
            return Err(D::Error::custom("order disagrees with the unitary list"));
        }
        let phases = raw.phases.map(|p| {
            p.iter()
                .map(|row| row.iter().map(|z| C64::new(z[0], z[1])).collect())
                .collect::<Vec<Vec<C64>>>()
        });
        let mult = infer_mult_table(&raw.unitaries, phases.as_ref())
            .map_err(D::Error::custom)?;
        GroupRep::new(raw.unitaries, mult, phases).map_err(D::Error::custom)
    }
}

fn infer_mult_table(
    unitaries: &[ComplexMatrix],
    phases: Option<&Vec<Vec<C64>>>,
) -> Result<Vec<Vec<usize>>> {
    let order = unitaries.len();
    let dim = unitaries[0].rows() as f64;
    let mut mult = vec![vec![0usize; order]; order];
    for g in 0..order {
        for h in 0..order {
            let p = unitaries[g].matmul(&unitaries[h]);
            let omega = phases.map_or(ONE, |t| t[g][h]);
            let target = p.scale(omega.conj());
            let (best, score) = (0..order)
                .map(|k| (k, unitaries[k].dagger().matmul(&target).trace().norm()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .expect("non-empty");
            if score < 0.99 * dim {
                return Err(Error::InvalidParameter(
                    "cannot reconstruct the group table from the unitary list".into(),
                ));
            }
            mult[g][h] = best;
        }
    }
    Ok(mult)
}

/// Group average `T'(X) = |G|⁻¹ Σ_g U†_g T(U_g X U†_g) U_g`, realized on
/// Kraus operators as the enlarged family `{U†_g L_j U_g/√|G|}`. The
/// output is covariant, CP and unital whenever the input channel is CP
/// and unital.
pub fn twirl(t: &QuantumChannel, r: &GroupRep) -> Result<QuantumChannel> {
    if t.dim() != r.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel dim {} vs representation dim {}",
            t.dim(),
            r.dim()
        )));
    }
    let scale = C64::new(1.0 / (r.order() as f64).sqrt(), 0.0);
    let kraus = exec::map_range(r.order() * t.kraus().len(), |idx| {
        let g = idx / t.kraus().len();
        let j = idx % t.kraus().len();
        let u = r.unitary(g);
        u.dagger().matmul(&t.kraus()[j]).matmul(u).scale(scale)
    });
    QuantumChannel::from_kraus(kraus)
}

/// `max_g max_X ‖T(U_g X U†_g) − U_g T(X) U†_g‖_F` over matrix units.
pub fn check_covariance(t: &QuantumChannel, r: &GroupRep) -> Result<f64> {
    if t.dim() != r.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel dim {} vs representation dim {}",
            t.dim(),
            r.dim()
        )));
    }
    let d = t.dim();
    let per_g = exec::map_range(r.order(), |g| {
        let u = r.unitary(g);
        let udag = u.dagger();
        let mut max: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let x = ComplexMatrix::matrix_unit(d, i, j);
                let lhs = t.apply_heisenberg(&u.matmul(&x).matmul(&udag))?;
                let rhs = u.matmul(&t.apply_heisenberg(&x)?).matmul(&udag);
                max = max.max(lhs.dist_fro(&rhs));
            }
        }
        Ok(max)
    });
    let mut max: f64 = 0.0;
    for r in per_g {
        max = max.max(r?);
    }
    Ok(max)
}

/// A dilation whose isometry intertwines the system representation with
/// a (generally projective) ancilla representation:
/// `V U_g = (U_g ⊗ u_g) V`.
#[derive(Clone, Debug)]
pub struct CovariantDilation {
    pub dilation: DilationResult,
    pub ancilla_rep: GroupRep,
    /// Kraus-mixing matrices `m(g)` with `L_i U_g = Σ_j m(g)_{ij} U_g L_j`.
    pub mixing: Vec<ComplexMatrix>,
    /// `max_g ‖V U_g − (U_g ⊗ u_g)V‖_F`.
    pub residual: f64,
    /// `max_{g,h} ‖m(g)m(h) − ω(g,h)·m(gh)‖_F` with the recorded phases.
    pub cocycle_residual: f64,
}

/// Dilate a covariant channel and solve for the ancilla representation
/// in the Kraus-mixing picture, unitarizing each solution by polar
/// decomposition. The mixing solve is least-squares with the minimum
/// Frobenius-norm solution on rank-deficient systems.
pub fn covariant_dilation(t: &QuantumChannel, r: &GroupRep) -> Result<CovariantDilation> {
    let pre = check_covariance(t, r)?;
    if pre > tol::COVARIANCE_PRE {
        return Err(Error::NotCovariant { residual: pre });
    }
    let canonical = canonical_kraus(t)?;
    let kraus = canonical.kraus();
    let k = kraus.len();
    let d = t.dim();
    let v = isometry_from_kraus(kraus);

    let mixing_results = exec::map_range(r.order(), |g| {
        let u = r.unitary(g);
        // Columns of the design matrix: vec(U_g L_j).
        let mut a = ComplexMatrix::zeros(d * d, k);
        for j in 0..k {
            let col = u.matmul(&kraus[j]);
            for (row, z) in col.vec_row_major().into_iter().enumerate() {
                a.set(row, j, z);
            }
        }
        let mut m = ComplexMatrix::zeros(k, k);
        let mut worst = 0.0f64;
        for i in 0..k {
            let b = kraus[i].matmul(u).vec_row_major();
            let (x, resid) = least_squares(&a, &b);
            let bnorm = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(resid / bnorm.max(1e-300));
            for j in 0..k {
                m.set(i, j, x[j]);
            }
        }
        (m, worst)
    });

    let mut mixing = Vec::with_capacity(r.order());
    for (m, worst) in mixing_results {
        if worst > 1e-6 {
            return Err(Error::NoAncillaRep { residual: worst });
        }
        mixing.push(m);
    }
    let ancilla: Vec<ComplexMatrix> = mixing.iter().map(polar_unitary).collect();

    let residual = {
        let per_g = exec::map_range(r.order(), |g| {
            let lhs = v.matmul(r.unitary(g));
            let rhs = kron(r.unitary(g), &ancilla[g]).matmul(&v);
            lhs.dist_fro(&rhs)
        });
        per_g.into_iter().fold(0.0f64, f64::max)
    };

    // Record the ancilla 2-cocycle from normalized trace ratios.
    let order = r.order();
    let mut phases = vec![vec![ONE; order]; order];
    let mut cocycle_residual: f64 = 0.0;
    for g in 0..order {
        for h in 0..order {
            let gh = r.product(g, h);
            let prod = ancilla[g].matmul(&ancilla[h]);
            let z = ancilla[gh].dagger().matmul(&prod).trace() / C64::new(k as f64, 0.0);
            let omega = if z.norm() > 1e-12 { z / z.norm() } else { ONE };
            phases[g][h] = omega;
            cocycle_residual =
                cocycle_residual.max(prod.dist_fro(&ancilla[gh].scale(omega)));
        }
    }
    let ancilla_rep = GroupRep::with_rep_tolerance(
        ancilla,
        r.mult_table().to_vec(),
        Some(phases),
        1e-6,
    )?;

    let reconstruction = crate::stinespring::verify_dilation(
        t,
        &DilationResult { ancilla_dim: k, isometry_v: v.clone(), residual: 0.0 },
    )?;
    Ok(CovariantDilation {
        dilation: DilationResult {
            ancilla_dim: k,
            isometry_v: v,
            residual: reconstruction.residual,
        },
        ancilla_rep,
        mixing,
        residual,
        cocycle_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{random_unital_cp, validate_channel};
    use crate::numerics::{pauli_x, pauli_z};

    #[test]
    fn builtin_reps_are_consistent() {
        let pauli = GroupRep::pauli_qubit();
        assert_eq!(pauli.order(), 4);
        assert!(pauli.rep_residual() < 1e-12);

        let wh = GroupRep::weyl_heisenberg(3).unwrap();
        assert_eq!(wh.order(), 9);
        assert!(wh.rep_residual() < 1e-12);

        let z2 = GroupRep::cyclic(pauli_z(), 2).unwrap();
        assert!(z2.rep_residual() < 1e-12);
    }

    #[test]
    fn twirl_fixes_covariant_channel() {
        let pauli = GroupRep::pauli_qubit();
        let dep = QuantumChannel::depolarizing_qubit();
        let twirled = twirl(&dep, &pauli).unwrap();
        assert!(twirled.choi().distance(&dep.choi()) < 1e-12);

        let id = QuantumChannel::identity(2);
        let twirled = twirl(&id, &pauli).unwrap();
        assert!(twirled.choi().distance(&id.choi()) < 1e-12);
    }

    #[test]
    fn twirl_enforces_covariance_and_bell_diagonal_choi() {
        let pauli = GroupRep::pauli_qubit();
        let t = random_unital_cp(2, 3, 40).unwrap();
        let twirled = twirl(&t, &pauli).unwrap();
        assert!(check_covariance(&twirled, &pauli).unwrap() < 1e-10);
        let rep = validate_channel(&twirled).unwrap();
        assert!(rep.cp && rep.unital);

        // Choi is diagonal in the basis of reshaped Pauli operators.
        let choi = twirled.choi();
        let d = 2;
        let mut basis = ComplexMatrix::zeros(4, 4);
        for (col, p) in [
            ComplexMatrix::identity(2),
            pauli_x(),
            crate::numerics::pauli_y(),
            pauli_z(),
        ]
        .iter()
        .enumerate()
        {
            for i in 0..d {
                for a in 0..d {
                    basis.set(i * d + a, col, p.at(a, i) * C64::new(0.5f64.sqrt(), 0.0));
                }
            }
        }
        let rotated = basis.dagger().matmul(choi.matrix()).matmul(&basis);
        let mut offdiag: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    offdiag = offdiag.max(rotated.at(i, j).norm());
                }
            }
        }
        assert!(offdiag < 1e-10, "off-diagonal {offdiag:.3e}");
    }

    #[test]
    fn twirl_is_idempotent() {
        let pauli = GroupRep::pauli_qubit();
        let t = random_unital_cp(2, 2, 41).unwrap();
        let once = twirl(&t, &pauli).unwrap();
        let twice = twirl(&once, &pauli).unwrap();
        assert!(once.choi().distance(&twice.choi()) < 1e-10);
    }

    #[test]
    fn covariance_residuals() {
        let pauli = GroupRep::pauli_qubit();
        assert!(check_covariance(&QuantumChannel::identity(2), &pauli).unwrap() < 1e-14);

        // Dephasing against a Hadamard-generated Z₂ representation:
        // the Hadamard swaps σz and σx, which dephasing does not respect.
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]])
            .scale(C64::new(0.5f64.sqrt(), 0.0));
        let z2h = GroupRep::cyclic(h, 2).unwrap();
        let resid = check_covariance(&QuantumChannel::dephasing_qubit(), &z2h).unwrap();
        assert!(resid > 0.1, "residual {resid:.3e}");
    }

    #[test]
    fn covariant_dilation_identity_channel() {
        let pauli = GroupRep::pauli_qubit();
        let out = covariant_dilation(&QuantumChannel::identity(2), &pauli).unwrap();
        assert_eq!(out.dilation.ancilla_dim, 1);
        assert!(out.residual < 1e-12);
        for g in 0..4 {
            assert!((out.ancilla_rep.unitary(g).at(0, 0).norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn covariant_dilation_depolarizing() {
        let pauli = GroupRep::pauli_qubit();
        let out = covariant_dilation(&QuantumChannel::depolarizing_qubit(), &pauli).unwrap();
        assert!(out.residual < 1e-8);
        assert!(out.cocycle_residual < 1e-8);
        // Each mixing matrix is a permutation with phases.
        for m in &out.mixing {
            for i in 0..m.rows() {
                let mut big = 0;
                for j in 0..m.cols() {
                    let a = m.at(i, j).norm();
                    if a > 0.5 {
                        big += 1;
                        assert!((a - 1.0).abs() < 1e-8);
                    } else {
                        assert!(a < 1e-8);
                    }
                }
                assert_eq!(big, 1);
            }
        }
    }

    #[test]
    fn covariant_dilation_dephasing_with_z_rep() {
        let z2 = GroupRep::cyclic(pauli_z(), 2).unwrap();
        let deph = QuantumChannel::dephasing_qubit();
        let out = covariant_dilation(&deph, &z2).unwrap();
        assert!(out.residual < 1e-10);
        // Diagonal Kraus operators commute with σz: u_g is diagonal.
        for g in 0..2 {
            let u = out.ancilla_rep.unitary(g);
            for i in 0..u.rows() {
                for j in 0..u.cols() {
                    if i != j {
                        assert!(u.at(i, j).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn covariant_dilation_rejects_non_covariant_input() {
        // Conjugation by a Hadamard is unital CP but not Pauli
        // covariant (H swaps σx and σz while Y picks up a sign).
        let pauli = GroupRep::pauli_qubit();
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]])
            .scale(C64::new(0.5f64.sqrt(), 0.0));
        let conj = QuantumChannel::from_kraus(vec![h]).unwrap();
        assert!(check_covariance(&conj, &pauli).unwrap() > 0.1);
        assert!(matches!(
            covariant_dilation(&conj, &pauli),
            Err(Error::NotCovariant { .. })
        ));
    }

    #[test]
    fn twirled_corpus_has_covariant_dilations() {
        let pauli = GroupRep::pauli_qubit();
        for seed in 0..4 {
            let t = twirl(&random_unital_cp(2, 2, 100 + seed).unwrap(), &pauli).unwrap();
            let out = covariant_dilation(&t, &pauli).unwrap();
            assert!(out.residual < 1e-8, "seed {seed}: {:.3e}", out.residual);
            assert!(out.cocycle_residual < 1e-8);
            assert!(out.dilation.residual < 1e-9);
        }
        let wh = GroupRep::weyl_heisenberg(3).unwrap();
        let t = twirl(&random_unital_cp(3, 2, 50).unwrap(), &wh).unwrap();
        let out = covariant_dilation(&t, &wh).unwrap();
        assert!(out.residual < 1e-8);
        assert!(out.cocycle_residual < 1e-8);
    }

    #[test]
    fn group_rep_json_roundtrip() {
        let pauli = GroupRep::pauli_qubit();
        let s = serde_json::to_string(&pauli).unwrap();
        assert!(s.starts_with(r#"{"order":4,"unitaries":"#));
        let back: GroupRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back.order(), 4);
        assert_eq!(back.mult_table(), pauli.mult_table());
        assert!(back.rep_residual() < 1e-12);

        let z2 = GroupRep::cyclic(pauli_z(), 2).unwrap();
        let s = serde_json::to_string(&z2).unwrap();
        assert!(!s.contains("phases"));
        let back: GroupRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back.mult_table(), z2.mult_table());
    }
}

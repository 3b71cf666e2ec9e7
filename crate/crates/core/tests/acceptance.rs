//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test -- --nocapture`). Thresholds are
//! pinned here, not configurable.

use std::sync::Arc;
use std::time::Instant;

use cqms_core::channels::{kraus_from_choi, random_unital_cp, ChoiMatrix};
use cqms_core::covariance::{check_covariance, covariant_dilation, twirl, GroupRep};
use cqms_core::error::Error;
use cqms_core::imprimitivity::{
    canonical_si, find_intertwiner, standard_weyl_pair, verify_si, weyl_relation_residual,
};
use cqms_core::numerics::{
    gaussian_matrix, pauli_x, pauli_y, pauli_z, random_unitary, ComplexMatrix, C64, ONE, ZERO,
};
use cqms_core::poincare::{
    build_orbit_grid, dual_action_check, fiber_space, induced_rep_apply,
    measure_invariance_check, random_cone_points, section_norm, Chirality, Density, FourVector,
    LorentzElement, PoincareElement, Section,
};
use cqms_core::qms::{
    evolve, fixed_point_space, lindblad_apply, semigroup_residual, LindbladGenerator,
};
use cqms_core::stinespring::{dilate, kernel_gram, kernel_witness_min_eig, KernelSample};
use cqms_core::verify::corpus_params;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS_SEED: u64 = 42;

fn report(criterion: u32, name: &str, pass: bool, detail: String) {
    println!(
        "ACCEPTANCE {criterion} [{name}]: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

#[test]
fn criterion_1_stinespring_reconstruction() {
    let start = Instant::now();
    let mut max_residual: f64 = 0.0;
    for (d, k, s) in corpus_params(100, CORPUS_SEED) {
        let t = random_unital_cp(d, k, s).expect("corpus params valid");
        let dil = dilate(&t).expect("corpus channels are CP unital");
        max_residual = max_residual.max(dil.residual);
    }
    let elapsed = start.elapsed();
    let pass = max_residual < 1e-10 && elapsed.as_secs_f64() < 10.0;
    report(
        1,
        "stinespring reconstruction",
        pass,
        format!("max residual {max_residual:.3e} over 100 maps in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_2_cp_iff_choi_psd() {
    let mut max_roundtrip: f64 = 0.0;
    for (d, k, s) in corpus_params(100, CORPUS_SEED) {
        let t = random_unital_cp(d, k, s).expect("corpus params valid");
        let choi = t.choi();
        let back = kraus_from_choi(&choi, choi.default_truncation().expect("psd"))
            .expect("corpus channel is CP");
        max_roundtrip = max_roundtrip.max(back.choi().distance(&choi));
    }
    let transpose_choi = ChoiMatrix::from_schrodinger_map(2, |e| e.transpose());
    let min_eig = transpose_choi.min_eigenvalue().expect("Hermitian");
    let flagged = matches!(
        kraus_from_choi(&transpose_choi, 1e-10),
        Err(Error::NotCp { .. })
    );
    let pass = max_roundtrip < 1e-9 && min_eig <= -1.0 + 1e-9 && flagged;
    report(
        2,
        "CP iff Choi PSD",
        pass,
        format!("max roundtrip {max_roundtrip:.3e}, transpose witness eigenvalue {min_eig:.9}"),
    );
}

#[test]
fn criterion_3_kernel_positivity() {
    let mut min_cp_eig = f64::INFINITY;
    for j in 0..10u64 {
        let t = random_unital_cp(3, 4, CORPUS_SEED + j).expect("valid");
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + j);
        let samples: Vec<KernelSample> = (0..20)
            .map(|_| KernelSample {
                x: gaussian_matrix(3, 3, &mut rng),
                y: gaussian_matrix(3, 3, &mut rng),
                u: gaussian_matrix(3, 1, &mut rng).data().to_vec(),
            })
            .collect();
        let g = kernel_gram(&t, &samples).expect("consistent dims");
        let (vals, _) = cqms_core::numerics::herm_eig(&g).expect("Hermitian Gram");
        min_cp_eig = min_cp_eig.min(*vals.last().expect("non-empty"));
    }
    let witness = kernel_witness_min_eig(2, |x| Ok(x.transpose())).expect("witness scan");
    let pass = min_cp_eig >= -1e-9 && witness < -1e-3;
    report(
        3,
        "kernel positivity",
        pass,
        format!("CP min eigenvalue {min_cp_eig:.3e}, non-CP witness {witness:.3e}"),
    );
}

#[test]
fn criterion_4_weyl_si_and_stone_von_neumann() {
    let mut max_weyl: f64 = 0.0;
    for n in 2..=16 {
        let (u, v) = standard_weyl_pair(n).expect("n ≥ 2");
        max_weyl = max_weyl.max(weyl_relation_residual(&u, &v, n));
    }
    let mut max_si: f64 = 0.0;
    for n in 2..=16 {
        for m in 1..=3 {
            max_si = max_si.max(verify_si(&canonical_si(n, m).expect("valid params")));
        }
    }
    let mut max_svn: f64 = 0.0;
    let mut kernel_dims_ok = true;
    for n in 2..=5 {
        let pair = standard_weyl_pair(n).expect("n ≥ 2");
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + n as u64);
        let w = random_unitary(n, &mut rng);
        let moved = (
            w.matmul(&pair.0).matmul(&w.dagger()),
            w.matmul(&pair.1).matmul(&w.dagger()),
        );
        let found = find_intertwiner(&pair, &moved, 1e-8).expect("equivalent pairs");
        max_svn = max_svn.max(found.residual);
        kernel_dims_ok &= found.kernel_dim == 1;
    }
    let pass = max_weyl < 1e-12 && max_si < 1e-12 && max_svn < 1e-8 && kernel_dims_ok;
    report(
        4,
        "Weyl/SI relations",
        pass,
        format!("weyl {max_weyl:.3e}, covariance {max_si:.3e}, intertwiner {max_svn:.3e}"),
    );
}

#[test]
fn criterion_5_covariance() {
    let pauli = GroupRep::pauli_qubit();
    let mut max_cov: f64 = 0.0;
    let mut max_dilation: f64 = 0.0;
    let mut max_cocycle: f64 = 0.0;
    for i in 0..20u64 {
        let t = random_unital_cp(2, (i % 4 + 1) as usize, CORPUS_SEED + i).expect("valid");
        let twirled = twirl(&t, &pauli).expect("dims match");
        max_cov = max_cov.max(check_covariance(&twirled, &pauli).expect("dims match"));
        let out = covariant_dilation(&twirled, &pauli).expect("covariant input");
        max_dilation = max_dilation.max(out.residual);
        max_cocycle = max_cocycle.max(out.cocycle_residual);
    }
    let pass = max_cov < 1e-10 && max_dilation < 1e-8 && max_cocycle < 1e-8;
    report(
        5,
        "covariant dilation",
        pass,
        format!(
            "twirl covariance {max_cov:.3e}, intertwining {max_dilation:.3e}, cocycle {max_cocycle:.3e}"
        ),
    );
}

#[test]
fn criterion_6_qms() {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut max_unital_gen: f64 = 0.0;
    let mut max_semigroup: f64 = 0.0;
    let mut max_cp_defect: f64 = 0.0;
    let mut max_unital_evolved: f64 = 0.0;
    for d in [2usize, 3] {
        let jumps = vec![gaussian_matrix(d, d, &mut rng), gaussian_matrix(d, d, &mut rng)];
        let gen = LindbladGenerator::new(jumps, 1.0).expect("valid");
        let id = ComplexMatrix::identity(d);
        max_unital_gen =
            max_unital_gen.max(lindblad_apply(&gen, &id).expect("dims").norm_fro());
        for _ in 0..5 {
            let s = rng.random::<f64>();
            let t = rng.random::<f64>();
            max_semigroup =
                max_semigroup.max(semigroup_residual(&gen, s, t).expect("nonnegative"));
        }
        for t in [0.1, 1.0, 10.0] {
            let sup = evolve(&gen, t).expect("t ≥ 0");
            max_cp_defect = max_cp_defect
                .max((-sup.choi().min_eigenvalue().expect("Hermitian")).max(0.0));
            max_unital_evolved =
                max_unital_evolved.max(sup.apply(&id).expect("dims").dist_fro(&id));
        }
    }
    // Amplitude damping closed form T_t(σ_z) = e^{−t}(σ_z + I) − I.
    let jump = ComplexMatrix::from_data(2, 2, vec![ZERO, ZERO, ONE, ZERO]).expect("finite");
    let damping = LindbladGenerator::new(vec![jump], 1.0).expect("valid");
    let at_ln2 = evolve(&damping, 2.0f64.ln())
        .expect("t ≥ 0")
        .apply(&pauli_z())
        .expect("dims");
    let closed_form = at_ln2.dist_fro(&ComplexMatrix::diag(&[ZERO, -ONE]));
    let pass = max_unital_gen < 1e-10
        && max_semigroup < 1e-9
        && max_cp_defect < 1e-8
        && max_unital_evolved < 1e-9
        && closed_form < 1e-8;
    report(
        6,
        "QMS generator and semigroup",
        pass,
        format!(
            "Θ(1) {max_unital_gen:.3e}, semigroup {max_semigroup:.3e}, CP defect {max_cp_defect:.3e}, unital {max_unital_evolved:.3e}, closed form {closed_form:.3e}"
        ),
    );
}

#[test]
fn criterion_7_ergodicity() {
    let pauli_gen =
        LindbladGenerator::new(vec![pauli_x(), pauli_y(), pauli_z()], 1.0).expect("valid");
    let fps = fixed_point_space(&pauli_gen, 1e-9);
    let ergodic_ok = fps.dimension == 1 && fps.ergodic;

    let t50 = evolve(&pauli_gen, 50.0).expect("t ≥ 0");
    let power_defect = t50.matrix().dist_fro(&fps.projector(2));

    let dephasing = LindbladGenerator::new(vec![pauli_z()], 1.0).expect("valid");
    let deph_fps = fixed_point_space(&dephasing, 1e-9);
    let deph_ok = deph_fps.dimension == 2 && !deph_fps.ergodic;

    let pass = ergodic_ok && deph_ok && power_defect < 1e-6;
    report(
        7,
        "ergodicity",
        pass,
        format!(
            "Pauli fixed dim {}, dephasing fixed dim {}, power defect {power_defect:.3e}",
            fps.dimension, deph_fps.dimension
        ),
    );
}

#[test]
fn criterion_8_poincare_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut max_form: f64 = 0.0;
    for _ in 0..1000 {
        let l = LorentzElement::random(&mut rng, 2.0);
        let x = FourVector::new(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        );
        let p = FourVector::new(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        );
        let r = dual_action_check(&l, &x, &p);
        max_form = max_form.max(r.form_invariance).max(r.character_duality);
    }
    let mut max_homo: f64 = 0.0;
    for _ in 0..50 {
        let a = LorentzElement::random(&mut rng, 2.0);
        let b = LorentzElement::random(&mut rng, 2.0);
        max_homo = max_homo.max(a.homomorphism_defect(&b));
    }

    let points = random_cone_points(200, 0.5, 3.0, CORPUS_SEED);
    let mut max_standard: f64 = 0.0;
    for (axis, eta) in [([0.0, 0.0, 1.0], 1.0), ([1.0, 0.0, 0.0], 0.5), ([0.6, -0.8, 0.0], 1.0)] {
        let l = LorentzElement::boost(axis, eta).expect("unit axis");
        max_standard =
            max_standard.max(measure_invariance_check(&l, Density::Standard, &points).expect("on cone"));
    }
    let paper_defect = measure_invariance_check(
        &LorentzElement::boost_z(0.6),
        Density::Paper,
        &points,
    )
    .expect("on cone");
    println!("ACCEPTANCE 8 [info]: paper-density defect under boost 0.6 = {paper_defect:.3e} (reported, not asserted)");

    let p_ref = FourVector::new(1.0, 0.0, 0.0, 1.0);
    let mut fiber_ok = fiber_space(&p_ref, 0.0, None).cols() == 2
        && fiber_space(&p_ref, 0.0, Some(Chirality::Minus)).cols() == 1
        && fiber_space(&p_ref, 0.0, Some(Chirality::Plus)).cols() == 1;
    for _ in 0..10 {
        let moved = LorentzElement::random(&mut rng, 1.5).apply(&p_ref);
        fiber_ok &= fiber_space(&moved, 0.0, None).cols() == 2
            && fiber_space(&moved, 0.0, Some(Chirality::Minus)).cols() == 1;
    }

    let grid = Arc::new(build_orbit_grid(4, 8, 0.5, 2.0, Density::Paper).expect("valid"));
    let phi = Section::new(
        grid,
        Arc::new(|p: &FourVector| {
            nalgebra::Vector2::new(
                C64::new(p.0[1] + 0.3 * p.0[3], p.0[2]),
                C64::new(p.0[1] * p.0[2], -0.5 * p.0[3]),
            )
        }),
    );
    let g = PoincareElement::pure_lorentz(LorentzElement::rotation_z(
        std::f64::consts::TAU * 3.0 / 8.0,
    ));
    let rotated = induced_rep_apply(&g, &phi).expect("on cone");
    let norm_defect = (section_norm(&rotated) - section_norm(&phi)).abs();

    let pass = max_form < 1e-10
        && max_homo < 1e-9
        && max_standard < 1e-6
        && fiber_ok
        && norm_defect < 1e-10;
    report(
        8,
        "Poincaré formulas",
        pass,
        format!(
            "form/duality {max_form:.3e}, homomorphism {max_homo:.3e}, standard density {max_standard:.3e}, rotation norm {norm_defect:.3e}"
        ),
    );
}

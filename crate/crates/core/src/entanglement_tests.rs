use super::*;
use crate::dynamics::steady_state;
use crate::linalg::random::{random_density, random_state, random_unitary};
use crate::linalg::{CVector, DensityMatrix};
use crate::presets;
use crate::slh::{build_cascaded_model, DriveSpec, NetworkSpec};
use crate::units::{mhz, to_mhz};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn werner(p: f64) -> DensityMatrix {
    let s = singlet().to_density();
    let m = s.data() * cr(p) + CMatrix::identity(4, 4) * cr((1.0 - p) / 4.0);
    DensityMatrix::from_matrix(m, vec![2, 2]).unwrap()
}

#[test]
fn concurrence_reference_states() {
    assert!((concurrence(&singlet().to_density()).unwrap() - 1.0).abs() < 1e-12);
    assert!(concurrence(&DensityMatrix::basis(&[2, 2], &[0, 0]).unwrap()).unwrap().abs() < 1e-12);
    assert!((concurrence(&werner(0.8)).unwrap() - 0.7).abs() < 1e-10);
    for p in [0.0f64, 0.2, 1.0 / 3.0, 0.5, 0.9] {
        let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
        assert!((concurrence(&werner(p)).unwrap() - expected).abs() < 1e-10);
    }
}

#[test]
fn concurrence_rejects_wrong_dims() {
    let one = DensityMatrix::maximally_mixed(&[4]);
    assert!(concurrence(&one).is_err());
    let three = DensityMatrix::maximally_mixed(&[2, 2, 2]);
    assert!(concurrence(&three).is_err());
}

#[test]
fn three_level_states_are_projected() {
    let mut v = CVector::zeros(9);
    v[1] = cr(1.0);
    v[3] = cr(-1.0);
    v[8] = cr(1.0);
    let psi = StateVector::normalized(v, vec![3, 3]).unwrap();
    let (q, leak) = qubit_subspace(&psi.to_density()).unwrap();
    assert!((leak - 1.0 / 3.0).abs() < 1e-12);
    assert!((concurrence(&q).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn fidelity_reference_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rho = random_density(&[2, 2], 3, &mut rng);
    assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
    let a = DensityMatrix::basis(&[2, 2], &[0, 0]).unwrap();
    let b = DensityMatrix::basis(&[2, 2], &[1, 0]).unwrap();
    assert!(fidelity(&a, &b).unwrap() < 1e-12);
    let mixed = DensityMatrix::maximally_mixed(&[2, 2]);
    assert!((fidelity(&mixed, &a).unwrap() - 0.25).abs() < 1e-12);
    let p = random_state(&[2, 2], &mut rng);
    let q = random_state(&[2, 2], &mut rng);
    let overlap = p.inner(&q).norm_sqr();
    assert!((fidelity(&p.to_density(), &q.to_density()).unwrap() - overlap).abs() < 1e-9);
    assert!(fidelity(&mixed, &DensityMatrix::maximally_mixed(&[4])).is_err());
}

#[test]
fn cqa_dark_state_limits() {
    let weak = cqa_dark_state(1e-9, 1.0, 1.0).unwrap();
    assert!((weak.amplitude(0).norm() - 1.0).abs() < 1e-12);
    let strong = cqa_dark_state(1e6, 1.0, 1.0).unwrap();
    assert!(concurrence(&strong.to_density()).unwrap() > 0.999_999);
    // Δ = 0, Ω = γ: coefficient on |S⟩ is i√2 before normalisation.
    let psi = cqa_dark_state(1.0, 0.0, 1.0).unwrap();
    let s_amp = (psi.amplitude(1) - psi.amplitude(2)) / cr(2f64.sqrt());
    let ratio = s_amp / psi.amplitude(0);
    assert!((ratio - c(0.0, 2f64.sqrt())).norm() < 1e-12);
    assert!(cqa_dark_state(0.0, 0.0, 0.0).is_err());
}

#[test]
fn optimal_drive_examples() {
    let ga = mhz(presets::GAMMA_A_MHZ);
    let gb = mhz(presets::GAMMA_B_MHZ);
    let opt = optimal_drive_conditions(ga, gb, 1.0, 1.0).unwrap();
    assert!((opt.omega_b_opt - 0.659).abs() < 5e-4);
    let sym = optimal_drive_conditions(1.0, 1.0, 3.0, 2.0).unwrap();
    assert_eq!(sym.omega_b_opt, 3.0);
    assert_eq!(sym.epsilon_opt, 0.0);
    let opt = optimal_drive_conditions(ga, gb, mhz(27.4), mhz(13.3)).unwrap();
    assert!((to_mhz(opt.epsilon_opt) + 7.97).abs() < 0.02, "{}", to_mhz(opt.epsilon_opt));
    assert!(matches!(optimal_drive_conditions(1.0, 1.0, 1.0, 0.0), Err(Error::Singular(_))));
    assert!(optimal_drive_conditions(0.0, 1.0, 1.0, 1.0).is_err());
    // γ_A Ω_A² = γ_B Ω_B².
    assert!((ga * mhz(27.4).powi(2) - gb * opt.omega_b_opt.powi(2)).abs() < 1e-9);
}

#[test]
fn optimal_drive_convention_invariance() {
    // The alternative convention writes Ω σx + Δ σz, i.e. doubles (Ω, Δ, ε).
    let a = optimal_drive_conditions(0.7, 1.9, 3.0, 5.0).unwrap();
    let b = optimal_drive_conditions(0.7, 1.9, 6.0, 10.0).unwrap();
    assert!((b.omega_b_opt - 2.0 * a.omega_b_opt).abs() < 1e-12);
    assert!((b.epsilon_opt - 2.0 * a.epsilon_opt).abs() < 1e-12);
}

fn optimum_frame(ga: f64, gb: f64, omega_a: f64, delta: f64) -> RotatedFrame {
    let opt = optimal_drive_conditions(ga, gb, omega_a, delta).unwrap();
    let net = NetworkSpec { gamma_a: ga, gamma_b: gb, eta: 1.0, prop_phase: 0.0, n_levels: 2 };
    let drive = DriveSpec {
        omega_a,
        omega_b: opt.omega_b_opt,
        epsilon: opt.epsilon_opt,
        ..DriveSpec::default()
    };
    rotated_frame_dissipators(&net, &drive, delta).unwrap()
}

#[test]
fn rotated_frame_at_optimum() {
    for (ga, gb) in [(1.0, 1.0), (1.0, 2.3), (0.53, 1.22), (2.0, 0.5)] {
        let f = optimum_frame(ga, gb, 4.0, 12.0);
        assert!(f.squeezing_mismatch() < 1e-10, "{}", f.squeezing_mismatch());
        assert!((f.delta_tilde_a - f.delta_tilde_b).abs() < 1e-10);
        let psi = f.tms_state();
        let raw = dark_residual(&[f.l_minus.clone(), f.l_plus.clone(), f.l_z.clone()], &psi).unwrap();
        assert!(raw <= 1e-10, "raw residual {raw}");
        let norm = f.normalized_dissipators().unwrap();
        assert!(dark_residual(&norm, &psi).unwrap() <= 1e-10);
        // Normalised and raw forms coincide at the optimum.
        assert!(norm[0].max_abs_diff(&f.l_minus) < 1e-10);
        assert!(norm[1].max_abs_diff(&f.l_plus) < 1e-10);
        assert!(norm[2].max_abs_diff(&f.l_z) < 1e-10);
        // γ_B sin²θ_B = γ_A sin²θ_A
        assert!((gb * f.theta_b.sin().powi(2) - ga * f.theta_a.sin().powi(2)).abs() < 1e-12);
        assert!(dark_residual(&[f.local_hamiltonian()], &psi).unwrap() < 1e-10);
    }
}

#[test]
fn rotated_frame_off_optimum() {
    let net = NetworkSpec { gamma_a: 1.0, gamma_b: 2.3, eta: 1.0, prop_phase: 0.0, n_levels: 2 };
    let drive = DriveSpec { omega_a: 4.0, omega_b: 4.0, ..DriveSpec::default() };
    let f = rotated_frame_dissipators(&net, &drive, 12.0).unwrap();
    assert!(f.squeezing_mismatch() > 1e-3);
    assert!(f.normalized_dissipators().is_err());
    let zero = DriveSpec { epsilon: -12.0, ..DriveSpec::default() };
    assert!(matches!(rotated_frame_dissipators(&net, &zero, 12.0), Err(Error::Singular(_))));
}

#[test]
fn symmetric_case_has_equal_angles() {
    let f = optimum_frame(1.3, 1.3, 5.0, 9.0);
    assert!((f.theta_a - f.theta_b).abs() < 1e-15);
    assert!(f.h_diss_prefactor().abs() < 1e-15);
}

#[test]
fn rotation_maps_lab_coupling_to_grouped_dissipators() {
    let (ga, gb, delta) = (0.7, 1.3, 5.0);
    let net = NetworkSpec { gamma_a: ga, gamma_b: gb, eta: 1.0, prop_phase: 0.0, n_levels: 2 };
    let drive = DriveSpec { omega_a: 2.0, omega_b: 1.3, epsilon: -0.7, ..DriveSpec::default() };
    let f = rotated_frame_dissipators(&net, &drive, delta).unwrap();
    let u = tensor(&rotation([0.0, 1.0, 0.0], f.theta_a), &rotation([0.0, 1.0, 0.0], -f.theta_b));
    let d = [2, 2];
    let lab = &(&embed(&sigma_minus(), 0, &d).unwrap() * ga.sqrt()) + &(&embed(&sigma_minus(), 1, &d).unwrap() * gb.sqrt());
    let rotated = u.dagger().matmul(&lab).matmul(&u);
    let grouped = &(&(&f.l_minus + &f.l_plus) + &f.l_z) * 0.5;
    assert!(rotated.max_abs_diff(&grouped) < 1e-12);

    let mut qubits = presets::qubits();
    qubits[1].freq = qubits[0].freq + 2.0 * delta;
    let model = build_cascaded_model(&NetworkSpec { eta: 0.0, ..net }, &drive, &qubits).unwrap();
    let local = u.dagger().matmul(model.h()).matmul(&u);
    assert!(local.max_abs_diff(&f.local_hamiltonian()) < 1e-12);
}

#[test]
fn tms_state_properties() {
    let psi = tms_dark_state(0.0).unwrap();
    assert_eq!(psi.amplitude(0), cr(1.0));
    for r in [0.1, 0.4, 1.2] {
        let c = concurrence(&tms_dark_state(r).unwrap().to_density()).unwrap();
        assert!((c - (2.0 * r).tanh()).abs() < 1e-10);
    }
    let c = concurrence(&tms_dark_state(20.0).unwrap().to_density()).unwrap();
    assert!(c > 1.0 - 1e-12);
    assert!(tms_dark_state(f64::NAN).is_err());
}

#[test]
fn dark_residual_examples() {
    let d = [2, 2];
    let c = &embed(&sigma_minus(), 0, &d).unwrap() + &embed(&sigma_minus(), 1, &d).unwrap();
    assert!(dark_residual(std::slice::from_ref(&c), &singlet()).unwrap() < 1e-15);
    let ground = StateVector::basis(&d, &[0, 0]).unwrap();
    assert_eq!(dark_residual(std::slice::from_ref(&c), &ground).unwrap(), 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let triplet = StateVector::new(CVector::from_vec(vec![cr(0.0), cr(h), cr(h), cr(0.0)]), d.to_vec()).unwrap();
    assert!((dark_residual(std::slice::from_ref(&c), &triplet).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    let wrong = StateVector::basis(&[2], &[0]).unwrap();
    assert!(dark_residual(&[c], &wrong).is_err());
}

#[test]
fn dark_state_theorem_grid() {
    let g = 1.0;
    for om in [0.1, 1.0, 10.0] {
        for delta in [0.0, 1.0, 10.0] {
            let net = NetworkSpec { gamma_a: g, gamma_b: g, eta: 1.0, prop_phase: 0.0, n_levels: 2 };
            let drive = DriveSpec { omega_a: om, omega_b: om, ..DriveSpec::default() };
            let mut qubits = presets::qubits();
            qubits[1].freq = qubits[0].freq + 2.0 * delta;
            let model = build_cascaded_model(&net, &drive, &qubits).unwrap();
            let psi = cqa_dark_state(om, delta, g).unwrap();
            let mut ops = model.collapse_ops().to_vec();
            ops.push(model.h().clone());
            assert!(dark_residual(&ops, &psi).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn purity_obstruction() {
    let delta = 25.0;
    // θ_A = θ_B: the steady state is pure.
    let f_sym = optimum_frame(1.0, 1.0, 10.0, delta);
    assert!(f_sym.h_diss_prefactor().abs() < 1e-12);
    let purity = |ga: f64, gb: f64| {
        let opt = optimal_drive_conditions(ga, gb, 10.0, delta).unwrap();
        let net = NetworkSpec { gamma_a: ga, gamma_b: gb, eta: 1.0, prop_phase: 0.0, n_levels: 2 };
        let drive = DriveSpec { omega_a: 10.0, omega_b: opt.omega_b_opt, epsilon: opt.epsilon_opt, ..DriveSpec::default() };
        let mut qubits = presets::qubits();
        qubits[1].freq = qubits[0].freq + 2.0 * delta;
        steady_state(&build_cascaded_model(&net, &drive, &qubits).unwrap()).unwrap().purity()
    };
    assert!((purity(1.0, 1.0) - 1.0).abs() < 1e-6);
    let f_asym = optimum_frame(1.0, 2.3, 10.0, delta);
    assert!(f_asym.h_diss_prefactor().abs() > 1e-3);
    assert!(purity(1.0, 2.3) < 1.0 - 1e-6);
}

proptest! {
    #[test]
    fn concurrence_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&[2, 2], 2, &mut rng);
        let u = local_unitary(&random_unitary(2, &mut rng), &random_unitary(2, &mut rng));
        let moved = rho.transform(&u).unwrap();
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&moved).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn concurrence_bounded(seed in any::<u64>(), rank in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&[2, 2], rank, &mut rng);
        let c = concurrence(&rho).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn fidelity_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_density(&[2, 2], 2, &mut rng);
        let b = random_density(&[2, 2], 3, &mut rng);
        let (fab, fba) = (fidelity(&a, &b).unwrap(), fidelity(&b, &a).unwrap());
        prop_assert!((fab - fba).abs() < 1e-8);
        prop_assert!((0.0..=1.0).contains(&fab));
    }
}

#[test]
fn pure_state_formula_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let rho = random_state(&[2, 2], &mut rng).to_density();
        let w = concurrence(&rho).unwrap();
        let p = concurrence_pure_formula(&rho).unwrap();
        assert!((w - p).abs() <= 1e-8, "{w} vs {p}");
    }
}

#[test]
fn rotation_gates() {
    let ground = StateVector::basis(&[2], &[0]).unwrap().to_density();
    let flipped = ground.transform(&rotation([1.0, 0.0, 0.0], std::f64::consts::PI)).unwrap();
    assert!((flipped.population(1) - 1.0).abs() < 1e-14);
    // With σz|0⟩ = −|0⟩, R_x(π/2)|0⟩ points along +y and R_y(π/2)|0⟩ along −x.
    let y = ground.transform(&rotation([1.0, 0.0, 0.0], std::f64::consts::FRAC_PI_2)).unwrap();
    assert!((y.expect(&sigma_y()) - 1.0).abs() < 1e-14);
    let x = ground.transform(&rotation([0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_2)).unwrap();
    assert!((x.expect(&crate::linalg::sigma_x()) + 1.0).abs() < 1e-14);
}

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::entanglement::{concurrence, fidelity, singlet};
use crate::error::Error;
use crate::linalg::random::{random_density, random_state};
use crate::linalg::{c, cr, eigvalsh, pauli, CMatrix, DensityMatrix, QOperator};
use crate::presets;
use crate::slh::TransmonSpec;
use crate::units::{ghz, ns};

fn ideal_qubit() -> TransmonSpec {
    TransmonSpec {
        anharm: -ghz(20.0),
        t1: f64::INFINITY,
        t1_intrinsic: f64::INFINITY,
        t2_ramsey: f64::INFINITY,
        ..presets::qubit_a()
    }
}

fn t1_only(t1_ns: f64) -> TransmonSpec {
    TransmonSpec { t1: ns(t1_ns), t2_ramsey: ns(2.0 * t1_ns), ..presets::qubit_a() }
}

fn bloch_vector(rho: &DensityMatrix) -> [f64; 3] {
    let q = qubit_block(rho).unwrap();
    ['X', 'Y', 'Z'].map(|p| q.expect(&pauli(p).unwrap()))
}

#[test]
fn ideal_pi_pulse_inverts() {
    let ground = DensityMatrix::basis(&[3], &[0]).unwrap();
    let out = simulate_pulse(&ground, &PulseSpec::rotation(PulseAxis::X, PI), &ideal_qubit()).unwrap();
    assert!(out.population(1) >= 0.999, "{}", out.population(1));
    let real = TransmonSpec { t1: f64::INFINITY, t2_ramsey: f64::INFINITY, ..presets::qubit_a() };
    let out = simulate_pulse(&ground, &PulseSpec::rotation(PulseAxis::X, PI), &real).unwrap();
    // Without DRAG the finite anharmonicity costs about 2% through phase
    // error and leakage.
    assert!(out.population(1) >= 0.97, "{}", out.population(1));
}

#[test]
fn idle_pulse_decay() {
    let excited = DensityMatrix::basis(&[3], &[1]).unwrap();
    let out = simulate_pulse(&excited, &PulseSpec::idle(), &t1_only(133.0)).unwrap();
    let expected = (-16.0f64 / 133.0).exp();
    assert!((out.population(1) - expected).abs() < 1e-8);
    assert!((expected - 0.887).abs() < 1e-3);
    assert!((out.data().trace().re - 1.0).abs() < 1e-12);
}

#[test]
fn two_level_pulse_matches_rotation() {
    let q = ideal_qubit();
    let ground = DensityMatrix::basis(&[2], &[0]).unwrap();
    for (axis, n) in [(PulseAxis::X, [1.0, 0.0, 0.0]), (PulseAxis::Y, [0.0, 1.0, 0.0])] {
        let out = simulate_pulse(&ground, &PulseSpec::rotation(axis, 0.7), &q).unwrap();
        let expected = ground.transform(&crate::entanglement::rotation(n, 0.7)).unwrap();
        assert!(out.trace_distance(&expected).unwrap() < 1e-8);
    }
}

#[test]
fn pulse_rejects_bad_input() {
    assert!(PulseSpec::new(PulseAxis::X, PI, 0.0).is_err());
    let pair = DensityMatrix::maximally_mixed(&[2, 2]);
    assert!(simulate_pulse(&pair, &PulseSpec::idle(), &ideal_qubit()).is_err());
    let flat = TransmonSpec { anharm: 0.0, ..ideal_qubit() };
    let ground = DensityMatrix::basis(&[3], &[0]).unwrap();
    let p = PulseSpec::rotation(PulseAxis::X, PI).with_drag(0.5);
    assert!(simulate_pulse(&ground, &p, &flat).is_err());
}

#[test]
fn drag_improves_pi_pulse() {
    let q = TransmonSpec { t1: f64::INFINITY, t2_ramsey: f64::INFINITY, ..presets::qubit_a() };
    let ground = DensityMatrix::basis(&[3], &[0]).unwrap();
    let plain = simulate_pulse(&ground, &PulseSpec::rotation(PulseAxis::X, PI), &q).unwrap();
    let drag = simulate_pulse(&ground, &PulseSpec::rotation(PulseAxis::X, PI).with_drag(0.5), &q).unwrap();
    assert!(drag.population(1) > 0.999);
    assert!(drag.population(1) > plain.population(1));
    assert!(drag.population(2) < plain.population(2));
}

#[test]
fn cardinal_states_ideal_and_noisy() {
    let ideal = prepare_cardinal_states(&ideal_qubit()).unwrap();
    let expected = [
        [0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
    ];
    for (rho, e) in ideal.iter().zip(expected) {
        let b = bloch_vector(rho);
        for k in 0..3 {
            assert!((b[k] - e[k]).abs() < 5e-3, "{b:?} vs {e:?}");
        }
    }
    let noisy = prepare_cardinal_states(&presets::qubit_a()).unwrap();
    for rho in &noisy[1..] {
        let b = bloch_vector(rho);
        assert!(rho.purity() < 1.0 - 1e-3);
        assert!((b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt() < 1.0);
    }
}

#[test]
fn allxy_ideal_staircase() {
    let v = allxy_diagnostic(&ideal_qubit()).unwrap();
    for (k, x) in v.iter().enumerate() {
        let target = match k {
            0..=4 => -1.0,
            5..=16 => 0.0,
            _ => 1.0,
        };
        assert!((x - target).abs() < 5e-3, "{} -> {x}", ALLXY_SEQUENCE[k]);
    }
}

#[test]
fn allxy_sag_scales_with_t1() {
    let ideal = allxy_diagnostic(&ideal_qubit()).unwrap();
    let sag = |t1: f64| {
        let q = TransmonSpec { anharm: -ghz(20.0), ..t1_only(t1) };
        let v = allxy_diagnostic(&q).unwrap();
        v.iter().zip(&ideal).map(|(a, b)| (a - b).abs()).sum::<f64>()
    };
    let ratio = sag(266.0) / sag(133.0);
    assert!((0.4..0.6).contains(&ratio), "{ratio}");
}

#[test]
fn allxy_with_device_noise_stays_near_plateaus() {
    let v = allxy_diagnostic(&presets::qubit_b()).unwrap();
    assert!(v[0] < -0.99);
    assert!(v[5..17].iter().all(|x| x.abs() < 0.35), "{v:?}");
    assert!(v[17..].iter().all(|x| *x > 0.6 && *x < 0.95), "{v:?}");
    assert!(v[1..5].iter().all(|x| *x > -0.95), "{v:?}");
}

fn record_at(points: &[[f64; 4]]) -> MeasurementRecord {
    MeasurementRecord::new(Axis::Z, Axis::X, points.to_vec()).unwrap()
}

#[test]
fn iq_projection_examples() {
    let ro = ReadoutModel::default_for(0);
    let rb = ReadoutModel::default_for(1);
    let (a, b) = (ro.axis(Axis::Z), rb.axis(Axis::X));
    let at_minus = record_at(&[[a.minus[0], a.minus[1], b.minus[0], b.minus[1]]; 3]);
    let d = iq_to_expectation(&at_minus, &ro, &rb).unwrap();
    assert!((d.d_a - 1.0).abs() < 1e-12 && (d.d_b - 1.0).abs() < 1e-12 && (d.d_ab - 1.0).abs() < 1e-12);
    let mid = |r: &IqReference| [(r.plus[0] + r.minus[0]) / 2.0, (r.plus[1] + r.minus[1]) / 2.0];
    let (ma, mb) = (mid(a), mid(b));
    let d = iq_to_expectation(&record_at(&[[ma[0], ma[1], mb[0], mb[1]]]), &ro, &rb).unwrap();
    assert!(d.d_a.abs() < 1e-12 && d.d_b.abs() < 1e-12);
    // Orthogonal displacement.
    let (di, dq) = (a.plus[0] - a.minus[0], a.plus[1] - a.minus[1]);
    let p0 = a.project(0.3, 0.1);
    assert!((a.project(0.3 - 2.0 * dq, 0.1 + 2.0 * di) - p0).abs() < 1e-12);
    let same = IqReference { plus: a.minus, minus: a.minus };
    assert!(ReadoutModel::new([same, *a, *a], 0.1).is_err());
}

#[test]
fn expanded_product_matches_per_shot_average() {
    let ro = ReadoutModel::default_for(0);
    let rb = ReadoutModel::default_for(1);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rho = random_density(&[2, 2], 2, &mut rng);
    let det = DetectorModel::ideal();
    let recs = synthesize_shots(&rho, [&det, &det], [&ro, &rb], 500, 9).unwrap();
    for r in &recs {
        let (a, b) = (ro.axis(r.axis_a), rb.axis(r.axis_b));
        let n = r.shots().len() as f64;
        let (mut pa, mut pb, mut pab) = (0.0, 0.0, 0.0);
        for s in r.shots() {
            let (x, y) = (a.project(s[0], s[1]), b.project(s[2], s[3]));
            pa += x / n;
            pb += y / n;
            pab += x * y / n;
        }
        let d = iq_to_expectation(r, &ro, &rb).unwrap();
        assert!((d.d_a - (1.0 - 2.0 * pa)).abs() < 1e-12);
        assert!((d.d_b - (1.0 - 2.0 * pb)).abs() < 1e-12);
        assert!((d.d_ab - (1.0 - 2.0 * pa - 2.0 * pb + 4.0 * pab)).abs() < 1e-11);
    }
}

fn transform_ref(r: &IqReference, f: &impl Fn([f64; 2]) -> [f64; 2]) -> IqReference {
    IqReference { plus: f(r.plus), minus: f(r.minus) }
}

proptest! {
    #[test]
    fn iq_expectation_invariant_under_similarity(
        shift in (-5.0..5.0f64, -5.0..5.0f64),
        angle in 0.0..std::f64::consts::TAU,
        scale in 0.1..10.0f64,
        seed in 0u64..1000,
    ) {
        let f = |p: [f64; 2]| {
            let (s, co) = angle.sin_cos();
            [scale * (co * p[0] - s * p[1]) + shift.0, scale * (s * p[0] + co * p[1]) + shift.1]
        };
        let ro = ReadoutModel::default_for(0);
        let rb = ReadoutModel::default_for(1);
        let det = DetectorModel::ideal();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(&[2, 2], &mut rng).to_density();
        let rec = &synthesize_shots(&rho, [&det, &det], [&ro, &rb], 50, seed).unwrap()[4];
        let moved: Vec<[f64; 4]> = rec.shots().iter().map(|s| {
            let (a, b) = (f([s[0], s[1]]), f([s[2], s[3]]));
            [a[0], a[1], b[0], b[1]]
        }).collect();
        let rec2 = MeasurementRecord::new(rec.axis_a, rec.axis_b, moved).unwrap();
        let ro2 = ReadoutModel::new(ro.axes.map(|r| transform_ref(&r, &f)), ro.noise_sigma * scale).unwrap();
        let rb2 = ReadoutModel::new(rb.axes.map(|r| transform_ref(&r, &f)), rb.noise_sigma * scale).unwrap();
        let d1 = iq_to_expectation(rec, &ro, &rb).unwrap();
        let d2 = iq_to_expectation(&rec2, &ro2, &rb2).unwrap();
        prop_assert!((d1.d_a - d2.d_a).abs() < 1e-9);
        prop_assert!((d1.d_b - d2.d_b).abs() < 1e-9);
        prop_assert!((d1.d_ab - d2.d_ab).abs() < 1e-8);
    }
}

fn ideal_cardinals() -> Vec<DensityMatrix> {
    prepare_cardinal_states(&ideal_qubit()).unwrap()
}

#[test]
fn fit_povm_ideal_projective() {
    let states = ideal_cardinals();
    let data = cardinal_expectations(&states, &DetectorModel::ideal()).unwrap();
    let det = fit_povm(&states, &data).unwrap();
    for axis in Axis::ALL {
        let p = det.axis(axis);
        assert!((p.alpha() - 1.0).abs() < 1e-3 && (p.beta() + 1.0).abs() < 1e-3);
        assert!(p.e().max_abs_diff(AxisPovm::ideal(axis).e()) < 2e-3);
    }
}

fn depolarized(p: f64) -> DetectorModel {
    let axes = Axis::ALL.map(|a| {
        let e = AxisPovm::ideal(a).e().clone();
        let mixed = &(&e * (1.0 - p)) + &(&QOperator::identity(&[2]) * (p / 2.0));
        AxisPovm::new(mixed, 1.0, -1.0).unwrap()
    });
    DetectorModel::new(axes).unwrap()
}

#[test]
fn fit_povm_depolarized_detector() {
    let states = prepare_cardinal_states(&presets::qubit_a()).unwrap();
    let truth = depolarized(0.2);
    let data = cardinal_expectations(&states, &truth).unwrap();
    let det = fit_povm(&states, &data).unwrap();
    for axis in Axis::ALL {
        let ev = eigvalsh(det.axis(axis).e().data());
        assert!(ev[0] > 1e-3 && ev[1] < 1.0 - 1e-3, "{ev:?}");
    }
    let back = cardinal_expectations(&states, &det).unwrap();
    for (x, y) in back.iter().flatten().zip(data.iter().flatten()) {
        assert!((x - y).abs() < 1e-6);
    }
    assert!(det.residuals().iter().all(|r| *r < 1e-12));
}

#[test]
fn fit_povm_physical_detector_round_trip() {
    let q = presets::qubit_b();
    let states = prepare_cardinal_states(&q).unwrap();
    let truth = physical_detector(&q, 0.97, -0.93).unwrap();
    let data = cardinal_expectations(&states, &truth).unwrap();
    let det = fit_povm(&states, &data).unwrap();
    let back = cardinal_expectations(&states, &det).unwrap();
    for (x, y) in back.iter().flatten().zip(data.iter().flatten()) {
        assert!((x - y).abs() < 1e-6);
    }
}

#[test]
fn fit_povm_rejects_rank_deficient_states() {
    let ground = DensityMatrix::basis(&[2], &[0]).unwrap();
    let excited = DensityMatrix::basis(&[2], &[1]).unwrap();
    let states = vec![ground.clone(), excited.clone(), ground, excited];
    let data = vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];
    assert!(matches!(fit_povm(&states, &data), Err(Error::Conditioning(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn fitted_elements_are_bounded(seed in any::<u64>(), noise in 0.0..0.2f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states = prepare_cardinal_states(&ideal_qubit()).unwrap();
        let mut data = cardinal_expectations(&states, &depolarized(0.1)).unwrap();
        for row in &mut data {
            for v in row.iter_mut() {
                *v += noise * (rand::Rng::random::<f64>(&mut rng) - 0.5);
            }
        }
        let det = fit_povm(&states, &data).unwrap();
        for axis in Axis::ALL {
            let ev = eigvalsh(det.axis(axis).e().data());
            prop_assert!(ev[0] >= -1e-9 && ev[1] <= 1.0 + 1e-9);
            let p = det.axis(axis);
            let sum = &(p.e() + &(&QOperator::identity(&[2]) - p.e())) - &QOperator::identity(&[2]);
            prop_assert!(sum.norm() == 0.0);
        }
    }
}

#[test]
fn reconstruction_noiseless_round_trip() {
    let q = presets::qubit_a();
    let det = physical_detector(&q, 1.0, -1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..5 {
        let rho = random_density(&[2, 2], 2, &mut rng);
        let data = expected_data(&rho, &det, &det).unwrap();
        let est = reconstruct_state(&data, &det, &det).unwrap();
        assert!(fidelity(&rho, &est).unwrap() >= 0.999);
        assert!(rho.trace_distance(&est).unwrap() < 1e-6);
    }
}

#[test]
fn reconstruction_respects_mixtures() {
    let det = DetectorModel::ideal();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r1 = random_state(&[2, 2], &mut rng).to_density();
    let r2 = random_state(&[2, 2], &mut rng).to_density();
    let p = 0.3;
    let mix = DensityMatrix::from_matrix(r1.data() * cr(p) + r2.data() * cr(1.0 - p), vec![2, 2]).unwrap();
    let est = reconstruct_state(&expected_data(&mix, &det, &det).unwrap(), &det, &det).unwrap();
    assert!(est.trace_distance(&mix).unwrap() < 1e-6);
}

#[test]
fn reconstruction_projects_unphysical_data() {
    let det = DetectorModel::ideal();
    let mut data = expected_data(&singlet().to_density(), &det, &det).unwrap();
    for d in &mut data {
        d.d_ab *= 1.2;
    }
    let est = reconstruct_state(&data, &det, &det).unwrap();
    assert!(est.eigenvalues()[0] >= -1e-9);
    assert!(fidelity(&est, &singlet().to_density()).unwrap() > 0.95);
}

#[test]
fn reconstruction_input_checks() {
    let det = DetectorModel::ideal();
    let rho = DensityMatrix::maximally_mixed(&[2, 2]);
    let data = expected_data(&rho, &det, &det).unwrap();
    assert!(reconstruct_state(&data[..8], &det, &det).is_err());
    let mut dup = data.clone();
    dup[8] = dup[0];
    assert!(reconstruct_state(&dup, &det, &det).is_err());
    // All-identity observables carry no state information.
    let blind = Axis::ALL.map(|_| AxisPovm::new(&QOperator::identity(&[2]) * 0.5, 1.0, 1.0).unwrap());
    let blind = DetectorModel::new(blind).unwrap();
    assert!(matches!(reconstruct_state(&data, &blind, &blind), Err(Error::Reconstruction(_))));
}

#[test]
fn shots_ideal_ground_state() {
    let det = DetectorModel::ideal();
    let mut ro = ReadoutModel::default_for(0);
    ro.noise_sigma = 0.0;
    let rho = DensityMatrix::basis(&[2, 2], &[0, 0]).unwrap();
    let recs = synthesize_shots(&rho, [&det, &det], [&ro, &ro], 20, 1).unwrap();
    let zz = recs.iter().find(|r| r.axis_a == Axis::Z && r.axis_b == Axis::Z).unwrap();
    let d = iq_to_expectation(zz, &ro, &ro).unwrap();
    assert!((d.d_ab - 1.0).abs() < 1e-12);
    assert!(synthesize_shots(&rho, [&det, &det], [&ro, &ro], 0, 1).is_err());
}

#[test]
fn shots_are_deterministic() {
    let det = DetectorModel::ideal();
    let (ra, rb) = (ReadoutModel::default_for(0), ReadoutModel::default_for(1));
    let rho = singlet().to_density();
    let a = synthesize_shots(&rho, [&det, &det], [&ra, &rb], 100, 42).unwrap();
    let b = synthesize_shots(&rho, [&det, &det], [&ra, &rb], 100, 42).unwrap();
    assert_eq!(records_to_csv(&a), records_to_csv(&b));
    let c = synthesize_shots(&rho, [&det, &det], [&ra, &rb], 100, 43).unwrap();
    assert_ne!(records_to_csv(&a), records_to_csv(&c));
    let csv = records_to_csv(&a);
    assert!(csv.starts_with("axis_i,axis_j,shot,I_i,Q_i,I_j,Q_j\nX,X,0,"));
    assert_eq!(csv.lines().count(), 1 + 9 * 100);
}

#[test]
fn shots_converge_to_analytic_expectations() {
    let q = presets::qubit_a();
    let det = physical_detector(&q, 0.95, -0.9).unwrap();
    let (ra, rb) = (ReadoutModel::default_for(0), ReadoutModel::default_for(1));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rho = random_density(&[2, 2], 2, &mut rng);
    let n = 1_000_000;
    let exact = expected_data(&rho, &det, &det).unwrap();
    let recs = synthesize_shots(&rho, [&det, &det], [&ra, &rb], n, 77).unwrap();
    for (r, e) in recs.iter().zip(&exact) {
        let d = iq_to_expectation(r, &ra, &rb).unwrap();
        // Per-shot spread of d_ab is bounded by (1 + 4σ/sep)² in magnitude terms.
        let sigma = 3.0 / (n as f64).sqrt();
        assert!((d.d_a - e.d_a).abs() < 3.0 * sigma, "{} {}", d.d_a, e.d_a);
        assert!((d.d_b - e.d_b).abs() < 3.0 * sigma);
        assert!((d.d_ab - e.d_ab).abs() < 3.0 * sigma);
    }
}

#[test]
fn detector_json_round_trip() {
    let det = physical_detector(&presets::qubit_a(), 0.97, -0.95).unwrap();
    let text = serde_json::to_string(&det).unwrap();
    let back: DetectorModel = serde_json::from_str(&text).unwrap();
    assert!(back.axis(Axis::Y).e().max_abs_diff(det.axis(Axis::Y).e()) < 1e-15);
    assert_eq!(back.axis(Axis::X).alpha(), 0.97);
    assert!(serde_json::from_str::<DetectorModel>("[]").is_err());
}

#[test]
fn pauli_bars_reference_states() {
    let s = pauli_bars(&singlet().to_density()).unwrap();
    for (label, v) in PAULI_LABELS.iter().zip(s) {
        let expected = if ["XX", "YY", "ZZ"].contains(label) { -1.0 } else { 0.0 };
        assert!((v - expected).abs() < 1e-12, "{label}: {v}");
    }
    let g = pauli_bars(&DensityMatrix::basis(&[2, 2], &[0, 0]).unwrap()).unwrap();
    assert!((g[2] + 1.0).abs() < 1e-12);
    assert!((g[11] + 1.0).abs() < 1e-12);
    assert!((g[14] - 1.0).abs() < 1e-12);
    let back = state_from_pauli(&s).unwrap();
    assert!(fidelity(&back, &singlet().to_density()).unwrap() > 1.0 - 1e-12);
}

#[test]
fn bootstrap_examples() {
    let rho = crate::entanglement::tms_dark_state(0.3).unwrap().to_density();
    let bars = pauli_bars(&rho).unwrap();
    let (m, s) = bootstrap_concurrence_error(state_from_pauli, &bars, &[[0.0; 15]; 4], 20, 1).unwrap();
    assert_eq!(s, 0.0);
    assert!((m - concurrence(&rho).unwrap()).abs() < 1e-9);
    assert!(bootstrap_concurrence_error(state_from_pauli, &bars, &[], 20, 1).is_err());

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let disc: Vec<[f64; 15]> = (0..6)
        .map(|_| std::array::from_fn(|_| 0.03 * (rand::Rng::random::<f64>(&mut rng) - 0.5) * 2.0))
        .collect();
    let doubled: Vec<[f64; 15]> = disc.iter().map(|d| d.map(|x| 2.0 * x)).collect();
    let (_, s1) = bootstrap_concurrence_error(state_from_pauli, &bars, &disc, 200, 9).unwrap();
    let (_, s2) = bootstrap_concurrence_error(state_from_pauli, &bars, &doubled, 200, 9).unwrap();
    assert!(s1 > 0.0 && s2 > s1, "{s1} {s2}");
    let (_, again) = bootstrap_concurrence_error(state_from_pauli, &bars, &disc, 200, 9).unwrap();
    assert_eq!(s1, again);
}

#[test]
fn closure_noiseless_small() {
    let report = tomography_closure(&presets::qubits(), 4, &Acquisition::noiseless(), 11).unwrap();
    assert!(report.min_fidelity() >= 0.999, "{:?}", report.fidelities);
}

#[test]
fn mismatched_cardinals_reduce_self_consistency() {
    // Detectors fitted with idealised cardinal states while the real ones
    // are prepared by noisy pulses.
    let qubits = presets::qubits();
    let truth = [physical_detector(&qubits[0], 1.0, -1.0).unwrap(), physical_detector(&qubits[1], 1.0, -1.0).unwrap()];
    let real = [prepare_cardinal_states(&qubits[0]).unwrap(), prepare_cardinal_states(&qubits[1]).unwrap()];
    let ideal = ideal_cardinals();
    let fitted = calibrate_detectors(
        [&truth[0], &truth[1]],
        [&real[0], &real[1]],
        [&ideal, &ideal],
        &Acquisition::noiseless(),
        1,
    )
    .unwrap();
    let pairs = cardinal_pairs([&real[0], &real[1]]).unwrap();
    let mut total = 0.0;
    for rho in &pairs {
        let data = expected_data(rho, &truth[0], &truth[1]).unwrap();
        let est = reconstruct_state(&data, &fitted[0], &fitted[1]).unwrap();
        total += fidelity(rho, &est).unwrap();
    }
    let mean = total / pairs.len() as f64;
    assert!(mean > 0.85 && mean < 0.9999, "{mean}");
}

#[test]
fn manual_matrix_element_check() {
    // E for Z̃ with a long-lived qubit is the ground-state projector.
    let det = physical_detector(&ideal_qubit(), 1.0, -1.0).unwrap();
    let mut p0 = CMatrix::zeros(2, 2);
    p0[(0, 0)] = c(1.0, 0.0);
    assert!(crate::linalg::max_abs_diff(det.axis(Axis::Z).e().data(), &p0) < 1e-9);
    let x = det.axis(Axis::X).observable();
    assert!(x.max_abs_diff(&(&pauli('X').unwrap() * -1.0)) < 2e-3);
    let _ = FRAC_PI_2;
}



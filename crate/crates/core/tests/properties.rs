use std::f64::consts::PI;

use modent::interferometer::{bragg_output, joint_probabilities, momentum_correlation, BraggPhases, STATION_A};
use modent::oscillator::{build_model, mode_overlap, ModeAssignment};
use modent::polarization::{
    detection_probabilities, epr_state, rotate_to_analyzers, transformed_epr_state, AnalyzerSettings,
    PHOTON_A, PHOTON_B,
};
use modent::protocol::{assemble_final_state, assemble_from_overlaps, particle_entanglement_entropy};
use modent::state::{
    entanglement_entropy, partial_trace, renyi_entropy, von_neumann_entropy, BasisLabel, PureState, C64,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn angle() -> impl Strategy<Value = f64> {
    -PI..PI
}

fn unitary(alpha: f64, beta: f64, gamma: f64, theta: f64) -> DMatrix<C64> {
    let e = |x: f64| C64::from_polar(1.0, x);
    let (c, s) = (theta.cos(), theta.sin());
    DMatrix::from_row_slice(
        2,
        2,
        &[e(alpha + beta) * c, e(alpha + gamma) * s, -e(alpha - gamma) * s, e(alpha - beta) * c],
    )
}

fn random_state(dims: (usize, usize), re: &[f64], im: &[f64]) -> Option<PureState> {
    let basis = BasisLabel::new([("left", dims.0), ("right", dims.1)]).unwrap();
    let amps: Vec<C64> = re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect();
    PureState::from_slice(basis, &amps).ok()?.normalize().ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn schmidt_symmetry(re in prop::collection::vec(-1.0..1.0f64, 6), im in prop::collection::vec(-1.0..1.0f64, 6)) {
        if let Some(s) = random_state((2, 3), &re, &im) {
            let left = entanglement_entropy(&s, "left").unwrap();
            let right = entanglement_entropy(&s, "right").unwrap();
            prop_assert!((left - right).abs() < 1e-10);
            prop_assert!((-1e-12..=1.0 + 1e-10).contains(&left));
        }
    }

    #[test]
    fn local_unitaries_preserve_entropy(
        a in prop::array::uniform4(angle()),
        b in prop::array::uniform4(angle()),
    ) {
        let s = epr_state()
            .apply_local(PHOTON_A, &unitary(a[0], a[1], a[2], a[3])).unwrap()
            .apply_local(PHOTON_B, &unitary(b[0], b[1], b[2], b[3])).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        let rho = partial_trace(&s, PHOTON_B).unwrap();
        prop_assert!((von_neumann_entropy(&rho) - 1.0).abs() < 1e-10);
        prop_assert!((renyi_entropy(&rho, 2.0).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn renyi_brackets_von_neumann(re in prop::collection::vec(-1.0..1.0f64, 4), im in prop::collection::vec(-1.0..1.0f64, 4)) {
        if let Some(s) = random_state((2, 2), &re, &im) {
            let rho = partial_trace(&s, "left").unwrap();
            let vn = von_neumann_entropy(&rho);
            let below = renyi_entropy(&rho, 1.0 - 1e-4).unwrap();
            let above = renyi_entropy(&rho, 1.0 + 1e-4).unwrap();
            prop_assert!(above <= vn + 1e-9 && vn <= below + 1e-9);
            prop_assert!((below - vn).abs() < 1e-3 && (above - vn).abs() < 1e-3);
        }
    }

    #[test]
    fn closed_form_matches_rotation(a in angle(), b in angle()) {
        let settings = AnalyzerSettings::new(a, b);
        let closed = transformed_epr_state(settings);
        let rotated = rotate_to_analyzers(&epr_state(), settings).unwrap();
        let dev = (closed.amplitudes() - rotated.amplitudes()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-12);
    }

    #[test]
    fn detection_probabilities_close(a in angle(), b in angle()) {
        let p = detection_probabilities(AnalyzerSettings::new(a, b));
        prop_assert!((p.joint_total() - 1.0).abs() < 1e-12);
        prop_assert!(p.joint.iter().flatten().all(|&x| (-1e-15..=1.0).contains(&x)));
        prop_assert!((p.correlation() - (2.0 * (a - b)).cos()).abs() < 1e-12);
    }

    #[test]
    fn interferometer_unitary_and_shift_invariant(a in angle(), b in angle(), shift in angle()) {
        let phases = BraggPhases::new(a, b);
        prop_assert!((bragg_output(phases).norm() - 1.0).abs() < 1e-12);
        prop_assert!((joint_probabilities(phases).total() - 1.0).abs() < 1e-12);
        let moved = BraggPhases::new(a + shift, b + shift);
        prop_assert!((momentum_correlation(phases) - momentum_correlation(moved)).abs() < 1e-12);
        prop_assert!((entanglement_entropy(&bragg_output(phases), STATION_A).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn anharmonicity_raises_and_narrows(l1 in 0.0..0.5f64, dl in 0.01..0.5f64) {
        let lo = build_model(l1, 48).unwrap();
        let hi = build_model(l1 + dl, 48).unwrap();
        for n in 0..4 {
            prop_assert!(hi.energy(n).unwrap() > lo.energy(n).unwrap());
        }
        prop_assert!(hi.position_variance(0).unwrap() < lo.position_variance(0).unwrap());
        for n in 0..4 {
            let s = mode_overlap(&hi, n).unwrap();
            prop_assert!(s > 0.0 && s <= 1.0);
        }
    }

    #[test]
    fn truncation_converges(lambda in 0.0..0.5f64) {
        let a = build_model(lambda, 64).unwrap();
        let b = build_model(lambda, 96).unwrap();
        for n in 0..4 {
            prop_assert!((a.energy(n).unwrap() - b.energy(n).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn converted_pair_is_entangled(lambda in 0.05..1.0f64, t in 0.1..1.4f64, la in 0usize..4, lb in 0usize..4) {
        prop_assume!(la != lb);
        let model = build_model(lambda, 40).unwrap();
        let assignment = ModeAssignment::new(la, lb).unwrap();
        let state = assemble_final_state(C64::new(t.cos(), 0.0), C64::new(t.sin(), 0.0), &model, &assignment).unwrap();
        let s = particle_entanglement_entropy(&state).unwrap();
        prop_assert!(s > 0.0 && s <= 1.0 + 1e-12);
    }

    #[test]
    fn unit_overlaps_give_product(t in 0.0..PI, phase in angle()) {
        let state = assemble_from_overlaps(C64::new(t.cos(), 0.0), C64::from_polar(t.sin(), phase), 1.0, 1.0);
        if let Ok(s) = state {
            prop_assert!(particle_entanglement_entropy(&s).unwrap().abs() < 1e-10);
        }
    }
}

//! Polarization-entangled photon pair: analyzer rotations, detection
//! probabilities, correlation coefficients, the CHSH sum, and entropy scans
//! under real-space (analyzer) and Hilbert-space (mode) rotations.
//!
//! Basis order is `(H, V) -> (0, 1)`; joint outcomes are ordered
//! `++, +-, -+, --` (equivalently `HH, HV, VH, VV` before rotation).

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scan::{linspace, ScanResult};
use crate::state::{
    entanglement_entropy, partial_trace, renyi_entropy, von_neumann_entropy, BasisLabel,
    PureState, C64,
};

pub const PHOTON_A: &str = "photon_A";
pub const PHOTON_B: &str = "photon_B";
pub const MODE_A: &str = "mode_a";
pub const MODE_B: &str = "mode_b";

/// Analyzer orientations at the two stations, in radians in the x-y plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerSettings {
    pub theta_a: f64,
    pub theta_b: f64,
}

impl AnalyzerSettings {
    pub fn new(theta_a: f64, theta_b: f64) -> Self {
        Self { theta_a, theta_b }
    }

    /// `theta_a - theta_b`.
    pub fn relative(&self) -> f64 {
        self.theta_a - self.theta_b
    }

    /// Both angles reduced to `[0, 2π)`; only used for reporting.
    pub fn reduced(&self) -> (f64, f64) {
        let tau = std::f64::consts::TAU;
        (self.theta_a.rem_euclid(tau), self.theta_b.rem_euclid(tau))
    }
}

/// Common separation angle of the equally spaced CHSH geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings {
    pub theta: f64,
}

/// Four free analyzer axes `a, a'` (station A) and `b, b'` (station B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshAngles {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl From<ChshSettings> for ChshAngles {
    /// Axes spaced by `theta` in the order `a, b, a', b'`, so that
    /// `∠(a,b) = ∠(b,a') = ∠(a',b') = θ` and `∠(a,b') = 3θ`.
    fn from(s: ChshSettings) -> Self {
        Self {
            a: 0.0,
            b: s.theta,
            a_prime: 2.0 * s.theta,
            b_prime: 3.0 * s.theta,
        }
    }
}

fn polarization_basis(name: &str) -> BasisLabel {
    BasisLabel::single(name, 2).expect("static basis")
}

/// `(|H>_A|H>_B + |V>_A|V>_B)/√2`.
pub fn epr_state() -> PureState {
    PureState::from_real(
        BasisLabel::new([(PHOTON_A, 2), (PHOTON_B, 2)]).expect("static basis"),
        &[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
    )
    .expect("static state")
}

/// Analyzer eigenstates `(|+>, |->)` at orientation `theta`, expressed in
/// the `(H, V)` basis.
pub fn analyzer_basis(theta: f64) -> (PureState, PureState) {
    let (s, c) = theta.sin_cos();
    let plus = PureState::from_real(polarization_basis("photon"), &[c, s]).expect("2-vector");
    let minus = PureState::from_real(polarization_basis("photon"), &[-s, c]).expect("2-vector");
    (plus, minus)
}

/// Change of basis whose rows are `<+|` and `<-|`: maps `(H, V)` amplitudes
/// to analyzer-basis amplitudes.
pub fn analyzer_projector(theta: f64) -> DMatrix<C64> {
    let (plus, minus) = analyzer_basis(theta);
    DMatrix::from_fn(2, 2, |i, j| {
        let row = if i == 0 { &plus } else { &minus };
        row.amplitudes()[j].conj()
    })
}

/// Re-expresses a two-photon state in the analyzer bases of both stations.
pub fn rotate_to_analyzers(state: &PureState, settings: AnalyzerSettings) -> Result<PureState> {
    state
        .apply_local(PHOTON_A, &analyzer_projector(settings.theta_a))?
        .apply_local(PHOTON_B, &analyzer_projector(settings.theta_b))
}

/// The entangled pair written in the `|±>_A ⊗ |±>_B` bases, in closed form:
/// `cos θ (|++> + |-->)/√2 + sin θ (|+-> - |-+>)/√2`, `θ = θ_A - θ_B`.
pub fn transformed_epr_state(settings: AnalyzerSettings) -> PureState {
    let (s, c) = settings.relative().sin_cos();
    let k = FRAC_1_SQRT_2;
    PureState::from_real(
        BasisLabel::new([(PHOTON_A, 2), (PHOTON_B, 2)]).expect("static basis"),
        &[c * k, s * k, -s * k, c * k],
    )
    .expect("static state")
}

/// Single-station and joint detection probabilities, indexed `0 = +`, `1 = -`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionProbabilities {
    pub single_a: [f64; 2],
    pub single_b: [f64; 2],
    pub joint: [[f64; 2]; 2],
}

impl DetectionProbabilities {
    pub fn joint_total(&self) -> f64 {
        self.joint.iter().flatten().sum()
    }

    /// `P++ + P-- - P+- - P-+`.
    pub fn correlation(&self) -> f64 {
        self.joint[0][0] + self.joint[1][1] - self.joint[0][1] - self.joint[1][0]
    }
}

/// Probabilities `|<±,±|Ψ>|²` from the factor-wise rotated pair; single
/// probabilities are the marginals of the joint table.
pub fn detection_probabilities(settings: AnalyzerSettings) -> DetectionProbabilities {
    let rotated = rotate_to_analyzers(&epr_state(), settings).expect("two-photon basis");
    let amps = rotated.amplitudes();
    let mut joint = [[0.0; 2]; 2];
    for (i, row) in joint.iter_mut().enumerate() {
        for (j, p) in row.iter_mut().enumerate() {
            *p = amps[2 * i + j].norm_sqr();
        }
    }
    let single_a = [joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]];
    let single_b = [joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]];
    DetectionProbabilities { single_a, single_b, joint }
}

/// Polarization correlation coefficient `E(a, b)`, from the probabilities.
pub fn correlation(settings: AnalyzerSettings) -> f64 {
    detection_probabilities(settings).correlation()
}

/// `E(a,b) - E(a,b') + E(a',b) + E(a',b')` for arbitrary axes.
pub fn chsh_sum_angles(angles: ChshAngles) -> f64 {
    let e = |x, y| correlation(AnalyzerSettings::new(x, y));
    e(angles.a, angles.b) - e(angles.a, angles.b_prime)
        + e(angles.a_prime, angles.b)
        + e(angles.a_prime, angles.b_prime)
}

/// CHSH sum for the equally spaced geometry.
pub fn chsh_sum(settings: ChshSettings) -> f64 {
    chsh_sum_angles(settings.into())
}

/// Rows `(theta, S, entropy)`; entropy is that of the transformed pair at
/// relative orientation `theta`.
pub fn chsh_scan(theta_min: f64, theta_max: f64, steps: usize) -> Result<ScanResult> {
    let rows = linspace(theta_min, theta_max, steps)?
        .into_iter()
        .map(|theta| {
            let s = chsh_sum(ChshSettings { theta });
            let state = transformed_epr_state(AnalyzerSettings::new(theta, 0.0));
            let entropy = entanglement_entropy(&state, PHOTON_A)?;
            Ok(vec![theta, s, entropy])
        })
        .collect::<Result<Vec<_>>>()?;
    ScanResult::new(&["theta", "S", "entropy"], rows)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp().round()
}

/// Applies the two-mode rotation `a† -> cos φ a† + sin φ b†`,
/// `b† -> -sin φ a† + cos φ b†` to a state of two bosonic modes in the
/// occupation-number basis. Photon number is conserved, so every occupied
/// component must fit into the truncation of both modes.
pub fn rotate_modes(state: &PureState, mode_a: &str, mode_b: &str, phi: f64) -> Result<PureState> {
    let basis = state.basis();
    if basis.num_factors() != 2 {
        return Err(Error::InvalidParameter("mode rotation needs exactly two modes".into()));
    }
    let (ka, kb) = (basis.index_of(mode_a)?, basis.index_of(mode_b)?);
    let dims = basis.dims();
    let (da, db) = (dims[ka], dims[kb]);
    let (s, c) = phi.sin_cos();
    let mut out = DVector::<C64>::zeros(state.dim());
    let index = |na: usize, nb: usize| {
        let mut multi = [0usize; 2];
        multi[ka] = na;
        multi[kb] = nb;
        basis.flat_index(&multi)
    };
    for n in 0..da {
        for m in 0..db {
            let amp = state.amplitudes()[index(n, m)?];
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            // |n,m> = a†^n b†^m |0,0> / √(n! m!)
            let norm_in = (ln_factorial(n) + ln_factorial(m)) * 0.5;
            for k in 0..=n {
                let ck = binomial(n, k) * c.powi(k as i32) * s.powi((n - k) as i32);
                for l in 0..=m {
                    let cl = binomial(m, l) * (-s).powi(l as i32) * c.powi((m - l) as i32);
                    let (na, nb) = (k + l, n + m - k - l);
                    if na >= da || nb >= db {
                        return Err(Error::DimensionMismatch {
                            expected: da.min(db),
                            found: na.max(nb) + 1,
                        });
                    }
                    let norm_out = (ln_factorial(na) + ln_factorial(nb)) * 0.5;
                    out[index(na, nb)?] += amp * ck * cl * (norm_out - norm_in).exp();
                }
            }
        }
    }
    PureState::new(basis.clone(), out)
}

/// The two-photon state `|1,1>` on modes `a`, `b`, each truncated to
/// occupations `{0, 1, 2}`.
pub fn two_mode_single_pair() -> PureState {
    let mut amps = [0.0; 9];
    amps[3 + 1] = 1.0;
    PureState::from_real(
        BasisLabel::new([(MODE_A, 3), (MODE_B, 3)]).expect("static basis"),
        &amps,
    )
    .expect("static state")
}

/// Rows `(phi, entropy_vn, entropy_renyi2)` of the mode-bipartition entropy
/// of `|1,1>` after a Hilbert-space rotation by `phi`.
pub fn mode_rotation_entropy_scan(phi_min: f64, phi_max: f64, steps: usize) -> Result<ScanResult> {
    let input = two_mode_single_pair();
    let rows = linspace(phi_min, phi_max, steps)?
        .into_iter()
        .map(|phi| {
            let rotated = rotate_modes(&input, MODE_A, MODE_B, phi)?;
            let rho = partial_trace(&rotated, MODE_A)?;
            Ok(vec![phi, von_neumann_entropy(&rho), renyi_entropy(&rho, 2.0)?])
        })
        .collect::<Result<Vec<_>>>()?;
    ScanResult::new(&["phi", "entropy_vn", "entropy_renyi2"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::fidelity;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, SQRT_2};

    fn assert_amps(state: &PureState, want: &[f64], tol: f64) {
        for (a, w) in state.amplitudes().iter().zip(want) {
            assert!((a.re - w).abs() <= tol && a.im.abs() <= tol, "{a} vs {w}");
        }
    }

    #[test]
    fn epr_amplitudes_and_entropy() {
        let s = epr_state();
        assert_amps(&s, &[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2], 0.0);
        assert!((entanglement_entropy(&s, PHOTON_A).unwrap() - 1.0).abs() < 1e-12);
        let h = PureState::basis_ket(PHOTON_A, 2, 0).unwrap();
        let hb = PureState::basis_ket(PHOTON_B, 2, 0).unwrap();
        let hh = crate::state::tensor(&[&h, &hb]).unwrap();
        assert!((fidelity(&hh, &s).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn analyzer_basis_special_angles() {
        let (p, m) = analyzer_basis(0.0);
        assert_amps(&p, &[1.0, 0.0], 0.0);
        assert_amps(&m, &[0.0, 1.0], 0.0);
        let (p, m) = analyzer_basis(FRAC_PI_2);
        assert_amps(&p, &[0.0, 1.0], 1e-16);
        assert_amps(&m, &[-1.0, 0.0], 1e-16);
        for theta in [0.3, 1.7, -2.2] {
            let (p, m) = analyzer_basis(theta);
            assert!(p.inner(&m).unwrap().norm() < 1e-16);
        }
    }

    #[test]
    fn transformed_state_special_angles() {
        let s = transformed_epr_state(AnalyzerSettings::new(0.4, 0.4));
        assert_amps(&s, &[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2], 1e-15);
        let s = transformed_epr_state(AnalyzerSettings::new(FRAC_PI_2, 0.0));
        assert_amps(&s, &[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0], 1e-15);
    }

    #[test]
    fn detection_probabilities_special_angles() {
        let p = detection_probabilities(AnalyzerSettings::new(0.0, 0.0));
        assert!((p.joint[0][0] - 0.5).abs() < 1e-15 && p.joint[0][1].abs() < 1e-15);
        let p = detection_probabilities(AnalyzerSettings::new(FRAC_PI_4, 0.0));
        for q in p.joint.iter().flatten() {
            assert!((q - 0.25).abs() < 1e-15);
        }
        let p = detection_probabilities(AnalyzerSettings::new(FRAC_PI_2, 0.0));
        assert!(p.joint[0][0].abs() < 1e-15 && (p.joint[0][1] - 0.5).abs() < 1e-15);
        for q in p.single_a.iter().chain(&p.single_b) {
            assert!((q - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn correlation_special_angles() {
        assert!((correlation(AnalyzerSettings::new(0.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!(correlation(AnalyzerSettings::new(FRAC_PI_4, 0.0)).abs() < 1e-15);
        assert!((correlation(AnalyzerSettings::new(FRAC_PI_2, 0.0)) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn chsh_special_angles() {
        assert!((chsh_sum(ChshSettings { theta: 0.0 }) - 2.0).abs() < 1e-14);
        assert!((chsh_sum(ChshSettings { theta: FRAC_PI_8 }) - 2.0 * SQRT_2).abs() < 1e-14);
        assert!(chsh_sum(ChshSettings { theta: FRAC_PI_4 }).abs() < 1e-14);
    }

    #[test]
    fn chsh_scan_five_points() {
        let scan = chsh_scan(0.0, FRAC_PI_2, 5).unwrap();
        let want = [2.0, 2.0 * SQRT_2, 0.0, -2.0 * SQRT_2, -2.0];
        for (s, w) in scan.column("S").unwrap().iter().zip(want) {
            assert!((s - w).abs() < 1e-12);
        }
        for e in scan.column("entropy").unwrap() {
            assert!((e - 1.0).abs() < 1e-10);
        }
        assert!(matches!(chsh_scan(0.0, 1.0, 1), Err(Error::TooFewSteps(1))));
    }

    #[test]
    fn mode_rotation_matches_hand_expansion() {
        // cos2φ|1,1> + (sin2φ/√2)(|0,2> - |2,0>)
        for phi in [0.0, 0.1, FRAC_PI_8, 0.7, FRAC_PI_4, 2.0] {
            let out = rotate_modes(&two_mode_single_pair(), MODE_A, MODE_B, phi).unwrap();
            let mut want = [0.0; 9];
            want[4] = (2.0 * phi).cos();
            want[2] = (2.0 * phi).sin() / SQRT_2;
            want[6] = -(2.0 * phi).sin() / SQRT_2;
            assert_amps(&out, &want, 1e-14);
        }
    }

    #[test]
    fn mode_rotation_entropy_points() {
        let scan = mode_rotation_entropy_scan(0.0, FRAC_PI_4, 3).unwrap();
        let vn = scan.column("entropy_vn").unwrap();
        assert!(vn[0].abs() < 1e-12);
        assert!((vn[1] - 1.5).abs() < 1e-10);
        assert!((vn[2] - 1.0).abs() < 1e-10);
        // Rényi-2 at π/8: -log2(1/4 + 1/16 + 1/16)
        let r2 = scan.column("entropy_renyi2").unwrap();
        assert!((r2[1] - (-(0.375f64).log2())).abs() < 1e-10);
    }

    #[test]
    fn mode_rotation_rejects_overflowing_truncation() {
        let small = PureState::from_real(
            BasisLabel::new([(MODE_A, 2), (MODE_B, 2)]).unwrap(),
            &[0.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        assert!(rotate_modes(&small, MODE_A, MODE_B, 0.3).is_err());
    }

    #[test]
    fn reduced_angles() {
        let s = AnalyzerSettings::new(-0.5, 7.0);
        let (a, b) = s.reduced();
        assert!((0.0..std::f64::consts::TAU).contains(&a));
        assert!((0.0..std::f64::consts::TAU).contains(&b));
    }
}

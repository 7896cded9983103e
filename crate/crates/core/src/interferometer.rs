//! Two-atom, four-momentum-mode Bragg interferometer.
//!
//! The output space is represented as (port at station A) ⊗ (port at
//! station B), each port index `0 = +`, `1 = -`; the entanglement cut is
//! between the two stations.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::scan::{linspace, ScanResult};
use crate::state::{entanglement_entropy, BasisLabel, PureState, C64};

pub const ATOM_1: &str = "atom_1";
pub const ATOM_2: &str = "atom_2";
pub const STATION_A: &str = "station_A";
pub const STATION_B: &str = "station_B";

/// Laser phase differences of the two Bragg splitters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraggPhases {
    pub phi_a: f64,
    pub phi_b: f64,
}

impl BraggPhases {
    pub fn new(phi_a: f64, phi_b: f64) -> Self {
        Self { phi_a, phi_b }
    }

    /// `phi_a - phi_b`.
    pub fn delta(&self) -> f64 {
        self.phi_a - self.phi_b
    }
}

/// Opaque mode labels; momenta carry no kinematics here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentumLabels {
    pub p: String,
    pub p_prime: String,
    pub outputs: [String; 4],
}

impl Default for MomentumLabels {
    fn default() -> Self {
        Self {
            p: "p".into(),
            p_prime: "p'".into(),
            outputs: ["A+".into(), "A-".into(), "B+".into(), "B-".into()],
        }
    }
}

impl MomentumLabels {
    pub fn outputs_distinct(&self) -> bool {
        let o = &self.outputs;
        (0..4).all(|i| (i + 1..4).all(|j| o[i] != o[j]))
    }
}

/// `(|p,-p> + |p',-p'>)/√2`; atom 1 carries `{p, p'}`, atom 2 `{-p, -p'}`.
pub fn interferometer_input() -> PureState {
    PureState::from_real(
        BasisLabel::new([(ATOM_1, 2), (ATOM_2, 2)]).expect("static basis"),
        &[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
    )
    .expect("static state")
}

/// Output state over `|A±, B±>` in order `A+B+, A+B-, A-B+, A-B-`.
pub fn bragg_output(phases: BraggPhases) -> PureState {
    let i = C64::i();
    let one = C64::new(1.0, 0.0);
    let e_delta = C64::from_polar(1.0, phases.delta());
    let e_delta_conj = e_delta.conj();
    let e_b = C64::from_polar(1.0, phases.phi_b);
    let k = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let amps = [
        -i * e_b * (e_delta + one) * k,
        (e_delta - one) * k,
        (e_delta_conj - one) * k,
        -i * e_b.conj() * (e_delta_conj + one) * k,
    ];
    PureState::from_slice(
        BasisLabel::new([(STATION_A, 2), (STATION_B, 2)]).expect("static basis"),
        &amps,
    )
    .expect("static state")
}

/// Joint detection probabilities of the two output stations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointProbabilities {
    pub plus_plus: f64,
    pub plus_minus: f64,
    pub minus_plus: f64,
    pub minus_minus: f64,
}

impl JointProbabilities {
    pub fn total(&self) -> f64 {
        self.plus_plus + self.plus_minus + self.minus_plus + self.minus_minus
    }
}

/// `|amplitude|²` of each output pair.
pub fn joint_probabilities(phases: BraggPhases) -> JointProbabilities {
    let out = bragg_output(phases);
    let p = |k: usize| out.amplitudes()[k].norm_sqr();
    JointProbabilities {
        plus_plus: p(0),
        plus_minus: p(1),
        minus_plus: p(2),
        minus_minus: p(3),
    }
}

pub fn momentum_correlation(phases: BraggPhases) -> f64 {
    let p = joint_probabilities(phases);
    p.plus_plus + p.minus_minus - p.plus_minus - p.minus_plus
}

/// CHSH sum with station phases `{0, 4ϑ}` at A and `{2ϑ, 6ϑ}` at B, i.e.
/// the equally spaced geometry in the half-phase variable `ϑ`.
pub fn momentum_chsh(vartheta: f64) -> f64 {
    let (a, b, a2, b2) = (0.0, 2.0 * vartheta, 4.0 * vartheta, 6.0 * vartheta);
    let e = |x, y| momentum_correlation(BraggPhases::new(x, y));
    e(a, b) - e(a, b2) + e(a2, b) + e(a2, b2)
}

/// Rows `(vartheta, S, entropy_in, entropy_out)`.
pub fn momentum_chsh_scan(min: f64, max: f64, steps: usize) -> Result<ScanResult> {
    let entropy_in = entanglement_entropy(&interferometer_input(), ATOM_1)?;
    let rows = linspace(min, max, steps)?
        .into_iter()
        .map(|vartheta| {
            let out = bragg_output(BraggPhases::new(2.0 * vartheta, 0.0));
            let entropy_out = entanglement_entropy(&out, STATION_A)?;
            Ok(vec![vartheta, momentum_chsh(vartheta), entropy_in, entropy_out])
        })
        .collect::<Result<Vec<_>>>()?;
    ScanResult::new(&["vartheta", "S", "entropy_in", "entropy_out"], rows)
}

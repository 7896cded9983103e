//! Heralded conversion of mode entanglement into particle entanglement.
//!
//! A photon pair sharing two modes is bound to two oscillator eigenmodes.
//! Registration of an ancilla photon switches on the quartic anharmonicity,
//! leaving the pair in `γ|a>₁|b>₂ + δ|a'>₁|b'>₂`. Non-ideal photodetection
//! (efficiency `η`) is mitigated by a clocked AND gate that aborts a cycle
//! whenever the emitted ancilla was not registered anywhere on the screen.
//!
//! Each particle is represented in the two-dimensional frame
//! `{|a>, |a⊥>}`, where `|a⊥>` is the Gram-Schmidt complement of the
//! perturbed eigenmode: `|a'> = s_a|a> + √(1 - s_a²)|a⊥>`.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oscillator::{
    adiabatic_check, build_model, mode_overlap, AdiabaticBudget, AdiabaticReport,
    ModeAssignment, OscillatorModel, Photon, DEFAULT_RATIO_THRESHOLD,
};
use crate::polarization::{MODE_A, MODE_B};
use crate::state::{entanglement_entropy, fidelity, BasisLabel, PureState, C64};

pub const PARTICLE_1: &str = "particle_1";
pub const PARTICLE_2: &str = "particle_2";

const UNIT_TOL: f64 = 1e-12;

/// Ancilla photon and detector amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AncillaConfig {
    /// Top-slit amplitude.
    pub alpha: C64,
    /// Bottom-slit amplitude.
    pub beta: C64,
    /// Amplitude of the "photo-electron registered" detector branch.
    pub detect_amp: C64,
    /// Photodetection efficiency.
    pub eta: f64,
}

impl Default for AncillaConfig {
    fn default() -> Self {
        Self {
            alpha: C64::new(FRAC_1_SQRT_2, 0.0),
            beta: C64::new(FRAC_1_SQRT_2, 0.0),
            detect_amp: C64::new(FRAC_1_SQRT_2, 0.0),
            eta: 0.9,
        }
    }
}

impl AncillaConfig {
    pub fn validate(&self) -> Result<()> {
        let slit_norm = self.alpha.norm_sqr() + self.beta.norm_sqr();
        if (slit_norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidConfig(format!("|alpha|^2 + |beta|^2 = {slit_norm}, expected 1")));
        }
        if !(self.detect_amp.norm() <= 1.0 + UNIT_TOL) {
            return Err(Error::InvalidConfig(format!(
                "|detect_amp| = {} exceeds 1",
                self.detect_amp.norm()
            )));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidConfig(format!("eta = {} outside [0, 1]", self.eta)));
        }
        Ok(())
    }
}

/// Everything a conversion campaign needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConversionConfig {
    pub lambda_on: f64,
    pub truncation: usize,
    pub assignment: ModeAssignment,
    pub ancilla: AncillaConfig,
    /// Probability that the ancilla lands on the triggering (upper) half.
    pub landing_probability: f64,
    /// Clock + AND abort logic enabled.
    pub abort_gate: bool,
    pub clock_period: f64,
    pub travel_plus_register_time: f64,
    pub and_gate_time: f64,
    pub t_meas: f64,
    pub adiabatic_threshold: f64,
}

impl Default for ConversionConfig {
    fn default() -> Self {
        Self {
            lambda_on: 0.02,
            truncation: 48,
            assignment: ModeAssignment::default(),
            ancilla: AncillaConfig::default(),
            landing_probability: 0.5,
            abort_gate: true,
            clock_period: 10.0,
            travel_plus_register_time: 6.0,
            and_gate_time: 1.0,
            t_meas: 1.0e4,
            adiabatic_threshold: DEFAULT_RATIO_THRESHOLD,
        }
    }
}

impl ConversionConfig {
    pub fn validate(&self) -> Result<()> {
        self.ancilla.validate()?;
        if !(self.lambda_on >= 0.0) || !self.lambda_on.is_finite() {
            return Err(Error::NegativeAnharmonicity(self.lambda_on));
        }
        let (a, b) = self.assignment.levels();
        if a.max(b) >= self.truncation {
            return Err(Error::LevelOutOfRange { level: a.max(b), truncation: self.truncation });
        }
        if !(0.0..=1.0).contains(&self.landing_probability) {
            return Err(Error::InvalidConfig(format!(
                "landing_probability = {} outside [0, 1]",
                self.landing_probability
            )));
        }
        let latency = self.travel_plus_register_time + self.and_gate_time;
        if !(self.travel_plus_register_time >= 0.0 && self.and_gate_time >= 0.0)
            || !(self.clock_period > latency)
        {
            return Err(Error::InvalidConfig(format!(
                "clock_period {} must exceed travel/registration plus AND latency {latency}",
                self.clock_period
            )));
        }
        Ok(())
    }

    /// Long-run fraction of cycles that deliver a state.
    pub fn expected_delivered_rate(&self) -> f64 {
        if self.abort_gate {
            self.landing_probability * self.ancilla.eta
        } else {
            self.landing_probability
        }
    }
}

/// `(|2,0> + |1,1> + |0,2>)/√3` over modes `a`, `b` with occupations `0..=2`.
pub fn initial_mode_state() -> PureState {
    let c = 1.0 / 3f64.sqrt();
    let mut amps = [0.0; 9];
    amps[2 * 3] = c;
    amps[3 + 1] = c;
    amps[2] = c;
    PureState::from_real(
        BasisLabel::new([(MODE_A, 3), (MODE_B, 3)]).expect("static basis"),
        &amps,
    )
    .expect("static state")
}

fn particle_basis() -> BasisLabel {
    BasisLabel::new([(PARTICLE_1, 2), (PARTICLE_2, 2)]).expect("static basis")
}

/// Projects onto the one-photon-per-mode sector and relabels it as the
/// particle product `|a>₁|b>₂`, dropping the zero- and two-photon terms.
pub fn select_middle_term(state: &PureState) -> Result<PureState> {
    let basis = state.basis();
    let (ka, kb) = (basis.index_of(MODE_A)?, basis.index_of(MODE_B)?);
    if basis.num_factors() != 2 || basis.dims()[ka] < 2 || basis.dims()[kb] < 2 {
        return Err(Error::EmptyProjection);
    }
    let amp = state.amplitude(&[1, 1])?;
    let norm = amp.norm();
    if norm == 0.0 {
        return Err(Error::EmptyProjection);
    }
    let zero = C64::new(0.0, 0.0);
    PureState::from_slice(particle_basis(), &[amp / norm, zero, zero, zero])
}

/// `(γ, δ)`: the untriggered (harmonic) and triggered (anharmonic) branch
/// amplitudes, before overlap-aware renormalization.
pub fn ancilla_branch_amplitudes(config: &AncillaConfig) -> Result<(C64, C64)> {
    let r = config.detect_amp.norm();
    if !(r <= 1.0 + UNIT_TOL) {
        return Err(Error::InvalidConfig(format!("|detect_amp| = {r} exceeds 1")));
    }
    let gamma = C64::new((1.0 - r * r).max(0.0).sqrt(), 0.0);
    Ok((gamma, config.detect_amp))
}

/// `γ|a>|b> + δ|a'>|b'>` in the per-particle orthonormalized frames, for
/// given overlaps `s_a = <a|a'>`, `s_b = <b|b'>`.
pub fn assemble_from_overlaps(gamma: C64, delta: C64, s_a: f64, s_b: f64) -> Result<PureState> {
    for s in [s_a, s_b] {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidParameter(format!("overlap {s} outside [0, 1]")));
        }
    }
    let (c_a, c_b) = ((1.0 - s_a * s_a).sqrt(), (1.0 - s_b * s_b).sqrt());
    let norm_sq = gamma.norm_sqr() + delta.norm_sqr() + 2.0 * (gamma.conj() * delta).re * s_a * s_b;
    if !(norm_sq > 1e-24) {
        return Err(Error::DegenerateGram);
    }
    let amps = [
        gamma + delta * (s_a * s_b),
        delta * (s_a * c_b),
        delta * (c_a * s_b),
        delta * (c_a * c_b),
    ];
    PureState::from_slice(particle_basis(), &amps)?.normalize()
}

/// Final two-particle state with overlaps taken from the anharmonic model.
pub fn assemble_final_state(
    gamma: C64,
    delta: C64,
    model: &OscillatorModel,
    assignment: &ModeAssignment,
) -> Result<PureState> {
    let s_a = mode_overlap(model, assignment.level(Photon::One))?;
    let s_b = mode_overlap(model, assignment.level(Photon::Two))?;
    assemble_from_overlaps(gamma, delta, s_a, s_b)
}

/// Von Neumann entropy of particle 1's reduced state, in bits.
pub fn particle_entanglement_entropy(state: &PureState) -> Result<f64> {
    entanglement_entropy(state, PARTICLE_1)
}

/// Output of the clocked AND gate: high only when the clock ticked and the
/// whole-screen channel registered the ancilla.
pub fn and_gate(clock_tick: bool, screen_registered: bool) -> bool {
    clock_tick && screen_registered
}

/// One clock cycle of the protocol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConversionOutcome {
    pub trial_id: u64,
    /// Ancilla landed on the triggering half of the screen.
    pub photon_detected: bool,
    /// Triggering channel registered a photo-electron.
    pub registered: bool,
    /// Whole-screen channel registered the ancilla.
    pub screen_registered: bool,
    pub aborted: bool,
    pub delivered_state: Option<PureState>,
    pub particle_entropy: Option<f64>,
    pub fidelity_to_target: Option<f64>,
}

/// Prepared protocol: model, target state and unconverted state are built
/// once and shared by all trials.
#[derive(Debug, Clone)]
pub struct ConversionProtocol {
    config: ConversionConfig,
    model: OscillatorModel,
    target: PureState,
    unconverted: PureState,
    adiabatic: Option<AdiabaticReport>,
}

impl ConversionProtocol {
    /// Validates the configuration and enforces the adiabatic timescale
    /// hierarchy whenever the anharmonicity is switched on.
    pub fn new(config: ConversionConfig) -> Result<Self> {
        config.validate()?;
        let model = build_model(config.lambda_on, config.truncation)?;
        let adiabatic = if config.lambda_on > 0.0 {
            let budget = AdiabaticBudget::for_modes(
                &model,
                &config.assignment,
                config.t_meas,
                config.adiabatic_threshold,
            )?;
            let report = adiabatic_check(&budget);
            if !report.pass {
                return Err(Error::AdiabaticViolation {
                    r1: report.r1,
                    r2: report.r2,
                    threshold: config.adiabatic_threshold,
                });
            }
            Some(report)
        } else {
            None
        };
        let (gamma, delta) = ancilla_branch_amplitudes(&config.ancilla)?;
        let target = assemble_final_state(gamma, delta, &model, &config.assignment)?;
        let unconverted = select_middle_term(&initial_mode_state())?;
        Ok(Self { config, model, target, unconverted, adiabatic })
    }

    pub fn config(&self) -> &ConversionConfig {
        &self.config
    }

    pub fn model(&self) -> &OscillatorModel {
        &self.model
    }

    pub fn target(&self) -> &PureState {
        &self.target
    }

    pub fn adiabatic_report(&self) -> Option<AdiabaticReport> {
        self.adiabatic
    }

    /// Runs cycle `trial_id` on its own ChaCha stream of `seed`.
    pub fn run_trial(&self, trial_id: u64, seed: u64) -> Result<ConversionOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial_id);
        let photon_detected = rng.random::<f64>() < self.config.landing_probability;
        let screen_registered = rng.random::<f64>() < self.config.ancilla.eta;
        let registered = photon_detected && screen_registered;
        // every cycle starts on a clock tick
        let aborted = self.config.abort_gate && !and_gate(true, screen_registered);

        let delivered = if aborted {
            None
        } else if registered {
            let (gamma, delta) = ancilla_branch_amplitudes(&self.config.ancilla)?;
            Some(assemble_final_state(gamma, delta, &self.model, &self.config.assignment)?)
        } else if photon_detected {
            // lost trigger with no abort: the pair never leaves the harmonic modes
            Some(self.unconverted.clone())
        } else {
            None
        };

        let (particle_entropy, fidelity_to_target) = match &delivered {
            Some(state) => (
                Some(particle_entanglement_entropy(state)?),
                Some(fidelity(&self.target, state)?),
            ),
            None => (None, None),
        };
        Ok(ConversionOutcome {
            trial_id,
            photon_detected,
            registered,
            screen_registered,
            aborted,
            delivered_state: delivered,
            particle_entropy,
            fidelity_to_target,
        })
    }

    /// Runs `n_trials` cycles in parallel; outcomes are ordered by trial id.
    pub fn run_campaign(&self, n_trials: u64, seed: u64) -> Result<Campaign> {
        if n_trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        let outcomes = (0..n_trials)
            .into_par_iter()
            .map(|id| self.run_trial(id, seed))
            .collect::<Result<Vec<_>>>()?;
        let stats = CampaignStats::from_outcomes(&outcomes, self.config.abort_gate);
        Ok(Campaign { stats, outcomes })
    }
}

/// Builds the protocol and runs a single cycle.
pub fn run_trial(config: ConversionConfig, seed: u64) -> Result<ConversionOutcome> {
    ConversionProtocol::new(config)?.run_trial(0, seed)
}

pub fn run_campaign(config: ConversionConfig, n_trials: u64, seed: u64) -> Result<Campaign> {
    ConversionProtocol::new(config)?.run_campaign(n_trials, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignStats {
    pub n_trials: u64,
    pub abort_gate: bool,
    pub landed: u64,
    pub delivered: u64,
    pub aborted: u64,
    pub landing_rate: f64,
    pub delivered_rate: f64,
    pub abort_rate: f64,
    pub mean_entropy: Option<f64>,
    pub mean_fidelity: Option<f64>,
    pub min_fidelity: Option<f64>,
}

impl CampaignStats {
    pub fn from_outcomes(outcomes: &[ConversionOutcome], abort_gate: bool) -> Self {
        let n = outcomes.len() as u64;
        let count = |f: &dyn Fn(&ConversionOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
        let landed = count(&|o| o.photon_detected);
        let delivered = count(&|o| o.delivered_state.is_some());
        let aborted = count(&|o| o.aborted);
        let entropies: Vec<f64> = outcomes.iter().filter_map(|o| o.particle_entropy).collect();
        let fidelities: Vec<f64> = outcomes.iter().filter_map(|o| o.fidelity_to_target).collect();
        let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
        let rate = |k: u64| if n == 0 { 0.0 } else { k as f64 / n as f64 };
        Self {
            n_trials: n,
            abort_gate,
            landed,
            delivered,
            aborted,
            landing_rate: rate(landed),
            delivered_rate: rate(delivered),
            abort_rate: rate(aborted),
            mean_entropy: mean(&entropies),
            mean_fidelity: mean(&fidelities),
            min_fidelity: fidelities.iter().copied().reduce(f64::min),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub stats: CampaignStats,
    pub outcomes: Vec<ConversionOutcome>,
}

impl Campaign {
    /// One JSON object per outcome, newline-terminated.
    pub fn outcomes_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for o in &self.outcomes {
            out.push_str(&serde_json::to_string(o).map_err(std::io::Error::other)?);
            out.push('\n');
        }
        Ok(out)
    }
}

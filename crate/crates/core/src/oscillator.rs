//! Harmonic and quartic-anharmonic oscillator in a truncated number basis.
//!
//! Units are `ħ = m = ω = 1`; the Hamiltonian is `p²/2 + x²/2 + λx⁴/4`.
//! Optical modes are bound to oscillator eigenmodes through a
//! [`ModeAssignment`], and the adiabatic ramp of `λ` is gated by an
//! [`AdiabaticBudget`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_TRUNCATION: usize = 8;

/// Position operator `(a + a†)/√2` on the first `n` number states.
pub fn position_matrix(n: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        let v = ((k + 1) as f64 / 2.0).sqrt();
        x[(k, k + 1)] = v;
        x[(k + 1, k)] = v;
    }
    x
}

/// `x^power` evaluated in a basis of size `2n` and cropped to `n`, so the
/// kept block is free of edge truncation artifacts.
fn position_power(n: usize, power: u32) -> DMatrix<f64> {
    let x = position_matrix(2 * n);
    let mut acc = DMatrix::identity(2 * n, 2 * n);
    for _ in 0..power {
        acc = &acc * &x;
    }
    acc.view((0, 0), (n, n)).into_owned()
}

/// Truncated Hamiltonian matrix `diag(n + 1/2) + (λ/4) X⁴`.
pub fn hamiltonian(lambda: f64, truncation: usize) -> DMatrix<f64> {
    let mut h = position_power(truncation, 4) * (lambda / 4.0);
    for k in 0..truncation {
        h[(k, k)] += k as f64 + 0.5;
    }
    h
}

/// `<n|x⁴|n> = (3/4)(2n² + 2n + 1)`.
pub fn quartic_expectation(n: usize) -> f64 {
    let n = n as f64;
    0.75 * (2.0 * n * n + 2.0 * n + 1.0)
}

/// Harmonic level plus the first-order shift from `λx⁴/4`.
pub fn first_order_energy(n: usize, lambda: f64) -> f64 {
    n as f64 + 0.5 + lambda / 4.0 * quartic_expectation(n)
}

/// Eigendecomposition of the truncated oscillator.
#[derive(Debug, Clone)]
pub struct OscillatorModel {
    lambda: f64,
    truncation: usize,
    eigenvalues: DVector<f64>,
    /// Columns are eigenstates in the harmonic number basis.
    eigenvectors: DMatrix<f64>,
}

/// Builds and diagonalizes the model. Eigenpairs are sorted by energy and
/// each eigenvector's sign is chosen so its overlap with the harmonic state
/// of the same index is nonnegative.
pub fn build_model(lambda: f64, truncation: usize) -> Result<OscillatorModel> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::NegativeAnharmonicity(lambda));
    }
    if truncation < MIN_TRUNCATION {
        return Err(Error::TruncationTooSmall { min: MIN_TRUNCATION, found: truncation });
    }
    let eig = SymmetricEigen::new(hamiltonian(lambda, truncation));
    let mut order: Vec<usize> = (0..truncation).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = DVector::from_iterator(truncation, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = DMatrix::zeros(truncation, truncation);
    for (n, &i) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(i).into_owned();
        if col[n] < 0.0 {
            col.neg_mut();
        }
        eigenvectors.set_column(n, &col);
    }
    Ok(OscillatorModel { lambda, truncation, eigenvalues, eigenvectors })
}

impl OscillatorModel {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n >= self.truncation {
            return Err(Error::LevelOutOfRange { level: n, truncation: self.truncation });
        }
        Ok(())
    }

    pub fn energy(&self, n: usize) -> Result<f64> {
        self.check_level(n)?;
        Ok(self.eigenvalues[n])
    }

    /// Eigenstate `n` in the harmonic number basis.
    pub fn eigenvector(&self, n: usize) -> Result<DVector<f64>> {
        self.check_level(n)?;
        Ok(self.eigenvectors.column(n).into_owned())
    }

    /// `<n(λ)|x²|n(λ)>`, a width proxy for eigenfunction narrowing.
    pub fn position_variance(&self, n: usize) -> Result<f64> {
        let v = self.eigenvector(n)?;
        let x2 = position_power(self.truncation, 2);
        Ok(v.dot(&(x2 * &v)))
    }
}

/// `s_n = <n_harmonic | n(λ)>`, nonnegative by the sign convention of
/// [`build_model`].
pub fn mode_overlap(model: &OscillatorModel, n: usize) -> Result<f64> {
    model.check_level(n)?;
    Ok(model.eigenvectors[(n, n)].clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Photon {
    One,
    Two,
}

/// Which oscillator level each photon's mode is bound to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeAssignment {
    level_1: usize,
    level_2: usize,
}

impl ModeAssignment {
    pub fn new(level_1: usize, level_2: usize) -> Result<Self> {
        if level_1 == level_2 {
            return Err(Error::DuplicateLevel(level_1));
        }
        Ok(Self { level_1, level_2 })
    }

    pub fn level(&self, photon: Photon) -> usize {
        match photon {
            Photon::One => self.level_1,
            Photon::Two => self.level_2,
        }
    }

    pub fn levels(&self) -> (usize, usize) {
        (self.level_1, self.level_2)
    }
}

impl Default for ModeAssignment {
    fn default() -> Self {
        Self { level_1: 1, level_2: 2 }
    }
}

/// A one-to-one binding between photon modes and oscillator eigenmodes,
/// usable in both directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeMapping {
    assignment: ModeAssignment,
}

impl ModeMapping {
    pub fn eigenmode_of(&self, photon: Photon) -> usize {
        self.assignment.level(photon)
    }

    /// Inverse map from eigenmode level back to the photon it carries.
    pub fn photon_of(&self, level: usize) -> Option<Photon> {
        if level == self.assignment.level_1 {
            Some(Photon::One)
        } else if level == self.assignment.level_2 {
            Some(Photon::Two)
        } else {
            None
        }
    }

    pub fn invert(&self) -> ModeAssignment {
        self.assignment
    }
}

/// Binds photons to levels; fails unless every photon appears exactly once
/// and the levels are distinct.
pub fn map_modes_to_eigenfunctions(pairs: &[(Photon, usize)]) -> Result<ModeMapping> {
    let find = |p: Photon| {
        let mut hits = pairs.iter().filter(|(q, _)| *q == p).map(|&(_, l)| l);
        match (hits.next(), hits.next()) {
            (Some(l), None) => Ok(l),
            _ => Err(Error::InvalidParameter(format!("photon {p:?} must be assigned exactly once"))),
        }
    };
    if pairs.len() != 2 {
        return Err(Error::InvalidParameter("exactly two photon assignments required".into()));
    }
    let assignment = ModeAssignment::new(find(Photon::One)?, find(Photon::Two)?)?;
    Ok(ModeMapping { assignment })
}

/// Timescale inputs for the adiabatic ramp: energy gap, perturbation
/// strength, measurement time and the required ratio margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticBudget {
    pub delta_e: f64,
    pub h_tilde: f64,
    pub t_meas: f64,
    pub ratio_threshold: f64,
}

pub const DEFAULT_RATIO_THRESHOLD: f64 = 10.0;

impl AdiabaticBudget {
    pub fn new(delta_e: f64, h_tilde: f64, t_meas: f64, ratio_threshold: f64) -> Result<Self> {
        for (name, v) in [
            ("delta_E", delta_e),
            ("h_tilde", h_tilde),
            ("t_meas", t_meas),
            ("ratio_threshold", ratio_threshold),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { delta_e, h_tilde, t_meas, ratio_threshold })
    }

    /// Budget for the two mapped modes of `model`: the gap is taken between
    /// their perturbed energies and the perturbation strength is the larger
    /// diagonal element of `λx⁴/4` on them.
    pub fn for_modes(
        model: &OscillatorModel,
        assignment: &ModeAssignment,
        t_meas: f64,
        ratio_threshold: f64,
    ) -> Result<Self> {
        let (a, b) = assignment.levels();
        let delta_e = (model.energy(b)? - model.energy(a)?).abs();
        let h_tilde = model.lambda / 4.0 * quartic_expectation(a).max(quartic_expectation(b));
        Self::new(delta_e, h_tilde, t_meas, ratio_threshold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticReport {
    pub pass: bool,
    /// `ΔE / H̃`
    pub r1: f64,
    /// `t_meas · H̃`
    pub r2: f64,
}

pub fn adiabatic_check(budget: &AdiabaticBudget) -> AdiabaticReport {
    let r1 = budget.delta_e / budget.h_tilde;
    let r2 = budget.t_meas * budget.h_tilde;
    AdiabaticReport {
        pass: r1 >= budget.ratio_threshold && r2 >= budget.ratio_threshold,
        r1,
        r2,
    }
}

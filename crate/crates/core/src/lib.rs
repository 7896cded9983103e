//! Numerical companion for mode versus particle entanglement in optics.
//!
//! * [`state`]: labeled tensor-product pure states, partial traces, entropies.
//! * [`polarization`]: the polarization-entangled pair, analyzer rotations,
//!   detection probabilities, CHSH sums and entropy scans.
//! * [`interferometer`]: the four-momentum-mode Bragg interferometer.
//! * [`oscillator`]: truncated-basis quartic oscillator, mode mapping,
//!   first-order oracle and the adiabatic timescale budget.
//! * [`protocol`]: heralded mode-to-particle entanglement conversion with
//!   non-ideal photodetection and a clocked abort gate.
//! * [`cli`]: the batch front end behind the `modent` binary.

// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod interferometer;
pub mod oscillator;
pub mod polarization;
pub mod protocol;
pub mod scan;
pub mod state;

pub use error::{Error, Result};
pub use scan::ScanResult;
pub use state::{BasisLabel, PureState, ReducedDensityMatrix, C64};

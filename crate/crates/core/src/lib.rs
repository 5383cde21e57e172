//! Link-level analysis of the two-user Gaussian interference channel.
//!
//! The crate models receiver 1 of a two-user channel in which both
//! transmitters use finite constellations designed for the single-user
//! Gaussian channel, and the receiver must make hard symbol-by-symbol
//! decisions in the presence of the other user's interference. It provides:
//!
//! - PAM/QAM alphabets with unit average symbol energy ([`constellation`]);
//! - fixed-gain and Rayleigh-fading channel realizations under a fixed noise
//!   convention ([`channel`]);
//! - the conventional, SIC, ordered-SIC, minimum-distance, and ML detectors,
//!   with decision-region extraction and comparison-count accounting
//!   ([`detectors`]);
//! - closed-form NNUB SER expressions for 2-PAM, error-floor thresholds for
//!   general PAM, and an exact numerical SER oracle ([`analytic`]);
//! - seeded, parallel Monte Carlo SER sweeps whose output is a pure function
//!   of the configuration ([`montecarlo`]).

pub mod analytic;
pub mod channel;
pub mod constellation;
pub mod detectors;
mod error;
pub mod montecarlo;

pub use channel::{ChannelRealization, Domain, LinkBudget};
pub use constellation::{Constellation, ConstellationKind};
pub use detectors::{Decision, DetectorKind};
pub use error::{Error, Result};
pub use montecarlo::{InterferenceGrid, ModSpec, SerEstimate, SweepConfig};

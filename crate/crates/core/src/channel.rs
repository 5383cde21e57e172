//! Received-signal model for receiver 1 of the two-user interference channel:
//! `y = h11·x1 + h12·x2 + z`.
//!
//! The noise convention is fixed: `z` has per-real-dimension standard
//! deviation 1 (total variance 1 for baseband real signals, 2 for passband
//! complex signals), and SNR/INR are carried entirely by the channel gains.
//! With unit-energy constellations this makes the closed-form SER expressions
//! hold verbatim for real PAM.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Baseband real or passband complex signalling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Real,
    Complex,
}

/// Converts decibels to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts linear scale to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// SNR/INR operating point in linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    snr: f64,
    inr: f64,
}

impl LinkBudget {
    pub fn new(snr: f64, inr: f64) -> Result<Self> {
        if !snr.is_finite() || snr <= 0.0 {
            return Err(Error::InvalidBudget("snr must be positive and finite"));
        }
        if !inr.is_finite() || inr < 0.0 {
            return Err(Error::InvalidBudget("inr must be nonnegative and finite"));
        }
        Ok(Self { snr, inr })
    }

    pub fn from_db(snr_db: f64, inr_db: f64) -> Result<Self> {
        Self::new(db_to_linear(snr_db), db_to_linear(inr_db))
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn inr(&self) -> f64 {
        self.inr
    }

    /// Signal-to-interference ratio; +∞ when there is no interference.
    pub fn sir(&self) -> f64 {
        self.snr / self.inr
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.snr)
    }
}

/// Instantaneous channel gains and noise scale seen by receiver 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelRealization {
    pub h11: Complex64,
    pub h12: Complex64,
    /// Per-real-dimension noise standard deviation.
    pub noise_sigma: f64,
    pub domain: Domain,
}

impl ChannelRealization {
    /// Deterministic gains carrying the budget: `h11 = √(SNR·d)`,
    /// `h12 = √(INR·d)` with `d` the number of real noise dimensions, so that
    /// recomputing SNR from the gains and the total noise variance reproduces
    /// the budget.
    pub fn fixed(budget: &LinkBudget, domain: Domain) -> Self {
        let d = match domain {
            Domain::Real => 1.0,
            Domain::Complex => 2.0,
        };
        Self {
            h11: Complex64::new((budget.snr() * d).sqrt(), 0.0),
            h12: Complex64::new((budget.inr() * d).sqrt(), 0.0),
            noise_sigma: 1.0,
            domain,
        }
    }

    /// Fresh Rayleigh-fading draw: each gain is circularly symmetric complex
    /// Gaussian with `E|h11|² = 2·SNR` and `E|h12|² = 2·INR`, independent of
    /// each other. Complex domain only.
    pub fn fading<R: Rng + ?Sized>(budget: &LinkBudget, rng: &mut R) -> Result<Self> {
        let draw = |scale: f64, rng: &mut R| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(scale * re, scale * im)
        };
        let h11 = draw(budget.snr().sqrt(), rng);
        let h12 = draw(budget.inr().sqrt(), rng);
        Ok(Self {
            h11,
            h12,
            noise_sigma: 1.0,
            domain: Domain::Complex,
        })
    }

    /// Rejects the fading constructor in the real domain.
    pub fn fading_in<R: Rng + ?Sized>(
        budget: &LinkBudget,
        domain: Domain,
        rng: &mut R,
    ) -> Result<Self> {
        match domain {
            Domain::Real => Err(Error::UnsupportedDomain(
                "fading realizations are defined for the complex domain only",
            )),
            Domain::Complex => Self::fading(budget, rng),
        }
    }

    /// SNR implied by the realization under the fixed noise convention.
    pub fn implied_snr(&self) -> f64 {
        self.h11.norm_sqr() / self.total_noise_variance()
    }

    /// INR implied by the realization under the fixed noise convention.
    pub fn implied_inr(&self) -> f64 {
        self.h12.norm_sqr() / self.total_noise_variance()
    }

    fn total_noise_variance(&self) -> f64 {
        let d = match self.domain {
            Domain::Real => 1.0,
            Domain::Complex => 2.0,
        };
        d * self.noise_sigma * self.noise_sigma
    }

    /// One channel use: `h11·x1 + h12·x2 + z` with fresh Gaussian noise.
    /// In the real domain only the real part receives noise.
    pub fn transmit<R: Rng + ?Sized>(
        &self,
        x1: Complex64,
        x2: Complex64,
        rng: &mut R,
    ) -> Complex64 {
        let clean = self.h11 * x1 + self.h12 * x2;
        let noise = match self.domain {
            Domain::Real => {
                let n: f64 = rng.sample(StandardNormal);
                Complex64::new(self.noise_sigma * n, 0.0)
            }
            Domain::Complex => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(self.noise_sigma * re, self.noise_sigma * im)
            }
        };
        clean + noise
    }
}

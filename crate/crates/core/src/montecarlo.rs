//! Seeded, parallelizable Monte Carlo SER estimation over SNR/SIR grids.
//!
//! Reproducibility contract: the result list is a pure function of the
//! [`SweepConfig`]. Every grid point owns a private ChaCha8 stream derived
//! from the sweep seed, the detector ordinal, and the grid indices, so the
//! estimates are independent of scheduling and worker count. ChaCha8 is used
//! because it is fast, statistically strong, and exposes 2⁶⁴ independent
//! streams through `set_stream`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{db_to_linear, ChannelRealization, Domain, LinkBudget};
use crate::constellation::Constellation;
use crate::detectors::{detect, DetectorKind};
use crate::error::{Error, Result};

/// Modulation requested for one transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModSpec {
    Pam(usize),
    Qam(usize),
}

impl ModSpec {
    pub fn order(self) -> usize {
        match self {
            ModSpec::Pam(m) | ModSpec::Qam(m) => m,
        }
    }

    pub fn is_qam(self) -> bool {
        matches!(self, ModSpec::Qam(_))
    }

    pub fn build(self) -> Result<Constellation> {
        match self {
            ModSpec::Pam(m) => Constellation::pam(m),
            ModSpec::Qam(m) => Constellation::qam(m),
        }
    }

    fn validate(self) -> Result<()> {
        self.build().map(|_| ())
    }
}

impl fmt::Display for ModSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModSpec::Pam(m) => write!(f, "pam{m}"),
            ModSpec::Qam(m) => write!(f, "qam{m}"),
        }
    }
}

impl FromStr for ModSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, digits) = s.split_at(s.len().min(3));
        let order: usize = digits
            .parse()
            .map_err(|_| Error::InvalidInput("modulation must look like pam4 or qam16"))?;
        match kind {
            "pam" => Ok(ModSpec::Pam(order)),
            "qam" => Ok(ModSpec::Qam(order)),
            _ => Err(Error::InvalidInput(
                "modulation must start with `pam` or `qam`",
            )),
        }
    }
}

/// The interference axis of a sweep, in dB: either SIR values (the usual
/// figure parameterization) or INR values (each point's SIR then derives as
/// SNR − INR).
#[derive(Debug, Clone, PartialEq)]
pub enum InterferenceGrid {
    SirDb(Vec<f64>),
    InrDb(Vec<f64>),
}

impl InterferenceGrid {
    pub fn len(&self) -> usize {
        match self {
            InterferenceGrid::SirDb(v) | InterferenceGrid::InrDb(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn values(&self) -> &[f64] {
        match self {
            InterferenceGrid::SirDb(v) | InterferenceGrid::InrDb(v) => v,
        }
    }

    fn sir_db_at(&self, index: usize, snr_db: f64) -> f64 {
        match self {
            InterferenceGrid::SirDb(v) => v[index],
            InterferenceGrid::InrDb(v) => snr_db - v[index],
        }
    }
}

/// Description of a Monte Carlo experiment grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mod1: ModSpec,
    pub mod2: ModSpec,
    pub detectors: Vec<DetectorKind>,
    pub snr_db_grid: Vec<f64>,
    pub interference: InterferenceGrid,
    /// Redraw the channel gains for every symbol (Rayleigh fading) instead of
    /// fixing them per grid point. Requires QAM at both transmitters.
    pub fading: bool,
    pub trials_max: u64,
    /// Stop a point early once this many errors are collected; 0 disables
    /// early stopping.
    pub min_errors: u64,
    pub seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.mod1.validate()?;
        self.mod2.validate()?;
        if self.detectors.is_empty() {
            return Err(Error::InvalidConfig("no detectors selected".into()));
        }
        if self.snr_db_grid.is_empty() {
            return Err(Error::InvalidConfig("empty SNR grid".into()));
        }
        if self.interference.is_empty() {
            return Err(Error::InvalidConfig("empty interference grid".into()));
        }
        const GRID_LIMIT: usize = 1 << 24;
        if self.snr_db_grid.len() >= GRID_LIMIT || self.interference.len() >= GRID_LIMIT {
            return Err(Error::InvalidConfig("grid axis too long".into()));
        }
        if self
            .snr_db_grid
            .iter()
            .chain(self.interference.values())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidConfig("grids must be finite".into()));
        }
        if self.trials_max == 0 {
            return Err(Error::InvalidConfig("trials_max must be at least 1".into()));
        }
        if self.fading && !(self.mod1.is_qam() && self.mod2.is_qam()) {
            return Err(Error::InvalidConfig(
                "fading sweeps require QAM at both transmitters".into(),
            ));
        }
        Ok(())
    }

    fn domain(&self) -> Domain {
        if self.mod1.is_qam() || self.mod2.is_qam() {
            Domain::Complex
        } else {
            Domain::Real
        }
    }
}

/// Per-point estimate of the symbol error rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerEstimate {
    pub detector: DetectorKind,
    pub snr_db: f64,
    pub sir_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub ser: f64,
    /// Half-width of the normal-approximation 95% confidence interval.
    pub ci95_halfwidth: f64,
}

/// The private random stream of one grid point. The stream id packs the
/// detector ordinal with the grid indices, so adding detectors or re-running
/// a single point reproduces the sweep values exactly.
pub fn point_rng(
    seed: u64,
    detector: DetectorKind,
    snr_index: usize,
    interference_index: usize,
) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = ((detector.ordinal() as u64) << 48)
        | ((snr_index as u64 & 0xFF_FFFF) << 24)
        | (interference_index as u64 & 0xFF_FFFF);
    rng.set_stream(stream);
    rng
}

/// Estimates the SER of one detector at one (SNR, SIR) point.
///
/// Symbols are drawn i.i.d. equiprobably from both alphabets. In fixed-gain
/// mode the realization is created once per point; in fading mode a fresh
/// gain pair is drawn per symbol. An error is counted whenever the decided
/// desired-symbol index differs from the transmitted one. The point stops at
/// `trials_max` or, when `min_errors > 0`, as soon as that many errors have
/// been observed.
pub fn run_point<R: Rng + ?Sized>(
    config: &SweepConfig,
    detector: DetectorKind,
    snr_db: f64,
    sir_db: f64,
    rng: &mut R,
) -> Result<SerEstimate> {
    config.validate()?;
    if !config.detectors.contains(&detector) {
        return Err(Error::InvalidConfig(format!(
            "detector {detector} is not part of the sweep"
        )));
    }
    let s1 = config.mod1.build()?;
    let s2 = config.mod2.build()?;
    let snr = db_to_linear(snr_db);
    let inr = db_to_linear(snr_db - sir_db);
    let budget = LinkBudget::new(snr, inr)?;
    let fixed = ChannelRealization::fixed(&budget, config.domain());

    let mut errors = 0u64;
    let mut trials = 0u64;
    while trials < config.trials_max {
        let k = rng.random_range(0..s1.order());
        let l = rng.random_range(0..s2.order());
        let realization = if config.fading {
            ChannelRealization::fading(&budget, rng)?
        } else {
            fixed
        };
        let y = realization.transmit(s1.point(k), s2.point(l), rng);
        let decision = detect(
            detector,
            y,
            realization.h11,
            realization.h12,
            &s1,
            &s2,
            realization.noise_sigma,
        )?;
        trials += 1;
        if decision.x1_index != k {
            errors += 1;
            if config.min_errors > 0 && errors >= config.min_errors {
                break;
            }
        }
    }
    let ser = errors as f64 / trials as f64;
    let ci95_halfwidth = 1.96 * (ser * (1.0 - ser) / trials as f64).sqrt();
    Ok(SerEstimate {
        detector,
        snr_db,
        sir_db,
        trials,
        errors,
        ser,
        ci95_halfwidth,
    })
}

/// Runs every grid point of the sweep: the Cartesian product of detectors ×
/// SNR grid × interference grid, in that nesting order. Points execute in
/// parallel; the output order and values are independent of the worker
/// count.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SerEstimate>> {
    run_sweep_with_progress(config, |_| {})
}

/// Like [`run_sweep`], but capped at `workers` threads when given. The cap
/// only bounds concurrency; the estimates are identical for any value.
pub fn run_sweep_with_workers<F>(
    config: &SweepConfig,
    workers: Option<usize>,
    on_point: F,
) -> Result<Vec<SerEstimate>>
where
    F: Fn(&SerEstimate) + Send + Sync,
{
    match workers {
        None => run_sweep_with_progress(config, on_point),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot build worker pool: {e}")))?;
            pool.install(|| run_sweep_with_progress(config, on_point))
        }
    }
}

/// Like [`run_sweep`], invoking `on_point` as each point completes (from
/// worker threads, in completion order).
pub fn run_sweep_with_progress<F>(config: &SweepConfig, on_point: F) -> Result<Vec<SerEstimate>>
where
    F: Fn(&SerEstimate) + Sync,
{
    config.validate()?;
    let n_snr = config.snr_db_grid.len();
    let n_intf = config.interference.len();
    let mut points = Vec::with_capacity(config.detectors.len() * n_snr * n_intf);
    for d in 0..config.detectors.len() {
        for s in 0..n_snr {
            for i in 0..n_intf {
                points.push((d, s, i));
            }
        }
    }
    points
        .into_par_iter()
        .map(|(d, s, i)| {
            let detector = config.detectors[d];
            let snr_db = config.snr_db_grid[s];
            let sir_db = config.interference.sir_db_at(i, snr_db);
            let mut rng = point_rng(config.seed, detector, s, i);
            let estimate = run_point(config, detector, snr_db, sir_db, &mut rng)?;
            on_point(&estimate);
            Ok(estimate)
        })
        .collect()
}

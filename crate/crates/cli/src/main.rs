//! `ifchan` — analysis and simulation of hard-decision detectors for the
//! two-user Gaussian interference channel.
//!
//! Data goes to standard output (or `--out FILE`) as CSV or JSON; progress
//! and errors go to standard error. Exit codes: 0 success, 1 usage error,
//! 2 runtime error.

mod grid;
mod records;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Parser, Subcommand};

use ifchan::analytic::{ser_exact_pam, ser_nnub_2pam, sic_floor_region, sir_threshold};
use ifchan::channel::{db_to_linear, linear_to_db, ChannelRealization, Domain, LinkBudget};
use ifchan::detectors::{decision_partition, DetectorKind};
use ifchan::montecarlo::{run_sweep_with_workers, InterferenceGrid, ModSpec, SweepConfig};

use grid::parse_grid;
use records::{
    write_records, AnalyticRecord, Format, RegionRecord, SerRecord, ThresholdsRecord,
};

#[derive(Parser)]
#[command(
    name = "ifchan",
    version,
    about = "Detectors, SER predictions, and Monte Carlo simulation for the \
             two-user Gaussian interference channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for the data stream.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the data stream to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form NNUB SER predictions for 2-PAM (detectors conv, sic, md).
    Analytic {
        /// Detector: conv, sic, or md.
        #[arg(long)]
        detector: String,
        /// SNR grid in dB: comma list or start:step:stop.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        snr_db: String,
        /// SIR grid in dB: comma list or start:step:stop.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        sir_db: String,
    },
    /// Error-floor SIR thresholds for a PAM order pair.
    Thresholds {
        /// Desired-transmitter PAM order (≥ 2).
        #[arg(long)]
        m1: usize,
        /// Interfering-transmitter PAM order (≥ 2).
        #[arg(long)]
        m2: usize,
    },
    /// Decision intervals of one detector on the real line (PAM only).
    Regions {
        /// Detector: conv, sic, osic, md, or ml.
        #[arg(long)]
        detector: String,
        /// Desired modulation: pam2, pam4, or pam8.
        #[arg(long, default_value = "pam2")]
        mod1: String,
        /// Interfering modulation: pam2, pam4, or pam8.
        #[arg(long, default_value = "pam2")]
        mod2: String,
        /// SNR in dB.
        #[arg(long, allow_negative_numbers = true)]
        snr_db: f64,
        /// SIR in dB.
        #[arg(long, allow_negative_numbers = true)]
        sir_db: f64,
        /// Noise standard deviation assumed by the ML detector.
        #[arg(long, default_value_t = 1.0)]
        noise_sigma: f64,
    },
    /// Exact fixed-gain SER oracle per grid point (PAM only).
    Exact {
        /// Comma list of detectors: conv, sic, osic, md, ml.
        #[arg(long)]
        detectors: String,
        /// Desired modulation: pam2, pam4, or pam8.
        #[arg(long, default_value = "pam2")]
        mod1: String,
        /// Interfering modulation: pam2, pam4, or pam8.
        #[arg(long, default_value = "pam2")]
        mod2: String,
        /// SNR grid in dB: comma list or start:step:stop.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        snr_db: String,
        /// SIR grid in dB (INR derives as SNR − SIR).
        #[arg(long, value_name = "GRID", conflicts_with = "inr_db", allow_hyphen_values = true)]
        sir_db: Option<String>,
        /// INR grid in dB, overriding the SNR − SIR derivation.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        inr_db: Option<String>,
    },
    /// Monte Carlo SER sweep over detectors × SNR × SIR.
    Simulate {
        /// Comma list of detectors: conv, sic, osic, md, ml.
        #[arg(long)]
        detectors: String,
        /// Desired modulation: pam2, pam4, pam8, qam4, or qam16.
        #[arg(long, default_value = "pam2")]
        mod1: String,
        /// Interfering modulation: pam2, pam4, pam8, qam4, or qam16.
        #[arg(long, default_value = "pam2")]
        mod2: String,
        /// SNR grid in dB: comma list or start:step:stop.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        snr_db: String,
        /// SIR grid in dB (INR derives as SNR − SIR).
        #[arg(long, value_name = "GRID", conflicts_with = "inr_db", allow_hyphen_values = true)]
        sir_db: Option<String>,
        /// INR grid in dB, overriding the SNR − SIR derivation.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        inr_db: Option<String>,
        /// Redraw Rayleigh-fading gains for every symbol (QAM only).
        #[arg(long)]
        fading: bool,
        /// Trial cap per grid point.
        #[arg(long, default_value_t = 10_000_000)]
        trials: u64,
        /// Stop a point early after this many errors (0 disables).
        #[arg(long, default_value_t = 100)]
        min_errors: u64,
        /// Seed of the deterministic per-point random streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on concurrent worker threads; does not affect the results.
        #[arg(long)]
        workers: Option<usize>,
    },
}

enum CliError {
    Usage(String),
    Runtime(String),
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(message: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(message.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    let out = cli.out.clone();
    match run(cli.command, format, out.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, format: Format, out: Option<&Path>) -> CliResult<()> {
    match command {
        Command::Analytic {
            detector,
            snr_db,
            sir_db,
        } => cmd_analytic(&detector, &snr_db, &sir_db, format, out),
        Command::Thresholds { m1, m2 } => cmd_thresholds(m1, m2, format, out),
        Command::Regions {
            detector,
            mod1,
            mod2,
            snr_db,
            sir_db,
            noise_sigma,
        } => cmd_regions(&detector, &mod1, &mod2, snr_db, sir_db, noise_sigma, format, out),
        Command::Exact {
            detectors,
            mod1,
            mod2,
            snr_db,
            sir_db,
            inr_db,
        } => cmd_exact(
            &detectors,
            &mod1,
            &mod2,
            &snr_db,
            sir_db.as_deref(),
            inr_db.as_deref(),
            format,
            out,
        ),
        Command::Simulate {
            detectors,
            mod1,
            mod2,
            snr_db,
            sir_db,
            inr_db,
            fading,
            trials,
            min_errors,
            seed,
            workers,
        } => cmd_simulate(
            &detectors,
            &mod1,
            &mod2,
            &snr_db,
            sir_db.as_deref(),
            inr_db.as_deref(),
            fading,
            trials,
            min_errors,
            seed,
            workers,
            format,
            out,
        ),
    }
}

fn parse_detector(name: &str) -> CliResult<DetectorKind> {
    name.parse().map_err(|_| {
        CliError::Usage(format!(
            "unknown detector `{name}` (expected conv, sic, osic, md, or ml)"
        ))
    })
}

fn parse_detector_list(list: &str) -> CliResult<Vec<DetectorKind>> {
    let mut kinds = Vec::new();
    for name in list.split(',') {
        let kind = parse_detector(name.trim())?;
        if kinds.contains(&kind) {
            return usage(format!("detector `{kind}` listed more than once"));
        }
        kinds.push(kind);
    }
    Ok(kinds)
}

const SUPPORTED_MODS: [&str; 5] = ["pam2", "pam4", "pam8", "qam4", "qam16"];

fn parse_mod(name: &str) -> CliResult<ModSpec> {
    if !SUPPORTED_MODS.contains(&name) {
        return usage(format!(
            "unsupported modulation `{name}` (expected one of {})",
            SUPPORTED_MODS.join(", ")
        ));
    }
    name.parse()
        .map_err(|e: ifchan::Error| CliError::Usage(e.to_string()))
}

fn parse_pam_mod(name: &str) -> CliResult<ModSpec> {
    let spec = parse_mod(name)?;
    if spec.is_qam() {
        return usage(format!("`{name}` is not supported here; this command is PAM-only"));
    }
    Ok(spec)
}

fn parse_axis(sir_db: Option<&str>, inr_db: Option<&str>) -> CliResult<InterferenceGrid> {
    match (sir_db, inr_db) {
        (Some(text), None) => Ok(InterferenceGrid::SirDb(
            parse_grid(text).map_err(CliError::Usage)?,
        )),
        (None, Some(text)) => Ok(InterferenceGrid::InrDb(
            parse_grid(text).map_err(CliError::Usage)?,
        )),
        (None, None) => usage("one of --sir-db or --inr-db is required"),
        (Some(_), Some(_)) => usage("--sir-db and --inr-db are mutually exclusive"),
    }
}

fn emit<R: records::Record>(format: Format, out: Option<&Path>, rows: &[R]) -> CliResult<()> {
    write_records(format, out, rows)
        .map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_analytic(
    detector: &str,
    snr_db: &str,
    sir_db: &str,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let kind = parse_detector(detector)?;
    if !matches!(
        kind,
        DetectorKind::Conventional | DetectorKind::Sic | DetectorKind::MinDistance
    ) {
        return usage(format!(
            "no closed-form NNUB expression for `{kind}`; supported: conv, sic, md"
        ));
    }
    let snrs = parse_grid(snr_db).map_err(CliError::Usage)?;
    let sirs = parse_grid(sir_db).map_err(CliError::Usage)?;
    let mut rows = Vec::with_capacity(snrs.len() * sirs.len());
    for &snr_db in &snrs {
        for &sir_db in &sirs {
            let inr_db = snr_db - sir_db;
            let prediction = ser_nnub_2pam(kind, db_to_linear(snr_db), db_to_linear(inr_db))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            rows.push(AnalyticRecord {
                detector: kind.to_string(),
                snr_db,
                sir_db,
                inr_db,
                value: prediction.value,
                regime: prediction.regime.to_string(),
                floor: prediction.floor.unwrap_or(0.0),
            });
        }
    }
    emit(format, out, &rows)
}

fn cmd_thresholds(m1: usize, m2: usize, format: Format, out: Option<&Path>) -> CliResult<()> {
    let sir_th = sir_threshold(m1, m2).map_err(|e| CliError::Usage(e.to_string()))?;
    let (sir_1, sir_2) = sic_floor_region(m1, m2).map_err(|e| CliError::Usage(e.to_string()))?;
    let row = ThresholdsRecord {
        m1,
        m2,
        sir_th,
        sir_th_db: linear_to_db(sir_th),
        sir_1,
        sir_1_db: linear_to_db(sir_1),
        sir_2,
        sir_2_db: linear_to_db(sir_2),
    };
    emit(format, out, &[row])
}

#[allow(clippy::too_many_arguments)]
fn cmd_regions(
    detector: &str,
    mod1: &str,
    mod2: &str,
    snr_db: f64,
    sir_db: f64,
    noise_sigma: f64,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let kind = parse_detector(detector)?;
    let spec1 = parse_pam_mod(mod1)?;
    let spec2 = parse_pam_mod(mod2)?;
    if !noise_sigma.is_finite() || noise_sigma <= 0.0 {
        return usage("--noise-sigma must be positive");
    }
    if !snr_db.is_finite() || !sir_db.is_finite() {
        return usage("--snr-db and --sir-db must be finite");
    }
    let s1 = spec1.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let s2 = spec2.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let inr_db = snr_db - sir_db;
    let budget = LinkBudget::from_db(snr_db, inr_db).map_err(|e| CliError::Usage(e.to_string()))?;
    let realization = ChannelRealization::fixed(&budget, Domain::Real);
    let partition = decision_partition(
        kind,
        realization.h11.re,
        realization.h12.re,
        &s1,
        &s2,
        noise_sigma,
    )
    .map_err(|e| CliError::Runtime(e.to_string()))?;
    let rows: Vec<RegionRecord> = partition
        .labels
        .iter()
        .enumerate()
        .map(|(i, &x1_index)| RegionRecord {
            detector: kind.to_string(),
            mod1: spec1.to_string(),
            mod2: spec2.to_string(),
            snr_db,
            sir_db,
            inr_db,
            noise_sigma,
            interval_index: i,
            y_lower: (i > 0).then(|| partition.boundaries[i - 1]),
            y_upper: (i < partition.boundaries.len()).then(|| partition.boundaries[i]),
            x1_index,
        })
        .collect();
    emit(format, out, &rows)
}

#[allow(clippy::too_many_arguments)]
fn cmd_exact(
    detectors: &str,
    mod1: &str,
    mod2: &str,
    snr_db: &str,
    sir_db: Option<&str>,
    inr_db: Option<&str>,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let kinds = parse_detector_list(detectors)?;
    let spec1 = parse_pam_mod(mod1)?;
    let spec2 = parse_pam_mod(mod2)?;
    let snrs = parse_grid(snr_db).map_err(CliError::Usage)?;
    let axis = parse_axis(sir_db, inr_db)?;
    let axis_len = axis.len();
    let mut rows = Vec::with_capacity(kinds.len() * snrs.len() * axis_len);
    for &kind in &kinds {
        for &snr_db in &snrs {
            for i in 0..axis_len {
                let (sir_db, inr_db) = match &axis {
                    InterferenceGrid::SirDb(v) => (v[i], snr_db - v[i]),
                    InterferenceGrid::InrDb(v) => (snr_db - v[i], v[i]),
                };
                let ser = ser_exact_pam(
                    kind,
                    db_to_linear(snr_db),
                    db_to_linear(inr_db),
                    spec1.order(),
                    spec2.order(),
                    None,
                )
                .map_err(|e| CliError::Runtime(e.to_string()))?;
                rows.push(SerRecord {
                    detector: kind.to_string(),
                    mod1: spec1.to_string(),
                    mod2: spec2.to_string(),
                    fading: false,
                    snr_db,
                    sir_db,
                    inr_db,
                    trials: 0,
                    errors: 0,
                    ser,
                    ci95_halfwidth: 0.0,
                });
            }
        }
    }
    emit(format, out, &rows)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    detectors: &str,
    mod1: &str,
    mod2: &str,
    snr_db: &str,
    sir_db: Option<&str>,
    inr_db: Option<&str>,
    fading: bool,
    trials: u64,
    min_errors: u64,
    seed: u64,
    workers: Option<usize>,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    if workers == Some(0) {
        return usage("--workers must be at least 1");
    }
    let config = SweepConfig {
        mod1: parse_mod(mod1)?,
        mod2: parse_mod(mod2)?,
        detectors: parse_detector_list(detectors)?,
        snr_db_grid: parse_grid(snr_db).map_err(CliError::Usage)?,
        interference: parse_axis(sir_db, inr_db)?,
        fading,
        trials_max: trials,
        min_errors,
        seed,
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let total = config.detectors.len() * config.snr_db_grid.len() * config.interference.len();
    let done = AtomicUsize::new(0);
    let estimates = run_sweep_with_workers(&config, workers, |e| {
        let n = done.fetch_add(1, Ordering::Relaxed) + 1;
        eprintln!(
            "[{n}/{total}] {} snr_db={} sir_db={} trials={} errors={} ser={:.3e}",
            e.detector, e.snr_db, e.sir_db, e.trials, e.errors, e.ser
        );
    })
    .map_err(|e| CliError::Runtime(e.to_string()))?;
    let rows: Vec<SerRecord> = estimates
        .iter()
        .map(|e| SerRecord {
            detector: e.detector.to_string(),
            mod1: config.mod1.to_string(),
            mod2: config.mod2.to_string(),
            fading: config.fading,
            snr_db: e.snr_db,
            sir_db: e.sir_db,
            inr_db: e.snr_db - e.sir_db,
            trials: e.trials,
            errors: e.errors,
            ser: e.ser,
            ci95_halfwidth: e.ci95_halfwidth,
        })
        .collect();
    emit(format, out, &rows)
}

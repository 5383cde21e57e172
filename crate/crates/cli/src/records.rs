//! Flat output records and the CSV/JSON writers.
//!
//! CSV and JSON carry identical field sets. CSV floats are printed with 13
//! significant digits in scientific notation so values survive a round trip;
//! rows end with LF and the header row is mandatory.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub trait Record: Serialize {
    const HEADER: &'static str;
    fn csv_row(&self) -> String;
}

fn float(v: f64) -> String {
    format!("{v:.12e}")
}

fn optional(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

/// One Monte Carlo or exact-oracle SER point. Exact-oracle rows carry zero
/// `trials`, `errors`, and `ci95_halfwidth`.
#[derive(Debug, Clone, Serialize)]
pub struct SerRecord {
    pub detector: String,
    pub mod1: String,
    pub mod2: String,
    pub fading: bool,
    pub snr_db: f64,
    pub sir_db: f64,
    pub inr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub ser: f64,
    pub ci95_halfwidth: f64,
}

impl Record for SerRecord {
    const HEADER: &'static str =
        "detector,mod1,mod2,fading,snr_db,sir_db,inr_db,trials,errors,ser,ci95_halfwidth";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.detector,
            self.mod1,
            self.mod2,
            self.fading,
            float(self.snr_db),
            float(self.sir_db),
            float(self.inr_db),
            self.trials,
            self.errors,
            float(self.ser),
            float(self.ci95_halfwidth),
        )
    }
}

/// One closed-form NNUB evaluation. `floor` is the nonzero SNR→∞ limit of
/// the active branch, or 0 when the branch decays to zero.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticRecord {
    pub detector: String,
    pub snr_db: f64,
    pub sir_db: f64,
    pub inr_db: f64,
    pub value: f64,
    pub regime: String,
    pub floor: f64,
}

impl Record for AnalyticRecord {
    const HEADER: &'static str = "detector,snr_db,sir_db,inr_db,value,regime,floor";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.detector,
            float(self.snr_db),
            float(self.sir_db),
            float(self.inr_db),
            float(self.value),
            self.regime,
            float(self.floor),
        )
    }
}

/// Error-floor thresholds for one PAM order pair.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdsRecord {
    pub m1: usize,
    pub m2: usize,
    pub sir_th: f64,
    pub sir_th_db: f64,
    pub sir_1: f64,
    pub sir_1_db: f64,
    pub sir_2: f64,
    pub sir_2_db: f64,
}

impl Record for ThresholdsRecord {
    const HEADER: &'static str = "m1,m2,sir_th,sir_th_db,sir_1,sir_1_db,sir_2,sir_2_db";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.m1,
            self.m2,
            float(self.sir_th),
            float(self.sir_th_db),
            float(self.sir_1),
            float(self.sir_1_db),
            float(self.sir_2),
            float(self.sir_2_db),
        )
    }
}

/// One decision interval of a detector on the real line. Unbounded interval
/// ends serialize as empty CSV cells / JSON nulls.
#[derive(Debug, Clone, Serialize)]
pub struct RegionRecord {
    pub detector: String,
    pub mod1: String,
    pub mod2: String,
    pub snr_db: f64,
    pub sir_db: f64,
    pub inr_db: f64,
    pub noise_sigma: f64,
    pub interval_index: usize,
    pub y_lower: Option<f64>,
    pub y_upper: Option<f64>,
    pub x1_index: usize,
}

impl Record for RegionRecord {
    const HEADER: &'static str = "detector,mod1,mod2,snr_db,sir_db,inr_db,noise_sigma,\
                                  interval_index,y_lower,y_upper,x1_index";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.detector,
            self.mod1,
            self.mod2,
            float(self.snr_db),
            float(self.sir_db),
            float(self.inr_db),
            float(self.noise_sigma),
            self.interval_index,
            optional(self.y_lower),
            optional(self.y_upper),
            self.x1_index,
        )
    }
}

/// Renders the records in the requested format and writes them to the file
/// or to standard output in one shot.
pub fn write_records<R: Record>(
    format: Format,
    out: Option<&Path>,
    records: &[R],
) -> io::Result<()> {
    let mut buffer = String::new();
    match format {
        Format::Csv => {
            buffer.push_str(R::HEADER);
            buffer.push('\n');
            for record in records {
                buffer.push_str(&record.csv_row());
                buffer.push('\n');
            }
        }
        Format::Json => {
            buffer = serde_json::to_string_pretty(records)
                .map_err(|e| io::Error::new(io::ErrorKind::Other, e))?;
            buffer.push('\n');
        }
    }
    match out {
        Some(path) => fs::write(path, buffer),
        None => io::stdout().write_all(buffer.as_bytes()),
    }
}

//! Hard symbol-by-symbol detectors for receiver 1, decision-region
//! extraction on the real line, and comparison-count accounting.
//!
//! Five detectors are provided:
//!
//! - **conventional**: nearest point of the desired constellation, with the
//!   interference lumped into the noise;
//! - **SIC**: detect the interferer first, subtract its contribution, then
//!   detect the desired symbol;
//! - **ordered SIC**: detect the stronger received component first;
//! - **minimum-distance**: joint nearest-point search over the combined
//!   constellation `h11·S1 + h12·S2`, keeping only the desired index;
//! - **ML**: maximizer of the interference-marginalized Gaussian likelihood,
//!   evaluated in the log domain with max subtraction.
//!
//! All detectors are pure functions of their arguments and tie-break toward
//! the smallest index (lexicographic for symbol pairs), so decisions are
//! deterministic even on measure-zero boundary inputs.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::constellation::Constellation;
use crate::error::{Error, Result};

/// The detector families compared in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    Conventional,
    Sic,
    OrderedSic,
    MinDistance,
    MaxLikelihood,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 5] = [
        DetectorKind::Conventional,
        DetectorKind::Sic,
        DetectorKind::OrderedSic,
        DetectorKind::MinDistance,
        DetectorKind::MaxLikelihood,
    ];

    /// Stable position of the kind in [`DetectorKind::ALL`]; used to derive
    /// per-point random streams that do not depend on sweep composition.
    pub fn ordinal(self) -> usize {
        match self {
            DetectorKind::Conventional => 0,
            DetectorKind::Sic => 1,
            DetectorKind::OrderedSic => 2,
            DetectorKind::MinDistance => 3,
            DetectorKind::MaxLikelihood => 4,
        }
    }

    /// Whether the detector also reports an interferer decision.
    pub fn reports_x2(self) -> bool {
        matches!(
            self,
            DetectorKind::Sic | DetectorKind::OrderedSic | DetectorKind::MinDistance
        )
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            DetectorKind::Conventional => "conv",
            DetectorKind::Sic => "sic",
            DetectorKind::OrderedSic => "osic",
            DetectorKind::MinDistance => "md",
            DetectorKind::MaxLikelihood => "ml",
        };
        f.write_str(name)
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conv" => Ok(DetectorKind::Conventional),
            "sic" => Ok(DetectorKind::Sic),
            "osic" => Ok(DetectorKind::OrderedSic),
            "md" => Ok(DetectorKind::MinDistance),
            "ml" => Ok(DetectorKind::MaxLikelihood),
            _ => Err(Error::InvalidInput(
                "unknown detector name (expected conv, sic, osic, md, or ml)",
            )),
        }
    }
}

/// Outcome of one detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    /// Decided index into the desired constellation.
    pub x1_index: usize,
    /// Decided interferer index, when the detector produces one.
    pub x2_index: Option<usize>,
    /// Pairwise metric comparisons spent on this decision.
    pub comparisons: usize,
}

/// Worst-case cost of one detection.
///
/// `exp_evals` counts exponential-metric evaluations and is zero for every
/// kind except ML, whose comparison count covers only the final argmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityBound {
    pub comparisons: usize,
    pub exp_evals: usize,
}

/// Comparison-count bounds: M1−1 (conventional), M1+M2−2 (SIC and ordered
/// SIC), M1·M2−1 (minimum-distance), and M1−1 plus M1·M2 exponential-metric
/// evaluations (ML).
pub fn complexity_bounds(kind: DetectorKind, m1: usize, m2: usize) -> ComplexityBound {
    match kind {
        DetectorKind::Conventional => ComplexityBound {
            comparisons: m1 - 1,
            exp_evals: 0,
        },
        DetectorKind::Sic | DetectorKind::OrderedSic => ComplexityBound {
            comparisons: m1 + m2 - 2,
            exp_evals: 0,
        },
        DetectorKind::MinDistance => ComplexityBound {
            comparisons: m1 * m2 - 1,
            exp_evals: 0,
        },
        DetectorKind::MaxLikelihood => ComplexityBound {
            comparisons: m1 - 1,
            exp_evals: m1 * m2,
        },
    }
}

fn ensure_finite(v: Complex64, what: &'static str) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(what))
    }
}

/// Nearest-point slicing of the desired signal; interference is treated as
/// part of the background noise.
pub fn detect_conventional(y: Complex64, h11: Complex64, s1: &Constellation) -> Result<Decision> {
    let (x1, comparisons) = s1.nearest(h11, y)?;
    Ok(Decision {
        x1_index: x1,
        x2_index: None,
        comparisons,
    })
}

/// Successive interference cancellation: slice the interferer first, subtract
/// its reconstructed contribution, then slice the desired signal.
pub fn detect_sic(
    y: Complex64,
    h11: Complex64,
    h12: Complex64,
    s1: &Constellation,
    s2: &Constellation,
) -> Result<Decision> {
    let (x2, c2) = s2.nearest(h12, y)?;
    let residual = y - h12 * s2.point(x2);
    let (x1, c1) = s1.nearest(h11, residual)?;
    Ok(Decision {
        x1_index: x1,
        x2_index: Some(x2),
        comparisons: c1 + c2,
    })
}

/// SIC with the stronger received component detected first. For |h11| ≥ |h12|
/// the desired symbol is sliced directly; otherwise this is plain SIC.
pub fn detect_ordered_sic(
    y: Complex64,
    h11: Complex64,
    h12: Complex64,
    s1: &Constellation,
    s2: &Constellation,
) -> Result<Decision> {
    ensure_finite(h11, "detect: gain must be finite")?;
    if h11.norm_sqr() >= h12.norm_sqr() {
        let (x1, c1) = s1.nearest(h11, y)?;
        let residual = y - h11 * s1.point(x1);
        let (x2, c2) = s2.nearest(h12, residual)?;
        Ok(Decision {
            x1_index: x1,
            x2_index: Some(x2),
            comparisons: c1 + c2,
        })
    } else {
        detect_sic(y, h11, h12, s1, s2)
    }
}

/// Joint nearest-point search over the combined constellation
/// `h11·S1 + h12·S2`; both indices are estimated but only the desired one
/// matters for the symbol error rate.
pub fn detect_min_distance(
    y: Complex64,
    h11: Complex64,
    h12: Complex64,
    s1: &Constellation,
    s2: &Constellation,
) -> Result<Decision> {
    ensure_finite(y, "detect: observation must be finite")?;
    ensure_finite(h11, "detect: gain must be finite")?;
    ensure_finite(h12, "detect: gain must be finite")?;
    let mut best = (0usize, 0usize);
    let mut best_dist = (y - h11 * s1.point(0) - h12 * s2.point(0)).norm_sqr();
    let mut comparisons = 0;
    for k in 0..s1.order() {
        let partial = y - h11 * s1.point(k);
        for l in 0..s2.order() {
            if k == 0 && l == 0 {
                continue;
            }
            let dist = (partial - h12 * s2.point(l)).norm_sqr();
            comparisons += 1;
            if dist < best_dist {
                best = (k, l);
                best_dist = dist;
            }
        }
    }
    Ok(Decision {
        x1_index: best.0,
        x2_index: Some(best.1),
        comparisons,
    })
}

/// Log-likelihood of the desired symbol `p1` with the interferer marginalized
/// out, up to a constant: `log Σ_l exp(−|y − h11·p1 − h12·q_l|²/(2σ²))`.
/// Max subtraction keeps the sum representable at any SNR.
fn ml_log_metric(
    y: Complex64,
    h11: Complex64,
    h12: Complex64,
    p1: Complex64,
    s2: &Constellation,
    inv_two_sigma_sq: f64,
) -> f64 {
    let base = y - h11 * p1;
    let mut max_e = f64::NEG_INFINITY;
    for q in s2.points() {
        let e = -(base - h12 * q).norm_sqr() * inv_two_sigma_sq;
        if e > max_e {
            max_e = e;
        }
    }
    if max_e == f64::NEG_INFINITY {
        // All squared distances overflowed; every hypothesis is hopeless.
        return f64::NEG_INFINITY;
    }
    let mut sum = 0.0;
    for q in s2.points() {
        let e = -(base - h12 * q).norm_sqr() * inv_two_sigma_sq;
        sum += (e - max_e).exp();
    }
    max_e + sum.ln()
}

/// Optimal detector for the desired symbol: argmax over `S1` of the
/// interference-marginalized likelihood.
pub fn detect_ml(
    y: Complex64,
    h11: Complex64,
    h12: Complex64,
    s1: &Constellation,
    s2: &Constellation,
    noise_sigma: f64,
) -> Result<Decision> {
    ensure_finite(y, "detect: observation must be finite")?;
    ensure_finite(h11, "detect: gain must be finite")?;
    ensure_finite(h12, "detect: gain must be finite")?;
    if !noise_sigma.is_finite() || noise_sigma <= 0.0 {
        return Err(Error::InvalidNoise(noise_sigma));
    }
    let inv_two_sigma_sq = 1.0 / (2.0 * noise_sigma * noise_sigma);
    let mut best_k = 0;
    let mut best_metric = ml_log_metric(y, h11, h12, s1.point(0), s2, inv_two_sigma_sq);
    let mut comparisons = 0;
    for k in 1..s1.order() {
        let metric = ml_log_metric(y, h11, h12, s1.point(k), s2, inv_two_sigma_sq);
        comparisons += 1;
        if metric > best_metric {
            best_k = k;
            best_metric = metric;
        }
    }
    Ok(Decision {
        x1_index: best_k,
        x2_index: None,
        comparisons,
    })
}

/// Runs the detector selected by `kind`. `noise_sigma` is only consulted by
/// the ML detector.
pub fn detect(
    kind: DetectorKind,
    y: Complex64,
    h11: Complex64,
    h12: Complex64,
    s1: &Constellation,
    s2: &Constellation,
    noise_sigma: f64,
) -> Result<Decision> {
    match kind {
        DetectorKind::Conventional => detect_conventional(y, h11, s1),
        DetectorKind::Sic => detect_sic(y, h11, h12, s1, s2),
        DetectorKind::OrderedSic => detect_ordered_sic(y, h11, h12, s1, s2),
        DetectorKind::MinDistance => detect_min_distance(y, h11, h12, s1, s2),
        DetectorKind::MaxLikelihood => detect_ml(y, h11, h12, s1, s2, noise_sigma),
    }
}

/// Partition of the real line induced by a detector's desired-symbol
/// decision: `boundaries` are the points where the decision changes (sorted
/// ascending) and `labels[i]` is the decision on the i-th interval, so
/// `labels.len() == boundaries.len() + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionPartition {
    pub boundaries: Vec<f64>,
    pub labels: Vec<usize>,
}

/// Decision partition for real PAM signalling with nonnegative real gains.
///
/// For the slicer-based detectors the boundaries are exact midpoints of the
/// relevant scaled alphabets; for ML they are located by a sign-change scan
/// of the log-metric difference with grid step `noise_sigma/100`, refined by
/// bisection to 1e−9.
pub fn decision_partition(
    kind: DetectorKind,
    h11: f64,
    h12: f64,
    s1: &Constellation,
    s2: &Constellation,
    noise_sigma: f64,
) -> Result<DecisionPartition> {
    if !s1.is_real() || !s2.is_real() {
        return Err(Error::UnsupportedDomain(
            "decision regions are defined for PAM alphabets on the real line",
        ));
    }
    if !h11.is_finite() || !h12.is_finite() || h11 < 0.0 || h12 < 0.0 {
        return Err(Error::InvalidInput(
            "decision regions require finite nonnegative real gains",
        ));
    }
    if kind == DetectorKind::MaxLikelihood {
        return ml_partition(h11, h12, s1, s2, noise_sigma);
    }
    let candidates = match kind {
        DetectorKind::Conventional => slicer_thresholds(h11, s1),
        DetectorKind::Sic => sic_threshold_candidates(h11, h12, s1, s2),
        DetectorKind::OrderedSic => {
            if h11 >= h12 {
                slicer_thresholds(h11, s1)
            } else {
                sic_threshold_candidates(h11, h12, s1, s2)
            }
        }
        DetectorKind::MinDistance => combined_midpoint_candidates(h11, h12, s1, s2),
        DetectorKind::MaxLikelihood => unreachable!(),
    };
    filter_candidates(kind, h11, h12, s1, s2, noise_sigma, candidates)
}

/// Points where the desired-symbol decision changes, sorted ascending.
pub fn decision_boundaries(
    kind: DetectorKind,
    h11: f64,
    h12: f64,
    s1: &Constellation,
    s2: &Constellation,
    noise_sigma: f64,
) -> Result<Vec<f64>> {
    decision_partition(kind, h11, h12, s1, s2, noise_sigma).map(|p| p.boundaries)
}

/// Midpoints of the gain-scaled alphabet; empty for a zero gain (all scaled
/// points coincide, so the slicer decision never changes).
fn slicer_thresholds(gain: f64, c: &Constellation) -> Vec<f64> {
    if gain == 0.0 {
        return Vec::new();
    }
    c.points()
        .windows(2)
        .map(|w| 0.5 * gain * (w[0].re + w[1].re))
        .collect()
}

/// Candidate change points of the SIC decision: the interferer-slicer
/// thresholds, plus the desired-slicer thresholds shifted by the cancelled
/// interferer symbol of each region (kept only when they fall inside it).
fn sic_threshold_candidates(
    h11: f64,
    h12: f64,
    s1: &Constellation,
    s2: &Constellation,
) -> Vec<f64> {
    let t2 = slicer_thresholds(h12, s2);
    let t1 = slicer_thresholds(h11, s1);
    let regions = if t2.is_empty() { 1 } else { s2.order() };
    let mut candidates = t2.clone();
    for r in 0..regions {
        let lo = if r == 0 {
            f64::NEG_INFINITY
        } else {
            t2[r - 1]
        };
        let hi = if r + 1 == regions {
            f64::INFINITY
        } else {
            t2[r]
        };
        let cancelled = h12 * s2.point(r).re;
        for &m in &t1 {
            let candidate = m + cancelled;
            if candidate > lo && candidate < hi {
                candidates.push(candidate);
            }
        }
    }
    candidates
}

/// Midpoints between consecutive distinct combined-constellation points.
fn combined_midpoint_candidates(
    h11: f64,
    h12: f64,
    s1: &Constellation,
    s2: &Constellation,
) -> Vec<f64> {
    let mut positions = Vec::with_capacity(s1.order() * s2.order());
    for p in s1.points() {
        for q in s2.points() {
            positions.push(h11 * p.re + h12 * q.re);
        }
    }
    positions.sort_by(f64::total_cmp);
    positions
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| 0.5 * (w[0] + w[1]))
        .collect()
}

/// Keeps only the candidates across which the detector's decision actually
/// changes, probing each interval's interior with the detector itself.
fn filter_candidates(
    kind: DetectorKind,
    h11: f64,
    h12: f64,
    s1: &Constellation,
    s2: &Constellation,
    noise_sigma: f64,
    mut candidates: Vec<f64>,
) -> Result<DecisionPartition> {
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let h11c = Complex64::new(h11, 0.0);
    let h12c = Complex64::new(h12, 0.0);
    let decide = |y: f64| -> Result<usize> {
        Ok(detect(kind, Complex64::new(y, 0.0), h11c, h12c, s1, s2, noise_sigma)?.x1_index)
    };
    if candidates.is_empty() {
        return Ok(DecisionPartition {
            boundaries: Vec::new(),
            labels: vec![decide(0.0)?],
        });
    }
    let pad = 1.0 + candidates[candidates.len() - 1] - candidates[0];
    let mut boundaries = Vec::new();
    let mut labels = Vec::new();
    let mut prev = decide(candidates[0] - pad)?;
    labels.push(prev);
    for i in 0..candidates.len() {
        let probe = if i + 1 < candidates.len() {
            0.5 * (candidates[i] + candidates[i + 1])
        } else {
            candidates[i] + pad
        };
        let label = decide(probe)?;
        if label != prev {
            boundaries.push(candidates[i]);
            labels.push(label);
            prev = label;
        }
    }
    Ok(DecisionPartition { boundaries, labels })
}

/// Real-line ML metrics with the combined points grouped per desired symbol.
struct MlMetrics {
    combined: Vec<Vec<f64>>,
    inv_two_sigma_sq: f64,
}

impl MlMetrics {
    fn new(h11: f64, h12: f64, s1: &Constellation, s2: &Constellation, sigma: f64) -> Self {
        let combined = s1
            .points()
            .iter()
            .map(|p| {
                s2.points()
                    .iter()
                    .map(|q| h11 * p.re + h12 * q.re)
                    .collect()
            })
            .collect();
        Self {
            combined,
            inv_two_sigma_sq: 1.0 / (2.0 * sigma * sigma),
        }
    }

    fn metric(&self, y: f64, k: usize) -> f64 {
        let mut max_e = f64::NEG_INFINITY;
        for &c in &self.combined[k] {
            let d = y - c;
            let e = -d * d * self.inv_two_sigma_sq;
            if e > max_e {
                max_e = e;
            }
        }
        let mut sum = 0.0;
        for &c in &self.combined[k] {
            let d = y - c;
            let e = -d * d * self.inv_two_sigma_sq;
            sum += (e - max_e).exp();
        }
        max_e + sum.ln()
    }

    fn decide(&self, y: f64) -> usize {
        let mut best = 0;
        let mut best_metric = self.metric(y, 0);
        for k in 1..self.combined.len() {
            let metric = self.metric(y, k);
            if metric > best_metric {
                best = k;
                best_metric = metric;
            }
        }
        best
    }
}

/// Bisects the zero of `metric(a) − metric(b)` inside `(lo, hi)` down to a
/// width of 1e−9. The difference is nonnegative at `lo` and nonpositive at
/// `hi` because the argmax switches from `a` to `b` across the cell.
fn bisect_crossing(metrics: &MlMetrics, mut lo: f64, mut hi: f64, a: usize, b: usize) -> f64 {
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if metrics.metric(mid, a) - metrics.metric(mid, b) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign-change scan for the ML decision: grid step `sigma/100` over
/// `±((h11+h12)·D + 6σ)` with `D` the largest alphabet amplitude, each
/// change refined by bisection.
fn ml_partition(
    h11: f64,
    h12: f64,
    s1: &Constellation,
    s2: &Constellation,
    sigma: f64,
) -> Result<DecisionPartition> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidNoise(sigma));
    }
    let amplitude = s1.max_amplitude().max(s2.max_amplitude());
    let range = (h11 + h12) * amplitude + 6.0 * sigma;
    let step = sigma / 100.0;
    let metrics = MlMetrics::new(h11, h12, s1, s2, sigma);
    let steps = ((2.0 * range) / step).ceil() as u64;
    let mut boundaries = Vec::new();
    let mut labels = Vec::new();
    let mut prev_y = -range;
    let mut prev_dec = metrics.decide(prev_y);
    labels.push(prev_dec);
    for i in 1..=steps {
        let y = -range + step * i as f64;
        let dec = metrics.decide(y);
        if dec != prev_dec {
            boundaries.push(bisect_crossing(&metrics, prev_y, y, prev_dec, dec));
            labels.push(dec);
            prev_dec = dec;
        }
        prev_y = y;
    }
    Ok(DecisionPartition { boundaries, labels })
}

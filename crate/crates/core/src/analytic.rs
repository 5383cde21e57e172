//! Closed-form SER predictions and an exact numerical SER oracle.
//!
//! For 2-PAM at both transmitters the nearest-neighbor union bound (NNUB)
//! gives piecewise closed forms for the conventional, SIC, and
//! minimum-distance detectors, with the active branch selected by the SIR.
//! For general PAM orders the closed forms are replaced by
//! [`ser_exact_pam`], which integrates Gaussian tail masses over the exact
//! decision partition of the chosen detector and is accurate to the
//! Q-function itself (plus the 1e−9 boundary-location tolerance for ML).

use crate::channel::{ChannelRealization, Domain, LinkBudget};
use crate::constellation::Constellation;
use crate::detectors::{decision_partition, DecisionPartition, DetectorKind};
use crate::error::{Error, Result};

/// Gaussian tail probability, no input validation. Relative accuracy follows
/// the underlying complementary error function (about 1 ulp).
#[inline]
fn q(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Standard Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidInput("q_function requires a finite argument"));
    }
    Ok(q(x))
}

/// A closed-form SER value together with the formula branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerPrediction {
    /// Predicted symbol error rate, clamped to [0, 1].
    pub value: f64,
    /// Label of the active SIR branch.
    pub regime: &'static str,
    /// Nonzero SNR→∞ limit of the active branch at fixed SIR, when one
    /// exists; `None` when the branch decays to zero.
    pub floor: Option<f64>,
}

fn prediction(value: f64, regime: &'static str, floor: f64) -> SerPrediction {
    SerPrediction {
        value: value.clamp(0.0, 1.0),
        regime,
        floor: (floor != 0.0).then_some(floor),
    }
}

/// NNUB SER for 2-PAM at both transmitters. Supported kinds: conventional,
/// SIC, and minimum-distance; no closed form exists for ordered SIC or ML
/// (the minimum-distance expression upper-bounds the ML detector).
///
/// `inr = 0` selects the top branch (SIR treated as +∞) with the INR term
/// set to zero.
pub fn ser_nnub_2pam(kind: DetectorKind, snr: f64, inr: f64) -> Result<SerPrediction> {
    let budget = LinkBudget::new(snr, inr)?;
    let sir = budget.sir();
    let rs = snr.sqrt();
    let ri = inr.sqrt();
    let p = match kind {
        DetectorKind::Conventional => {
            if sir >= 1.0 {
                let floor = if sir > 1.0 { 0.0 } else { 0.25 };
                prediction(0.5 * q(rs - ri), "SIR >= 1", floor)
            } else {
                prediction(0.5 - 0.5 * q(ri - rs), "SIR < 1", 0.5)
            }
        }
        DetectorKind::Sic => {
            if sir >= 4.0 {
                let floor = if sir > 4.0 { 0.0 } else { 0.25 };
                prediction(0.5 * q(rs - 2.0 * ri), "SIR >= 4", floor)
            } else if sir >= 2.25 {
                prediction(0.5 - 0.5 * q(rs - ri), "9/4 <= SIR < 4", 0.5)
            } else if sir >= 1.0 {
                prediction(0.5 - 0.5 * q(2.0 * ri - rs), "1 <= SIR < 9/4", 0.5)
            } else if sir >= 0.25 {
                prediction(0.5 * q(ri - rs), "1/4 <= SIR < 1", 0.0)
            } else {
                prediction(q(rs), "SIR < 1/4", 0.0)
            }
        }
        DetectorKind::MinDistance => {
            if sir >= 1.0 {
                let floor = if sir > 1.0 { 0.0 } else { 0.25 };
                prediction(0.5 * q(rs - ri), "SIR >= 1", floor)
            } else if sir >= 0.25 {
                prediction(0.5 * q(ri - rs), "1/4 <= SIR < 1", 0.0)
            } else {
                prediction(q(rs), "SIR < 1/4", 0.0)
            }
        }
        DetectorKind::OrderedSic | DetectorKind::MaxLikelihood => {
            return Err(Error::UnsupportedKind {
                kind,
                reason: "no closed-form NNUB expression; use the minimum-distance \
                         prediction as an upper bound or ser_exact_pam",
            });
        }
    };
    Ok(p)
}

fn check_order(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidOrder {
            order: m,
            reason: "PAM requires order >= 2",
        });
    }
    Ok(())
}

/// SIR threshold (linear scale) below which the conventional detector hits a
/// nonzero error floor: `(M1²−1)(M2−1)/(M2+1)`.
pub fn sir_threshold(m1: usize, m2: usize) -> Result<f64> {
    check_order(m1)?;
    check_order(m2)?;
    let (m1, m2) = (m1 as f64, m2 as f64);
    Ok((m1 * m1 - 1.0) * (m2 - 1.0) / (m2 + 1.0))
}

/// The SIR interval (linear scale) on which the SIC detector hits a nonzero
/// error floor: `SIR1 = (M1+1)/((M1−1)(M2²−1))` and `SIR2 = 4·SIR_th`.
pub fn sic_floor_region(m1: usize, m2: usize) -> Result<(f64, f64)> {
    check_order(m1)?;
    check_order(m2)?;
    let (m1f, m2f) = (m1 as f64, m2 as f64);
    let sir1 = (m1f + 1.0) / ((m1f - 1.0) * (m2f * m2f - 1.0));
    let sir2 = 4.0 * sir_threshold(m1, m2)?;
    Ok((sir1, sir2))
}

/// Probability mass of `N(mu, sigma²)` on `(a, b)`, computed from the tail on
/// the side away from the mean so that small masses keep relative accuracy.
fn gaussian_interval_mass(a: f64, b: f64, mu: f64, sigma: f64) -> f64 {
    let mass = if a == f64::NEG_INFINITY && b == f64::INFINITY {
        1.0
    } else if a == f64::NEG_INFINITY {
        q((mu - b) / sigma)
    } else if b == f64::INFINITY {
        q((a - mu) / sigma)
    } else {
        let za = (a - mu) / sigma;
        let zb = (b - mu) / sigma;
        if za >= 0.0 {
            q(za) - q(zb)
        } else if zb <= 0.0 {
            q(-zb) - q(-za)
        } else {
            1.0 - q(-za) - q(zb)
        }
    };
    mass.max(0.0)
}

/// Probability that the decision differs from `sent` when the observation is
/// `N(mu, sigma²)` over the given partition.
fn error_probability(partition: &DecisionPartition, mu: f64, sigma: f64, sent: usize) -> f64 {
    let intervals = partition.labels.len();
    let mut p = 0.0;
    for i in 0..intervals {
        if partition.labels[i] == sent {
            continue;
        }
        let a = if i == 0 {
            f64::NEG_INFINITY
        } else {
            partition.boundaries[i - 1]
        };
        let b = if i + 1 == intervals {
            f64::INFINITY
        } else {
            partition.boundaries[i]
        };
        p += gaussian_interval_mass(a, b, mu, sigma);
    }
    p.min(1.0)
}

/// Exact SER of a detector for fixed-gain real PAM, by integrating Gaussian
/// tail masses of the mislabeled intervals for every equiprobable symbol
/// pair. Deterministic; `noise_sigma_for_ml` overrides the noise scale the
/// ML detector assumes (default: the true channel value, 1).
pub fn ser_exact_pam(
    kind: DetectorKind,
    snr: f64,
    inr: f64,
    m1: usize,
    m2: usize,
    noise_sigma_for_ml: Option<f64>,
) -> Result<f64> {
    let s1 = Constellation::pam(m1)?;
    let s2 = Constellation::pam(m2)?;
    let budget = LinkBudget::new(snr, inr)?;
    let real = ChannelRealization::fixed(&budget, Domain::Real);
    let h11 = real.h11.re;
    let h12 = real.h12.re;
    let sigma = real.noise_sigma;
    let sigma_ml = noise_sigma_for_ml.unwrap_or(sigma);
    let partition = decision_partition(kind, h11, h12, &s1, &s2, sigma_ml)?;
    let mut total = 0.0;
    for k in 0..m1 {
        for l in 0..m2 {
            let mu = h11 * s1.point(k).re + h12 * s2.point(l).re;
            total += error_probability(&partition, mu, sigma, k);
        }
    }
    Ok(total / (m1 * m2) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::db_to_linear;

    /// Adaptive Simpson quadrature of the Gaussian density, used as an
    /// independent oracle for the Q-function. Integrates from `x` far enough
    /// into the tail that the remainder is negligible at f64 scale.
    fn q_oracle(x: f64) -> f64 {
        fn phi(t: f64) -> f64 {
            (-(t * t) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
        }
        fn simpson(a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (phi(a) + 4.0 * phi(0.5 * (a + b)) + phi(b))
        }
        fn adapt(a: f64, b: f64, whole: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson(a, m);
            let right = simpson(m, b);
            let refined = left + right;
            let err = refined - whole;
            if depth == 0 || err.abs() <= 1e-14 * refined.abs().max(1e-320) {
                refined + err / 15.0
            } else {
                adapt(a, m, left, depth - 1) + adapt(m, b, right, depth - 1)
            }
        }
        let hi = x + 44.0;
        adapt(x, hi, simpson(x, hi), 48)
    }

    #[test]
    fn q_at_zero_is_half() {
        assert_eq!(q_function(0.0).unwrap(), 0.5);
    }

    #[test]
    fn q_complement_identity() {
        for i in 0..=40 {
            let x = -4.0 + 0.2 * i as f64;
            let sum = q_function(x).unwrap() + q_function(-x).unwrap();
            assert!((sum - 1.0).abs() < 1e-15, "complement fails at {x}");
        }
    }

    #[test]
    fn q_matches_integration_oracle() {
        let v = q_function(1.0).unwrap();
        let oracle = q_oracle(1.0);
        assert!((v - oracle).abs() / oracle < 1e-12);
        assert!((v - 0.158655).abs() < 1e-6);
        for i in -32..=32 {
            let x = 0.25 * i as f64;
            let got = q_function(x).unwrap();
            let want = q_oracle(x);
            let rel = (got - want).abs() / want.abs().max(1e-320);
            assert!(rel < 1e-11, "x = {x}: got {got}, oracle {want}");
        }
    }

    #[test]
    fn q_far_tail_underflows_cleanly() {
        let v = q_function(50.0).unwrap();
        assert!(v >= 0.0 && v < 1e-300);
        assert!(q_function(f64::NAN).is_err());
        assert!(q_function(f64::INFINITY).is_err());
    }

    #[test]
    fn nnub_conventional_branches() {
        // SIR = 2 (≥ 1): ½Q(√SNR − √INR), no floor.
        let p = ser_nnub_2pam(DetectorKind::Conventional, 10.0, 5.0).unwrap();
        let expect = 0.5 * q(10.0_f64.sqrt() - 5.0_f64.sqrt());
        assert!((p.value - expect).abs() < 1e-15);
        assert_eq!(p.regime, "SIR >= 1");
        assert_eq!(p.floor, None);
        // SIR = ½ (< 1): ½ − ½Q(√INR − √SNR), floor ½.
        let p = ser_nnub_2pam(DetectorKind::Conventional, 10.0, 20.0).unwrap();
        let expect = 0.5 - 0.5 * q(20.0_f64.sqrt() - 10.0_f64.sqrt());
        assert!((p.value - expect).abs() < 1e-15);
        assert_eq!(p.regime, "SIR < 1");
        assert_eq!(p.floor, Some(0.5));
        // SIR exactly 1 pins the prediction at ¼ for all SNR.
        let p = ser_nnub_2pam(DetectorKind::Conventional, 100.0, 100.0).unwrap();
        assert!((p.value - 0.25).abs() < 1e-15);
        assert_eq!(p.floor, Some(0.25));
    }

    #[test]
    fn nnub_sic_branches() {
        let cases: [(f64, &str); 5] = [
            (5.0, "SIR >= 4"),
            (3.0, "9/4 <= SIR < 4"),
            (1.5, "1 <= SIR < 9/4"),
            (0.5, "1/4 <= SIR < 1"),
            (0.1, "SIR < 1/4"),
        ];
        let snr = 10.0;
        for (sir, regime) in cases {
            let p = ser_nnub_2pam(DetectorKind::Sic, snr, snr / sir).unwrap();
            assert_eq!(p.regime, regime, "sir = {sir}");
        }
        // Strong interference: Q(√SNR), same value as minimum-distance.
        let sic = ser_nnub_2pam(DetectorKind::Sic, 10.0, 100.0).unwrap();
        let md = ser_nnub_2pam(DetectorKind::MinDistance, 10.0, 100.0).unwrap();
        assert_eq!(sic.value, md.value);
        assert!((sic.value - q(10.0_f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn nnub_branch_conditions_partition_sir_axis() {
        // Sampled SIRs, including the branch edges, must land in exactly the
        // branch dictated by the inequality chain.
        let snr = 4.0;
        for i in 1..=600 {
            let sir = 0.01 * i as f64;
            let inr = snr / sir;
            let conv = ser_nnub_2pam(DetectorKind::Conventional, snr, inr).unwrap();
            let expected = if sir >= 1.0 { "SIR >= 1" } else { "SIR < 1" };
            assert_eq!(conv.regime, expected);
            let sic = ser_nnub_2pam(DetectorKind::Sic, snr, inr).unwrap();
            let expected = if sir >= 4.0 {
                "SIR >= 4"
            } else if sir >= 2.25 {
                "9/4 <= SIR < 4"
            } else if sir >= 1.0 {
                "1 <= SIR < 9/4"
            } else if sir >= 0.25 {
                "1/4 <= SIR < 1"
            } else {
                "SIR < 1/4"
            };
            assert_eq!(sic.regime, expected);
            let md = ser_nnub_2pam(DetectorKind::MinDistance, snr, inr).unwrap();
            let expected = if sir >= 1.0 {
                "SIR >= 1"
            } else if sir >= 0.25 {
                "1/4 <= SIR < 1"
            } else {
                "SIR < 1/4"
            };
            assert_eq!(md.regime, expected);
        }
    }

    #[test]
    fn nnub_zero_inr_uses_top_branch() {
        let conv = ser_nnub_2pam(DetectorKind::Conventional, 10.0, 0.0).unwrap();
        assert_eq!(conv.regime, "SIR >= 1");
        assert_eq!(conv.floor, None);
        assert!((conv.value - 0.5 * q(10.0_f64.sqrt())).abs() < 1e-15);
        let sic = ser_nnub_2pam(DetectorKind::Sic, 10.0, 0.0).unwrap();
        assert_eq!(sic.regime, "SIR >= 4");
    }

    #[test]
    fn nnub_conventional_equals_min_distance_above_unit_sir() {
        for snr_db in [0.0, 4.0, 8.0, 12.0] {
            for sir in [1.0, 1.5, 2.0, 4.0, 10.0] {
                let snr = db_to_linear(snr_db);
                let conv = ser_nnub_2pam(DetectorKind::Conventional, snr, snr / sir).unwrap();
                let md = ser_nnub_2pam(DetectorKind::MinDistance, snr, snr / sir).unwrap();
                assert_eq!(conv.value, md.value);
            }
        }
    }

    #[test]
    fn nnub_min_distance_never_worse_than_sic_above_unit_sir() {
        for snr_db in [0.0, 4.0, 8.0, 12.0, 16.0] {
            for sir in [1.0, 1.3, 2.0, 2.25, 3.0, 4.0, 8.0] {
                let snr = db_to_linear(snr_db);
                let md = ser_nnub_2pam(DetectorKind::MinDistance, snr, snr / sir).unwrap();
                let sic = ser_nnub_2pam(DetectorKind::Sic, snr, snr / sir).unwrap();
                assert!(
                    md.value <= sic.value + 1e-15,
                    "md {} > sic {} at snr_db {snr_db}, sir {sir}",
                    md.value,
                    sic.value
                );
            }
        }
    }

    #[test]
    fn nnub_rejects_kinds_without_closed_form() {
        assert!(matches!(
            ser_nnub_2pam(DetectorKind::OrderedSic, 1.0, 1.0),
            Err(Error::UnsupportedKind { .. })
        ));
        assert!(ser_nnub_2pam(DetectorKind::MaxLikelihood, 1.0, 1.0).is_err());
    }

    #[test]
    fn thresholds_known_values() {
        assert_eq!(sir_threshold(2, 2).unwrap(), 1.0);
        assert_eq!(sir_threshold(4, 4).unwrap(), 9.0);
        assert!((sir_threshold(2, 4).unwrap() - 1.8).abs() < 1e-15);
        assert!(sir_threshold(1, 2).is_err());
    }

    #[test]
    fn sic_floor_region_known_values() {
        let (sir1, sir2) = sic_floor_region(2, 2).unwrap();
        assert_eq!((sir1, sir2), (1.0, 4.0));
        let (sir1, sir2) = sic_floor_region(4, 4).unwrap();
        assert!((sir1 - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(sir2, 36.0);
        assert_eq!(sir2, 4.0 * sir_threshold(4, 4).unwrap());
    }

    #[test]
    fn exact_single_user_2pam_is_classical() {
        for snr_db in [0.0, 6.0, 9.6, 12.0] {
            let snr = db_to_linear(snr_db);
            let exact =
                ser_exact_pam(DetectorKind::Conventional, snr, 0.0, 2, 2, None).unwrap();
            let classical = q(snr.sqrt());
            assert!((exact - classical).abs() < 1e-15, "snr_db = {snr_db}");
        }
    }

    #[test]
    fn exact_conventional_floor_at_half_sir() {
        // SIR = ½ at 40 dB: the conventional detector sits on its ½ floor.
        let snr = db_to_linear(40.0);
        let exact = ser_exact_pam(DetectorKind::Conventional, snr, 2.0 * snr, 2, 2, None).unwrap();
        assert!((exact - 0.5).abs() < 1e-6, "got {exact}");
    }

    #[test]
    fn exact_matches_nnub_to_leading_order() {
        // At SNR 10 dB, SIR 3 dB the dropped NNUB term is negligible for the
        // conventional detector.
        let snr = db_to_linear(10.0);
        let inr = db_to_linear(7.0);
        let exact = ser_exact_pam(DetectorKind::Conventional, snr, inr, 2, 2, None).unwrap();
        let nnub = ser_nnub_2pam(DetectorKind::Conventional, snr, inr).unwrap().value;
        assert!((exact - nnub).abs() / exact < 0.15, "exact {exact} nnub {nnub}");
    }

    #[test]
    fn exact_encodes_conventional_floor_proposition() {
        // 4-PAM, SIR_th = 9: below the threshold the conventional detector
        // floors while the minimum-distance detector keeps improving.
        let snr = db_to_linear(60.0);
        for sir_db in [-3.0, 3.0] {
            let inr = snr / db_to_linear(sir_db);
            let conv = ser_exact_pam(DetectorKind::Conventional, snr, inr, 4, 4, None).unwrap();
            let md = ser_exact_pam(DetectorKind::MinDistance, snr, inr, 4, 4, None).unwrap();
            assert!(conv > 1e-2, "conv {conv} at sir_db {sir_db}");
            assert!(md < 1e-6, "md {md} at sir_db {sir_db}");
        }
        // Above the threshold (12 dB > 9.54 dB) the floor disappears.
        let inr = snr / db_to_linear(12.0);
        let conv = ser_exact_pam(DetectorKind::Conventional, snr, inr, 4, 4, None).unwrap();
        assert!(conv < 1e-6, "conv {conv} above threshold");
    }

    #[test]
    fn exact_encodes_sic_floor_region() {
        let snr = db_to_linear(60.0);
        for sir_db in [-3.0, 3.0] {
            let inr = snr / db_to_linear(sir_db);
            let sic = ser_exact_pam(DetectorKind::Sic, snr, inr, 4, 4, None).unwrap();
            assert!(sic > 1e-2, "sic {sic} inside floor region at {sir_db} dB");
        }
        let inr = snr / db_to_linear(-12.0);
        let sic = ser_exact_pam(DetectorKind::Sic, snr, inr, 4, 4, None).unwrap();
        assert!(sic < 1e-6, "sic {sic} below SIR_1");
    }

    #[test]
    fn exact_rejects_bad_arguments() {
        assert!(ser_exact_pam(DetectorKind::Conventional, 0.0, 1.0, 2, 2, None).is_err());
        assert!(ser_exact_pam(DetectorKind::Conventional, 1.0, 1.0, 1, 2, None).is_err());
        assert!(ser_exact_pam(DetectorKind::MaxLikelihood, 1.0, 1.0, 2, 2, Some(0.0)).is_err());
    }

    #[test]
    fn interval_mass_three_regimes_are_consistent() {
        // Right-tail, left-tail, and straddling formulations agree where they
        // overlap and sum to one over a partition of the line.
        let mu = 0.7;
        let sigma = 1.3;
        let cuts = [-3.0, -0.4, 0.7, 2.9];
        let mut total = gaussian_interval_mass(f64::NEG_INFINITY, cuts[0], mu, sigma);
        for w in cuts.windows(2) {
            total += gaussian_interval_mass(w[0], w[1], mu, sigma);
        }
        total += gaussian_interval_mass(cuts[3], f64::INFINITY, mu, sigma);
        assert!((total - 1.0).abs() < 1e-14);
    }
}

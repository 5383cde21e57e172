//! PAM and QAM signal alphabets with unit average symbol energy.
//!
//! All alphabets are normalized so that the mean of |point|² is exactly 1.
//! SNR and INR are then carried entirely by the channel gains, which keeps
//! the closed-form SER expressions applicable without extra scale factors.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Alphabet family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstellationKind {
    /// Pulse-amplitude modulation: real-valued, equally spaced levels.
    Pam,
    /// Square quadrature-amplitude modulation: product of two PAM alphabets.
    Qam,
}

/// An ordered finite symbol alphabet, immutable after construction.
///
/// PAM points lie on the real axis in strictly increasing order. Square QAM
/// points are the Cartesian product of two √M-PAM alphabets with the in-phase
/// index varying slowest. Indices run `0..order()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: ConstellationKind,
    points: Vec<Complex64>,
}

impl Constellation {
    /// Builds an M-PAM alphabet: levels ±1, ±3, …, ±(M−1) scaled to unit
    /// average energy.
    pub fn pam(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder {
                order,
                reason: "PAM requires order >= 2",
            });
        }
        let scale = (3.0 / ((order * order - 1) as f64)).sqrt();
        let points = (0..order)
            .map(|k| {
                let level = (2 * k) as f64 - (order - 1) as f64;
                Complex64::new(level * scale, 0.0)
            })
            .collect();
        Ok(Self {
            kind: ConstellationKind::Pam,
            points,
        })
    }

    /// Builds a square M-QAM alphabet (M a perfect square ≥ 4) as the product
    /// of two √M-PAM alphabets, renormalized to unit average energy.
    pub fn qam(order: usize) -> Result<Self> {
        let side = (order as f64).sqrt().round() as usize;
        if order < 4 || side * side != order {
            return Err(Error::InvalidOrder {
                order,
                reason: "QAM requires a perfect-square order >= 4",
            });
        }
        // Each axis carries half the symbol energy.
        let scale = (3.0 / (2.0 * (side * side - 1) as f64)).sqrt();
        let level = |k: usize| ((2 * k) as f64 - (side - 1) as f64) * scale;
        let mut points = Vec::with_capacity(order);
        for i in 0..side {
            for q in 0..side {
                points.push(Complex64::new(level(i), level(q)));
            }
        }
        Ok(Self {
            kind: ConstellationKind::Qam,
            points,
        })
    }

    pub fn kind(&self) -> ConstellationKind {
        self.kind
    }

    /// Number of symbols M.
    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Complex64 {
        self.points[index]
    }

    /// True for PAM (all points on the real axis).
    pub fn is_real(&self) -> bool {
        self.kind == ConstellationKind::Pam
    }

    /// Largest |point| over the alphabet.
    pub fn max_amplitude(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.norm())
            .fold(0.0, f64::max)
    }

    /// Index of the alphabet point minimizing |y − gain·point|, together with
    /// the number of pairwise comparisons spent (always M−1).
    ///
    /// Ties are broken toward the smallest index.
    pub fn nearest(&self, gain: Complex64, y: Complex64) -> Result<(usize, usize)> {
        if !gain.re.is_finite() || !gain.im.is_finite() {
            return Err(Error::InvalidInput("nearest: gain must be finite"));
        }
        if !y.re.is_finite() || !y.im.is_finite() {
            return Err(Error::InvalidInput("nearest: observation must be finite"));
        }
        let mut best = 0;
        let mut best_dist = (y - gain * self.points[0]).norm_sqr();
        let mut comparisons = 0;
        for (k, p) in self.points.iter().enumerate().skip(1) {
            let dist = (y - gain * p).norm_sqr();
            comparisons += 1;
            if dist < best_dist {
                best = k;
                best_dist = dist;
            }
        }
        Ok((best, comparisons))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_unit_energy(c: &Constellation) {
        let m = c.order() as f64;
        let mean: Complex64 = c.points().iter().sum::<Complex64>() / m;
        assert!(mean.norm() < 1e-12, "mean {mean} not zero");
        let energy: f64 = c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / m;
        assert!((energy - 1.0).abs() < 1e-12, "energy {energy} not unit");
        for i in 0..c.order() {
            for j in (i + 1)..c.order() {
                assert_ne!(c.point(i), c.point(j), "points {i} and {j} coincide");
            }
        }
    }

    #[test]
    fn pam2_is_plus_minus_one() {
        let c = Constellation::pam(2).unwrap();
        assert_eq!(c.point(0), Complex64::new(-1.0, 0.0));
        assert_eq!(c.point(1), Complex64::new(1.0, 0.0));
        assert_unit_energy(&c);
    }

    #[test]
    fn pam4_levels_scaled_by_sqrt5() {
        // Average energy of {±1, ±3} is 5, so levels are divided by √5.
        let c = Constellation::pam(4).unwrap();
        let s = 1.0 / 5.0_f64.sqrt();
        let expected = [-3.0 * s, -s, s, 3.0 * s];
        for (p, e) in c.points().iter().zip(expected) {
            assert!((p.re - e).abs() < 1e-15);
            assert_eq!(p.im, 0.0);
        }
        assert_unit_energy(&c);
    }

    #[test]
    fn pam_points_strictly_increasing() {
        for m in [2, 4, 8, 16] {
            let c = Constellation::pam(m).unwrap();
            for w in c.points().windows(2) {
                assert!(w[0].re < w[1].re);
            }
            assert_unit_energy(&c);
        }
    }

    #[test]
    fn pam_order_below_two_rejected() {
        assert!(matches!(
            Constellation::pam(1),
            Err(Error::InvalidOrder { order: 1, .. })
        ));
        assert!(Constellation::pam(0).is_err());
    }

    #[test]
    fn qam4_is_qpsk() {
        let c = Constellation::qam(4).unwrap();
        let v = 1.0 / 2.0_f64.sqrt();
        let expected = [(-v, -v), (-v, v), (v, -v), (v, v)];
        for (p, (re, im)) in c.points().iter().zip(expected) {
            assert!((p.re - re).abs() < 1e-15);
            assert!((p.im - im).abs() < 1e-15);
        }
        assert_unit_energy(&c);
    }

    #[test]
    fn qam16_has_unit_energy() {
        let c = Constellation::qam(16).unwrap();
        assert_eq!(c.order(), 16);
        assert_unit_energy(&c);
    }

    #[test]
    fn qam_rejects_non_square_orders() {
        assert!(matches!(
            Constellation::qam(8),
            Err(Error::InvalidOrder { order: 8, .. })
        ));
        assert!(Constellation::qam(2).is_err());
        assert!(Constellation::qam(12).is_err());
    }

    #[test]
    fn nearest_basic_decisions() {
        let c = Constellation::pam(2).unwrap();
        let one = Complex64::new(1.0, 0.0);
        // 0.3 is closer to +1.
        let (idx, cmp) = c.nearest(one, Complex64::new(0.3, 0.0)).unwrap();
        assert_eq!(idx, 1);
        assert_eq!(cmp, 1);
        // Exact tie at the boundary resolves to the smallest index.
        let (idx, _) = c.nearest(one, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(idx, 0);
    }

    #[test]
    fn nearest_pam4_with_gain() {
        // Distances of -1.1 to 2·{±3, ±1}/√5: the -1/√5 point wins.
        let c = Constellation::pam(4).unwrap();
        let (idx, cmp) = c
            .nearest(Complex64::new(2.0, 0.0), Complex64::new(-1.1, 0.0))
            .unwrap();
        assert_eq!(idx, 1);
        assert_eq!(cmp, 3);
    }

    #[test]
    fn nearest_recovers_exact_points() {
        let gain = Complex64::new(0.7, -1.3);
        for c in [
            Constellation::pam(8).unwrap(),
            Constellation::qam(16).unwrap(),
        ] {
            for k in 0..c.order() {
                let (idx, _) = c.nearest(gain, gain * c.point(k)).unwrap();
                assert_eq!(idx, k);
            }
        }
    }

    #[test]
    fn nearest_rejects_non_finite_input() {
        let c = Constellation::pam(2).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(c.nearest(one, Complex64::new(f64::NAN, 0.0)).is_err());
        assert!(c.nearest(Complex64::new(f64::INFINITY, 0.0), one).is_err());
    }
}

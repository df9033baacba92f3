//! Deterministic non-negative rate functions.
//!
//! A [`RateFunction`] is the deterministic intensity of either an
//! entity's drift hazard or the common jump process. Three shapes are
//! supported:
//!
//! - constant: `rate(s) = c`,
//! - linear: `rate(s) = a*s + b`,
//! - piecewise constant: flat levels between strictly increasing
//!   breakpoints, the market-curve staple.
//!
//! Every shape integrates in closed form, and the integral inverts in
//! closed form as the generalized inverse `inf { t >= 0 : I(t) >= y }`.
//! Piecewise curves may plateau (a zero level); a `y` beyond the
//! supremum of the integral reports [`Error::RangeExhausted`] so that
//! occurrence samplers can treat the next event as never happening.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Constant { level: f64 },
    Linear { slope: f64, intercept: f64 },
    Piecewise { breaks: Vec<f64>, levels: Vec<f64> },
}

/// A deterministic non-negative rate with exact integral and inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFunction {
    kind: Kind,
}

fn require_finite(value: f64, what: &str) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::Config(format!("{what} must be finite, got {value}")));
    }
    Ok(())
}

fn require_non_negative(value: f64, what: &str) -> Result<()> {
    require_finite(value, what)?;
    if value < 0.0 {
        return Err(Error::Config(format!(
            "{what} must be non-negative, got {value}"
        )));
    }
    Ok(())
}

impl RateFunction {
    /// Constant rate `level >= 0`.
    pub fn constant(level: f64) -> Result<Self> {
        require_non_negative(level, "constant rate level")?;
        Ok(RateFunction {
            kind: Kind::Constant { level },
        })
    }

    /// Linear rate `slope * s + intercept`, not identically zero.
    pub fn linear(slope: f64, intercept: f64) -> Result<Self> {
        require_non_negative(slope, "linear rate slope")?;
        require_non_negative(intercept, "linear rate intercept")?;
        if slope == 0.0 && intercept == 0.0 {
            return Err(Error::Config(
                "linear rate requires slope and intercept not both zero".into(),
            ));
        }
        Ok(RateFunction {
            kind: Kind::Linear { slope, intercept },
        })
    }

    /// Piecewise-constant rate: `levels[i]` holds on the i-th segment
    /// delimited by the strictly increasing positive `breaks`
    /// (`levels.len() == breaks.len() + 1`; the last level extends to
    /// infinity).
    pub fn piecewise(breaks: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if levels.len() != breaks.len() + 1 {
            return Err(Error::Config(format!(
                "piecewise rate needs one more level than breaks, got {} levels for {} breaks",
                levels.len(),
                breaks.len()
            )));
        }
        let mut previous = 0.0;
        for &b in &breaks {
            require_finite(b, "piecewise break")?;
            if b <= previous {
                return Err(Error::Config(format!(
                    "piecewise breaks must be strictly increasing and positive, got {b} after {previous}"
                )));
            }
            previous = b;
        }
        for &l in &levels {
            require_non_negative(l, "piecewise level")?;
        }
        Ok(RateFunction {
            kind: Kind::Piecewise { breaks, levels },
        })
    }

    /// The rate value at `s >= 0`. Breakpoints take the level of the
    /// segment that starts there (right-continuous).
    pub fn value(&self, s: f64) -> f64 {
        let s = s.max(0.0);
        match &self.kind {
            Kind::Constant { level } => *level,
            Kind::Linear { slope, intercept } => slope * s + intercept,
            Kind::Piecewise { breaks, levels } => {
                let segment = breaks.partition_point(|&b| b <= s);
                levels[segment]
            }
        }
    }

    /// Exact integral of the rate over `[0, t]`.
    pub fn integrate(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!(
                "integration horizon must be finite and non-negative, got {t}"
            )));
        }
        Ok(match &self.kind {
            Kind::Constant { level } => level * t,
            Kind::Linear { slope, intercept } => 0.5 * slope * t * t + intercept * t,
            Kind::Piecewise { breaks, levels } => {
                let mut total = 0.0;
                let mut left = 0.0;
                for (i, &b) in breaks.iter().enumerate() {
                    if t <= b {
                        return Ok(total + levels[i] * (t - left));
                    }
                    total += levels[i] * (b - left);
                    left = b;
                }
                total + levels[breaks.len()] * (t - left)
            }
        })
    }

    /// Generalized inverse of the integral: the smallest `t >= 0` with
    /// `integrate(t) >= y`. Plateaus resolve to their left endpoint.
    ///
    /// Returns [`Error::RangeExhausted`] when `y` exceeds the supremum
    /// of the integral, which can only happen for piecewise curves
    /// ending at level zero (or an identically-zero rate).
    pub fn inverse_integrated(&self, y: f64) -> Result<f64> {
        if !y.is_finite() || y < 0.0 {
            return Err(Error::Domain(format!(
                "inverse argument must be finite and non-negative, got {y}"
            )));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        match &self.kind {
            Kind::Constant { level } => {
                if *level == 0.0 {
                    Err(Error::RangeExhausted)
                } else {
                    Ok(y / level)
                }
            }
            Kind::Linear { slope, intercept } => Ok(affine_integral_inverse(*slope, *intercept, y)),
            Kind::Piecewise { breaks, levels } => {
                let mut cumulative = 0.0;
                let mut left = 0.0;
                for (i, &b) in breaks.iter().enumerate() {
                    let gain = levels[i] * (b - left);
                    if levels[i] > 0.0 && y <= cumulative + gain {
                        return Ok(left + (y - cumulative) / levels[i]);
                    }
                    cumulative += gain;
                    left = b;
                }
                let last = levels[breaks.len()];
                if last > 0.0 {
                    Ok(left + (y - cumulative) / last)
                } else {
                    Err(Error::RangeExhausted)
                }
            }
        }
    }

    /// Supremum of the integral over `[0, inf)`; infinite unless the
    /// rate eventually vanishes.
    pub fn integrated_sup(&self) -> f64 {
        match &self.kind {
            Kind::Constant { level } => {
                if *level == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Kind::Linear { .. } => f64::INFINITY,
            Kind::Piecewise { breaks, levels } => {
                if levels[breaks.len()] > 0.0 {
                    return f64::INFINITY;
                }
                let mut total = 0.0;
                let mut left = 0.0;
                for (i, &b) in breaks.iter().enumerate() {
                    total += levels[i] * (b - left);
                    left = b;
                }
                total
            }
        }
    }

    /// Largest coefficient of the curve, used as a time scale for
    /// numeric validation horizons.
    pub fn max_level(&self) -> f64 {
        match &self.kind {
            Kind::Constant { level } => *level,
            Kind::Linear { slope, intercept } => slope.max(*intercept),
            Kind::Piecewise { levels, .. } => levels.iter().copied().fold(0.0, f64::max),
        }
    }

    /// The constant level, when the curve is constant in shape or in
    /// effect (a linear curve with zero slope, a piecewise curve with a
    /// single level).
    pub fn as_constant(&self) -> Option<f64> {
        match &self.kind {
            Kind::Constant { level } => Some(*level),
            Kind::Linear { slope, intercept } => (*slope == 0.0).then_some(*intercept),
            Kind::Piecewise { levels, .. } => {
                let first = levels[0];
                levels.iter().all(|&l| l == first).then_some(first)
            }
        }
    }

    /// The `(slope, intercept)` pair when the curve is affine; feeds
    /// the closed-form quadratic survival inverse.
    pub fn as_affine(&self) -> Option<(f64, f64)> {
        match &self.kind {
            Kind::Constant { level } => Some((0.0, *level)),
            Kind::Linear { slope, intercept } => Some((*slope, *intercept)),
            Kind::Piecewise { .. } => self.as_constant().map(|c| (0.0, c)),
        }
    }

    /// Whether two curves define the same rate at every point, across
    /// representations.
    pub fn pointwise_eq(&self, other: &RateFunction) -> bool {
        match (self.as_affine(), other.as_affine()) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.kind == other.kind,
            _ => false,
        }
    }

    /// Interior breakpoints of the curve (kinks of the integral).
    pub fn breakpoints(&self) -> &[f64] {
        match &self.kind {
            Kind::Piecewise { breaks, .. } => breaks,
            _ => &[],
        }
    }

    pub(crate) fn fingerprint_bytes(&self, out: &mut Vec<u8>) {
        match &self.kind {
            Kind::Constant { level } => {
                out.push(1);
                out.extend_from_slice(&level.to_bits().to_le_bytes());
            }
            Kind::Linear { slope, intercept } => {
                out.push(2);
                out.extend_from_slice(&slope.to_bits().to_le_bytes());
                out.extend_from_slice(&intercept.to_bits().to_le_bytes());
            }
            Kind::Piecewise { breaks, levels } => {
                out.push(3);
                out.extend_from_slice(&(breaks.len() as u64).to_le_bytes());
                for b in breaks {
                    out.extend_from_slice(&b.to_bits().to_le_bytes());
                }
                for l in levels {
                    out.extend_from_slice(&l.to_bits().to_le_bytes());
                }
            }
        }
    }
}

/// Smallest `t` with `0.5*a*t^2 + b*t >= y`, written to avoid the
/// cancellation in the textbook quadratic formula. Covers `a == 0`
/// seamlessly.
pub(crate) fn affine_integral_inverse(a: f64, b: f64, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    2.0 * y / (fmath::sqrt(b * b + 2.0 * a * y) + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::adaptive_simpson_segmented;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn constant_integral() {
        let r = RateFunction::constant(0.5).unwrap();
        assert_eq!(r.integrate(2.0).unwrap(), 1.0);
        assert_eq!(r.integrate(0.0).unwrap(), 0.0);
    }

    #[test]
    fn linear_integral_matches_closed_form_and_quadrature() {
        let r = RateFunction::linear(0.1, 4.0).unwrap();
        let exact = r.integrate(2.0).unwrap();
        assert!((exact - 8.2).abs() < 1e-12, "got {exact}");
        let quad = adaptive_simpson_segmented(|s| r.value(s), 0.0, 2.0, &[], 1e-13).unwrap();
        assert!((exact - quad).abs() < 1e-12);
    }

    #[test]
    fn zero_horizon_integral_vanishes_for_all_kinds() {
        let rates = [
            RateFunction::constant(0.7).unwrap(),
            RateFunction::linear(0.3, 1.0).unwrap(),
            RateFunction::piecewise(vec![1.0, 5.0], vec![0.02, 0.05, 0.03]).unwrap(),
        ];
        for r in &rates {
            assert_eq!(r.integrate(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn integral_rejects_bad_horizons() {
        let r = RateFunction::constant(1.0).unwrap();
        assert!(matches!(r.integrate(-1.0), Err(Error::Domain(_))));
        assert!(matches!(r.integrate(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(r.integrate(f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn constant_inverse() {
        let r = RateFunction::constant(0.5).unwrap();
        assert_eq!(r.inverse_integrated(1.0).unwrap(), 2.0);
        assert_eq!(r.inverse_integrated(0.0).unwrap(), 0.0);
    }

    #[test]
    fn linear_inverse_round_trips() {
        let r = RateFunction::linear(0.1, 4.0).unwrap();
        let t = r.inverse_integrated(8.2).unwrap();
        assert!((t - 2.0).abs() < 1e-12, "got {t}");
        assert!((r.integrate(t).unwrap() - 8.2).abs() < 1e-12);
    }

    #[test]
    fn piecewise_integral_and_inverse() {
        // rate 1 on [0,1), 0 on [1,2), 2 on [2,inf)
        let r = RateFunction::piecewise(vec![1.0, 2.0], vec![1.0, 0.0, 2.0]).unwrap();
        assert_eq!(r.integrate(0.5).unwrap(), 0.5);
        assert_eq!(r.integrate(1.5).unwrap(), 1.0);
        assert_eq!(r.integrate(3.0).unwrap(), 3.0);
        // plateau resolves to its left endpoint
        assert_eq!(r.inverse_integrated(1.0).unwrap(), 1.0);
        assert_eq!(r.inverse_integrated(1.5).unwrap(), 2.25);
    }

    #[test]
    fn exhausted_range_is_distinguishable() {
        let r = RateFunction::piecewise(vec![1.0], vec![2.0, 0.0]).unwrap();
        assert_eq!(r.integrated_sup(), 2.0);
        assert_eq!(r.inverse_integrated(2.0).unwrap(), 1.0);
        assert_eq!(r.inverse_integrated(2.5), Err(Error::RangeExhausted));
        assert!(matches!(r.inverse_integrated(-0.5), Err(Error::Domain(_))));
        let zero = RateFunction::constant(0.0).unwrap();
        assert_eq!(zero.inverse_integrated(0.1), Err(Error::RangeExhausted));
    }

    #[test]
    fn invalid_shapes_are_rejected() {
        assert!(RateFunction::constant(-0.1).is_err());
        assert!(RateFunction::linear(0.0, 0.0).is_err());
        assert!(RateFunction::linear(-1.0, 2.0).is_err());
        assert!(RateFunction::piecewise(vec![2.0, 1.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(RateFunction::piecewise(vec![1.0], vec![1.0]).is_err());
        assert!(RateFunction::piecewise(vec![1.0], vec![1.0, -2.0]).is_err());
    }

    #[test]
    fn pointwise_equality_sees_through_representation() {
        let c = RateFunction::constant(0.3).unwrap();
        let l = RateFunction::linear(0.0, 0.3).unwrap();
        let p = RateFunction::piecewise(vec![], vec![0.3]).unwrap();
        assert!(c.pointwise_eq(&l));
        assert!(c.pointwise_eq(&p));
        assert!(!c.pointwise_eq(&RateFunction::constant(0.4).unwrap()));
    }

    fn arb_rate() -> impl Strategy<Value = RateFunction> {
        prop_oneof![
            (0.01..5.0f64).prop_map(|c| RateFunction::constant(c).unwrap()),
            (0.0..2.0f64, 0.01..5.0f64).prop_map(|(a, b)| RateFunction::linear(a, b).unwrap()),
            (
                0.1..2.0f64,
                0.1..3.0f64,
                0.0..4.0f64,
                0.0..4.0f64,
                0.01..4.0f64
            )
                .prop_map(|(b1, gap, l0, l1, l2)| {
                    RateFunction::piecewise(vec![b1, b1 + gap], vec![l0, l1, l2]).unwrap()
                }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn integral_is_monotone(r in arb_rate(), t1 in 0.0..50.0f64, t2 in 0.0..50.0f64) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(r.integrate(lo).unwrap() <= r.integrate(hi).unwrap());
        }

        #[test]
        fn inverse_round_trips(r in arb_rate(), frac in 0.01..0.99f64) {
            // pick y strictly inside the attainable range
            let cap = r.integrated_sup().min(r.integrate(40.0).unwrap());
            prop_assume!(cap > 0.0);
            let y = frac * cap;
            let t = r.inverse_integrated(y).unwrap();
            let back = r.integrate(t).unwrap();
            prop_assert!((back - y).abs() <= 1e-12 * y.max(1.0), "y {y} back {back}");
        }

        #[test]
        fn closed_form_matches_quadrature(r in arb_rate(), t in 0.0..20.0f64) {
            let exact = r.integrate(t).unwrap();
            let quad = adaptive_simpson_segmented(|s| r.value(s), 0.0, t, r.breakpoints(), 1e-11)
                .unwrap();
            prop_assert!((exact - quad).abs() <= 1e-9, "exact {exact} quad {quad}");
        }
    }
}

//! First-to-default swap valuation on top of the copula diagonal.
//!
//! The basket constituents carry a flat market-implied hazard
//! `lambda~`, so each survives to `t` with probability
//! `S~(t) = exp(-lambda~ t)`. The survival function of the first
//! default time is the copula diagonal evaluated at `S~(t)`, which
//! under constant model rates is `exp(-beta lambda~ t)` for the
//! diagonal exponent `beta` in `[1, d]`. Present value per unit
//! notional from the protection buyer's side, with continuous premium
//! `s`, recovery `R`, and discount rate `r`:
//!
//! ```text
//! PV = (1 - R) (1 - e^{-rT} C(S~(T), ..., S~(T)))
//!      - ((1 - R) r + s) * integral_0^T C(S~(t), ..., S~(t)) e^{-rt} dt
//! ```
//!
//! Solving `PV = 0` under constant rates yields the closed-form fair
//! spread `s* = (1 - R) beta lambda~`, independent of `r` and `T`.
//! The model marginals only shape the dependence; the market curve
//! `S~` is a separate input throughout.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::model::{ReducedParams, SibuyaModel, TriggerDependence};
use crate::numeric::{self, adaptive_simpson};
use crate::rates::RateFunction;

/// Market-side inputs of a first-to-default contract.
#[derive(Debug, Clone, PartialEq)]
pub struct PricingInputs {
    cds_intensity: f64,
    recovery: f64,
    rate: f64,
    maturity: f64,
    spread: Option<f64>,
}

impl PricingInputs {
    /// Flat CDS hazard `lambda~ > 0`, recovery `R` in `[0, 1]`,
    /// discount rate `r >= 0`, maturity `T > 0` in years.
    pub fn new(cds_intensity: f64, recovery: f64, rate: f64, maturity: f64) -> Result<Self> {
        if !cds_intensity.is_finite() || cds_intensity <= 0.0 {
            return Err(Error::Config(format!(
                "CDS intensity must be positive, got {cds_intensity}"
            )));
        }
        if !recovery.is_finite() || !(0.0..=1.0).contains(&recovery) {
            return Err(Error::Config(format!(
                "recovery must lie in [0, 1], got {recovery}"
            )));
        }
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::Config(format!(
                "discount rate must be non-negative, got {rate}"
            )));
        }
        if !maturity.is_finite() || maturity <= 0.0 {
            return Err(Error::Config(format!(
                "maturity must be positive, got {maturity}"
            )));
        }
        Ok(PricingInputs {
            cds_intensity,
            recovery,
            rate,
            maturity,
            spread: None,
        })
    }

    /// Sets the running premium `s >= 0` per year.
    pub fn with_spread(mut self, spread: f64) -> Result<Self> {
        if !spread.is_finite() || spread < 0.0 {
            return Err(Error::Config(format!(
                "spread must be non-negative, got {spread}"
            )));
        }
        self.spread = Some(spread);
        Ok(self)
    }

    pub fn cds_intensity(&self) -> f64 {
        self.cds_intensity
    }

    pub fn recovery(&self) -> f64 {
        self.recovery
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    pub fn spread(&self) -> Option<f64> {
        self.spread
    }
}

/// Closed-form fair spread under constant rates:
/// `s* = (1 - R) beta lambda~`.
pub fn ftd_fair_spread_closed_form(params: &ReducedParams, inputs: &PricingInputs) -> f64 {
    (1.0 - inputs.recovery) * params.beta() * inputs.cds_intensity
}

/// Fair spread of the contract: closed form under constant rates with
/// independent triggers, otherwise solved from the present value
/// (which is linear in the spread).
pub fn ftd_fair_spread(model: &SibuyaModel, inputs: &PricingInputs) -> Result<f64> {
    if matches!(model.triggers(), TriggerDependence::Independent) {
        if let Some(params) = model.reduced() {
            return Ok(ftd_fair_spread_closed_form(&params, inputs));
        }
    }
    let annuity = premium_annuity(model, inputs)?;
    let loss = 1.0 - inputs.recovery;
    let survival_at_maturity =
        model.copula_diagonal(fmath::exp(-inputs.cds_intensity * inputs.maturity))?;
    let default_leg =
        loss * (1.0 - fmath::exp(-inputs.rate * inputs.maturity) * survival_at_maturity);
    Ok(default_leg / annuity - loss * inputs.rate)
}

/// Discounted first-to-default survival annuity
/// `integral_0^T C(S~(t), ..., S~(t)) e^{-rt} dt` by adaptive
/// quadrature.
fn premium_annuity(model: &SibuyaModel, inputs: &PricingInputs) -> Result<f64> {
    adaptive_simpson(
        |t| {
            let survival = fmath::exp(-inputs.cds_intensity * t);
            let diagonal = model.copula_diagonal(survival).unwrap_or(f64::NAN);
            diagonal * fmath::exp(-inputs.rate * t)
        },
        0.0,
        inputs.maturity,
        1e-10,
    )
}

/// Present value per unit notional from the protection buyer's side.
/// Requires the spread to be set; closed form under constant rates
/// with independent triggers, adaptive quadrature otherwise.
pub fn ftd_present_value(model: &SibuyaModel, inputs: &PricingInputs) -> Result<f64> {
    let spread = require_spread(inputs)?;
    if matches!(model.triggers(), TriggerDependence::Independent) {
        if let Some(params) = model.reduced() {
            let beta = params.beta();
            let loss = 1.0 - inputs.recovery;
            let decay = beta * inputs.cds_intensity + inputs.rate;
            let annuity = fmath::one_minus_exp_neg(decay * inputs.maturity) / decay;
            let survival = fmath::exp(-beta * inputs.cds_intensity * inputs.maturity);
            return Ok(
                loss * (1.0 - fmath::exp(-inputs.rate * inputs.maturity) * survival)
                    - (loss * inputs.rate + spread) * annuity,
            );
        }
    }
    ftd_present_value_quadrature(model, inputs)
}

/// Present value evaluated through the quadrature route regardless of
/// available closed forms, for cross-checking.
pub fn ftd_present_value_quadrature(model: &SibuyaModel, inputs: &PricingInputs) -> Result<f64> {
    let spread = require_spread(inputs)?;
    let loss = 1.0 - inputs.recovery;
    let annuity = premium_annuity(model, inputs)?;
    let survival_at_maturity =
        model.copula_diagonal(fmath::exp(-inputs.cds_intensity * inputs.maturity))?;
    Ok(
        loss * (1.0 - fmath::exp(-inputs.rate * inputs.maturity) * survival_at_maturity)
            - (loss * inputs.rate + spread) * annuity,
    )
}

fn require_spread(inputs: &PricingInputs) -> Result<f64> {
    inputs
        .spread
        .ok_or_else(|| Error::Config("present value requires a spread".into()))
}

/// Discounted annuity against a market hazard curve: the quadrature
/// of `C(S~(t), ..., S~(t)) e^{-rt}` with `S~(t) = exp(-K(t))`, split
/// at the curve's breakpoints.
fn curve_annuity(
    model: &SibuyaModel,
    market_hazard: &RateFunction,
    rate: f64,
    maturity: f64,
) -> Result<f64> {
    numeric::adaptive_simpson_segmented(
        |t| {
            let survival = fmath::exp(-market_hazard.integrate(t).unwrap_or(f64::NAN));
            let diagonal = model.copula_diagonal(survival).unwrap_or(f64::NAN);
            diagonal * fmath::exp(-rate * t)
        },
        0.0,
        maturity,
        market_hazard.breakpoints(),
        1e-10,
    )
}

/// Present value against a market-implied hazard curve shared by the
/// basket constituents, instead of a flat intensity. The model shapes
/// only the dependence; the market curve supplies the margins that the
/// copula diagonal is composed with.
pub fn ftd_present_value_with_curve(
    model: &SibuyaModel,
    market_hazard: &RateFunction,
    inputs: &PricingInputs,
) -> Result<f64> {
    let spread = require_spread(inputs)?;
    let loss = 1.0 - inputs.recovery;
    let annuity = curve_annuity(model, market_hazard, inputs.rate, inputs.maturity)?;
    let survival_at_maturity =
        model.copula_diagonal(fmath::exp(-market_hazard.integrate(inputs.maturity)?))?;
    Ok(
        loss * (1.0 - fmath::exp(-inputs.rate * inputs.maturity) * survival_at_maturity)
            - (loss * inputs.rate + spread) * annuity,
    )
}

/// Fair spread against a market-implied hazard curve, solved from the
/// present value (linear in the spread). The `cds_intensity` field of
/// the inputs is ignored in favor of the curve.
pub fn ftd_fair_spread_with_curve(
    model: &SibuyaModel,
    market_hazard: &RateFunction,
    inputs: &PricingInputs,
) -> Result<f64> {
    let loss = 1.0 - inputs.recovery;
    let annuity = curve_annuity(model, market_hazard, inputs.rate, inputs.maturity)?;
    let survival_at_maturity =
        model.copula_diagonal(fmath::exp(-market_hazard.integrate(inputs.maturity)?))?;
    let default_leg =
        loss * (1.0 - fmath::exp(-inputs.rate * inputs.maturity) * survival_at_maturity);
    Ok(default_leg / annuity - loss * inputs.rate)
}

/// One solved point of a fair-spread level curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCurvePoint {
    /// Jump size `H`.
    pub jump_size: f64,
    /// Jump intensity solving the target spread at this jump size.
    pub jump_rate: f64,
    /// Fair spread achieved at the solved pair.
    pub spread: f64,
}

fn basket_spread(
    drift_rates: &[f64],
    jump_size: f64,
    jump_rate: f64,
    inputs: &PricingInputs,
) -> Result<f64> {
    let params = ReducedParams::new(drift_rates.to_vec(), jump_rate, jump_size)?;
    Ok(ftd_fair_spread_closed_form(&params, inputs))
}

/// Solves, for each jump size `H` in `jump_sizes`, the jump intensity
/// `lambda >= 0` whose fair spread hits `target`, by bracketed
/// bisection on the spread (strictly decreasing in `lambda` for
/// `H > 0`).
///
/// The target must lie strictly between the comonotone-limit spread
/// `(1 - R) lambda~` and the independence spread `(1 - R) d lambda~`.
/// Grid points whose saturation spread (the `lambda -> inf` limit at
/// that `H`) stays above the target admit no solution and are omitted
/// from the result.
pub fn level_curve(
    drift_rates: &[f64],
    inputs: &PricingInputs,
    target: f64,
    jump_sizes: &[f64],
) -> Result<Vec<LevelCurvePoint>> {
    let d = drift_rates.len();
    if d < 2 {
        return Err(Error::Config(
            "level curves need a basket of at least two entities".into(),
        ));
    }
    let loss = 1.0 - inputs.recovery;
    let floor = loss * inputs.cds_intensity;
    let ceiling = loss * d as f64 * inputs.cds_intensity;
    if !target.is_finite() || target <= floor || target >= ceiling {
        return Err(Error::Domain(format!(
            "target spread {target} outside the attainable range ({floor}, {ceiling})"
        )));
    }
    let mut points = Vec::with_capacity(jump_sizes.len());
    for &jump_size in jump_sizes {
        if !jump_size.is_finite() || jump_size <= 0.0 {
            return Err(Error::Domain(format!(
                "jump sizes must be positive, got {jump_size}"
            )));
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut bracketed = false;
        for _ in 0..200 {
            if basket_spread(drift_rates, jump_size, hi, inputs)? < target {
                bracketed = true;
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
        if !bracketed {
            continue; // saturation spread above target at this jump size
        }
        for _ in 0..200 {
            if hi - lo <= 1e-10 * hi.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if basket_spread(drift_rates, jump_size, mid, inputs)? < target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let jump_rate = 0.5 * (lo + hi);
        points.push(LevelCurvePoint {
            jump_size,
            jump_rate,
            spread: basket_spread(drift_rates, jump_size, jump_rate, inputs)?,
        });
    }
    Ok(points)
}

//! Dependence diagnostics of the model copula.
//!
//! - [`plod_ratio`]: the positive-lower-orthant-dependence ratio
//!   `C(u) / prod u_i >= 1`, the "bad news propagation" factor.
//! - [`tail_dependence_analytic`] /
//!   [`tail_dependence_numeric`]: bivariate tail-dependence
//!   coefficients, in closed form under constant rates (where the
//!   copula is Marshall-Olkin) and as extrapolated corner limits of the
//!   diagonal otherwise.
//! - [`extremal_dependence`]: the d-dimensional extremal-dependence
//!   coefficients under constant rates. The alternating `2^d` subset
//!   sum collapses to `d + 1` binomial terms because each summand
//!   depends on the subset only through its size.
//! - [`survival_copula_diagonal`]: the survival copula on its diagonal
//!   through the literal inclusion-exclusion sieve over copula
//!   evaluations.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{ReducedParams, SibuyaModel, TriggerDependence};
use crate::numeric::{aitken_extrapolate, KahanSum};

/// How the values in a [`DependenceReport`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DependenceMethod {
    /// Closed forms under constant rates with independent triggers.
    Analytic,
    /// Extrapolated corner limits of the copula diagonal.
    NumericLimit,
}

/// Tail- and extremal-dependence coefficients of a model, each `None`
/// when no method applies at the model's dimension or rate shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceReport {
    pub lambda_lower: Option<f64>,
    pub lambda_upper: Option<f64>,
    pub epsilon_lower: Option<f64>,
    pub epsilon_upper: Option<f64>,
    pub method: DependenceMethod,
}

/// `C(u) / prod u_i`, at least 1 for every `u` in `(0, 1]^d`.
pub fn plod_ratio(model: &SibuyaModel, u: &[f64]) -> Result<f64> {
    if u.contains(&0.0) {
        return Err(Error::Domain(
            "orthant ratio is undefined at zero coordinates".into(),
        ));
    }
    let copula = model.copula(u)?;
    let independent: f64 = u.iter().product();
    Ok(copula / independent)
}

/// Closed-form bivariate tail-dependence coefficients under constant
/// rates: `(0, min{theta_1, theta_2})`.
pub fn tail_dependence_analytic(params: &ReducedParams) -> Result<(f64, f64)> {
    if params.dimension() != 2 {
        return Err(Error::NotAvailable(format!(
            "analytic tail dependence is bivariate only, model has dimension {}",
            params.dimension()
        )));
    }
    let upper = params.thetas().into_iter().fold(f64::INFINITY, f64::min);
    Ok((0.0, upper))
}

/// Numeric estimate of the bivariate tail-dependence coefficients with
/// its convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailLimitEstimate {
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    /// Last extrapolation correction of the lower estimate.
    pub lower_diagnostic: f64,
    /// Last extrapolation correction of the upper estimate.
    pub upper_diagnostic: f64,
}

impl TailLimitEstimate {
    /// Whether both corner limits settled (diagnostics within `1e-2`).
    /// A failed flag marks the estimate as unreliable, it is not an
    /// error.
    pub fn converged(&self) -> bool {
        self.lower_diagnostic <= 1e-2 && self.upper_diagnostic <= 1e-2
    }
}

const CORNER_OFFSETS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// Estimates the bivariate tail-dependence coefficients from the
/// copula diagonal: difference quotients at a geometric offset grid,
/// extrapolated to the corner by iterated Aitken delta-squared (exact
/// for the power-function diagonals produced by constant rates).
pub fn tail_dependence_numeric(model: &SibuyaModel) -> Result<TailLimitEstimate> {
    if model.dimension() != 2 {
        return Err(Error::NotAvailable(format!(
            "tail dependence is bivariate only, model has dimension {}",
            model.dimension()
        )));
    }
    let mut lower = Vec::with_capacity(CORNER_OFFSETS.len());
    let mut upper = Vec::with_capacity(CORNER_OFFSETS.len());
    for &eps in &CORNER_OFFSETS {
        lower.push(model.copula_diagonal(eps)? / eps);
        let u = 1.0 - eps;
        upper.push((1.0 - 2.0 * u + model.copula_diagonal(u)?) / eps);
    }
    let (lambda_lower, lower_diagnostic) = aitken_extrapolate(&lower);
    let (lambda_upper, upper_diagnostic) = aitken_extrapolate(&upper);
    Ok(TailLimitEstimate {
        lambda_lower,
        lambda_upper,
        lower_diagnostic,
        upper_diagnostic,
    })
}

/// Exact binomial coefficient as `f64` (exact in integer arithmetic up
/// to `d = 64`, then rounded once on conversion).
fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut value: u128 = 1;
    for i in 0..k {
        value = value * (n - i) as u128 / (i + 1) as u128;
    }
    value as f64
}

/// Extremal-dependence coefficients `(epsilon_l, epsilon_u)` under
/// constant rates.
///
/// The lower coefficient is exactly zero. The upper one is the
/// alternating subset sum collapsed over subset sizes:
/// `sum_{k=0}^{d} (-1)^{k+1} binom(d,k) (k - c sum_{i=k+1}^{d} a_i) / (d - c sum_i a_i)`
/// with `c = lambda (1 - e^{-H})` and `a_i = (1 - e^{-H(d-i)}) / lambda_[i]`,
/// accumulated with compensated summation.
pub fn extremal_dependence(params: &ReducedParams) -> Result<(f64, f64)> {
    let d = params.dimension();
    if d < 2 {
        return Err(Error::NotAvailable(
            "extremal dependence requires at least two entities".into(),
        ));
    }
    if d > 64 {
        return Err(Error::DimensionLimit {
            what: "extremal dependence (alternating-sum cancellation)",
            limit: 64,
            got: d,
        });
    }
    let coefficients = size_exponent_coefficients(params);
    let shock = params.common_shock_rate();
    let denominator = d as f64 - shock * coefficients.iter().sum::<f64>();
    // suffix[k] = sum_{i=k+1..=d} a_i, indexed by subset size k
    let mut suffix = alloc::vec![0.0; d + 1];
    for (k, &coefficient) in coefficients.iter().enumerate().rev() {
        suffix[k] = suffix[k + 1] + coefficient;
    }
    let mut total = KahanSum::new();
    for (k, &tail) in suffix.iter().enumerate() {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let numerator = k as f64 - shock * tail;
        total.add(sign * binomial(d, k) * numerator / denominator);
    }
    Ok((0.0, total.value()))
}

/// The per-rank exponent coefficients `a_i = (1 - e^{-H(d-i)}) / lambda_[i]`
/// (0-indexed), shared by the diagonal exponent and the extremal sum.
fn size_exponent_coefficients(params: &ReducedParams) -> Vec<f64> {
    let d = params.dimension();
    let h = params.jump_size();
    params
        .total_rates_descending()
        .iter()
        .enumerate()
        .map(|(i, &rate)| crate::fmath::one_minus_exp_neg(h * (d - i - 1) as f64) / rate)
        .collect()
}

/// The survival copula on its diagonal, `P(U_i >= u for all i)`,
/// recovered from the copula by the inclusion-exclusion sieve over all
/// `2^d` coordinate subsets. Limited to `d <= 20`.
pub fn survival_copula_diagonal(model: &SibuyaModel, u: f64) -> Result<f64> {
    if u.is_nan() || !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!(
            "diagonal argument must lie in [0, 1], got {u}"
        )));
    }
    let d = model.dimension();
    if d > 20 {
        return Err(Error::DimensionLimit {
            what: "survival-copula sieve (2^d copula evaluations)",
            limit: 20,
            got: d,
        });
    }
    let mut point = alloc::vec![1.0; d];
    let mut total = KahanSum::new();
    for mask in 0u32..(1u32 << d) {
        for (i, coordinate) in point.iter_mut().enumerate() {
            *coordinate = if mask & (1 << i) != 0 { u } else { 1.0 };
        }
        let sign = if mask.count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        total.add(sign * model.copula(&point)?);
    }
    Ok(total.value())
}

/// Assembles the full dependence report for a model, analytic where
/// constant rates and independent triggers allow, numeric corner
/// limits otherwise.
pub fn dependence_report(model: &SibuyaModel) -> Result<DependenceReport> {
    let analytic = matches!(model.triggers(), TriggerDependence::Independent)
        .then(|| model.reduced())
        .flatten();
    if let Some(params) = analytic {
        let (lambda_lower, lambda_upper) = match tail_dependence_analytic(&params) {
            Ok((l, u)) => (Some(l), Some(clamp_unit(u))),
            Err(_) => (None, None),
        };
        let (epsilon_lower, epsilon_upper) = match extremal_dependence(&params) {
            Ok((l, u)) => (Some(l), Some(clamp_unit(u))),
            Err(_) => (None, None),
        };
        return Ok(DependenceReport {
            lambda_lower,
            lambda_upper,
            epsilon_lower,
            epsilon_upper,
            method: DependenceMethod::Analytic,
        });
    }
    let (lambda_lower, lambda_upper) = match tail_dependence_numeric(model) {
        Ok(estimate) => (
            Some(clamp_unit(estimate.lambda_lower)),
            Some(clamp_unit(estimate.lambda_upper)),
        ),
        Err(Error::NotAvailable(_)) => (None, None),
        Err(other) => return Err(other),
    };
    Ok(DependenceReport {
        lambda_lower,
        lambda_upper,
        epsilon_lower: None,
        epsilon_upper: None,
        method: DependenceMethod::NumericLimit,
    })
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

//! The jump-driven default model and the copulas it implies.
//!
//! Entity `i` carries a survival process `p_i(t) = exp(-(M_i(t) + J_t))`
//! built from its drift integral `M_i` and the common jump process `J`;
//! it defaults at `tau_i = inf { t : p_i(t) <= U_i }` for a uniform
//! trigger `U_i`. The joint survival function of the default times is
//!
//! ```text
//! S(t) = prod_i  psi_{J_{t(i)} - J_{t(i-1)}}(d - i + 1) / psi_{J_{t(i)}}(1) * S_i(t_i)
//! ```
//!
//! over the ascending order statistics `t(1) <= ... <= t(d)` (`t(0) = 0`),
//! where `psi` denotes increment Laplace–Stieltjes transforms and
//! `S_i(t) = exp(-M_i(t)) psi_{J_t}(1)` are the marginal survival
//! functions. The implied copula is the survival copula of the default
//! times, `C(u) = S(S_1^-(u_1), ..., S_d^-(u_d))`.
//!
//! For the scaled-Poisson jump process two alternative evaluations of
//! `S` exist (a per-increment "jointure" product and an order-statistic
//! exponential sum); all three routes are exposed so they can certify
//! each other. When every rate is constant the copula collapses to an
//! ordered power form ([`ReducedParams::copula`]), a Marshall-Olkin
//! copula in the bivariate case and a Lévy-frailty copula in the
//! homogeneous case.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::jumps::JumpModel;
use crate::numeric::{self, KahanSum};
use crate::rates::{affine_integral_inverse, RateFunction};

/// Survival mass an entity may retain at the validation horizon before
/// the model is rejected as improper: `-ln(1e-8)`.
const PROPERNESS_MIN_HAZARD: f64 = 18.420680743952367;

/// Joint law of the default triggers.
#[derive(Debug, Clone, PartialEq)]
pub enum TriggerDependence {
    /// Independent uniform triggers; dependence comes from the jumps only.
    Independent,
    /// With probability `alpha` all entities share a single trigger,
    /// otherwise triggers are independent. Requires pointwise identical
    /// drifts.
    FrechetMixture { alpha: f64 },
}

/// The default model: per-entity drift hazards, a shared jump process,
/// and the trigger law. Immutable after construction; every evaluation
/// is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct SibuyaModel {
    drifts: Vec<RateFunction>,
    jump: JumpModel,
    triggers: TriggerDependence,
}

impl SibuyaModel {
    /// Validates and builds a model.
    ///
    /// Rejects empty baskets, mixture triggers over heterogeneous
    /// drifts, and models whose total hazard stays bounded (each
    /// marginal survival function must decay below `1e-8` by a horizon
    /// scaled to the largest rate level, otherwise the triggers are not
    /// matched by proper uniform margins).
    pub fn new(
        drifts: Vec<RateFunction>,
        jump: JumpModel,
        triggers: TriggerDependence,
    ) -> Result<Self> {
        if drifts.is_empty() {
            return Err(Error::Config("model requires at least one entity".into()));
        }
        if let TriggerDependence::FrechetMixture { alpha } = triggers {
            if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
                return Err(Error::Config(format!(
                    "mixture weight must lie in [0, 1], got {alpha}"
                )));
            }
            if drifts.windows(2).any(|w| !w[0].pointwise_eq(&w[1])) {
                return Err(Error::Config(
                    "mixture triggers require pointwise identical drifts".into(),
                ));
            }
        }
        let model = SibuyaModel {
            drifts,
            jump,
            triggers,
        };
        model.check_properness()?;
        Ok(model)
    }

    fn check_properness(&self) -> Result<()> {
        let scale = self
            .drifts
            .iter()
            .map(RateFunction::max_level)
            .chain(core::iter::once(self.jump.intensity().max_level()))
            .fold(0.0, f64::max)
            .max(1e-12);
        let horizon = 1e6 / scale;
        for (i, _) in self.drifts.iter().enumerate() {
            let hazard = self.total_hazard(i, horizon)?;
            if hazard.is_nan() || hazard < PROPERNESS_MIN_HAZARD {
                return Err(Error::Config(format!(
                    "entity {i} has bounded total hazard ({hazard:.6} at horizon {horizon:.3e}); \
                     its survival function does not decay to zero"
                )));
            }
        }
        Ok(())
    }

    /// Number of entities `d`.
    pub fn dimension(&self) -> usize {
        self.drifts.len()
    }

    /// Per-entity drift rates.
    pub fn drifts(&self) -> &[RateFunction] {
        &self.drifts
    }

    /// The shared jump process.
    pub fn jump(&self) -> &JumpModel {
        &self.jump
    }

    /// The trigger law.
    pub fn triggers(&self) -> &TriggerDependence {
        &self.triggers
    }

    fn check_entity(&self, entity: usize) -> Result<()> {
        if entity >= self.dimension() {
            return Err(Error::EntityIndex {
                index: entity,
                dimension: self.dimension(),
            });
        }
        Ok(())
    }

    /// Total hazard of entity `i` at `t`: `M_i(t) + (1 - e^{-H}) I(t)`.
    pub(crate) fn total_hazard(&self, entity: usize, t: f64) -> Result<f64> {
        let drift = self.drifts[entity].integrate(t)?;
        let jump_mass = self.jump.intensity().integrate(t)?;
        Ok(drift + self.jump.size_factor() * jump_mass)
    }

    /// Marginal survival function `S_i(t) = exp(-M_i(t)) psi_{J_t}(1)`.
    /// `t = +inf` is allowed and yields 0.
    pub fn marginal_survival(&self, entity: usize, t: f64) -> Result<f64> {
        self.check_entity(entity)?;
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain(format!("time must be non-negative, got {t}")));
        }
        if t.is_infinite() {
            return Ok(0.0);
        }
        Ok(fmath::exp(-self.total_hazard(entity, t)?))
    }

    /// Generalized inverse of the marginal survival function,
    /// `inf { t : S_i(t) <= u }`. Closed form when both the drift and
    /// the jump intensity are affine, bracketed bisection otherwise.
    /// `u = 0` yields the `+inf` sentinel.
    pub fn marginal_survival_inverse(&self, entity: usize, u: f64) -> Result<f64> {
        self.check_entity(entity)?;
        if u.is_nan() || !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!(
                "probability must lie in [0, 1], got {u}"
            )));
        }
        if u == 0.0 {
            return Ok(f64::INFINITY);
        }
        if u == 1.0 {
            return Ok(0.0);
        }
        let target = -fmath::ln(u);
        let factor = self.jump.size_factor();
        match (
            self.drifts[entity].as_affine(),
            self.jump.intensity().as_affine(),
        ) {
            (Some((da, db)), Some((ja, jb))) => {
                let slope = da + factor * ja;
                let intercept = db + factor * jb;
                Ok(affine_integral_inverse(slope, intercept, target))
            }
            _ => numeric::invert_nondecreasing(
                |t| self.total_hazard(entity, t).unwrap_or(f64::INFINITY),
                target,
                1.0,
                1e-12,
            ),
        }
    }

    /// Sorted copy of a validated time vector, or `None` when some time
    /// is infinite and the joint survival is exactly zero.
    fn prepare_times(&self, times: &[f64]) -> Result<Option<Vec<f64>>> {
        if times.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: times.len(),
            });
        }
        let mut any_infinite = false;
        for &t in times {
            if t.is_nan() || t < 0.0 {
                return Err(Error::Domain(format!(
                    "times must be non-negative, got {t}"
                )));
            }
            any_infinite |= t.is_infinite();
        }
        if any_infinite {
            return Ok(None);
        }
        let mut sorted = times.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Some(sorted))
    }

    fn marginal_product(&self, times: &[f64]) -> Result<f64> {
        let mut product = 1.0;
        for (i, &t) in times.iter().enumerate() {
            product *= self.marginal_survival(i, t)?;
        }
        Ok(product)
    }

    /// Joint survival function `P(tau_1 > t_1, ..., tau_d > t_d)`.
    ///
    /// Evaluated as the product of increment-transform ratios over the
    /// ascending order statistics times the marginal survival
    /// functions; mixture triggers add the comonotone component.
    pub fn joint_survival(&self, times: &[f64]) -> Result<f64> {
        match self.triggers {
            TriggerDependence::Independent => self.joint_survival_independent(times),
            TriggerDependence::FrechetMixture { alpha } => {
                let Some(sorted) = self.prepare_times(times)? else {
                    return Ok(0.0);
                };
                let largest = *sorted.last().unwrap();
                let comonotone = self.marginal_survival(0, largest)?;
                let independent = self.joint_survival_independent(times)?;
                Ok(alpha * comonotone + (1.0 - alpha) * independent)
            }
        }
    }

    /// Joint survival under independent triggers: the transform-ratio
    /// product form, the primary evaluation route.
    pub fn joint_survival_independent(&self, times: &[f64]) -> Result<f64> {
        let Some(sorted) = self.prepare_times(times)? else {
            return Ok(0.0);
        };
        let d = self.dimension();
        let mut dependence = 1.0;
        let mut previous = 0.0;
        for (rank, &t) in sorted.iter().enumerate() {
            let argument = (d - rank) as f64;
            let numerator = self.jump.lst_increment(previous, t, argument)?;
            let denominator = self.jump.lst_increment(0.0, t, 1.0)?;
            dependence *= numerator / denominator;
            previous = t;
        }
        Ok(dependence * self.marginal_product(times)?)
    }

    /// Joint survival via the per-increment jointure product,
    /// `prod_i phi(d - i + 1, H, I(t(i)) - I(t(i-1))) * S_i(t_i)`.
    /// Alternate route for cross-validation; independent triggers.
    pub fn joint_survival_jointure_form(&self, times: &[f64]) -> Result<f64> {
        let Some(sorted) = self.prepare_times(times)? else {
            return Ok(0.0);
        };
        let d = self.dimension();
        let h = self.jump.jump_size();
        let intensity = self.jump.intensity();
        let mut dependence = 1.0;
        let mut previous_mass = 0.0;
        for (rank, &t) in sorted.iter().enumerate() {
            let mass = intensity.integrate(t)?;
            dependence *= jointure((d - rank) as f64, h, (mass - previous_mass).max(0.0));
            previous_mass = mass;
        }
        Ok(dependence * self.marginal_product(times)?)
    }

    /// Joint survival via the order-statistic exponential sum,
    /// `exp((1 - e^{-H}) sum_i (1 - e^{-H(d-i)}) I(t(i))) * prod_i S_i(t_i)`.
    /// Alternate route for cross-validation; independent triggers.
    pub fn joint_survival_exponent_form(&self, times: &[f64]) -> Result<f64> {
        let Some(sorted) = self.prepare_times(times)? else {
            return Ok(0.0);
        };
        let d = self.dimension();
        let h = self.jump.jump_size();
        let factor = self.jump.size_factor();
        let intensity = self.jump.intensity();
        let mut exponent = KahanSum::new();
        for (rank, &t) in sorted.iter().enumerate() {
            let weight = fmath::one_minus_exp_neg(h * (d - rank - 1) as f64);
            exponent.add(weight * intensity.integrate(t)?);
        }
        Ok(fmath::exp(factor * exponent.value()) * self.marginal_product(times)?)
    }

    /// Reduction to constant rates, available when every drift and the
    /// jump intensity are constant. Unlocks the closed-form copula, the
    /// diagonal power exponent, and the analytic dependence measures.
    pub fn reduced(&self) -> Option<ReducedParams> {
        let mut drift_rates = Vec::with_capacity(self.dimension());
        for drift in &self.drifts {
            drift_rates.push(drift.as_constant()?);
        }
        let jump_rate = self.jump.intensity().as_constant()?;
        ReducedParams::new(drift_rates, jump_rate, self.jump.jump_size()).ok()
    }

    fn validate_unit_cube(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: u.len(),
            });
        }
        for &v in u {
            if v.is_nan() || !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!(
                    "copula arguments must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(())
    }

    /// The copula of the model at `u`, the survival copula of the
    /// default-time vector.
    ///
    /// Dispatches to the sharpest available form: the ordered power
    /// form under constant rates, the bivariate minimum form otherwise
    /// in dimension two, and the general composition
    /// `S(S_1^-(u_1), ..., S_d^-(u_d))` in the remaining cases. Mixture
    /// triggers contribute their comonotone component on top.
    pub fn copula(&self, u: &[f64]) -> Result<f64> {
        self.validate_unit_cube(u)?;
        match self.triggers {
            TriggerDependence::Independent => self.copula_independent(u),
            TriggerDependence::FrechetMixture { alpha } => {
                let smallest = u.iter().copied().fold(f64::INFINITY, f64::min);
                let independent = self.copula_independent(u)?;
                Ok(alpha * smallest + (1.0 - alpha) * independent)
            }
        }
    }

    fn copula_independent(&self, u: &[f64]) -> Result<f64> {
        if u.contains(&0.0) {
            return Ok(0.0);
        }
        if let Some(params) = self.reduced() {
            return params.copula(u);
        }
        if self.dimension() == 2 {
            return self.copula_bivariate(u[0], u[1]);
        }
        self.copula_via_survival(u)
    }

    /// Bivariate closed form for the scaled-Poisson jump process:
    /// `exp((1 - e^{-H})^2 I(min{S_1^-(u_1), S_2^-(u_2)})) u_1 u_2`.
    fn copula_bivariate(&self, u1: f64, u2: f64) -> Result<f64> {
        let t1 = self.marginal_survival_inverse(0, u1)?;
        let t2 = self.marginal_survival_inverse(1, u2)?;
        let mass = self.jump.intensity().integrate(t1.min(t2))?;
        let factor = self.jump.size_factor();
        Ok(fmath::exp(factor * factor * mass) * u1 * u2)
    }

    /// The copula evaluated as the general composition of the joint
    /// survival function with the marginal inverses, ignoring any
    /// closed-form shortcut. Independent triggers.
    pub fn copula_via_survival(&self, u: &[f64]) -> Result<f64> {
        self.validate_unit_cube(u)?;
        if u.contains(&0.0) {
            return Ok(0.0);
        }
        let mut times = Vec::with_capacity(u.len());
        for (i, &v) in u.iter().enumerate() {
            times.push(self.marginal_survival_inverse(i, v)?);
        }
        self.joint_survival_independent(&times)
    }

    /// The copula diagonal `C(u, ..., u)`. A pure power function
    /// `u^beta` under constant rates.
    pub fn copula_diagonal(&self, u: f64) -> Result<f64> {
        if u.is_nan() || !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!(
                "diagonal argument must lie in [0, 1], got {u}"
            )));
        }
        match self.triggers {
            TriggerDependence::Independent => self.copula_diagonal_independent(u),
            TriggerDependence::FrechetMixture { alpha } => {
                Ok(alpha * u + (1.0 - alpha) * self.copula_diagonal_independent(u)?)
            }
        }
    }

    fn copula_diagonal_independent(&self, u: f64) -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        if let Some(params) = self.reduced() {
            return Ok(fmath::powf(u, params.beta()));
        }
        let point = vec![u; self.dimension()];
        self.copula_independent(&point)
    }

    /// Content hash of the model parameters, recorded next to sample
    /// batches so fixtures can be traced back to the exact model.
    pub fn fingerprint(&self) -> u64 {
        let mut bytes = Vec::new();
        bytes.push(self.dimension() as u8);
        for drift in &self.drifts {
            drift.fingerprint_bytes(&mut bytes);
        }
        bytes.push(0xFE);
        bytes.extend_from_slice(&self.jump.jump_size().to_bits().to_le_bytes());
        self.jump.intensity().fingerprint_bytes(&mut bytes);
        match self.triggers {
            TriggerDependence::Independent => bytes.push(0),
            TriggerDependence::FrechetMixture { alpha } => {
                bytes.push(1);
                bytes.extend_from_slice(&alpha.to_bits().to_le_bytes());
            }
        }
        fnv1a(&bytes)
    }
}

/// The jointure function `phi(x, y, z) = exp(-z (1 - e^{-xy} - x (1 - e^{-y})))`,
/// the per-increment dependence factor of the scaled-Poisson joint
/// survival function. Defined for non-negative arguments; `>= 1`
/// whenever `x >= 1`.
pub fn jointure(x: f64, y: f64, z: f64) -> f64 {
    let inner = fmath::one_minus_exp_neg(x * y) - x * fmath::one_minus_exp_neg(y);
    fmath::exp(-z * inner)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xCBF2_9CE4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

/// Constant-rate reduction of a model: drift rates `mu_i` and jump
/// intensity `lambda`, from which every closed form derives.
///
/// Writes `c = lambda (1 - e^{-H})` for the common-shock rate, so the
/// per-entity total rates are `lambda_i = mu_i + c`, sorted descending
/// as `lambda_[1] >= ... >= lambda_[d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedParams {
    drift_rates: Vec<f64>,
    jump_rate: f64,
    jump_size: f64,
    total_rates: Vec<f64>,
    sorted_desc: Vec<f64>,
}

impl ReducedParams {
    /// Builds the reduction from constant drift rates `mu_i`, jump
    /// intensity `lambda`, and jump size `H`. Every total rate
    /// `lambda_i = mu_i + lambda (1 - e^{-H})` must be positive.
    pub fn new(drift_rates: Vec<f64>, jump_rate: f64, jump_size: f64) -> Result<Self> {
        if drift_rates.is_empty() {
            return Err(Error::Config(
                "reduction requires at least one entity".into(),
            ));
        }
        for &mu in &drift_rates {
            if !mu.is_finite() || mu < 0.0 {
                return Err(Error::Config(format!(
                    "drift rate must be finite and non-negative, got {mu}"
                )));
            }
        }
        if !jump_rate.is_finite() || jump_rate < 0.0 {
            return Err(Error::Config(format!(
                "jump rate must be finite and non-negative, got {jump_rate}"
            )));
        }
        if !jump_size.is_finite() || jump_size < 0.0 {
            return Err(Error::Config(format!(
                "jump size must be finite and non-negative, got {jump_size}"
            )));
        }
        let shock = jump_rate * fmath::one_minus_exp_neg(jump_size);
        let total_rates: Vec<f64> = drift_rates.iter().map(|&mu| mu + shock).collect();
        if total_rates.iter().any(|&rate| rate <= 0.0) {
            return Err(Error::Config(
                "every total rate mu_i + lambda (1 - e^{-H}) must be positive".into(),
            ));
        }
        let mut sorted_desc = total_rates.clone();
        sorted_desc.sort_by(|a, b| f64::total_cmp(b, a));
        Ok(ReducedParams {
            drift_rates,
            jump_rate,
            jump_size,
            total_rates,
            sorted_desc,
        })
    }

    pub fn dimension(&self) -> usize {
        self.drift_rates.len()
    }

    /// Constant drift rates `mu_i`.
    pub fn drift_rates(&self) -> &[f64] {
        &self.drift_rates
    }

    /// Jump intensity `lambda`.
    pub fn jump_rate(&self) -> f64 {
        self.jump_rate
    }

    /// Jump size `H`.
    pub fn jump_size(&self) -> f64 {
        self.jump_size
    }

    /// Common-shock rate `c = lambda (1 - e^{-H})`.
    pub fn common_shock_rate(&self) -> f64 {
        self.jump_rate * fmath::one_minus_exp_neg(self.jump_size)
    }

    /// Per-entity total rates `lambda_i = mu_i + c`, in entity order.
    pub fn total_rates(&self) -> &[f64] {
        &self.total_rates
    }

    /// Total rates sorted descending, `lambda_[1] >= ... >= lambda_[d]`.
    pub fn total_rates_descending(&self) -> &[f64] {
        &self.sorted_desc
    }

    /// Marshall-Olkin shock weights `theta_i = (1 - e^{-H})^2 lambda / lambda_i`,
    /// each in `[0, 1]`, in entity order.
    pub fn thetas(&self) -> Vec<f64> {
        let factor = fmath::one_minus_exp_neg(self.jump_size);
        self.total_rates
            .iter()
            .map(|&rate| factor * factor * self.jump_rate / rate)
            .collect()
    }

    /// Whether all drift rates coincide (the Lévy-frailty case).
    pub fn is_homogeneous(&self) -> bool {
        self.drift_rates.windows(2).all(|w| w[0] == w[1])
    }

    /// The diagonal power exponent
    /// `beta = d - lambda (1 - e^{-H}) sum_i (1 - e^{-H(d-i)}) / lambda_[i]`,
    /// in `[1, d]`: `d` exactly under independence (`H = 0` or
    /// `lambda = 0`), decreasing towards 1 in the comonotone limit.
    pub fn beta(&self) -> f64 {
        let d = self.dimension();
        let shock = self.common_shock_rate();
        let mut sum = KahanSum::new();
        for (i, &rate) in self.sorted_desc.iter().enumerate() {
            let weight = fmath::one_minus_exp_neg(self.jump_size * (d - i - 1) as f64);
            sum.add(weight / rate);
        }
        d as f64 - shock * sum.value()
    }

    /// Closed-form copula under constant rates: the ordered power form
    /// `C(u) = prod_i u_i * prod_i v_(i)^{(1 - e^{-H})(1 - e^{-H(d-i)})}`
    /// with `v_j = u_j^{-lambda / lambda_j}` sorted ascending.
    pub fn copula(&self, u: &[f64]) -> Result<f64> {
        let d = self.dimension();
        if u.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: u.len(),
            });
        }
        for &v in u {
            if v.is_nan() || !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!(
                    "copula arguments must lie in [0, 1], got {v}"
                )));
            }
        }
        if u.contains(&0.0) {
            return Ok(0.0);
        }
        let factor = fmath::one_minus_exp_neg(self.jump_size);
        if factor == 0.0 || self.jump_rate == 0.0 {
            return Ok(u.iter().product());
        }
        // log v_j = (lambda / lambda_j) * (-ln u_j) >= 0
        let mut log_heights: Vec<f64> = u
            .iter()
            .zip(&self.total_rates)
            .map(|(&v, &rate)| self.jump_rate / rate * -fmath::ln(v))
            .collect();
        log_heights.sort_by(f64::total_cmp);
        let mut log_c = KahanSum::new();
        for &v in u {
            log_c.add(fmath::ln(v));
        }
        for (i, &h) in log_heights.iter().enumerate() {
            let weight = fmath::one_minus_exp_neg(self.jump_size * (d - i - 1) as f64);
            log_c.add(factor * weight * h);
        }
        Ok(fmath::exp(log_c.value()))
    }
}

/// Sector-structured model: independent jump processes per sector, so
/// the overall copula is the product of the sector copulas.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalModel {
    sectors: Vec<SibuyaModel>,
}

impl HierarchicalModel {
    pub fn new(sectors: Vec<SibuyaModel>) -> Result<Self> {
        if sectors.is_empty() {
            return Err(Error::Config(
                "hierarchical model requires at least one sector".into(),
            ));
        }
        Ok(HierarchicalModel { sectors })
    }

    pub fn sectors(&self) -> &[SibuyaModel] {
        &self.sectors
    }

    /// Total number of entities across sectors.
    pub fn dimension(&self) -> usize {
        self.sectors.iter().map(SibuyaModel::dimension).sum()
    }

    /// Product of the sector copulas over the matching blocks of `u`.
    pub fn copula(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: u.len(),
            });
        }
        let mut product = 1.0;
        let mut offset = 0;
        for sector in &self.sectors {
            let block = &u[offset..offset + sector.dimension()];
            product *= sector.copula(block)?;
            offset += sector.dimension();
        }
        Ok(product)
    }

    /// Combined content hash over the sector fingerprints.
    pub fn fingerprint(&self) -> u64 {
        hierarchical_fingerprint(&self.sectors)
    }
}

/// Content hash of a sector list, shared by [`HierarchicalModel`] and
/// the hierarchical sampler.
pub(crate) fn hierarchical_fingerprint(sectors: &[SibuyaModel]) -> u64 {
    let mut bytes = Vec::with_capacity(8 * sectors.len() + 1);
    bytes.push(sectors.len() as u8);
    for sector in sectors {
        bytes.extend_from_slice(&sector.fingerprint().to_le_bytes());
    }
    fnv1a(&bytes)
}

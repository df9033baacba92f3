//! Jump-driven multivariate default model and the copulas it implies.
//!
//! An entity defaults when its survival process falls below a uniform
//! trigger. The survival process is driven by a deterministic drift hazard
//! plus a jump process shared by all entities; the common jumps are what
//! couple the default times. The crate provides:
//!
//! - deterministic rate curves with exact integration and inversion
//!   ([`rates`]),
//! - the shared jump process, a scaled non-homogeneous Poisson process,
//!   through its increment Laplace–Stieltjes transforms and occurrence
//!   sampling ([`jumps`]),
//! - the default model itself: marginal and joint survival functions and
//!   the implied copula, with closed forms where constant rates allow them
//!   ([`model`]),
//! - dependence diagnostics: orthant-dependence ratio, tail-dependence and
//!   extremal-dependence coefficients ([`dependence`]),
//! - exact, reproducible sampling of default-time vectors and copula
//!   variates ([`sampling`]),
//! - first-to-default swap valuation on top of the copula diagonal
//!   ([`pricing`]).
//!
//! All computations are pure `f64` arithmetic over immutable model values;
//! everything is safe to share across threads. The crate is `no_std`
//! compatible (with `alloc`); transcendental functions go through `libm`
//! in every configuration so results do not depend on the enabled
//! features or the host platform.
//!
//! ```
//! use sibuya_core::{JumpModel, RateFunction, SibuyaModel, TriggerDependence};
//! use sibuya_core::sampling::sample;
//!
//! let drifts = vec![
//!     RateFunction::constant(0.05)?,
//!     RateFunction::constant(0.10)?,
//! ];
//! let jump = JumpModel::new(1.0, RateFunction::constant(0.5)?)?;
//! let model = SibuyaModel::new(drifts, jump, TriggerDependence::Independent)?;
//!
//! let value = model.copula(&[0.5, 0.5])?;
//! assert!(value > 0.25); // positively dependent: above the product
//!
//! let batch = sample(&model, 10_000, 7)?;
//! assert_eq!(batch.len(), 10_000);
//! # Ok::<(), sibuya_core::Error>(())
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dependence;
mod error;
mod fmath;
pub mod jumps;
pub mod model;
pub mod numeric;
pub mod pricing;
pub mod rates;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
pub use jumps::JumpModel;
pub use model::{HierarchicalModel, ReducedParams, SibuyaModel, TriggerDependence};
pub use rates::RateFunction;
pub use sampling::SampleBatch;

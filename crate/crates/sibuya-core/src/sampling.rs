//! Exact simulation of default times and copula variates.
//!
//! Each sample row draws the trigger vector, then walks the occurrence
//! times of the jump process. At the `k`-th occurrence `t_k` the
//! cumulative hazard of entity `i` jumps from `M_i(t_k) + H(k-1)` to
//! `M_i(t_k) + Hk`; an entity whose trigger hazard `-ln U_i` is passed
//! at `t_k` either defaulted exactly at the jump (when the pre-jump
//! hazard had not yet reached it, boundary inclusive) or strictly
//! inside `(t_{k-1}, t_k)` by drift, found by inverting the drift
//! integral. When the jump intensity exhausts its range, survivors are
//! resolved by drift inversion alone. The returned copula variates are
//! the marginal survival probabilities `S_i(tau_i)`.
//!
//! Every row owns the private stream `(seed, row)` (and sector `j`
//! within a row uses `(seed, row, j)`), so batches are bit-identical
//! however rows are scheduled across threads.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::model::{hierarchical_fingerprint, SibuyaModel, TriggerDependence};
use crate::rng::{derive_key, Stream};

/// A batch of sampled rows: copula variates and the default times they
/// came from, both `n x d` row-major. `(model, n, seed)` determines the
/// content bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    dimension: usize,
    uniforms: Vec<f64>,
    default_times: Vec<f64>,
    seed: u64,
    fingerprint: u64,
}

impl SampleBatch {
    /// Assembles a batch from row-major matrices, validating the shape.
    /// Batch drivers that fill rows in parallel (every row depends only
    /// on `(seed, row)`) use this to package their output.
    pub fn from_parts(
        dimension: usize,
        uniforms: Vec<f64>,
        default_times: Vec<f64>,
        seed: u64,
        fingerprint: u64,
    ) -> Result<Self> {
        if dimension == 0
            || uniforms.len() != default_times.len()
            || !uniforms.len().is_multiple_of(dimension)
            || uniforms.is_empty()
        {
            return Err(Error::Config(format!(
                "malformed batch: {} variates, {} times, dimension {dimension}",
                uniforms.len(),
                default_times.len()
            )));
        }
        Ok(SampleBatch {
            dimension,
            uniforms,
            default_times,
            seed,
            fingerprint,
        })
    }

    /// Number of rows. The dimension is at least one by
    /// construction.
    pub fn len(&self) -> usize {
        self.uniforms.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.uniforms.is_empty()
    }

    /// Number of entities per row.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Content hash of the model the batch was drawn from.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Copula variates `S_i(tau_i)`, row-major.
    pub fn uniforms(&self) -> &[f64] {
        &self.uniforms
    }

    /// Default times `tau_i`, row-major.
    pub fn default_times(&self) -> &[f64] {
        &self.default_times
    }

    pub fn uniform_row(&self, row: usize) -> &[f64] {
        &self.uniforms[row * self.dimension..(row + 1) * self.dimension]
    }

    pub fn time_row(&self, row: usize) -> &[f64] {
        &self.default_times[row * self.dimension..(row + 1) * self.dimension]
    }
}

/// Draws the trigger hazards `-ln U_i` for one sector.
fn draw_trigger_hazards(model: &SibuyaModel, stream: &mut Stream, out: &mut Vec<f64>) {
    let d = model.dimension();
    out.clear();
    match *model.triggers() {
        TriggerDependence::Independent => {
            out.extend((0..d).map(|_| -fmath::ln(stream.next_uniform())));
        }
        TriggerDependence::FrechetMixture { alpha } => {
            if stream.next_uniform() < alpha {
                let shared = -fmath::ln(stream.next_uniform());
                out.extend(core::iter::repeat_n(shared, d));
            } else {
                out.extend((0..d).map(|_| -fmath::ln(stream.next_uniform())));
            }
        }
    }
}

/// Whether an entity crossed at the jump itself rather than earlier by
/// drift: the pre-jump hazard `M_i(t_k) + H(k-1)` has not yet passed
/// the trigger hazard. The boundary (trigger exactly at the pre-jump
/// survival level) counts as killed by the jump.
#[inline]
fn killed_by_jump(trigger_hazard: f64, drift_mass: f64, pre_jump_level: f64) -> bool {
    trigger_hazard >= drift_mass + pre_jump_level
}

/// Walks one sector of one row: fills `times` with the default times
/// and `uniforms` with the matching copula variates.
fn walk_sector(
    model: &SibuyaModel,
    stream: &mut Stream,
    hazards: &mut Vec<f64>,
    uniforms: &mut [f64],
    times: &mut [f64],
) -> Result<()> {
    let d = model.dimension();
    draw_trigger_hazards(model, stream, hazards);

    let jump_size = model.jump().jump_size();
    let intensity = model.jump().intensity();
    let mut alive: Vec<usize> = (0..d).collect();
    let mut unit_time = 0.0;
    let mut jump_level = 0.0;

    while !alive.is_empty() {
        unit_time += stream.next_exponential();
        match intensity.inverse_integrated(unit_time) {
            Ok(occurrence) => {
                let next_level = jump_level + jump_size;
                let mut failure = None;
                alive.retain(|&i| {
                    let drift_mass = match model.drifts()[i].integrate(occurrence) {
                        Ok(mass) => mass,
                        Err(e) => {
                            failure = Some(e);
                            return false;
                        }
                    };
                    if drift_mass + next_level < hazards[i] {
                        return true; // survives past this occurrence
                    }
                    times[i] = if killed_by_jump(hazards[i], drift_mass, jump_level) {
                        occurrence
                    } else {
                        // crossed strictly earlier by drift alone
                        match model.drifts()[i].inverse_integrated(hazards[i] - jump_level) {
                            Ok(t) => t,
                            Err(e) => {
                                failure = Some(e);
                                return false;
                            }
                        }
                    };
                    false
                });
                if let Some(e) = failure {
                    return Err(e);
                }
                jump_level = next_level;
            }
            Err(Error::RangeExhausted) => {
                // no further jumps: survivors default by drift alone
                for &i in &alive {
                    times[i] = model.drifts()[i]
                        .inverse_integrated(hazards[i] - jump_level)
                        .map_err(|_| {
                            Error::Numeric(
                                "jump intensity exhausted with bounded drift hazard; \
                                 model survival floor was never crossed"
                                    .into(),
                            )
                        })?;
                }
                alive.clear();
            }
            Err(other) => return Err(other),
        }
    }
    for i in 0..d {
        uniforms[i] = model.marginal_survival(i, times[i])?;
    }
    Ok(())
}

/// Fills one row of a plain batch. Exposed so batch drivers can
/// parallelize over rows; the output depends only on
/// `(model, seed, row)`.
pub fn sample_row_into(
    model: &SibuyaModel,
    seed: u64,
    row: u64,
    uniforms: &mut [f64],
    times: &mut [f64],
) -> Result<()> {
    let mut stream = Stream::substream(derive_key(seed, row), 0);
    let mut hazards = Vec::with_capacity(model.dimension());
    walk_sector(model, &mut stream, &mut hazards, uniforms, times)
}

/// Fills one row of a hierarchical batch, sector blocks in order.
pub fn sample_hierarchical_row_into(
    sectors: &[SibuyaModel],
    seed: u64,
    row: u64,
    uniforms: &mut [f64],
    times: &mut [f64],
) -> Result<()> {
    let row_key = derive_key(seed, row);
    let mut hazards = Vec::new();
    let mut offset = 0;
    for (sector_index, sector) in sectors.iter().enumerate() {
        let d = sector.dimension();
        let mut stream = Stream::substream(row_key, sector_index as u64);
        walk_sector(
            sector,
            &mut stream,
            &mut hazards,
            &mut uniforms[offset..offset + d],
            &mut times[offset..offset + d],
        )?;
        offset += d;
    }
    Ok(())
}

fn checked_dimensions(n: usize, d: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("sample count must be at least one".into()));
    }
    n.checked_mul(d)
        .ok_or_else(|| Error::Domain(format!("sample matrix {n} x {d} overflows")))
}

/// Draws `n` rows of default times and copula variates from the model.
pub fn sample(model: &SibuyaModel, n: usize, seed: u64) -> Result<SampleBatch> {
    let total = checked_dimensions(n, model.dimension())?;
    let d = model.dimension();
    let mut uniforms = vec![0.0; total];
    let mut times = vec![0.0; total];
    for row in 0..n {
        let span = row * d..(row + 1) * d;
        sample_row_into(
            model,
            seed,
            row as u64,
            &mut uniforms[span.clone()],
            &mut times[span],
        )?;
    }
    Ok(SampleBatch {
        dimension: d,
        uniforms,
        default_times: times,
        seed,
        fingerprint: model.fingerprint(),
    })
}

/// Draws `n` rows from a sector list with independent jump processes;
/// columns are grouped by sector. A single sector reproduces
/// [`sample`] bit-for-bit.
pub fn sample_hierarchical(sectors: &[SibuyaModel], n: usize, seed: u64) -> Result<SampleBatch> {
    if sectors.is_empty() {
        return Err(Error::Config("sector list must not be empty".into()));
    }
    let d: usize = sectors.iter().map(SibuyaModel::dimension).sum();
    let total = checked_dimensions(n, d)?;
    let mut uniforms = vec![0.0; total];
    let mut times = vec![0.0; total];
    for row in 0..n {
        let span = row * d..(row + 1) * d;
        sample_hierarchical_row_into(
            sectors,
            seed,
            row as u64,
            &mut uniforms[span.clone()],
            &mut times[span],
        )?;
    }
    Ok(SampleBatch {
        dimension: d,
        uniforms,
        default_times: times,
        seed,
        fingerprint: hierarchical_fingerprint(sectors),
    })
}

/// Empirical copula of a batch at `u`: the fraction of rows with all
/// variates at or below `u`, with its binomial standard error.
pub fn empirical_copula(batch: &SampleBatch, u: &[f64]) -> Result<(f64, f64)> {
    if u.len() != batch.dimension() {
        return Err(Error::DimensionMismatch {
            expected: batch.dimension(),
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
    let n = batch.len();
    let mut count = 0usize;
    for row in 0..n {
        let variates = batch.uniform_row(row);
        if variates.iter().zip(u).all(|(&v, &bound)| v <= bound) {
            count += 1;
        }
    }
    let estimate = count as f64 / n as f64;
    let standard_error = fmath::sqrt(estimate * (1.0 - estimate) / n as f64);
    Ok((estimate, standard_error))
}

/// Fraction of bivariate rows defaulting at exactly the same instant
/// (both killed by the same jump): the singular-component mass.
pub fn simultaneous_default_rate(batch: &SampleBatch) -> Result<f64> {
    if batch.dimension() != 2 {
        return Err(Error::NotAvailable(format!(
            "simultaneous-default rate is bivariate only, batch has dimension {}",
            batch.dimension()
        )));
    }
    let ties = (0..batch.len())
        .filter(|&row| {
            let t = batch.time_row(row);
            t[0] == t[1]
        })
        .count();
    Ok(ties as f64 / batch.len() as f64)
}

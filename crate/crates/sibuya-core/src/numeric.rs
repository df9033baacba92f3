//! Small numeric kernels: bracketed bisection, adaptive Simpson
//! quadrature, compensated summation, and sequence extrapolation.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Generalized inverse of a non-decreasing function: the smallest
/// `t >= 0` with `f(t) >= target`, assuming `f(0) <= target`.
///
/// Brackets by doubling from `hint`, then bisects to relative tolerance
/// `rel_tol` in `t` (at most 200 bisection steps).
pub fn invert_nondecreasing<F>(f: F, target: f64, hint: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if f(0.0) >= target {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = if hint.is_finite() && hint > 0.0 {
        hint
    } else {
        1.0
    };
    let mut doubles = 0;
    while f(hi) < target {
        lo = hi;
        hi *= 2.0;
        doubles += 1;
        if doubles > 1100 || !hi.is_finite() {
            return Err(Error::Numeric(format!(
                "failed to bracket inverse at target {target}"
            )));
        }
    }
    for _ in 0..200 {
        if hi - lo <= rel_tol * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn simpson_rule(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(fa, flm, fm, m - a);
    let right = simpson_rule(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numeric(format!(
            "adaptive quadrature did not converge on [{a}, {b}] (residual {:e})",
            delta.abs()
        )));
    }
    let half_tol = 0.5 * tol;
    Ok(
        adaptive_step(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
            + adaptive_step(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?,
    )
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::Domain(format!(
            "invalid integration range [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson_rule(fa, fm, fb, b - a);
    adaptive_step(&f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Adaptive Simpson quadrature split at known interior breakpoints, for
/// integrands with kinks or jumps at known locations.
pub fn adaptive_simpson_segmented<F>(f: F, a: f64, b: f64, cuts: &[f64], tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut points: Vec<f64> = cuts.iter().copied().filter(|&c| c > a && c < b).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut total = 0.0;
    let mut left = a;
    let seg_tol = tol / (points.len() + 1) as f64;
    for &cut in points.iter().chain(core::iter::once(&b)) {
        total += adaptive_simpson(&f, left, cut, seg_tol)?;
        left = cut;
    }
    Ok(total)
}

/// Kahan compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Iterated Aitken delta-squared extrapolation of a convergent sequence.
///
/// Returns the extrapolated limit and a convergence diagnostic: the
/// absolute size of the last correction applied. Geometric error decay
/// with any ratio is annihilated exactly, which covers power-function
/// behavior near copula corners without knowing the exponent.
pub fn aitken_extrapolate(values: &[f64]) -> (f64, f64) {
    assert!(!values.is_empty(), "empty sequence");
    let mut stage: Vec<f64> = values.into();
    let mut last = *stage.last().unwrap();
    let mut diagnostic = f64::INFINITY;
    while stage.len() >= 3 {
        let mut next = Vec::with_capacity(stage.len() - 2);
        for w in stage.windows(3) {
            let (x0, x1, x2) = (w[0], w[1], w[2]);
            let denom = x2 - 2.0 * x1 + x0;
            let num = (x2 - x1) * (x2 - x1);
            let scale = x0.abs().max(x1.abs()).max(x2.abs()).max(1.0);
            if denom.abs() <= f64::EPSILON * scale {
                next.push(x2);
            } else {
                next.push(x2 - num / denom);
            }
        }
        let candidate = *next.last().unwrap();
        diagnostic = (candidate - last).abs();
        last = candidate;
        stage = next;
    }
    (last, diagnostic)
}

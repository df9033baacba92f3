//! Parallel batch sampling. Rows are filled by index-derived
//! substreams, so the output is byte-identical for every thread count;
//! rayon only changes who computes which row.

use rayon::prelude::*;
use sibuya_core::sampling::{sample_hierarchical_row_into, sample_row_into, SampleBatch};

use crate::config::ParsedModel;
use crate::error::CliError;

/// Draws `n` rows on `threads` worker threads.
pub fn sample_batch(
    model: &ParsedModel,
    n: usize,
    seed: u64,
    threads: usize,
) -> Result<SampleBatch, CliError> {
    if n == 0 {
        return Err(CliError::Domain("sample count must be at least one".into()));
    }
    let d = model.dimension();
    let total = n
        .checked_mul(d)
        .ok_or_else(|| CliError::Domain(format!("sample matrix {n} x {d} overflows")))?;
    let mut uniforms = vec![0.0; total];
    let mut times = vec![0.0; total];

    let fill_row = |row: usize, u: &mut [f64], t: &mut [f64]| match model {
        ParsedModel::Single(single) => sample_row_into(single, seed, row as u64, u, t),
        ParsedModel::Hierarchical(hier) => {
            sample_hierarchical_row_into(hier.sectors(), seed, row as u64, u, t)
        }
    };

    if threads <= 1 {
        for (row, (u, t)) in uniforms.chunks_mut(d).zip(times.chunks_mut(d)).enumerate() {
            fill_row(row, u, t)?;
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
        pool.install(|| {
            uniforms
                .par_chunks_mut(d)
                .zip(times.par_chunks_mut(d))
                .enumerate()
                .try_for_each(|(row, (u, t))| fill_row(row, u, t))
        })?;
    }

    Ok(SampleBatch::from_parts(
        d,
        uniforms,
        times,
        seed,
        model.fingerprint(),
    )?)
}

/// Resolves the worker count: `--threads` flag, then the
/// `SIBUYA_THREADS` environment variable, then all available cores.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("SIBUYA_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|v| v.get())
            .unwrap_or(1)
    })
    .max(1)
}

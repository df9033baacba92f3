//! Emitters: locale-independent decimals, CSV files with LF endings,
//! and the JSON metadata sidecar written next to sample batches.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use sibuya_core::SampleBatch;

use crate::error::CliError;

/// 17-significant-digit scientific decimal; parses back to the exact
/// same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a sample batch as CSV: header `u_1,...,u_d,tau_1,...,tau_d`,
/// one row per sample, LF line endings.
pub fn write_sample_csv(path: &Path, batch: &SampleBatch) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    let d = batch.dimension();
    let mut header = String::new();
    for i in 1..=d {
        header.push_str(&format!("u_{i},"));
    }
    for i in 1..=d {
        header.push_str(&format!("tau_{i}"));
        if i < d {
            header.push(',');
        }
    }
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for row in 0..batch.len() {
        let mut line = String::new();
        for &u in batch.uniform_row(row) {
            line.push_str(&format_float(u));
            line.push(',');
        }
        let times = batch.time_row(row);
        for (i, &t) in times.iter().enumerate() {
            line.push_str(&format_float(t));
            if i + 1 < times.len() {
                line.push(',');
            }
        }
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Path of the metadata sidecar for a sample CSV.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes the JSON sidecar recording how a batch was produced.
pub fn write_sample_sidecar(csv_path: &Path, batch: &SampleBatch) -> Result<(), CliError> {
    let meta = serde_json::json!({
        "seed": batch.seed(),
        "n": batch.len(),
        "dimension": batch.dimension(),
        "model_fingerprint": format!("{:016x}", batch.fingerprint()),
    });
    let mut out = BufWriter::new(File::create(sidecar_path(csv_path))?);
    out.write_all(meta.to_string().as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Writes a generic CSV table with LF endings.
pub fn write_table(
    path: &Path,
    header: &str,
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_table_to(&mut out, header, rows)?;
    out.flush()?;
    Ok(())
}

/// Writes a generic CSV table to any sink (used for stdout emission).
pub fn write_table_to<W: Write>(
    out: &mut W,
    header: &str,
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        let line = row
            .iter()
            .map(|&v| format_float(v))
            .collect::<Vec<_>>()
            .join(",");
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

//! Subcommand dispatch.
//!
//! Exit codes: 0 on success, 2 on domain/configuration errors
//! (including malformed JSON and out-of-range flags), 3 on numeric
//! failures. Errors never print stack traces; diagnostics go to stderr
//! as single-line JSON.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sibuya_core::dependence::{dependence_report, DependenceMethod};
use sibuya_core::pricing::{ftd_fair_spread, ftd_present_value, level_curve, PricingInputs};

use crate::config::{load_model, ParsedModel};
use crate::error::CliError;
use crate::output::{
    format_float, write_sample_csv, write_sample_sidecar, write_table, write_table_to,
};
use crate::parallel::{resolve_threads, sample_batch};

#[derive(Debug, Parser)]
#[command(
    name = "sibuya",
    version,
    about = "Jump-driven default-model copulas: evaluation, sampling, dependence, pricing"
)]
pub struct Cli {
    /// Worker threads (default: SIBUYA_THREADS, then all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the model copula at a point
    Eval {
        /// Model configuration JSON
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated coordinates in the unit interval, one per entity
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<f64>,
    },
    /// Emit the bivariate copula on a uniform grid as CSV (u1,u2,C)
    Surface {
        #[arg(long)]
        model: PathBuf,
        /// Grid points per axis, endpoints included
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit the copula diagonal on a uniform grid as CSV (u,C)
    Diag {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a reproducible sample batch as CSV plus a JSON sidecar
    Sample {
        #[arg(long)]
        model: PathBuf,
        /// Number of rows
        #[arg(long)]
        n: usize,
        /// Batch seed; (model, n, seed) determines the bytes
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the dependence report as single-line JSON
    Deps {
        #[arg(long)]
        model: PathBuf,
    },
    /// Price first-to-default protection
    Price {
        #[command(subcommand)]
        product: PriceCommand,
    },
    /// Solve (H, lambda) pairs reproducing a target fair spread
    Levelcurve {
        /// Basket template: constant drift rates are taken from it
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        cds_intensity: f64,
        #[arg(long)]
        recovery: f64,
        /// Target fair spread per year
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = 0.5)]
        h_min: f64,
        #[arg(long, default_value_t = 10.0)]
        h_max: f64,
        #[arg(long, default_value_t = 20)]
        h_points: usize,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a model configuration and print diagnostics
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum PriceCommand {
    /// First-to-default swap: fair spread, or present value when
    /// --spread is given
    Ftd(FtdArgs),
}

#[derive(Debug, Args)]
pub struct FtdArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Flat CDS hazard of every basket constituent, per year
    #[arg(long)]
    pub cds_intensity: f64,
    /// Recovery rate between 0 and 1
    #[arg(long)]
    pub recovery: f64,
    /// Risk-free discount rate per year
    #[arg(long)]
    pub rate: f64,
    /// Contract maturity in years
    #[arg(long)]
    pub maturity: f64,
    /// Running premium per year; when given the present value is
    /// printed instead of the fair spread
    #[arg(long)]
    pub spread: Option<f64>,
}

/// Runs a parsed command line; the caller maps the error to an exit
/// code.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let threads = resolve_threads(cli.threads);
    match cli.command {
        Command::Eval { model, u } => {
            let model = load_model(&model)?;
            let value = model.copula(&u)?;
            println!("{}", format_float(value));
        }
        Command::Surface { model, grid, out } => {
            let model = load_model(&model)?;
            if model.dimension() != 2 {
                return Err(CliError::Config(format!(
                    "surface requires a bivariate model, got dimension {}",
                    model.dimension()
                )));
            }
            if grid < 2 {
                return Err(CliError::Domain("grid needs at least two points".into()));
            }
            let step = 1.0 / (grid - 1) as f64;
            let mut rows = Vec::with_capacity(grid * grid);
            for i in 0..grid {
                for j in 0..grid {
                    let u1 = (i as f64 * step).min(1.0);
                    let u2 = (j as f64 * step).min(1.0);
                    rows.push(vec![u1, u2, model.copula(&[u1, u2])?]);
                }
            }
            write_table(&out, "u1,u2,C", rows.into_iter())?;
        }
        Command::Diag { model, grid, out } => {
            let model = load_model(&model)?;
            if grid < 2 {
                return Err(CliError::Domain("grid needs at least two points".into()));
            }
            let step = 1.0 / (grid - 1) as f64;
            let mut rows = Vec::with_capacity(grid);
            for i in 0..grid {
                let u = (i as f64 * step).min(1.0);
                rows.push(vec![u, model.copula_diagonal(u)?]);
            }
            match out {
                Some(path) => write_table(&path, "u,C", rows.into_iter())?,
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    write_table_to(&mut lock, "u,C", rows.into_iter())?;
                    lock.flush()?;
                }
            }
        }
        Command::Sample {
            model,
            n,
            seed,
            out,
        } => {
            let model = load_model(&model)?;
            let batch = sample_batch(&model, n, seed, threads)?;
            write_sample_csv(&out, &batch)?;
            write_sample_sidecar(&out, &batch)?;
        }
        Command::Deps { model } => {
            let model = load_model(&model)?;
            let single = model.require_single("the dependence report")?;
            let report = dependence_report(single)?;
            let method = match report.method {
                DependenceMethod::Analytic => "analytic",
                DependenceMethod::NumericLimit => "numeric-limit",
            };
            let line = serde_json::json!({
                "lambda_lower": report.lambda_lower,
                "lambda_upper": report.lambda_upper,
                "epsilon_lower": report.epsilon_lower,
                "epsilon_upper": report.epsilon_upper,
                "method": method,
            });
            println!("{line}");
        }
        Command::Price { product } => {
            let PriceCommand::Ftd(args) = product;
            let model = load_model(&args.model)?;
            let single = model.require_single("first-to-default pricing")?;
            let inputs =
                PricingInputs::new(args.cds_intensity, args.recovery, args.rate, args.maturity)?;
            match args.spread {
                Some(spread) => {
                    let priced = inputs.with_spread(spread)?;
                    let value = ftd_present_value(single, &priced)?;
                    println!("{}", serde_json::json!({ "present_value": value }));
                }
                None => {
                    let fair = ftd_fair_spread(single, &inputs)?;
                    println!("{}", serde_json::json!({ "fair_spread": fair }));
                }
            }
        }
        Command::Levelcurve {
            model,
            cds_intensity,
            recovery,
            target,
            h_min,
            h_max,
            h_points,
            out,
        } => {
            let model = load_model(&model)?;
            let single = model.require_single("level curves")?;
            let drift_rates = single
                .drifts()
                .iter()
                .map(|r| {
                    r.as_constant().ok_or_else(|| {
                        CliError::Config(
                            "level curves require constant drift rates in the template".into(),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if h_points < 2 || h_min.is_nan() || h_min <= 0.0 || h_max.is_nan() || h_max <= h_min {
                return Err(CliError::Domain(
                    "need h_points >= 2 and 0 < h_min < h_max".into(),
                ));
            }
            // maturity and rate do not enter the constant-rate spread
            let inputs = PricingInputs::new(cds_intensity, recovery, 0.0, 1.0)?;
            let step = (h_max - h_min) / (h_points - 1) as f64;
            let sizes: Vec<f64> = (0..h_points).map(|i| h_min + step * i as f64).collect();
            let points = level_curve(&drift_rates, &inputs, target, &sizes)?;
            let rows = points
                .iter()
                .map(|p| vec![p.jump_size, p.jump_rate, p.spread]);
            match out {
                Some(path) => write_table(&path, "H,lambda,spread", rows)?,
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    write_table_to(&mut lock, "H,lambda,spread", rows)?;
                    lock.flush()?;
                }
            }
        }
        Command::Validate { model } => {
            let parsed = load_model(&model)?;
            let line = match &parsed {
                ParsedModel::Single(m) => serde_json::json!({
                    "valid": true,
                    "kind": "single",
                    "dimension": m.dimension(),
                    "constant_rates": m.reduced().is_some(),
                    "model_fingerprint": format!("{:016x}", m.fingerprint()),
                }),
                ParsedModel::Hierarchical(m) => serde_json::json!({
                    "valid": true,
                    "kind": "hierarchical",
                    "dimension": m.dimension(),
                    "sectors": m.sectors().len(),
                    "model_fingerprint": format!("{:016x}", m.fingerprint()),
                }),
            };
            println!("{line}");
        }
    }
    Ok(())
}

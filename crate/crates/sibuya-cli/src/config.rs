//! JSON model configuration.
//!
//! A document is either single-sector:
//!
//! ```json
//! {
//!   "version": 1,
//!   "drifts": [{"kind": "constant", "level": 0.05},
//!              {"kind": "linear", "a": 0.1, "b": 4.0}],
//!   "jump": {"H": 10.0, "intensity": {"kind": "linear", "a": 0.1, "b": 4.0}},
//!   "triggers": {"kind": "independent"}
//! }
//! ```
//!
//! or hierarchical, with a `sectors` array of the same shape (minus
//! `version`). Rate kinds are `constant` (`level`), `linear` (`a`,
//! `b`), and `piecewise` (`breaks`, `levels`); triggers are
//! `independent` (the default) or `frechet-mixture` (`alpha`). Unknown
//! fields are rejected, `version` defaults to 1, and a document must
//! be exactly one of the two shapes.

use serde::Deserialize;
use sibuya_core::{HierarchicalModel, JumpModel, RateFunction, SibuyaModel, TriggerDependence};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RateSpec {
    Constant { level: f64 },
    Linear { a: f64, b: f64 },
    Piecewise { breaks: Vec<f64>, levels: Vec<f64> },
}

impl RateSpec {
    fn build(self) -> Result<RateFunction, CliError> {
        Ok(match self {
            RateSpec::Constant { level } => RateFunction::constant(level)?,
            RateSpec::Linear { a, b } => RateFunction::linear(a, b)?,
            RateSpec::Piecewise { breaks, levels } => RateFunction::piecewise(breaks, levels)?,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSpec {
    #[serde(rename = "H")]
    pub h: f64,
    pub intensity: RateSpec,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TriggerSpec {
    Independent,
    FrechetMixture { alpha: f64 },
}

impl TriggerSpec {
    fn build(self) -> TriggerDependence {
        match self {
            TriggerSpec::Independent => TriggerDependence::Independent,
            TriggerSpec::FrechetMixture { alpha } => TriggerDependence::FrechetMixture { alpha },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorSpec {
    pub drifts: Vec<RateSpec>,
    pub jump: JumpSpec,
    pub triggers: Option<TriggerSpec>,
}

impl SectorSpec {
    fn build(self) -> Result<SibuyaModel, CliError> {
        let drifts = self
            .drifts
            .into_iter()
            .map(RateSpec::build)
            .collect::<Result<Vec<_>, _>>()?;
        let jump = JumpModel::new(self.jump.h, self.jump.intensity.build()?)?;
        let triggers = self
            .triggers
            .map_or(TriggerDependence::Independent, TriggerSpec::build);
        Ok(SibuyaModel::new(drifts, jump, triggers)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default = "default_version")]
    pub version: u32,
    pub drifts: Option<Vec<RateSpec>>,
    pub jump: Option<JumpSpec>,
    pub triggers: Option<TriggerSpec>,
    pub sectors: Option<Vec<SectorSpec>>,
}

fn default_version() -> u32 {
    1
}

/// A validated model: single-sector or hierarchical.
#[derive(Debug, Clone)]
pub enum ParsedModel {
    Single(SibuyaModel),
    Hierarchical(HierarchicalModel),
}

impl ParsedModel {
    pub fn dimension(&self) -> usize {
        match self {
            ParsedModel::Single(m) => m.dimension(),
            ParsedModel::Hierarchical(m) => m.dimension(),
        }
    }

    pub fn copula(&self, u: &[f64]) -> Result<f64, CliError> {
        Ok(match self {
            ParsedModel::Single(m) => m.copula(u)?,
            ParsedModel::Hierarchical(m) => m.copula(u)?,
        })
    }

    /// The copula diagonal; for hierarchical models the product of the
    /// sector diagonals.
    pub fn copula_diagonal(&self, u: f64) -> Result<f64, CliError> {
        Ok(match self {
            ParsedModel::Single(m) => m.copula_diagonal(u)?,
            ParsedModel::Hierarchical(m) => {
                let mut product = 1.0;
                for sector in m.sectors() {
                    product *= sector.copula_diagonal(u)?;
                }
                product
            }
        })
    }

    pub fn fingerprint(&self) -> u64 {
        match self {
            ParsedModel::Single(m) => m.fingerprint(),
            ParsedModel::Hierarchical(m) => m.fingerprint(),
        }
    }

    /// The single-sector model, or an error naming `what` needs one.
    pub fn require_single(&self, what: &str) -> Result<&SibuyaModel, CliError> {
        match self {
            ParsedModel::Single(m) => Ok(m),
            ParsedModel::Hierarchical(_) => Err(CliError::Config(format!(
                "{what} requires a single-sector model"
            ))),
        }
    }
}

/// Parses and validates a model document.
pub fn parse_model(json: &str) -> Result<ParsedModel, CliError> {
    let document: ModelDocument = serde_json::from_str(json)
        .map_err(|e| CliError::Config(format!("invalid model JSON: {e}")))?;
    if document.version != 1 {
        return Err(CliError::Config(format!(
            "unsupported schema version {}",
            document.version
        )));
    }
    match (document.sectors, document.drifts, document.jump) {
        (Some(sectors), None, None) => {
            if document.triggers.is_some() {
                return Err(CliError::Config(
                    "hierarchical documents carry triggers per sector".into(),
                ));
            }
            let built = sectors
                .into_iter()
                .map(SectorSpec::build)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ParsedModel::Hierarchical(HierarchicalModel::new(built)?))
        }
        (None, Some(drifts), Some(jump)) => {
            let sector = SectorSpec {
                drifts,
                jump,
                triggers: document.triggers,
            };
            Ok(ParsedModel::Single(sector.build()?))
        }
        (None, _, _) => Err(CliError::Config(
            "single-sector documents need both `drifts` and `jump`".into(),
        )),
        (Some(_), _, _) => Err(CliError::Config(
            "a document is either single-sector (`drifts` + `jump`) or hierarchical (`sectors`), not both"
                .into(),
        )),
    }
}

/// Reads and parses a model file.
pub fn load_model(path: &std::path::Path) -> Result<ParsedModel, CliError> {
    let json = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&json)
}

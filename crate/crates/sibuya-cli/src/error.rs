use thiserror::Error;

/// Front-end errors, bucketed by exit code: configuration and domain
/// problems exit 2, numeric failures exit 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Domain(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    /// Machine-readable single-line form for stderr.
    pub fn to_json_line(&self) -> String {
        let kind = match self {
            CliError::Config(_) => "config",
            CliError::Domain(_) => "domain",
            CliError::Numeric(_) => "numeric",
        };
        serde_json::json!({ "error": self.to_string(), "kind": kind }).to_string()
    }
}

impl From<sibuya_core::Error> for CliError {
    fn from(e: sibuya_core::Error) -> Self {
        use sibuya_core::Error as E;
        match e {
            E::Domain(_) | E::EntityIndex { .. } | E::DimensionMismatch { .. } => {
                CliError::Domain(e.to_string())
            }
            E::Config(_) | E::DimensionLimit { .. } | E::NotAvailable(_) => {
                CliError::Config(e.to_string())
            }
            E::Numeric(_) | E::RangeExhausted => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o error: {e}"))
    }
}

use qwalk_core::asymptotics::AsymptoticsError;
use qwalk_core::EvolutionError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("degenerate coin: {0}")]
    Degenerate(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Degenerate(_) => 4,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Resource(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Resource(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<EvolutionError> for CliError {
    fn from(e: EvolutionError) -> Self {
        match e {
            EvolutionError::ResourceLimit { .. } | EvolutionError::TooLarge { .. } => {
                CliError::Resource(e.to_string())
            }
            EvolutionError::NotNormalized { .. } => CliError::Config(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<AsymptoticsError> for CliError {
    fn from(e: AsymptoticsError) -> Self {
        match e {
            AsymptoticsError::DegenerateCoin { abcd } => CliError::Degenerate(format!(
                "the limit theorems require abcd != 0 for the coin entries, got |abcd| = {abcd:e}"
            )),
            AsymptoticsError::Evolution(inner) => inner.into(),
            AsymptoticsError::TooShort { .. }
            | AsymptoticsError::TooFewPoints { .. }
            | AsymptoticsError::BadWindow { .. }
            | AsymptoticsError::BadGrid { .. } => CliError::Config(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<qwalk_core::EntropyError> for CliError {
    fn from(e: qwalk_core::EntropyError) -> Self {
        CliError::Failure(e.to_string())
    }
}

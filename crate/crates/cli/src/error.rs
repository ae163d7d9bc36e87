use swanson_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Infeasible(CoreError),

    #[error("{0}")]
    Numeric(CoreError),

    #[error("{0} PASS-class identities failed")]
    VerifyFailed(usize),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 0 success, 1 config, 2 infeasible, 3 non-convergence, 4 verify failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) | CliError::Json(_) => 3,
            CliError::VerifyFailed(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NoPositiveRoot | CoreError::Infeasible4X { .. } | CoreError::BranchViolation(_) => {
                CliError::Infeasible(e)
            }
            CoreError::InvalidParameter(_)
            | CoreError::IllPosedModel(_)
            | CoreError::EqualCouplings(_)
            | CoreError::Domain(_)
            | CoreError::Mode(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

use std::process::ExitCode;

use qwm_core::experiment::SpecError;
use qwm_core::QwmError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),
    #[error("{0}")]
    Constraint(String),
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io(_) => 1,
            CliError::Spec(_) => 2,
            CliError::Constraint(_) => 3,
            CliError::Numerical(_) => 4,
        })
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Spec(msg) => CliError::Spec(format!("invalid experiment spec: {msg}")),
            SpecError::Constraint(e) => CliError::Constraint(e.to_string()),
        }
    }
}

impl From<QwmError> for CliError {
    fn from(e: QwmError) -> Self {
        match e {
            QwmError::ConstraintViolation { .. } => CliError::Constraint(e.to_string()),
            QwmError::TooLarge { .. } | QwmError::Unsupported(_) | QwmError::SeriesTooShort(_) => {
                CliError::Spec(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

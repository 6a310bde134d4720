use std::path::PathBuf;

use hbtp::bench::DatasetError;
use hbtp::feedback::FeedbackError;
use hbtp::planner::PlanError;
use hbtp::provider::ProviderError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Provider(ProviderError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("{0}")]
    Unsolved(String),
    #[error("the tree did not reach the task goal")]
    ExecutionFailed,
}

impl CliError {
    pub fn parse(e: impl std::fmt::Display) -> Self {
        CliError::Parse(e.to_string())
    }

    /// Stable identifier printed in the `error` field.
    pub fn code(&self) -> String {
        match self {
            CliError::Usage(_) => "usage".into(),
            CliError::Io { .. } => "io".into(),
            CliError::Parse(_) => "parse".into(),
            CliError::Provider(e) => format!("provider:{}", e.code()),
            CliError::Plan(_) => "plan".into(),
            CliError::Dataset(_) => "dataset".into(),
            CliError::Unsolved(_) => "unsolved".into(),
            CliError::ExecutionFailed => "execution-failed".into(),
        }
    }

    pub fn exit_status(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<FeedbackError> for CliError {
    fn from(e: FeedbackError) -> Self {
        match e {
            FeedbackError::Provider(p) => CliError::Provider(p),
            FeedbackError::Plan(p) => CliError::Plan(p),
            FeedbackError::EmptySpace => CliError::Unsolved(e.to_string()),
        }
    }
}

//! File formats, run configuration and the subcommands behind the `qdisco`
//! binary.

pub mod commands;
pub mod config;
pub mod formats;
pub mod manifest;

use qdiscocirc::compiler::CompileError;
use qdiscocirc::hardness::HardnessError;
use qdiscocirc::ir::{IrError, SampleError};
use qdiscocirc::oracle::OracleError;
use qdiscocirc::parser::ParseError;
use qdiscocirc::qsim::SimError;
use qdiscocirc::tasks::TaskError;

pub use commands::{run, Cli, Command};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Bad flags, config, or a malformed vocabulary, embedding or circuit
    /// file.
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("task error: {0}")]
    Task(String),
    #[error("purity violation: {0}")]
    Purity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) | CliError::Task(_) => 3,
            CliError::Purity(_) => 4,
        }
    }
}

impl From<TaskError> for CliError {
    fn from(e: TaskError) -> Self {
        match e {
            TaskError::Purity(p) => CliError::Purity(p.to_string()),
            e => CliError::Task(e.to_string()),
        }
    }
}

macro_rules! task_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Task(e.to_string())
            }
        }
    )*};
}

task_error!(
    CompileError,
    HardnessError,
    OracleError,
    SimError,
    SampleError,
    IrError,
    ParseError
);

impl From<formats::FormatError> for CliError {
    fn from(e: formats::FormatError) -> Self {
        CliError::Config(e.to_string())
    }
}

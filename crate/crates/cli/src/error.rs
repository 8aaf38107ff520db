use std::path::PathBuf;

use hobo_core::compile::CompileError;
use hobo_core::decomp::DecompError;
use hobo_core::encode::EncodeError;
use hobo_core::parse::ParseError;
use hobo_core::path::PathError;
use hobo_core::sampler::SamplerError;
use hobo_core::tensor::TensorError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0:?} is neither a readable file nor a built-in example (seating, pythagoras, tsp)")]
    UnknownInput(String),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("no grid to render: the problem declares no grid pattern")]
    NoGrid,
}

impl CliError {
    /// 1 for unreadable or malformed input, 2 for everything the input asked
    /// for but the tool cannot deliver.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::UnknownInput(_) => 1,
            _ => 2,
        }
    }
}

pub fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}

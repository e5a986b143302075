use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::bimod::BimodError;
use crate::exactla::LinAlgError;
use crate::extensions::ExtensionError;
use crate::hochschild::HochschildError;
use crate::qdsl::ParseError;
use crate::quiver::QuiverError;
use crate::repmod::RepError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Bimod(#[from] BimodError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] mixlim_core::Error),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot start worker threads: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 1 usage or validation, 2 no applicable theorem,
    /// 3 statistical failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::ThreadPool(_) => 1,
            Error::Model(mixlim_core::Error::NoTheorem(_)) => 2,
            Error::Model(_) => 1,
            Error::Verification(_) => 3,
            Error::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

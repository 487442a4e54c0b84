use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::graph::UserId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: self-loop on user {user}")]
    SelfLoop {
        path: PathBuf,
        line: usize,
        user: UserId,
    },
    #[error("{path}:{line}: unknown attribute kind `{token}`")]
    UnknownAttrKind {
        path: PathBuf,
        line: usize,
        token: String,
    },
    #[error("self-loop on user {0}")]
    SelfPair(UserId),
    #[error("unknown user {0}")]
    UnknownUser(UserId),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("weight grid is empty under the mutual-friends-greatest constraint (step {0})")]
    EmptyGrid(f64),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unstable parameters (g, n) = ({g}, {n}): 2g - 2 + n must be positive")]
    UnstableParameters { g: u32, n: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cache checksum mismatch in {0}")]
    CacheChecksum(String),
    #[error("malformed cache file {path}: {reason}")]
    CacheFormat { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("decoration: {0}")]
    Decoration(String),
    #[error("consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_stable_range(g: u32, n: usize) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 > 0 {
        Ok(())
    } else {
        Err(Error::UnstableParameters { g, n })
    }
}

use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A capacitance network violates one of its construction invariants.
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    /// `c_m² ≥ c_sigma_left · c_sigma_right`: the two dots have merged.
    #[error("degenerate network: c_m^2 = {cm2:.6} aF^2 >= c_sigma_left*c_sigma_right = {prod:.6} aF^2")]
    Degenerate { cm2: f64, prod: f64 },

    #[error("cannot remove a carrier from an empty {0} dot")]
    EmptyDot(&'static str),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An input is well formed but does not allow the requested analysis.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Lattice fitting could not produce a consistent honeycomb.
    #[error("fit failed: {0}")]
    Fit(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, looking through stage labels.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

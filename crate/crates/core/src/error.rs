use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid geometry: {0}")]
    Construction(String),

    #[error("quadrature for {what} did not converge (achieved error estimate {achieved:e})")]
    Quadrature { what: &'static str, achieved: f64 },

    #[error("meshing failed: {0}")]
    Mesh(String),

    #[error("mesh quality bound not reached: minimum angle {min_angle_deg:.2} degrees")]
    MeshQuality { min_angle_deg: f64 },

    #[error("assembly failed: {0}")]
    Assembly(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("eigensolver did not converge: {converged} of {requested} eigenvalues converged")]
    NoConvergence {
        requested: usize,
        converged: usize,
        partial: Vec<f64>,
    },

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("refinement level {level}: {source}")]
    AtLevel { level: usize, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

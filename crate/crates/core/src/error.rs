use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by a jet with zero constant term")]
    DivisionByZeroConstantTerm,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("curve jets must vanish at t = 0 (r(0) = {r0}, s(0) = {s0})")]
    NonzeroCurveOrigin { r0: f64, s0: f64 },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no base point on the interface found near ({x}, {y})")]
    BasePointNotFound { x: f64, y: f64 },

    #[error("stencil at ({x}, {y}) is crossed by the interface more than once")]
    BasePointAmbiguous { x: f64, y: f64 },

    #[error("level-set gradient vanishes at ({x}, {y})")]
    DegenerateGradient { x: f64, y: f64 },

    #[error("transmission system is singular at p = {p} (determinant {det:e})")]
    SingularTransmission { p: usize, det: f64 },

    #[error("unsupported accuracy order {0} (expected 3..=6)")]
    UnsupportedOrder(usize),

    #[error("iterative method did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("at grid point ({i}, {j}) = ({x}, {y}): {source}")]
    AtPoint {
        i: usize,
        j: usize,
        x: f64,
        y: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {msg}")]
    ProblemSyntax { line: usize, msg: String },

    #[error("missing key `{0}`")]
    MissingKey(String),

    #[error("table parse error: {0}")]
    Table(String),
}

impl Error {
    /// True for failures of the numerical method itself (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::AtPoint { source, .. } => source.is_numerical(),
            Error::Domain(_)
            | Error::DivisionByZeroConstantTerm
            | Error::BasePointNotFound { .. }
            | Error::BasePointAmbiguous { .. }
            | Error::DegenerateGradient { .. }
            | Error::SingularTransmission { .. }
            | Error::NonConvergence { .. }
            | Error::NotPositiveDefinite => true,
            _ => false,
        }
    }
}

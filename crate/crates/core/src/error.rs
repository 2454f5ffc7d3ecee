use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("determinant drifted by {drift:e} from 1")]
    NumericDegradation { drift: f64 },

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("point or input outside the valid domain: {0}")]
    Domain(String),

    #[error("ambiguous classification: {0}")]
    Ambiguity(String),

    #[error("iteration cap of {iterations} reached without convergence")]
    NonTermination { iterations: usize },

    #[error("model construction failed: {0}")]
    Construction(String),

    #[error("trace {value} does not snap to Z[sqrt 2] (residual {residual:e})")]
    NoSnap { value: f64, residual: f64 },

    #[error("word error: {0}")]
    Word(String),

    #[error("certificate data mismatch: {0}")]
    Certificate(String),

    #[error("enumeration not saturated at word bound {bound}")]
    Incomplete { bound: usize },

    #[error("topology check failed: {0}")]
    Topology(String),
}

pub type Result<T> = std::result::Result<T, Error>;

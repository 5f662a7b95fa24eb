use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("failed to parse `{text}` ({context}): {source}")]
    Parse {
        context: String,
        text: String,
        #[source]
        source: ParseError,
    },
    #[error("evaluation failed at {point:?}: {source}")]
    Eval {
        point: Vec<f64>,
        #[source]
        source: EvalError,
    },
    #[error("frame matrix singular at {0:?}")]
    SingularFrame(Vec<f64>),
    #[error("metric singular at {0:?}")]
    SingularMetric(Vec<f64>),
    #[error("metric not symmetric at {point:?}: g[{i}][{j}] != g[{j}][{i}]")]
    AsymmetricMetric { point: Vec<f64>, i: usize, j: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

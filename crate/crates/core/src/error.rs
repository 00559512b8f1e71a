use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular value (norm_sq = {norm_sq:e})")]
    SingularValue { norm_sq: f64 },

    #[error("point is within the pole guard (norm_sq = {norm_sq:e})")]
    NearPole { norm_sq: f64 },

    #[error("parse error at {line}:{column}: {message} (expected one of: {})", expected.join(", "))]
    Parse {
        line: usize,
        column: usize,
        message: String,
        expected: Vec<String>,
    },

    #[error("expression is not a polynomial (contains recip)")]
    NotPolynomial,

    #[error("expression is not a rational function: {0}")]
    NotRational(String),

    #[error("point is not a zero of the function (norm_sq = {norm_sq:e})")]
    NotAZero { norm_sq: f64 },

    #[error("both homogeneous coordinates vanish")]
    BothZero,

    #[error("point lies outside the chart domain")]
    OutsideChart,

    #[error("grid has no points")]
    EmptyGrid,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid atlas: {0}")]
    InvalidAtlas(String),

    #[error("{0}")]
    Evaluation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

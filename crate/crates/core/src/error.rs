use crate::system::{Point, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("not a Steiner triple system: {0}")]
    NotSteiner(ValidationReport),

    #[error("not a partial Steiner triple system: {0}")]
    NotPartial(ValidationReport),

    #[error("{n} is not an admissible order (need n = 1 or 3 mod 6)")]
    Inadmissible { n: usize },

    #[error("order {0} is not 1 or 3 mod 6")]
    InadmissibleTarget(String),

    #[error("point {point} out of range for {n} points")]
    PointOutOfRange { point: Point, n: usize },

    #[error("permutation degree {found} does not match {expected} points")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("search budget of {limit} nodes exceeded")]
    BudgetExceeded { limit: u64 },

    #[error("group too large to enumerate ({order} elements)")]
    GroupTooLarge { order: String },

    #[error("point set is not closed under joins")]
    NotClosed,

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("labeling failed: {0}")]
    Labeling(String),

    #[error("unsupported embedding ({x_size}, {y0_size}): {reach}")]
    UnsupportedEmbedding {
        x_size: usize,
        y0_size: usize,
        reach: String,
    },

    #[error("unclassifiable PG(2,2) subsystem {points:?}: {reason}")]
    Unclassifiable { points: Vec<Point>, reason: String },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("order {u} is below the threshold {threshold}")]
    BelowThreshold { u: String, threshold: String },

    #[error("point cap exceeded: n' = {n_prime} > cap {cap}")]
    CapExceeded { n_prime: usize, cap: usize },

    #[error("reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("search exhausted after {attempts} attempts: {detail}")]
    SearchExhausted { attempts: usize, detail: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

//! Homological algebra over F_p.

use thiserror::Error;

pub mod cohomology;
pub mod limits;
pub mod linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomalgError {
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error("degree {degree} exceeds the cap of {cap} for groups of order {order}")]
    DegreeCap { order: usize, degree: usize, cap: usize },
    #[error("dimension cap exceeded for {what}: {size} > {cap}")]
    DimensionCap { what: String, size: usize, cap: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

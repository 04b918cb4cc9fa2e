//! Sparse differential forms and vector fields on a flat coordinate space.
//!
//! Basis forms are stored on strictly increasing multi-indices; every operation
//! reduces its result to this canonical order with explicit permutation signs.

mod field;
mod form;
mod index;
mod space;

pub use field::VectorField;
pub use form::DiffForm;
pub use index::MultiIndex;
pub use space::{Space, SpaceError};

use alloc::string::String;
use thiserror::Error;

use crate::expr::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("operands live on different spaces (`{0}` vs `{1}`)")]
    SpaceMismatch(String, String),
    #[error("resulting degree {degree} exceeds the dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("interior product of a 0-form")]
    InteriorOfFunction,
    #[error("space `{0}` has no metric")]
    MissingMetric(String),
    #[error("the metric determinant {0} has no rational square root")]
    IrrationalVolume(crate::rational::Rational),
    #[error("pullback map does not define coordinate `{0}`")]
    MissingCoordinate(Symbol),
    #[error("invalid multi-index: {0}")]
    BadIndex(String),
    #[error("component count {got} does not match dimension {dim}")]
    ComponentCount { got: usize, dim: usize },
}

//! Exact localization engine for the disk invariants of `(P¹, L)` and the
//! genus-zero invariants of the toric surface `X`, together with the
//! open/closed correspondence between them.
//!
//! All values are exact: rational functions in the torus parameters with
//! arbitrary-precision rational coefficients.

pub mod algebra;
pub mod cache;
pub mod cli;
pub mod closed;
pub mod correspondence;
pub mod engine;
pub mod graphs;
pub mod open;
pub mod psi;
pub mod sweep;

pub use algebra::{AlgebraError, MonoU, Poly2, RatFunc2, Scalar};
pub use engine::{closed_invariant, closed_invariant_restricted, disk_invariant, Engine};
pub use graphs::{DecoratedGraph, GraphError};
pub use open::Insertion;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Psi(#[from] psi::PsiError),
    #[error(transparent)]
    Algebra(AlgebraError),
    /// A graph sum violated a structural property it must satisfy.
    #[error("formula integrity failure: {0}")]
    Integrity(String),
}

impl Error {
    /// Whether the failure signals a broken graph-sum assembly rather than bad input.
    pub fn is_integrity(&self) -> bool {
        match self {
            Error::Integrity(_) => true,
            Error::Algebra(e) | Error::Psi(psi::PsiError::Algebra(e)) => matches!(
                e,
                AlgebraError::PoleOnAntidiagonal { .. }
                    | AlgebraError::Inhomogeneous
                    | AlgebraError::NotMonomial { .. }
            ),
            _ => false,
        }
    }
}

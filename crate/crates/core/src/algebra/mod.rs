//! Exact arithmetic for equivariant quantities.

pub mod poly;
pub mod ratfunc;
pub mod scalar;

pub use poly::{Mono2, Poly2};
pub use ratfunc::{LinearForm, MonoU, RatFunc2};
pub use scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation of the zero function is undefined")]
    ZeroValuation,
    #[error("pole on the antidiagonal (s-valuation {valuation})")]
    PoleOnAntidiagonal { valuation: i64 },
    #[error("inhomogeneous rational function")]
    Inhomogeneous,
    #[error("restriction is not a single monomial: {residue}")]
    NotMonomial { residue: String },
}

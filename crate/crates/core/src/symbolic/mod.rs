//! Exact multivariate Laurent polynomials and rational functions over the
//! integers.

mod gcd;
mod laurent;
mod parse;
mod rational;

pub use gcd::poly_gcd;
pub use laurent::LaurentPoly;
pub use parse::{parse_rational, parse_with, ExprAlgebra};
pub use rational::RationalFn;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("evaluation point is a pole")]
    PoleAtPoint,
    #[error("division by zero")]
    DivideByZero,
    #[error("parse error: {0}")]
    Parse(String),
}

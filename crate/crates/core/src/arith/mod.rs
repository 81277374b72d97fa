//! Exact arithmetic: rationals, sparse polynomials, rational functions.

pub mod poly;
pub mod ratfun;
pub mod rational;

use thiserror::Error;

pub use poly::{numbered_vars, Monomial, Polynomial};
pub use ratfun::RationalFunction;
pub use rational::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("pole: denominator vanishes at the evaluation point")]
    Pole,
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}

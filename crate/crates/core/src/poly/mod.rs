//! Exact multivariate polynomials over the generators of a presented Chow ring.

mod monomial;
mod parse;
mod polynomial;
mod ring;

pub use monomial::{Generator, GeneratorSet, Monomial, MonomialOrder};
pub use parse::parse;
pub use polynomial::{Homogeneity, Polynomial};
pub use ring::{is_prime, prime_power, CoeffTag, Field, IntegerRing, PrimeField, RationalField, Ring};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("coefficient rings differ: {left} vs {right}")]
    RingMismatch { left: CoeffTag, right: CoeffTag },
    #[error("polynomials live over different generator sets")]
    GeneratorMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

//! Exact coefficients and sparse bigraded-commutative polynomials.
//!
//! Generators live in a [`Catalog`] that fixes their order; monomials are
//! exponent vectors in that order and products carry Koszul signs for odd
//! generators.

mod catalog;
mod coefficient;
mod monomial;
mod poly;

pub use catalog::{Catalog, Generator, Parity};
pub use coefficient::{is_prime, Coefficient, Ring};
pub use monomial::{format_factors, monomial_mul, Monomial, MonomialStyle};
pub use poly::{BigradedPoly, IdealGenerator, Truncation};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("monomial or polynomial built over a different generator catalog")]
    CatalogMismatch,
    #[error("coefficient rings differ: {0:?} vs {1:?}")]
    RingMismatch(Ring, Ring),
    #[error("truncations use different variables")]
    TruncationMismatch,
    #[error("{value} is not {prime}-integral")]
    NotIntegral { value: String, prime: u64 },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` has a parity different from its degree")]
    ParityMismatch(String),
    #[error("odd generator `{0}` cannot have a negative exponent")]
    NegativeOddExponent(String),
    #[error("only monomial ideals are supported")]
    NonMonomialIdeal,
    #[error("cannot reduce modulo p over the rationals")]
    NoPrime,
    #[error("rewrite relation is not homogeneous")]
    InhomogeneousRelation,
    #[error("relation rewriting did not terminate")]
    RewriteDiverged,
    #[error("cannot substitute for odd generator `{0}`")]
    OddSubstitution(String),
    #[error("cannot substitute into a negative power")]
    NegativeSubstitution,
    #[error("operation requires prime-field coefficients")]
    NotPrimeField,
    #[error("Frobenius is only additive on even generators")]
    OddFrobenius,
}

//! Exact computation of the mod (p, v₁, v₂) syntomic cohomology of the
//! connective Adams summand.
//!
//! The crate is layered bottom-up:
//!
//! - [`graded`]: coefficients and sparse bigraded-commutative polynomials.
//! - [`linalg`]: sparse Gaussian elimination over `F_p`.
//! - [`formal_group`]: the p-typical formal group law, p-series and right unit.
//! - [`ss`]: a monomial-basis spectral sequence calculator and collapse checks.
//! - [`summand`]: the t-Bockstein spectral sequences, `can`, `φ`, and the
//!   generator table.

pub mod formal_group;
pub mod graded;
pub mod linalg;
pub mod ss;
pub mod summand;

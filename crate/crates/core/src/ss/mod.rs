//! A multiplicative, monomial-basis spectral sequence calculator over `F_p`.
//!
//! Pages live in a finite bidegree [`Window`]. The `E₁`-page is spanned by the
//! relation-free monomials of an [`AlgebraPresentation`]; differentials are
//! given on generators by a [`DifferentialSpec`] and extended by the Leibniz
//! rule. Pages are turned by exact sparse elimination.

mod collapse;
mod page;
mod parse;
mod presentation;

pub use collapse::{collapse_check, BidegreeTable, CollapseReport, Family, LineParity, Witness};
pub use page::{
    build_page, leibniz_extend, run_to_stable, turn_page, ClassInfo, DiffRecord, PageLog,
    PageRecord, SSPage,
};
pub use parse::{parse_combination, parse_monomial, parse_presentation, PresentationFile};
pub use presentation::{AlgebraPresentation, DiffEntry, DifferentialSpec};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::GradedError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SsError {
    #[error("exponent of `{0}` is unbounded in the window")]
    Unbounded(String),
    #[error("d{page} ∘ d{page} ≠ 0 on {monomial}")]
    SquareNonzero { page: u32, monomial: String },
    #[error("d{page}({class}) is not a class on page {page}")]
    NotACycle { page: u32, class: String },
    #[error("d{page}({generator}) has bidegree {found:?}, expected {expected:?}")]
    Inhomogeneous {
        page: u32,
        generator: String,
        expected: (i64, i64),
        found: (i64, i64),
    },
    #[error("d{page}({monomial}) is not determined by the Leibniz rule")]
    LeibnizUndetermined { page: u32, monomial: String },
    #[error("window inconclusive: differentials are still nonzero at page {page}")]
    WindowInconclusive { page: u32 },
    #[error("differential spec has page {page}, beyond the last page {max_page}")]
    PageOutOfRange { page: u32, max_page: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// A finite box of bidegrees, inclusive on both ends. A window with
/// `min > max` in either coordinate is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub degree: (i64, i64),
    pub weight: (i64, i64),
}

impl Window {
    pub fn new(degree: (i64, i64), weight: (i64, i64)) -> Window {
        Window { degree, weight }
    }

    pub fn empty() -> Window {
        Window {
            degree: (0, -1),
            weight: (0, -1),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.degree.0 > self.degree.1 || self.weight.0 > self.weight.1
    }

    pub fn contains(&self, (d, w): (i64, i64)) -> bool {
        self.degree.0 <= d && d <= self.degree.1 && self.weight.0 <= w && w <= self.weight.1
    }

    /// The window shrunk by `margin` on every side.
    pub fn shrink(&self, (dm, wm): (i64, i64)) -> Window {
        Window {
            degree: (self.degree.0 + dm, self.degree.1 - dm),
            weight: (self.weight.0 + wm, self.weight.1 - wm),
        }
    }
}

/// Bidegree shift of `d_r`, affine in `r`:
/// `(degree₀ + r·degree₁, weight₀ + r·weight₁)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidegreeRule {
    pub degree: (i64, i64),
    pub weight: (i64, i64),
}

impl BidegreeRule {
    /// `d_r` lowers degree by one and raises weight (or filtration) by `r`.
    pub fn adams() -> BidegreeRule {
        BidegreeRule {
            degree: (-1, 0),
            weight: (0, 1),
        }
    }

    /// Bockstein on a class of degree `n` in graded piece `a`, in
    /// (degree, Adams weight `2a − n`) coordinates: `d_r(x) = v^r·y` needs
    /// `|y| = |x| − 1 − r·n` and weight `w(x) + 1 − r·(2a − n)`.
    pub fn bockstein(n: i64, a: i64) -> BidegreeRule {
        BidegreeRule {
            degree: (-1, -n),
            weight: (1, -(2 * a - n)),
        }
    }

    pub fn shift(&self, r: u32) -> (i64, i64) {
        let r = r as i64;
        (
            self.degree.0 + r * self.degree.1,
            self.weight.0 + r * self.weight.1,
        )
    }
}

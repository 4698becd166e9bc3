use std::fmt::Write;

use super::{Catalog, GradedError};

/// A monomial as a dense exponent vector over a [`Catalog`], in catalog order.
///
/// Odd generators have exponent 0 or 1. Negative exponents are permitted for
/// even generators; whether a generator may be inverted is decided by the
/// presentation that uses it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<i64>,
}

/// How to spell a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialStyle {
    /// ASCII names concatenated, `^` for exponents: `t^2lambda1`.
    Ascii,
    /// Labels with superscript exponents: `t²λ₁`.
    Pretty,
    /// ASCII names joined by `·`: `t1·t^2`.
    Dotted,
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn superscript(n: i64) -> String {
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for c in n.unsigned_abs().to_string().chars() {
        s.push(SUPERSCRIPTS[c.to_digit(10).unwrap() as usize]);
    }
    s
}

impl Monomial {
    pub fn one(catalog: &Catalog) -> Monomial {
        Monomial {
            exps: vec![0; catalog.len()],
        }
    }

    /// Builds a monomial, returning `Ok(None)` when an odd generator would have
    /// exponent at least 2 (the monomial is zero).
    pub fn new(catalog: &Catalog, exps: Vec<i64>) -> Result<Option<Monomial>, GradedError> {
        if exps.len() != catalog.len() {
            return Err(GradedError::CatalogMismatch);
        }
        for (g, &e) in catalog.generators().iter().zip(&exps) {
            if g.is_odd() {
                if e < 0 {
                    return Err(GradedError::NegativeOddExponent(g.name.clone()));
                }
                if e >= 2 {
                    return Ok(None);
                }
            }
        }
        Ok(Some(Monomial { exps }))
    }

    pub fn generator(catalog: &Catalog, index: usize) -> Monomial {
        Self::power(catalog, index, 1).expect("first power of a generator is nonzero")
    }

    /// `g^e`, or `None` for an odd generator with `e ≥ 2`.
    pub fn power(catalog: &Catalog, index: usize, e: i64) -> Option<Monomial> {
        let mut exps = vec![0; catalog.len()];
        exps[index] = e;
        Monomial::new(catalog, exps).ok().flatten()
    }

    /// Builds a monomial from `(name, exponent)` pairs.
    pub fn from_names(
        catalog: &Catalog,
        factors: &[(&str, i64)],
    ) -> Result<Option<Monomial>, GradedError> {
        let mut exps = vec![0; catalog.len()];
        for (name, e) in factors {
            exps[catalog.require(name)?] += e;
        }
        Monomial::new(catalog, exps)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exps
    }

    pub fn exponent(&self, index: usize) -> i64 {
        self.exps[index]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, catalog: &Catalog) -> i64 {
        self.exps
            .iter()
            .zip(catalog.generators())
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    pub fn weight(&self, catalog: &Catalog) -> i64 {
        self.exps
            .iter()
            .zip(catalog.generators())
            .map(|(e, g)| e * g.weight)
            .sum()
    }

    pub fn bidegree(&self, catalog: &Catalog) -> (i64, i64) {
        (self.degree(catalog), self.weight(catalog))
    }

    /// Whether the total degree is odd.
    pub fn is_odd(&self, catalog: &Catalog) -> bool {
        self.degree(catalog).rem_euclid(2) == 1
    }

    /// Sum of exponents over the listed generators.
    pub fn exponent_sum(&self, vars: &[usize]) -> i64 {
        vars.iter().map(|&v| self.exps[v]).sum()
    }

    /// Whether `other` divides `self` (componentwise, on the support of `other`).
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(&a, &b)| b <= 0 || a >= b)
    }

    /// Exponent-wise difference, without sign or validity checks.
    pub(crate) fn divide_unchecked(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// The monomial with every exponent multiplied by `k`.
    pub(crate) fn scale_exponents(&self, k: i64) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|e| e * k).collect(),
        }
    }

    pub fn with_exponent(&self, index: usize, e: i64) -> Monomial {
        let mut exps = self.exps.clone();
        exps[index] = e;
        Monomial { exps }
    }

    /// Non-zero `(generator index, exponent)` pairs in catalog order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i, e))
    }

    pub fn format(&self, catalog: &Catalog, style: MonomialStyle) -> String {
        format_factors(catalog, self.factors(), style)
    }
}

/// Spells a list of factors. The empty product is `1`.
pub fn format_factors(
    catalog: &Catalog,
    factors: impl IntoIterator<Item = (usize, i64)>,
    style: MonomialStyle,
) -> String {
    let mut out = String::new();
    for (i, e) in factors {
        let g = catalog.get(i);
        match style {
            MonomialStyle::Ascii | MonomialStyle::Dotted => {
                if style == MonomialStyle::Dotted && !out.is_empty() {
                    out.push('·');
                }
                out.push_str(&g.name);
                if e != 1 {
                    write!(out, "^{e}").unwrap();
                }
            }
            MonomialStyle::Pretty => {
                out.push_str(&g.label);
                if e != 1 {
                    out.push_str(&superscript(e));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// Product of two monomials with its Koszul sign.
///
/// Returns `Ok(None)` when the product vanishes (an odd generator squared),
/// otherwise `(negative, product)` where `negative` records a sign of −1 from
/// reordering odd generators into catalog order.
pub fn monomial_mul(
    catalog: &Catalog,
    a: &Monomial,
    b: &Monomial,
) -> Result<Option<(bool, Monomial)>, GradedError> {
    if a.exps.len() != catalog.len() || b.exps.len() != catalog.len() {
        return Err(GradedError::CatalogMismatch);
    }
    let mut exps = Vec::with_capacity(a.exps.len());
    let mut swaps = 0usize;
    // number of odd generators of `a` seen so far with index > current
    let mut odd_in_a_after = a
        .exps
        .iter()
        .zip(catalog.generators())
        .filter(|(&e, g)| g.is_odd() && e == 1)
        .count();
    for (i, g) in catalog.generators().iter().enumerate() {
        let (ea, eb) = (a.exps[i], b.exps[i]);
        if g.is_odd() {
            if ea == 1 {
                odd_in_a_after -= 1;
            }
            if ea + eb >= 2 {
                return Ok(None);
            }
            if eb == 1 {
                // b's generator i must move left past a's odd generators with larger index
                swaps += odd_in_a_after;
            }
        }
        exps.push(ea + eb);
    }
    Ok(Some((swaps % 2 == 1, Monomial { exps })))
}

//! The universal p-typical formal group law over `BP_*` in Hazewinkel
//! generators, truncated.
//!
//! All series are computed exactly over the rationals from the logarithm
//! `log(x) = Σ lₙ x^{pⁿ}` with `p·lₙ = Σ_{i<n} lᵢ v_{n−i}^{pⁱ}`, then checked to
//! be `p`-integral before they are exported over `Z_(p)` or reduced mod `p`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{
    BigradedPoly, Catalog, GradedError, IdealGenerator, Monomial, MonomialStyle, Ring,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormalGroupError {
    #[error(
        "truncation t^{given} is too small to exhibit the leading term; need at least t^{needed}"
    )]
    WindowTooSmall { given: i64, needed: i64 },
    #[error("coefficient is not p-integral: {0}")]
    NotIntegral(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("bad reduction ideal `{0}`")]
    BadIdeal(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Which polynomial generators of `BP_*` are used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Hazewinkel,
}

/// A reduction ideal such as `(p)` or `(p, v₁)`: optionally the prime, plus
/// generators `v_i` that are set to zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ideal {
    pub prime: bool,
    pub v: Vec<usize>,
}

impl Ideal {
    pub fn none() -> Ideal {
        Ideal::default()
    }

    pub fn p() -> Ideal {
        Ideal {
            prime: true,
            v: vec![],
        }
    }

    /// `(p, v₁, …, v_{n−1})`.
    pub fn invariant_prime(n: usize) -> Ideal {
        Ideal {
            prime: true,
            v: (1..n).collect(),
        }
    }

    pub fn contains_v(&self, i: usize) -> bool {
        self.v.contains(&i)
    }

    /// The height `n` such that this is `(p, v₁, …, v_{n−1})`, if it has that form.
    pub fn height(&self) -> Option<usize> {
        if !self.prime {
            return None;
        }
        let mut v = self.v.clone();
        v.sort_unstable();
        v.iter()
            .enumerate()
            .all(|(k, &i)| i == k + 1)
            .then_some(v.len() + 1)
    }

    fn generators(&self, catalog: &Catalog) -> Result<Vec<IdealGenerator>, FormalGroupError> {
        let mut out = Vec::new();
        if self.prime {
            out.push(IdealGenerator::Prime);
        }
        for &i in &self.v {
            let idx = catalog
                .index_of(&format!("v{i}"))
                .ok_or_else(|| FormalGroupError::BadIdeal(format!("v{i}")))?;
            out.push(IdealGenerator::Monomial(Monomial::generator(catalog, idx)));
        }
        Ok(out)
    }
}

impl FromStr for Ideal {
    type Err = FormalGroupError;

    /// Parses comma-separated generators: `p`, `v1`, `v2`, …; the empty
    /// string or `none` is the zero ideal.
    fn from_str(s: &str) -> Result<Ideal, FormalGroupError> {
        let mut ideal = Ideal::none();
        let s = s.trim();
        if s.is_empty() || s == "none" || s == "()" {
            return Ok(ideal);
        }
        for part in s.trim_matches(|c| c == '(' || c == ')').split(',') {
            let part = part.trim();
            if part == "p" {
                ideal.prime = true;
            } else if let Some(i) = part.strip_prefix('v').and_then(|n| n.parse::<usize>().ok()) {
                if i == 0 {
                    ideal.prime = true;
                } else if !ideal.v.contains(&i) {
                    ideal.v.push(i);
                }
            } else {
                return Err(FormalGroupError::BadIdeal(part.to_string()));
            }
        }
        ideal.v.sort_unstable();
        Ok(ideal)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.prime {
            parts.push("p".into());
        }
        parts.extend(self.v.iter().map(|i| format!("v{i}")));
        write!(f, "({})", parts.join(", "))
    }
}

/// Logarithm coefficients `l₀ = 1, l₁, …, l_depth` over the rationals.
#[derive(Clone, Debug)]
pub struct LogData {
    pub prime: u64,
    pub coefficients: Vec<BigradedPoly>,
    pub convention: Convention,
}

fn catalog_for(p: u64, depth: usize) -> Arc<Catalog> {
    Catalog::brown_peterson(p, depth.max(2))
}

/// Builds `l₁ … l_depth` by the Hazewinkel recursion over the catalog
/// [`Catalog::brown_peterson`]`(p, max(depth, 2))`.
pub fn build_log(p: u64, depth: usize) -> LogData {
    build_log_in(catalog_for(p, depth), p, depth)
}

fn build_log_in(catalog: Arc<Catalog>, p: u64, depth: usize) -> LogData {
    let ring = Ring::Rational;
    let inv_p = ring
        .normalize(BigRational::new(BigInt::from(1), BigInt::from(p)))
        .expect("rationals accept 1/p");
    let mut l = vec![BigradedPoly::one(catalog.clone(), ring)];
    for n in 1..=depth {
        let mut acc = BigradedPoly::zero(catalog.clone(), ring);
        for (i, li) in l.iter().enumerate() {
            let v = BigradedPoly::generator_power(
                catalog.clone(),
                ring,
                &format!("v{}", n - i),
                (p as i64).pow(i as u32),
            )
            .expect("catalog has v_1..v_depth");
            acc = acc.add(&li.mul(&v).unwrap()).unwrap();
        }
        l.push(acc.scale(&inv_p));
    }
    LogData {
        prime: p,
        coefficients: l,
        convention: Convention::Hazewinkel,
    }
}

/// Smallest `n` with `p^(n+1) ≥ bound`, i.e. the number of logarithm
/// coefficients beyond `l₀` that can contribute below `x^bound`.
pub fn depth_for(p: u64, bound: i64) -> usize {
    let mut n = 0;
    let mut pk = p as i64;
    while pk < bound {
        n += 1;
        pk *= p as i64;
    }
    n
}

/// A truncated power series in one variable `t` or two variables `x, y`, with
/// `p`-integral coefficients in `v`- and `t_i`-generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub prime: u64,
    pub variables: Vec<String>,
    pub bound: i64,
    pub ideal: Ideal,
    pub poly: BigradedPoly,
}

impl TruncatedSeries {
    /// Exports a rational series over `Z_(p)`, failing on a non-integral coefficient.
    fn export(
        poly: &BigradedPoly,
        p: u64,
        variables: &[&str],
        bound: i64,
        ideal: &Ideal,
    ) -> Result<TruncatedSeries, FormalGroupError> {
        let local = poly.into_ring(Ring::Localized(p)).map_err(|e| match e {
            GradedError::NotIntegral { value, .. } => FormalGroupError::NotIntegral(value),
            e => e.into(),
        })?;
        let reduced = local.reduce_mod_ideal(&ideal.generators(poly.catalog())?)?;
        Ok(TruncatedSeries {
            prime: p,
            variables: variables.iter().map(|s| s.to_string()).collect(),
            bound,
            ideal: ideal.clone(),
            poly: reduced,
        })
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        self.poly.catalog()
    }

    fn var_indices(&self) -> Vec<usize> {
        self.variables
            .iter()
            .map(|v| {
                self.catalog()
                    .index_of(v)
                    .expect("series variable in catalog")
            })
            .collect()
    }

    /// Coefficient of `t^k` (one-variable series) as a polynomial.
    pub fn coefficient_of_power(&self, k: i64) -> BigradedPoly {
        let vars = self.var_indices();
        let t = vars[0];
        let mut out = BigradedPoly::zero(self.catalog().clone(), self.poly.ring());
        for (m, c) in self.poly.terms() {
            if m.exponent(t) == k && vars.iter().skip(1).all(|&v| m.exponent(v) == 0) {
                out.add_term(m.with_exponent(t, 0), c.clone());
            }
        }
        out
    }

    /// Lowest total variable exponent with a nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        let vars = self.var_indices();
        self.poly.terms().map(|(m, _)| m.exponent_sum(&vars)).min()
    }

    /// Coefficient of `x^i y^j` in a two-variable series.
    pub fn coefficient_xy(&self, i: i64, j: i64) -> BigradedPoly {
        let vars = self.var_indices();
        let mut out = BigradedPoly::zero(self.catalog().clone(), self.poly.ring());
        for (m, c) in self.poly.terms() {
            if m.exponent(vars[0]) == i && m.exponent(vars[1]) == j {
                out.add_term(
                    m.with_exponent(vars[0], 0).with_exponent(vars[1], 0),
                    c.clone(),
                );
            }
        }
        out
    }

    /// Human-readable form, terms ordered by variable exponent with the
    /// variables printed last, e.g. `v2·t^9 + O(t^10)`.
    pub fn display(&self, with_order_term: bool) -> String {
        let vars = self.var_indices();
        let body = self
            .poly
            .format_with(MonomialStyle::Dotted, &vars, |m| m.exponent_sum(&vars));
        if !with_order_term {
            return body;
        }
        let o = if vars.len() == 1 {
            format!("O({}^{})", self.variables[0], self.bound)
        } else {
            format!("O(deg {})", self.bound)
        };
        if self.poly.is_zero() {
            o
        } else {
            format!("{body} + {o}")
        }
    }
}

/// Exact rational machinery for one prime and truncation.
struct Engine {
    p: u64,
    bound: i64,
    catalog: Arc<Catalog>,
    log: LogData,
}

impl Engine {
    fn new(p: u64, bound: i64, kill_v: &[usize]) -> Engine {
        let depth = depth_for(p, bound).max(1);
        let catalog = catalog_for(p, depth);
        let mut log = build_log_in(catalog.clone(), p, depth);
        // setting v_i = 0 is a ring map, so it may be applied before exponentiating
        let kills: Vec<Monomial> = kill_v
            .iter()
            .filter_map(|i| catalog.index_of(&format!("v{i}")))
            .map(|idx| Monomial::generator(&catalog, idx))
            .collect();
        for l in &mut log.coefficients {
            *l = l.filter_terms(|m| !kills.iter().any(|k| m.divisible_by(k)));
        }
        Engine {
            p,
            bound,
            catalog,
            log,
        }
    }

    fn idx(&self, name: &str) -> usize {
        self.catalog.index_of(name).expect("generator in catalog")
    }

    fn var(&self, name: &str, vars: &[usize]) -> BigradedPoly {
        BigradedPoly::generator(self.catalog.clone(), Ring::Rational, name)
            .unwrap()
            .truncate(vars, self.bound)
    }

    /// `Σ coeffs[n] · arg^{pⁿ}` for the given coefficient list.
    fn p_typical(&self, coeffs: &[BigradedPoly], arg: &BigradedPoly) -> BigradedPoly {
        let mut acc = BigradedPoly::zero(self.catalog.clone(), Ring::Rational);
        let mut power = arg.clone();
        for (n, c) in coeffs.iter().enumerate() {
            if n > 0 {
                power = power.pow(self.p as u32).unwrap();
            }
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power.mul(c).unwrap()).unwrap();
        }
        acc
    }

    /// Coefficients `b_1, b_2, …` of the compositional inverse of
    /// `w ↦ Σ coeffs[n] w^{pⁿ}` (with `coeffs[0] = 1`), below `w^bound`.
    fn inverse_coefficients(&self, coeffs: &[BigradedPoly]) -> Vec<BigradedPoly> {
        let w_idx = self.idx("z");
        let w = self.var("z", &[w_idx]);
        // e = w − Σ_{n≥1} c_n e^{pⁿ}; each pass fixes at least one more order
        let mut e = w.clone();
        for _ in 0..self.bound {
            let higher = self.p_typical(coeffs, &e).sub(&e).unwrap();
            let next = w.sub(&higher).unwrap();
            if next == e {
                break;
            }
            e = next;
        }
        (0..self.bound)
            .map(|k| {
                let mut c = BigradedPoly::zero(self.catalog.clone(), Ring::Rational);
                for (m, coef) in e.terms() {
                    if m.exponent(w_idx) == k {
                        c.add_term(m.with_exponent(w_idx, 0), coef.clone());
                    }
                }
                c
            })
            .collect()
    }

    /// `Σ b_k arg^k` by Horner's rule.
    fn apply_series(&self, b: &[BigradedPoly], arg: &BigradedPoly) -> BigradedPoly {
        let mut acc = BigradedPoly::zero(self.catalog.clone(), Ring::Rational);
        for k in (1..b.len()).rev() {
            acc = acc.add(&b[k]).unwrap().mul(arg).unwrap();
        }
        acc
    }

    fn exp_coefficients(&self) -> Vec<BigradedPoly> {
        self.inverse_coefficients(&self.log.coefficients)
    }

    fn log_of(&self, arg: &BigradedPoly) -> BigradedPoly {
        self.p_typical(&self.log.coefficients, arg)
    }
}

fn check_prime(p: u64) -> Result<(), FormalGroupError> {
    if crate::graded::is_prime(p) {
        Ok(())
    } else {
        Err(FormalGroupError::Inconsistent(format!("{p} is not prime")))
    }
}

/// `F(x, y) = exp(log x + log y)`, truncated at total degree `bound` in `x, y`.
pub fn formal_sum(p: u64, bound: i64) -> Result<TruncatedSeries, FormalGroupError> {
    check_prime(p)?;
    let eng = Engine::new(p, bound, &[]);
    let vars = [eng.idx("x"), eng.idx("y")];
    let x = eng.var("x", &vars);
    let y = eng.var("y", &vars);
    let arg = eng.log_of(&x).add(&eng.log_of(&y))?;
    let f = eng.apply_series(&eng.exp_coefficients(), &arg);
    TruncatedSeries::export(&f, p, &["x", "y"], bound, &Ideal::none())
}

/// The logarithm `Σ lₙ t^{pⁿ}` and exponential series in `t`, over the
/// rationals, truncated at `t^bound`. Exposed for inversion checks.
pub fn log_exp_series(
    p: u64,
    bound: i64,
) -> Result<(BigradedPoly, BigradedPoly), FormalGroupError> {
    check_prime(p)?;
    let eng = Engine::new(p, bound, &[]);
    let tv = [eng.idx("t")];
    let t = eng.var("t", &tv);
    let log = eng.log_of(&t);
    let exp = eng.apply_series(&eng.exp_coefficients(), &t);
    Ok((log, exp))
}

/// Composes two one-variable series in `t`: `outer(inner(t))`.
pub fn compose_in_t(
    outer: &BigradedPoly,
    inner: &BigradedPoly,
) -> Result<BigradedPoly, FormalGroupError> {
    let t = outer.catalog().require("t")?;
    Ok(outer.substitute(&[(t, inner.clone())])?)
}

fn required_bound(p: u64, ideal: &Ideal) -> i64 {
    match ideal.height() {
        Some(n) => (p as i64).pow(n as u32) + 1,
        None => 2,
    }
}

/// `[p](t) = exp(p · log t)`, reduced modulo `ideal` and truncated at `t^bound`.
pub fn p_series(p: u64, bound: i64, ideal: &Ideal) -> Result<TruncatedSeries, FormalGroupError> {
    check_prime(p)?;
    let needed = required_bound(p, ideal);
    if bound < needed {
        return Err(FormalGroupError::WindowTooSmall {
            given: bound,
            needed,
        });
    }
    let eng = Engine::new(p, bound, &ideal.v);
    let tv = [eng.idx("t")];
    let t = eng.var("t", &tv);
    let arg = eng.log_of(&t).scale_int(p as i64);
    let s = eng.apply_series(&eng.exp_coefficients(), &arg);
    TruncatedSeries::export(&s, p, &["t"], bound, ideal)
}

/// The right unit on the orientation class, `η_R(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightUnitExpansion {
    pub series: TruncatedSeries,
    /// Sign applied to `t₁` so the exported expansion reads `t + t₁t^p + …`.
    pub t1_sign: i64,
}

/// `η_R(t) = exp_R(log t)`, where `log_R(z) = Σₙ (Σ_{i+j=n} lᵢ t_j^{pⁱ}) z^{pⁿ}`.
///
/// This equals the conjugate of the formal sum `Σ^F t_i t^{pⁱ}`; its `t^p`
/// coefficient is `−t₁ + (v₁ terms)`. The exported series renames `t₁ ↦ −t₁`
/// (recorded in `t1_sign`) so that mod `(p, v₁)` it reads `t + t₁t^p + …`.
pub fn right_unit_t(
    p: u64,
    bound: i64,
    ideal: &Ideal,
) -> Result<RightUnitExpansion, FormalGroupError> {
    check_prime(p)?;
    let needed = if ideal.prime { p as i64 + 2 } else { 2 };
    if bound < needed {
        return Err(FormalGroupError::WindowTooSmall {
            given: bound,
            needed,
        });
    }
    let eng = Engine::new(p, bound, &ideal.v);
    let tv = [eng.idx("t")];
    let t = eng.var("t", &tv);
    let c = eng.catalog.clone();
    let depth = eng.log.coefficients.len() - 1;
    // η_R(lₙ) = Σ_{i+j=n} lᵢ t_j^{pⁱ}
    let mut right_log = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let mut acc = BigradedPoly::zero(c.clone(), Ring::Rational);
        for i in 0..=n {
            let j = n - i;
            let tj = if j == 0 {
                BigradedPoly::one(c.clone(), Ring::Rational)
            } else {
                BigradedPoly::generator_power(
                    c.clone(),
                    Ring::Rational,
                    &format!("t{j}"),
                    (p as i64).pow(i as u32),
                )?
            };
            acc = acc.add(&eng.log.coefficients[i].mul(&tj)?)?;
        }
        right_log.push(acc);
    }
    let exp_r = eng.inverse_coefficients(&right_log);
    let s = eng.apply_series(&exp_r, &eng.log_of(&t));
    // kill v_i again: right-log coefficients do not contain them, but keep it uniform
    let t1 = eng.idx("t1");
    let minus_t1 = BigradedPoly::generator(c.clone(), Ring::Rational, "t1")?.neg();
    let s = s.substitute(&[(t1, minus_t1)])?;
    let series = TruncatedSeries::export(&s, p, &["t"], bound, ideal)?;

    let lin = series.coefficient_of_power(1);
    let one = BigradedPoly::one(c.clone(), series.poly.ring());
    if !series.coefficient_of_power(0).is_zero() || lin != one {
        return Err(FormalGroupError::Inconsistent(
            "right unit must have zero constant term and linear coefficient 1".into(),
        ));
    }
    Ok(RightUnitExpansion {
        series,
        t1_sign: -1,
    })
}

/// Rewrites `t₁ ↦ t·σ²t₁` and `v₂ ↦ t·σ²v₂`, exposing the hidden factor of
/// `t` in the mod `(p, v₁)` cobar complex.
pub fn divide_out_t(poly: &BigradedPoly) -> Result<BigradedPoly, FormalGroupError> {
    let c = poly.catalog();
    let m = |f: &[(&str, i64)]| Monomial::from_names(c, f).map(|m| m.expect("even generators"));
    let rules = vec![
        (m(&[("t1", 1)])?, m(&[("t", 1), ("sigma2t1", 1)])?),
        (m(&[("v2", 1)])?, m(&[("t", 1), ("sigma2v2", 1)])?),
    ];
    Ok(poly.reduce_mod_relations(&rules)?)
}

/// Rewrites `t·σ²t₁ ↦ t₁` and `t·σ²v₂ ↦ v₂`.
pub fn absorb_t(poly: &BigradedPoly) -> Result<BigradedPoly, FormalGroupError> {
    let c = poly.catalog();
    let m = |f: &[(&str, i64)]| Monomial::from_names(c, f).map(|m| m.expect("even generators"));
    let rules = vec![
        (m(&[("t", 1), ("sigma2t1", 1)])?, m(&[("t1", 1)])?),
        (m(&[("t", 1), ("sigma2v2", 1)])?, m(&[("v2", 1)])?),
    ];
    Ok(poly.reduce_mod_relations(&rules)?)
}

fn require_mod_p_v1(p: u64, ideal: &Ideal, what: &str) -> Result<(), FormalGroupError> {
    if !(ideal.prime && ideal.contains_v(1)) {
        return Err(FormalGroupError::BadIdeal(format!(
            "{what} needs an ideal containing p and v1 (got {ideal}) at p = {p}"
        )));
    }
    Ok(())
}

/// `η_R(t) − t`; modulo `(p, v₁)` the result is rewritten with `t₁ = t·σ²t₁`.
pub fn cobar_d_t(p: u64, bound: i64, ideal: &Ideal) -> Result<BigradedPoly, FormalGroupError> {
    let eta = right_unit_t(p, bound, ideal)?;
    let c = eta.series.catalog().clone();
    let t = BigradedPoly::generator(c, eta.series.poly.ring(), "t")?;
    let d = eta.series.poly.sub(&t)?;
    if ideal.prime && ideal.contains_v(1) {
        divide_out_t(&d)
    } else {
        Ok(d)
    }
}

/// `η_R(t^{p^k})` modulo `(p, v₁)` and `t^bound`, computed as the `k`-fold
/// Frobenius of `η_R(t)`.
pub fn right_unit_frobenius(
    p: u64,
    k: u32,
    bound: i64,
    ideal: &Ideal,
) -> Result<BigradedPoly, FormalGroupError> {
    require_mod_p_v1(p, ideal, "the Frobenius of the right unit")?;
    let pk = (p as i64).pow(k);
    let base_bound = ((bound + pk - 1) / pk).max(p as i64 + 2);
    let mut x = right_unit_t(p, base_bound, ideal)?.series.poly;
    for _ in 0..k {
        x = x.frobenius()?;
    }
    let t = x.catalog().require("t")?;
    Ok(x.truncate(&[t], bound))
}

/// `η_R(t)^p − t^p` modulo `(p, v₁)` and `t^bound`, rewritten with `t₁ = t·σ²t₁`.
pub fn cobar_d_t_frobenius(
    p: u64,
    bound: i64,
    ideal: &Ideal,
) -> Result<BigradedPoly, FormalGroupError> {
    let x = right_unit_frobenius(p, 1, bound, ideal)?;
    let c = x.catalog().clone();
    let tp = BigradedPoly::generator_power(c, x.ring(), "t", p as i64)?;
    divide_out_t(&x.sub(&tp)?)
}

/// t-adic order of a polynomial after exposing hidden factors of `t`
/// (`t₁ = t·σ²t₁`, `v₂ = t·σ²v₂`). `None` for zero.
pub fn t_adic_order(poly: &BigradedPoly) -> Result<Option<i64>, FormalGroupError> {
    let d = divide_out_t(poly)?;
    let t = d.catalog().require("t")?;
    Ok(d.terms().map(|(m, _)| m.exponent(t)).min())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn coeff_of(poly: &BigradedPoly, factors: &[(&str, i64)]) -> BigRational {
        let m = Monomial::from_names(poly.catalog(), factors)
            .unwrap()
            .unwrap();
        poly.coefficient(&m).value().clone()
    }

    #[test]
    fn log_base_cases() {
        let l = build_log(2, 0);
        assert_eq!(l.coefficients.len(), 1);
        let l = build_log(2, 1);
        assert_eq!(coeff_of(&l.coefficients[1], &[("v1", 1)]), q(1, 2));
        assert_eq!(l.coefficients[1].len(), 1);
        // p·l₂ = v₂ + l₁ v₁^p  ⇒  l₂ = v₂/3 + v₁⁴/9 at p = 3
        let l = build_log(3, 2);
        let l2 = &l.coefficients[2];
        assert_eq!(l2.len(), 2);
        assert_eq!(coeff_of(l2, &[("v2", 1)]), q(1, 3));
        assert_eq!(coeff_of(l2, &[("v1", 4)]), q(1, 9));
    }

    #[test]
    fn log_recursion_holds() {
        for p in [2u64, 3, 5] {
            let l = build_log(p, 3);
            let c = l.coefficients[0].catalog().clone();
            for n in 1..=3usize {
                let mut rhs = BigradedPoly::zero(c.clone(), Ring::Rational);
                for i in 0..n {
                    let v = BigradedPoly::generator_power(
                        c.clone(),
                        Ring::Rational,
                        &format!("v{}", n - i),
                        (p as i64).pow(i as u32),
                    )
                    .unwrap();
                    rhs = rhs.add(&l.coefficients[i].mul(&v).unwrap()).unwrap();
                }
                assert_eq!(l.coefficients[n].scale_int(p as i64), rhs);
            }
        }
    }

    #[test]
    fn ideal_parsing() {
        let i: Ideal = "p,v1".parse().unwrap();
        assert_eq!(i, Ideal::invariant_prime(2));
        assert_eq!(i.height(), Some(2));
        assert_eq!("".parse::<Ideal>().unwrap(), Ideal::none());
        assert_eq!("p".parse::<Ideal>().unwrap().height(), Some(1));
        assert!("q".parse::<Ideal>().is_err());
        assert_eq!(i.to_string(), "(p, v1)");
    }

    #[test]
    fn p_series_leading_term() {
        let s = p_series(3, 2, &Ideal::none()).unwrap();
        assert_eq!(s.display(true), "3t + O(t^2)");
        let s = p_series(2, 2, &Ideal::none()).unwrap();
        assert_eq!(s.display(true), "2t + O(t^2)");
    }

    #[test]
    fn p_series_window_too_small() {
        assert_eq!(
            p_series(3, 9, &Ideal::invariant_prime(2)),
            Err(FormalGroupError::WindowTooSmall {
                given: 9,
                needed: 10
            })
        );
        assert!(p_series(3, 3, &Ideal::p()).is_err());
    }

    #[test]
    fn p_series_mod_p_v1_at_3() {
        let s = p_series(3, 10, &Ideal::invariant_prime(2)).unwrap();
        assert_eq!(s.display(true), "v2·t^9 + O(t^10)");
    }

    #[test]
    fn right_unit_mod_p_v1() {
        let e = right_unit_t(2, 4, &Ideal::invariant_prime(2)).unwrap();
        assert_eq!(e.series.display(false), "t + t1·t^2");
        let e = right_unit_t(3, 5, &Ideal::invariant_prime(2)).unwrap();
        assert_eq!(e.series.display(false), "t + t1·t^3");
    }

    #[test]
    fn right_unit_linear_coefficient() {
        for p in [2, 3] {
            let e = right_unit_t(p, 6, &Ideal::none()).unwrap();
            assert_eq!(e.series.coefficient_of_power(1).len(), 1);
            assert!(e.series.coefficient_of_power(0).is_zero());
        }
    }

    #[test]
    fn d_of_t_is_t_power_times_sigma() {
        for p in [2u64, 3, 5] {
            let d = cobar_d_t(p, p as i64 + 2, &Ideal::invariant_prime(2)).unwrap();
            let expected =
                Monomial::from_names(d.catalog(), &[("t", p as i64 + 1), ("sigma2t1", 1)])
                    .unwrap()
                    .unwrap();
            assert_eq!(d.len(), 1);
            assert!(d.coefficient(&expected).is_one());
        }
    }

    #[test]
    fn frobenius_of_d_t() {
        for p in [2u64, 3] {
            let pi = p as i64;
            let d = cobar_d_t_frobenius(p, pi * pi + 2 * pi, &Ideal::invariant_prime(2)).unwrap();
            let expected =
                Monomial::from_names(d.catalog(), &[("t", pi * pi + pi), ("sigma2t1", pi)])
                    .unwrap()
                    .unwrap();
            assert_eq!(d.len(), 1);
            assert!(d.coefficient(&expected).is_one());
        }
    }
}

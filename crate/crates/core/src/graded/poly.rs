use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::monomial::{format_factors, monomial_mul};
use super::{Catalog, Coefficient, GradedError, Monomial, MonomialStyle, Ring};

/// Monomials whose exponent sum over `vars` reaches `bound` are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub vars: Vec<usize>,
    pub bound: i64,
}

impl Truncation {
    pub fn keeps(&self, m: &Monomial) -> bool {
        m.exponent_sum(&self.vars) < self.bound
    }
}

/// One generator of a monomial ideal used by [`BigradedPoly::reduce_mod_ideal`].
#[derive(Clone, Debug)]
pub enum IdealGenerator {
    /// The prime of the coefficient ring.
    Prime,
    /// A monomial; every multiple of it is killed.
    Monomial(Monomial),
    /// A general polynomial. Only accepted when it is a unit multiple of a
    /// single monomial.
    Poly(BigradedPoly),
}

/// A sparse polynomial in the generators of a [`Catalog`], with Koszul signs for
/// odd generators and an optional truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedPoly {
    catalog: Arc<Catalog>,
    ring: Ring,
    terms: BTreeMap<Monomial, Coefficient>,
    truncation: Option<Truncation>,
}

impl BigradedPoly {
    pub fn zero(catalog: Arc<Catalog>, ring: Ring) -> BigradedPoly {
        BigradedPoly {
            catalog,
            ring,
            terms: BTreeMap::new(),
            truncation: None,
        }
    }

    pub fn one(catalog: Arc<Catalog>, ring: Ring) -> BigradedPoly {
        let one = ring.one();
        let m = Monomial::one(&catalog);
        Self::term(catalog, ring, m, one)
    }

    pub fn term(catalog: Arc<Catalog>, ring: Ring, m: Monomial, c: Coefficient) -> BigradedPoly {
        let mut p = Self::zero(catalog, ring);
        p.add_term(m, c);
        p
    }

    pub fn constant(catalog: Arc<Catalog>, ring: Ring, n: i64) -> BigradedPoly {
        let c = ring.from_int(n);
        let m = Monomial::one(&catalog);
        Self::term(catalog, ring, m, c)
    }

    pub fn generator(
        catalog: Arc<Catalog>,
        ring: Ring,
        name: &str,
    ) -> Result<BigradedPoly, GradedError> {
        let i = catalog.require(name)?;
        let m = Monomial::generator(&catalog, i);
        Ok(Self::term(catalog, ring, m, ring.one()))
    }

    /// Parses nothing; convenience for `name^e` of a single generator.
    pub fn generator_power(
        catalog: Arc<Catalog>,
        ring: Ring,
        name: &str,
        e: i64,
    ) -> Result<BigradedPoly, GradedError> {
        let i = catalog.require(name)?;
        Ok(match Monomial::power(&catalog, i, e) {
            Some(m) => Self::term(catalog, ring, m, ring.one()),
            None => Self::zero(catalog, ring),
        })
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.truncation.as_ref()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Adds `c·m` in place, respecting the truncation and dropping zeros.
    pub fn add_term(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        if let Some(t) = &self.truncation {
            if !t.keeps(&m) {
                return;
            }
        }
        let ring = self.ring;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = ring.add(o.get(), &c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Sets (or tightens) the truncation and drops the monomials it excludes.
    pub fn truncate(mut self, vars: &[usize], bound: i64) -> BigradedPoly {
        let t = match self.truncation.take() {
            Some(old) if old.vars == vars => Truncation {
                vars: old.vars,
                bound: old.bound.min(bound),
            },
            _ => Truncation {
                vars: vars.to_vec(),
                bound,
            },
        };
        self.terms.retain(|m, _| t.keeps(m));
        self.truncation = Some(t);
        self
    }

    /// Truncation by exponent of one named variable.
    pub fn truncate_in(self, name: &str, bound: i64) -> Result<BigradedPoly, GradedError> {
        let i = self.catalog.require(name)?;
        Ok(self.truncate(&[i], bound))
    }

    pub fn without_truncation(mut self) -> BigradedPoly {
        self.truncation = None;
        self
    }

    fn check_compatible(&self, other: &BigradedPoly) -> Result<Option<Truncation>, GradedError> {
        if !Arc::ptr_eq(&self.catalog, &other.catalog) && *self.catalog != *other.catalog {
            return Err(GradedError::CatalogMismatch);
        }
        if self.ring != other.ring {
            return Err(GradedError::RingMismatch(self.ring, other.ring));
        }
        match (&self.truncation, &other.truncation) {
            (None, None) => Ok(None),
            (Some(t), None) | (None, Some(t)) => Ok(Some(t.clone())),
            (Some(a), Some(b)) => {
                if a.vars != b.vars {
                    return Err(GradedError::TruncationMismatch);
                }
                Ok(Some(Truncation {
                    vars: a.vars.clone(),
                    bound: a.bound.min(b.bound),
                }))
            }
        }
    }

    fn empty_like(&self, truncation: Option<Truncation>) -> BigradedPoly {
        BigradedPoly {
            catalog: Arc::clone(&self.catalog),
            ring: self.ring,
            terms: BTreeMap::new(),
            truncation,
        }
    }

    pub fn add(&self, other: &BigradedPoly) -> Result<BigradedPoly, GradedError> {
        let t = self.check_compatible(other)?;
        let mut out = self.empty_like(t);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BigradedPoly) -> Result<BigradedPoly, GradedError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BigradedPoly {
        let mut out = self.empty_like(self.truncation.clone());
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.ring.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> BigradedPoly {
        let mut out = self.empty_like(self.truncation.clone());
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(a, c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> BigradedPoly {
        self.scale(&self.ring.from_int(n))
    }

    /// Distributed product with Koszul signs, re-truncated.
    pub fn mul(&self, other: &BigradedPoly) -> Result<BigradedPoly, GradedError> {
        let t = self.check_compatible(other)?;
        let mut out = self.empty_like(t.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(t) = &t {
                    if ma.exponent_sum(&t.vars) + mb.exponent_sum(&t.vars) >= t.bound {
                        continue;
                    }
                }
                if let Some((negative, m)) = monomial_mul(&self.catalog, ma, mb)? {
                    let mut c = self.ring.mul(ca, cb);
                    if negative {
                        c = self.ring.neg(&c);
                    }
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<BigradedPoly, GradedError> {
        let mut acc = self.empty_like(self.truncation.clone());
        acc.add_term(Monomial::one(&self.catalog), self.ring.one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `(bidegree)` when every term has the same degree and weight.
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|m| m.bidegree(&self.catalog));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.bidegree().is_some()
    }

    /// Image in the quotient by a monomial ideal. Multiples of listed monomials
    /// are dropped; if the prime is listed the coefficient ring becomes `F_p`.
    pub fn reduce_mod_ideal(&self, ideal: &[IdealGenerator]) -> Result<BigradedPoly, GradedError> {
        let mut monos = Vec::new();
        let mut kill_p = false;
        for g in ideal {
            match g {
                IdealGenerator::Prime => kill_p = true,
                IdealGenerator::Monomial(m) => monos.push(m.clone()),
                IdealGenerator::Poly(p) => {
                    let mut it = p.terms.iter();
                    match (it.next(), it.next()) {
                        (Some((m, c)), None) if p.ring.is_unit(c) => monos.push(m.clone()),
                        _ => return Err(GradedError::NonMonomialIdeal),
                    }
                }
            }
        }
        let ring = if kill_p {
            match self.ring {
                Ring::PrimeField(p) | Ring::Localized(p) => Ring::PrimeField(p),
                Ring::Rational => return Err(GradedError::NoPrime),
            }
        } else {
            self.ring
        };
        let mut out = BigradedPoly {
            catalog: Arc::clone(&self.catalog),
            ring,
            terms: BTreeMap::new(),
            truncation: self.truncation.clone(),
        };
        for (m, c) in &self.terms {
            if monos.iter().any(|k| m.divisible_by(k)) {
                continue;
            }
            let c = if kill_p {
                ring.normalize(c.value().clone())?
            } else {
                c.clone()
            };
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    /// Re-tags the coefficient ring, checking every coefficient lies in it.
    pub fn into_ring(&self, ring: Ring) -> Result<BigradedPoly, GradedError> {
        let mut out = BigradedPoly {
            catalog: Arc::clone(&self.catalog),
            ring,
            terms: BTreeMap::new(),
            truncation: self.truncation.clone(),
        };
        for (m, c) in &self.terms {
            out.add_term(m.clone(), ring.normalize(c.value().clone())?);
        }
        Ok(out)
    }

    /// Repeatedly rewrites any monomial divisible by a rule's left side,
    /// replacing that factor with the right side. Used for the defining
    /// relations `t·σ²v₂ = v₂` and `t·σ²t₁ = t₁` (and their inverses).
    pub fn reduce_mod_relations(
        &self,
        rules: &[(Monomial, Monomial)],
    ) -> Result<BigradedPoly, GradedError> {
        for (lhs, rhs) in rules {
            if lhs.bidegree(&self.catalog) != rhs.bidegree(&self.catalog) {
                return Err(GradedError::InhomogeneousRelation);
            }
        }
        let mut out = self.empty_like(self.truncation.clone());
        for (m, c) in &self.terms {
            let mut m = m.clone();
            let mut negative = false;
            let mut steps = 0;
            'rewrite: loop {
                for (lhs, rhs) in rules {
                    if m.divisible_by(lhs) {
                        let rest = m.divide_unchecked(lhs);
                        match monomial_mul(&self.catalog, &rest, rhs)? {
                            Some((neg, next)) => {
                                negative ^= neg;
                                m = next;
                            }
                            None => break 'rewrite,
                        }
                        steps += 1;
                        if steps > 10_000 {
                            return Err(GradedError::RewriteDiverged);
                        }
                        continue 'rewrite;
                    }
                }
                let c = if negative {
                    self.ring.neg(c)
                } else {
                    c.clone()
                };
                out.add_term(m, c);
                break;
            }
        }
        Ok(out)
    }

    /// Substitutes polynomials for even generators (a ring map fixing the
    /// other generators). Replacements must share catalog and ring.
    pub fn substitute(
        &self,
        assignments: &[(usize, BigradedPoly)],
    ) -> Result<BigradedPoly, GradedError> {
        let mut trunc = self.truncation.clone();
        for (g, r) in assignments {
            if self.catalog.get(*g).is_odd() {
                return Err(GradedError::OddSubstitution(
                    self.catalog.get(*g).name.clone(),
                ));
            }
            let t = self.check_compatible(r)?;
            if t.is_some() {
                trunc = t;
            }
        }
        let base = self.empty_like(trunc.clone());
        let mut cache: Vec<Vec<BigradedPoly>> = vec![Vec::new(); assignments.len()];
        let mut out = base.clone();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut acc = base.clone();
            acc.add_term(Monomial::one(&self.catalog), c.clone());
            for (k, (g, r)) in assignments.iter().enumerate() {
                let e = m.exponent(*g);
                if e == 0 {
                    continue;
                }
                if e < 0 {
                    return Err(GradedError::NegativeSubstitution);
                }
                rest = rest.with_exponent(*g, 0);
                let powers = &mut cache[k];
                if powers.is_empty() {
                    let mut one = base.clone();
                    one.add_term(Monomial::one(&self.catalog), self.ring.one());
                    powers.push(one);
                }
                while powers.len() <= e as usize {
                    let next = powers
                        .last()
                        .unwrap()
                        .mul(r)?
                        .with_truncation(trunc.clone());
                    powers.push(next);
                }
                acc = acc.mul(&powers[e as usize])?;
            }
            let mut rest_poly = base.clone();
            rest_poly.add_term(rest, self.ring.one());
            out = out.add(&rest_poly.mul(&acc)?)?;
        }
        Ok(out)
    }

    fn with_truncation(mut self, t: Option<Truncation>) -> BigradedPoly {
        if let Some(t) = &t {
            self.terms.retain(|m, _| t.keeps(m));
        }
        self.truncation = t;
        self
    }

    /// The `p`-th power over `F_p` for a polynomial in even generators:
    /// `(Σ c·m)^p = Σ c·m^p`.
    pub fn frobenius(&self) -> Result<BigradedPoly, GradedError> {
        let p = match self.ring {
            Ring::PrimeField(p) => p as i64,
            _ => return Err(GradedError::NotPrimeField),
        };
        let trunc = self.truncation.as_ref().map(|t| Truncation {
            vars: t.vars.clone(),
            bound: t.bound * p,
        });
        let mut out = self.empty_like(trunc);
        for (m, c) in &self.terms {
            if m.factors().any(|(i, _)| self.catalog.get(i).is_odd()) {
                return Err(GradedError::OddFrobenius);
            }
            out.add_term(m.scale_exponents(p), c.clone());
        }
        Ok(out)
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> BigradedPoly {
        let mut out = self.empty_like(self.truncation.clone());
        for (m, c) in &self.terms {
            if keep(m) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Replaces the catalog, mapping each monomial with `f`. Monomials mapped
    /// to `None` are dropped.
    pub fn map_monomials(
        &self,
        catalog: Arc<Catalog>,
        f: impl Fn(&Monomial) -> Option<Monomial>,
    ) -> BigradedPoly {
        let mut out = BigradedPoly::zero(catalog, self.ring);
        for (m, c) in &self.terms {
            if let Some(n) = f(m) {
                out.add_term(n, c.clone());
            }
        }
        out
    }

    /// Integer value of the coefficient of `m` when it is an integer.
    pub fn integer_coefficient(&self, m: &Monomial) -> Option<BigInt> {
        let c = self.terms.get(m)?;
        c.is_integer().then(|| c.value().numer().clone())
    }

    /// Formats with terms in the given order and factor order. `sort_key`
    /// controls term order; `factor_order` lists generator indices in print
    /// order (generators not listed follow in catalog order).
    pub fn format_with(
        &self,
        style: MonomialStyle,
        factor_order: &[usize],
        sort_key: impl Fn(&Monomial) -> i64,
    ) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| sort_key(m));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let (negative, abs) = self.ring.sign_split(c);
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<(usize, i64)> = Vec::new();
            for &i in factor_order {
                let e = m.exponent(i);
                if e != 0 {
                    factors.push((i, e));
                }
            }
            for (i, e) in m.factors() {
                if !factor_order.contains(&i) {
                    factors.push((i, e));
                }
            }
            // listed-first factors go last when printing, matching `v2·t^9`
            let listed = factors
                .iter()
                .take_while(|(i, _)| factor_order.contains(i))
                .count();
            factors.rotate_left(listed);
            let body = format_factors(&self.catalog, factors, style);
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&body);
            } else {
                out.push_str(&format!("{abs}{body}"));
            }
        }
        out
    }

    /// Leading small-integer value of a coefficient, when it fits.
    pub fn coefficient_i64(&self, m: &Monomial) -> Option<i64> {
        self.terms
            .get(m)
            .and_then(|c| c.value().numer().to_i64().filter(|_| c.is_integer()))
    }
}

impl fmt::Display for BigradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(MonomialStyle::Dotted, &[], |_| 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thh(p: u64) -> (Arc<Catalog>, Ring) {
        (Catalog::thh(p), Ring::PrimeField(p))
    }

    #[test]
    fn one_plus_t_times_one_minus_t() {
        let c = Catalog::brown_peterson(3, 1);
        let r = Ring::Localized(3);
        let one = BigradedPoly::one(c.clone(), r);
        let t = BigradedPoly::generator(c.clone(), r, "t").unwrap();
        let prod = one.add(&t).unwrap().mul(&one.sub(&t).unwrap()).unwrap();
        let expected = one.sub(&t.pow(2).unwrap()).unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn lambda_sum_squared() {
        // (λ₁+λ₂)² = λ₁λ₂ + λ₂λ₁ = 0 by graded commutativity, at every prime
        for p in [2, 3, 5] {
            let (c, r) = thh(p);
            let l1 = BigradedPoly::generator(c.clone(), r, "lambda1").unwrap();
            let l2 = BigradedPoly::generator(c.clone(), r, "lambda2").unwrap();
            let s = l1.add(&l2).unwrap();
            assert!(s.mul(&s).unwrap().is_zero());
        }
    }

    #[test]
    fn t_times_sigma2v2_rewrites_to_v2() {
        let c = Catalog::brown_peterson(2, 2);
        let r = Ring::PrimeField(2);
        let t = BigradedPoly::generator(c.clone(), r, "t").unwrap();
        let s = BigradedPoly::generator(c.clone(), r, "sigma2v2").unwrap();
        let prod = t.mul(&s).unwrap();
        let rule = (
            Monomial::from_names(&c, &[("t", 1), ("sigma2v2", 1)])
                .unwrap()
                .unwrap(),
            Monomial::from_names(&c, &[("v2", 1)]).unwrap().unwrap(),
        );
        let v2 = BigradedPoly::generator(c.clone(), r, "v2").unwrap();
        assert_eq!(prod.reduce_mod_relations(&[rule]).unwrap(), v2);
    }

    #[test]
    fn ideal_reduction() {
        let c = Catalog::brown_peterson(3, 2);
        let r = Ring::Localized(3);
        let g = |n: &str| BigradedPoly::generator(c.clone(), r, n).unwrap();
        let x = g("v1")
            .mul(&g("t"))
            .unwrap()
            .add(&g("v2").mul(&g("t").pow(2).unwrap()).unwrap())
            .unwrap();
        let v1 = Monomial::from_names(&c, &[("v1", 1)]).unwrap().unwrap();
        let red = x
            .reduce_mod_ideal(&[IdealGenerator::Prime, IdealGenerator::Monomial(v1)])
            .unwrap();
        let expected = g("v2")
            .mul(&g("t").pow(2).unwrap())
            .unwrap()
            .into_ring(Ring::PrimeField(3))
            .unwrap();
        assert_eq!(red, expected);
        assert_eq!(red.ring(), Ring::PrimeField(3));

        let pt = g("t").scale_int(3);
        assert!(pt
            .reduce_mod_ideal(&[IdealGenerator::Prime])
            .unwrap()
            .is_zero());

        let non_monomial = g("v1").add(&g("t")).unwrap();
        assert!(matches!(
            x.reduce_mod_ideal(&[IdealGenerator::Poly(non_monomial)]),
            Err(GradedError::NonMonomialIdeal)
        ));
    }

    #[test]
    fn truncation_drops_terms() {
        let c = Catalog::brown_peterson(2, 1);
        let r = Ring::Localized(2);
        let t = BigradedPoly::generator(c.clone(), r, "t")
            .unwrap()
            .truncate_in("t", 3)
            .unwrap();
        let one = BigradedPoly::one(c.clone(), r);
        let s = one.add(&t).unwrap();
        let cube = s.pow(3).unwrap();
        // 1 + 3t + 3t² (t³ dropped)
        assert_eq!(cube.len(), 3);
    }

    #[test]
    fn ring_mismatch() {
        let c = Catalog::thh(2);
        let a = BigradedPoly::one(c.clone(), Ring::PrimeField(2));
        let b = BigradedPoly::one(c, Ring::Localized(2));
        assert!(matches!(a.mul(&b), Err(GradedError::RingMismatch(_, _))));
    }

    #[test]
    fn frobenius_matches_power() {
        let c = Catalog::brown_peterson(3, 1);
        let r = Ring::PrimeField(3);
        let g = |n: &str| BigradedPoly::generator(c.clone(), r, n).unwrap();
        let x = g("t")
            .add(&g("t1").mul(&g("t").pow(3).unwrap()).unwrap())
            .unwrap();
        assert_eq!(x.frobenius().unwrap(), x.pow(3).unwrap());
    }

    #[test]
    fn substitution() {
        let c = Catalog::brown_peterson(2, 1);
        let r = Ring::Rational;
        let g = |n: &str| BigradedPoly::generator(c.clone(), r, n).unwrap();
        // x² with x := y + z  →  y² + 2yz + z²
        let x2 = g("x").pow(2).unwrap();
        let yz = g("y").add(&g("z")).unwrap();
        let x = c.index_of("x").unwrap();
        let out = x2.substitute(&[(x, yz.clone())]).unwrap();
        assert_eq!(out, yz.pow(2).unwrap());
    }
}

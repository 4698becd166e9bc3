use std::sync::Arc;

use serde::Serialize;

use super::{BidegreeRule, SsError, Window};
use crate::graded::{is_prime, BigradedPoly, Catalog, Monomial, MonomialStyle, Ring};

/// A bigraded-commutative algebra over `F_p` with monomial relations.
///
/// Even generators have exponents in `[0, cap]` (or `[−cap, cap]` when
/// invertible), with the cap optional; odd generators are exterior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    prime: u64,
    catalog: Arc<Catalog>,
    invertible: Vec<bool>,
    max_exponent: Vec<Option<i64>>,
    relations: Vec<Monomial>,
}

impl AlgebraPresentation {
    pub fn new(prime: u64, catalog: Arc<Catalog>) -> Result<AlgebraPresentation, SsError> {
        if !is_prime(prime) {
            return Err(SsError::NotPrime(prime));
        }
        let n = catalog.len();
        Ok(AlgebraPresentation {
            prime,
            catalog,
            invertible: vec![false; n],
            max_exponent: vec![None; n],
            relations: Vec::new(),
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn ring(&self) -> Ring {
        Ring::PrimeField(self.prime)
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn relations(&self) -> &[Monomial] {
        &self.relations
    }

    pub fn is_invertible(&self, index: usize) -> bool {
        self.invertible[index]
    }

    pub fn max_exponent(&self, index: usize) -> Option<i64> {
        self.max_exponent[index]
    }

    pub fn set_invertible(&mut self, name: &str) -> Result<(), SsError> {
        let i = self.catalog.require(name)?;
        if self.catalog.get(i).is_odd() {
            return Err(SsError::Invalid(format!(
                "odd generator `{name}` cannot be invertible"
            )));
        }
        self.invertible[i] = true;
        Ok(())
    }

    pub fn set_max_exponent(&mut self, name: &str, cap: i64) -> Result<(), SsError> {
        let i = self.catalog.require(name)?;
        if cap < 0 {
            return Err(SsError::Invalid(format!(
                "negative exponent cap for `{name}`"
            )));
        }
        self.max_exponent[i] = Some(cap);
        Ok(())
    }

    /// Adds the relation `m = 0`.
    pub fn add_relation(&mut self, m: Monomial) -> Result<(), SsError> {
        if m.exponents().len() != self.catalog.len() {
            return Err(SsError::Graded(crate::graded::GradedError::CatalogMismatch));
        }
        if m.is_one() {
            return Err(SsError::Invalid("relation 1 = 0 kills everything".into()));
        }
        self.relations.push(m);
        Ok(())
    }

    /// Whether `m` is zero in the algebra: divisible by a relation, over an
    /// exponent cap, or a negative power of a non-invertible generator.
    pub fn kills(&self, m: &Monomial) -> bool {
        for (i, &e) in m.exponents().iter().enumerate() {
            if e < 0 && !self.invertible[i] {
                return true;
            }
            if let Some(cap) = self.max_exponent[i] {
                if e.abs() > cap {
                    return true;
                }
            }
        }
        self.relations.iter().any(|r| m.divisible_by(r))
    }

    /// Drops the monomials that vanish in the algebra.
    pub fn normalize(&self, poly: &BigradedPoly) -> BigradedPoly {
        poly.filter_terms(|m| !self.kills(m))
    }

    fn exponent_range(&self, i: usize) -> (Option<i64>, Option<i64>) {
        if self.catalog.get(i).is_odd() {
            return (Some(0), Some(1));
        }
        let cap = self.max_exponent[i];
        let lo = if self.invertible[i] {
            cap.map(|c| -c)
        } else {
            Some(0)
        };
        (lo, cap)
    }

    /// All relation-free monomials with bidegree in `window`, sorted by
    /// (degree, weight, monomial).
    pub fn enumerate(&self, window: &Window) -> Result<Vec<Monomial>, SsError> {
        if window.is_empty() {
            return Ok(Vec::new());
        }
        let n = self.catalog.len();
        let coeffs: [Vec<i64>; 2] = [
            self.catalog.generators().iter().map(|g| g.degree).collect(),
            self.catalog.generators().iter().map(|g| g.weight).collect(),
        ];
        let bounds = [window.degree, window.weight];
        let mut ranges: Vec<(Option<i64>, Option<i64>)> =
            (0..n).map(|i| self.exponent_range(i)).collect();
        if !propagate(&mut ranges, &coeffs, &bounds) {
            return Ok(Vec::new());
        }
        let mut fixed = Vec::with_capacity(n);
        for (i, r) in ranges.iter().enumerate() {
            match *r {
                (Some(lo), Some(hi)) => fixed.push((lo, hi)),
                _ => return Err(SsError::Unbounded(self.catalog.get(i).name.clone())),
            }
        }
        let mut out = Vec::new();
        let mut exps = vec![0i64; n];
        self.search(0, &fixed, &coeffs, &bounds, [0, 0], &mut exps, &mut out);
        out.sort_by(|a, b| {
            (a.degree(&self.catalog), a.weight(&self.catalog), a).cmp(&(
                b.degree(&self.catalog),
                b.weight(&self.catalog),
                b,
            ))
        });
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        i: usize,
        ranges: &[(i64, i64)],
        coeffs: &[Vec<i64>; 2],
        bounds: &[(i64, i64); 2],
        partial: [i64; 2],
        exps: &mut Vec<i64>,
        out: &mut Vec<Monomial>,
    ) {
        let n = ranges.len();
        if i == n {
            if (0..2).all(|k| bounds[k].0 <= partial[k] && partial[k] <= bounds[k].1) {
                if let Ok(Some(m)) = Monomial::new(&self.catalog, exps.clone()) {
                    if !self.kills(&m) {
                        out.push(m);
                    }
                }
            }
            return;
        }
        for e in ranges[i].0..=ranges[i].1 {
            let next = [partial[0] + e * coeffs[0][i], partial[1] + e * coeffs[1][i]];
            // prune with the extreme contributions of the remaining generators
            let feasible = (0..2).all(|k| {
                let (mut lo, mut hi) = (next[k], next[k]);
                for j in i + 1..n {
                    let (a, b) = (ranges[j].0 * coeffs[k][j], ranges[j].1 * coeffs[k][j]);
                    lo += a.min(b);
                    hi += a.max(b);
                }
                hi >= bounds[k].0 && lo <= bounds[k].1
            });
            if feasible {
                exps[i] = e;
                self.search(i + 1, ranges, coeffs, bounds, next, exps, out);
            }
        }
        exps[i] = 0;
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Tightens exponent ranges against `Σ eᵢ cᵢ ∈ [L, U]` for each constraint
/// until a fixed point. Returns `false` when a range becomes empty.
fn propagate(
    ranges: &mut [(Option<i64>, Option<i64>)],
    coeffs: &[Vec<i64>; 2],
    bounds: &[(i64, i64); 2],
) -> bool {
    let n = ranges.len();
    // contribution bounds of eᵢcᵢ; None = unbounded in that direction
    let contrib = |r: (Option<i64>, Option<i64>), c: i64| -> (Option<i128>, Option<i128>) {
        if c == 0 {
            return (Some(0), Some(0));
        }
        let (lo, hi) = (
            r.0.map(|x| x as i128 * c as i128),
            r.1.map(|x| x as i128 * c as i128),
        );
        if c > 0 {
            (lo, hi)
        } else {
            (hi, lo)
        }
    };
    for _ in 0..64 * (n + 1) {
        let mut changed = false;
        for k in 0..2 {
            let (l, u) = (bounds[k].0 as i128, bounds[k].1 as i128);
            for i in 0..n {
                let c = coeffs[k][i] as i128;
                if c == 0 {
                    continue;
                }
                let (mut omin, mut omax) = (Some(0i128), Some(0i128));
                for j in (0..n).filter(|&j| j != i) {
                    let (a, b) = contrib(ranges[j], coeffs[k][j]);
                    omin = omin.zip(a).map(|(x, y)| x + y);
                    omax = omax.zip(b).map(|(x, y)| x + y);
                }
                // eᵢc ∈ [l − omax, u − omin]
                let lo_c = omax.map(|m| l - m);
                let hi_c = omin.map(|m| u - m);
                let (new_lo, new_hi) = if c > 0 {
                    (lo_c.map(|x| div_ceil(x, c)), hi_c.map(|x| div_floor(x, c)))
                } else {
                    (hi_c.map(|x| div_ceil(x, c)), lo_c.map(|x| div_floor(x, c)))
                };
                let clamp = |x: i128| x.clamp(i64::MIN as i128 / 4, i64::MAX as i128 / 4) as i64;
                if let Some(nl) = new_lo.map(clamp) {
                    if ranges[i].0.is_none_or(|o| nl > o) {
                        ranges[i].0 = Some(nl);
                        changed = true;
                    }
                }
                if let Some(nh) = new_hi.map(clamp) {
                    if ranges[i].1.is_none_or(|o| nh < o) {
                        ranges[i].1 = Some(nh);
                        changed = true;
                    }
                }
                if let (Some(a), Some(b)) = ranges[i] {
                    if a > b {
                        return false;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    true
}

/// One generator-level differential `d_page(generator^exponent) = image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffEntry {
    pub page: u32,
    pub generator: usize,
    pub exponent: i64,
    pub image: BigradedPoly,
}

/// Generator-level differentials; generators absent at a page are cycles there.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialSpec {
    entries: Vec<DiffEntry>,
}

#[derive(Serialize)]
struct EntryView {
    page: u32,
    source: String,
    image: String,
}

impl DifferentialSpec {
    pub fn new() -> DifferentialSpec {
        DifferentialSpec::default()
    }

    pub fn entries(&self) -> &[DiffEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Records `d_page(name^exponent) = image`, replacing an earlier entry for
    /// the same generator and page.
    pub fn add(
        &mut self,
        catalog: &Catalog,
        page: u32,
        name: &str,
        exponent: i64,
        image: BigradedPoly,
    ) -> Result<(), SsError> {
        let generator = catalog.require(name)?;
        if exponent == 0 || (catalog.get(generator).is_odd() && exponent != 1) {
            return Err(SsError::Invalid(format!(
                "bad exponent {exponent} for `{name}`"
            )));
        }
        if page == 0 {
            return Err(SsError::Invalid("pages start at 1".into()));
        }
        self.entries
            .retain(|e| !(e.page == page && e.generator == generator));
        self.entries.push(DiffEntry {
            page,
            generator,
            exponent,
            image,
        });
        self.entries.sort_by_key(|e| (e.page, e.generator));
        Ok(())
    }

    pub fn at_page(&self, page: u32) -> impl Iterator<Item = &DiffEntry> {
        self.entries.iter().filter(move |e| e.page == page)
    }

    /// Distinct pages carrying an entry, ascending.
    pub fn pages(&self) -> Vec<u32> {
        let mut pages: Vec<u32> = self.entries.iter().map(|e| e.page).collect();
        pages.dedup();
        pages
    }

    pub fn last_page(&self) -> Option<u32> {
        self.entries.iter().map(|e| e.page).max()
    }

    /// Checks every image against the bidegree rule.
    pub fn validate(&self, pres: &AlgebraPresentation, rule: &BidegreeRule) -> Result<(), SsError> {
        let c = pres.catalog();
        for e in &self.entries {
            if e.image.ring() != pres.ring() {
                return Err(SsError::Invalid(format!(
                    "image of d{} must be over F_{}",
                    e.page,
                    pres.prime()
                )));
            }
            let src = Monomial::power(c, e.generator, e.exponent)
                .ok_or_else(|| SsError::Invalid("odd generator squared".into()))?;
            let (d, w) = src.bidegree(c);
            let (sd, sw) = rule.shift(e.page);
            let expected = (d + sd, w + sw);
            let name = src.format(c, MonomialStyle::Ascii);
            for (m, _) in e.image.terms() {
                let found = m.bidegree(c);
                if found != expected {
                    return Err(SsError::Inhomogeneous {
                        page: e.page,
                        generator: name,
                        expected,
                        found,
                    });
                }
            }
        }
        Ok(())
    }

    /// Human-readable listing, e.g. `d2(t) = t^3lambda1`.
    pub fn describe(&self, catalog: &Catalog) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| {
                let src = Monomial::power(catalog, e.generator, e.exponent)
                    .map(|m| m.format(catalog, MonomialStyle::Ascii))
                    .unwrap_or_default();
                let view = EntryView {
                    page: e.page,
                    source: src,
                    image: format_image(&e.image),
                };
                format!("d{}({}) = {}", view.page, view.source, view.image)
            })
            .collect()
    }
}

pub(crate) fn format_image(poly: &BigradedPoly) -> String {
    if poly.is_zero() {
        return "0".into();
    }
    poly.format_with(MonomialStyle::Ascii, &[], |_| 0)
}

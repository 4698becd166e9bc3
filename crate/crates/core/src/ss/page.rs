use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{AlgebraPresentation, BidegreeRule, DifferentialSpec, SsError, Window};
use crate::graded::{BigradedPoly, Monomial, MonomialStyle};
use crate::linalg::{kernel, rank, Echelon, SparseVec};

type Bidegree = (i64, i64);

/// A surviving class, named by the smallest `E₁` monomial in its representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassInfo {
    pub name: String,
    pub label: String,
    pub degree: i64,
    pub weight: i64,
    /// False for classes close enough to the window edge that a differential
    /// could have been cut off.
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidegreeDim {
    pub degree: i64,
    pub weight: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffRecord {
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub page: u32,
    pub dims: Vec<BidegreeDim>,
    pub differentials: Vec<DiffRecord>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageLog {
    pub pages: Vec<PageRecord>,
    /// First page from which nothing changes.
    pub stable_from: u32,
    pub survivors: Vec<ClassInfo>,
}

/// One bidegree of a page: an `E₁` subquotient. `boundaries` is the span of
/// earlier images; `reps` are representatives of the surviving classes,
/// reduced against `boundaries` and against each other.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Cell {
    monomials: Vec<usize>,
    boundaries: Echelon,
    reps: Vec<SparseVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Differential {
    shift: Bidegree,
    /// Per source bidegree, the image of each representative in the target's
    /// representative coordinates.
    images: BTreeMap<Bidegree, Vec<SparseVec>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSPage {
    page: u32,
    presentation: Arc<AlgebraPresentation>,
    window: Window,
    margin: Bidegree,
    basis: Arc<Vec<Monomial>>,
    index: Arc<HashMap<Monomial, usize>>,
    cells: BTreeMap<Bidegree, Cell>,
    differential: Option<Differential>,
}

/// The `E₁`-page: every relation-free monomial in the window, zero differential.
pub fn build_page(pres: &AlgebraPresentation, window: Window) -> Result<SSPage, SsError> {
    let basis = pres.enumerate(&window)?;
    let c = pres.catalog();
    let mut cells: BTreeMap<Bidegree, Cell> = BTreeMap::new();
    for (i, m) in basis.iter().enumerate() {
        let cell = cells.entry(m.bidegree(c)).or_insert_with(|| Cell {
            monomials: Vec::new(),
            boundaries: Echelon::new(),
            reps: Vec::new(),
        });
        cell.monomials.push(i);
        cell.reps.push(SparseVec::unit(i));
    }
    let index = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    Ok(SSPage {
        page: 1,
        presentation: Arc::new(pres.clone()),
        window,
        margin: (0, 0),
        basis: Arc::new(basis),
        index: Arc::new(index),
        cells,
        differential: None,
    })
}

/// `d_r(m)` from the generator-level spec by the Leibniz rule, with Koszul
/// signs: `d(x·g^a·y) = (−1)^{|x|} x·d(g^a)·y`, and `d(g^a) = (a/e)·g^{a−e}·d(g^e)`
/// when the spec gives `d_r(g^e)`. Monomials that vanish in the algebra are dropped.
///
/// Fails with [`SsError::LeibnizUndetermined`] when `e` does not divide `a`.
pub fn leibniz_extend(
    pres: &AlgebraPresentation,
    spec: &DifferentialSpec,
    r: u32,
    m: &Monomial,
) -> Result<BigradedPoly, SsError> {
    let c = pres.catalog();
    let ring = pres.ring();
    let exps = m.exponents();
    let mut total = BigradedPoly::zero(c.clone(), ring);
    let mut prefix_odd = false;
    for (i, &a) in exps.iter().enumerate() {
        if a != 0 {
            if let Some(entry) = spec.at_page(r).find(|e| e.generator == i) {
                if a % entry.exponent != 0 {
                    return Err(SsError::LeibnizUndetermined {
                        page: r,
                        monomial: m.format(c, MonomialStyle::Ascii),
                    });
                }
                let k = a / entry.exponent;
                let mut pre = vec![0; exps.len()];
                pre[..i].copy_from_slice(&exps[..i]);
                let mut post = vec![0; exps.len()];
                post[i + 1..].copy_from_slice(&exps[i + 1..]);
                let as_poly = |e: Vec<i64>| -> Result<BigradedPoly, SsError> {
                    let m = Monomial::new(c, e)?.expect("sub-monomial of a nonzero monomial");
                    Ok(BigradedPoly::term(c.clone(), ring, m, ring.one()))
                };
                let mut mid = vec![0; exps.len()];
                mid[i] = a - entry.exponent;
                let term = as_poly(pre)?
                    .mul(&as_poly(mid)?.mul(&entry.image)?.scale_int(k))?
                    .mul(&as_poly(post)?)?;
                let term = if prefix_odd { term.neg() } else { term };
                total = total.add(&term)?;
            }
            if c.get(i).is_odd() && a % 2 != 0 {
                prefix_odd = !prefix_odd;
            }
        }
    }
    Ok(pres.normalize(&total))
}

fn fp_value(c: &crate::graded::Coefficient) -> u64 {
    c.to_i64().expect("prime field coefficients are small") as u64
}

impl SSPage {
    pub fn page(&self) -> u32 {
        self.page
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn prime(&self) -> u64 {
        self.presentation.prime()
    }

    /// Distance from the window edge within which classes are flagged.
    pub fn margin(&self) -> Bidegree {
        self.margin
    }

    pub fn set_margin(&mut self, margin: Bidegree) {
        self.margin = margin;
    }

    /// The part of the window where survivors are certain.
    pub fn interior(&self) -> Window {
        self.window.shrink(self.margin)
    }

    pub fn is_interior(&self, b: Bidegree) -> bool {
        self.interior().contains(b)
    }

    /// `E₁` monomials in bidegree order.
    pub fn e1_basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        self.cells.get(&b).map_or(0, |c| c.reps.len())
    }

    /// Nonzero dimensions by bidegree.
    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        self.cells
            .iter()
            .filter(|(_, c)| !c.reps.is_empty())
            .map(|(&b, c)| (b, c.reps.len()))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.cells.values().map(|c| c.reps.len()).sum()
    }

    /// Representatives at `b` as `(monomial, coefficient)` lists over `E₁`.
    pub fn representatives(&self, b: Bidegree) -> Vec<Vec<(Monomial, u64)>> {
        self.cells.get(&b).map_or_else(Vec::new, |cell| {
            cell.reps
                .iter()
                .map(|r| {
                    r.entries()
                        .iter()
                        .map(|&(i, v)| (self.basis[i].clone(), v))
                        .collect()
                })
                .collect()
        })
    }

    /// The `E₁` monomials at `b`, in order.
    pub fn monomials_at(&self, b: Bidegree) -> Vec<Monomial> {
        self.cells.get(&b).map_or_else(Vec::new, |c| {
            c.monomials.iter().map(|&i| self.basis[i].clone()).collect()
        })
    }

    fn rep_name(&self, rep: &SparseVec, style: MonomialStyle) -> String {
        let i = rep.pivot().expect("representatives are nonzero");
        self.basis[i].format(self.presentation.catalog(), style)
    }

    /// Every surviving class, ordered by (degree, weight, name).
    pub fn classes(&self) -> Vec<ClassInfo> {
        let mut out: Vec<ClassInfo> = Vec::new();
        for (&b, cell) in &self.cells {
            for rep in &cell.reps {
                out.push(ClassInfo {
                    name: self.rep_name(rep, MonomialStyle::Ascii),
                    label: self.rep_name(rep, MonomialStyle::Pretty),
                    degree: b.0,
                    weight: b.1,
                    interior: self.is_interior(b),
                });
            }
        }
        out.sort_by(|a, b| (a.degree, a.weight, &a.name).cmp(&(b.degree, b.weight, &b.name)));
        out
    }

    /// ASCII names of interior survivors, sorted.
    pub fn interior_names(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .classes()
            .into_iter()
            .filter(|c| c.interior)
            .map(|c| c.name)
            .collect();
        v.sort();
        v
    }

    pub fn has_differential(&self) -> bool {
        self.differential
            .as_ref()
            .is_some_and(|d| d.images.values().flatten().any(|v| !v.is_zero()))
    }

    /// Computes `d_r` on this page from `spec` by the Leibniz rule.
    pub fn with_differential(
        &self,
        spec: &DifferentialSpec,
        rule: &BidegreeRule,
    ) -> Result<SSPage, SsError> {
        let r = self.page;
        let shift = rule.shift(r);
        let p = self.prime();
        let mut cache: HashMap<usize, Option<SparseVec>> = HashMap::new();
        let mut images = BTreeMap::new();
        if spec.at_page(r).next().is_none() {
            let mut out = self.clone();
            out.differential = Some(Differential { shift, images });
            return Ok(out);
        }
        for (&b, cell) in &self.cells {
            let target_b = (b.0 + shift.0, b.1 + shift.1);
            let target = self.cells.get(&target_b);
            let target_empty = target.is_none_or(|t| t.reps.is_empty());
            let mut column = Vec::with_capacity(cell.reps.len());
            for rep in &cell.reps {
                let mut v = SparseVec::new();
                for &(i, coef) in rep.entries() {
                    let img = match cache.get(&i) {
                        Some(x) => x.clone(),
                        None => {
                            let x =
                                match leibniz_extend(&self.presentation, spec, r, &self.basis[i]) {
                                    Ok(poly) => Some(SparseVec::from_pairs(
                                        poly.terms().filter_map(|(m, c)| {
                                            self.index.get(m).map(|&j| (j, fp_value(c) as i64))
                                        }),
                                        p,
                                    )),
                                    Err(SsError::LeibnizUndetermined { .. }) => None,
                                    Err(e) => return Err(e),
                                };
                            cache.insert(i, x.clone());
                            x
                        }
                    };
                    match img {
                        Some(img) => v = v.add_scaled(&img, coef, p),
                        None if target_empty => {}
                        None => {
                            return Err(SsError::LeibnizUndetermined {
                                page: r,
                                monomial: self.basis[i]
                                    .format(self.presentation.catalog(), MonomialStyle::Ascii),
                            })
                        }
                    }
                }
                let coords = match target {
                    Some(t) => decompose(t, &v, p).ok_or_else(|| SsError::NotACycle {
                        page: r,
                        class: self.rep_name(rep, MonomialStyle::Ascii),
                    })?,
                    None if v.is_zero() => SparseVec::new(),
                    None => unreachable!("image monomials lie in populated bidegrees"),
                };
                column.push(coords);
            }
            images.insert(b, column);
        }
        let mut out = self.clone();
        out.differential = Some(Differential { shift, images });
        Ok(out)
    }

    /// Images of the representatives at `b` under the stored differential,
    /// in target representative coordinates.
    fn images_at(&self, b: Bidegree) -> Vec<SparseVec> {
        let n = self.dim(b);
        self.differential
            .as_ref()
            .and_then(|d| d.images.get(&b).cloned())
            .unwrap_or_else(|| vec![SparseVec::new(); n])
    }

    /// Rank of the stored differential leaving `b`.
    pub fn rank_out(&self, b: Bidegree) -> usize {
        rank(&self.images_at(b), self.prime())
    }

    /// Rank of the stored differential arriving at `b`.
    pub fn rank_in(&self, b: Bidegree) -> usize {
        match &self.differential {
            Some(d) => {
                let src = (b.0 - d.shift.0, b.1 - d.shift.1);
                rank(&self.images_at(src), self.prime())
            }
            None => 0,
        }
    }

    /// Nonzero values of the stored differential, as readable records.
    pub fn differential_records(&self) -> Vec<DiffRecord> {
        let Some(d) = &self.differential else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (&b, column) in &d.images {
            let target_b = (b.0 + d.shift.0, b.1 + d.shift.1);
            let Some(target) = self.cells.get(&target_b) else {
                continue;
            };
            for (k, img) in column.iter().enumerate() {
                if img.is_zero() {
                    continue;
                }
                let terms: Vec<String> = img
                    .entries()
                    .iter()
                    .map(|&(j, c)| {
                        let name = self.rep_name(&target.reps[j], MonomialStyle::Ascii);
                        if c == 1 {
                            name
                        } else {
                            format!("{c}{name}")
                        }
                    })
                    .collect();
                out.push(DiffRecord {
                    source: self.rep_name(&self.cells[&b].reps[k], MonomialStyle::Ascii),
                    target: terms.join(" + "),
                });
            }
        }
        out
    }

    fn record(&self) -> PageRecord {
        PageRecord {
            page: self.page,
            dims: self
                .dims()
                .into_iter()
                .map(|((degree, weight), dim)| BidegreeDim {
                    degree,
                    weight,
                    dim,
                })
                .collect(),
            differentials: self.differential_records(),
        }
    }
}

/// Coordinates of `v` in the classes of `cell`, or `None` when `v` is not in
/// the span of representatives and boundaries.
fn decompose(cell: &Cell, v: &SparseVec, p: u64) -> Option<SparseVec> {
    let (mut nf, _) = cell.boundaries.reduce(v, p);
    let mut coords = Vec::new();
    for (k, rep) in cell.reps.iter().enumerate() {
        let a = nf.get(rep.pivot().unwrap());
        if a != 0 {
            nf = nf.add_scaled(rep, p - a, p);
            coords.push((k, a as i64));
        }
    }
    nf.is_zero().then(|| SparseVec::from_pairs(coords, p))
}

fn combine(reps: &[SparseVec], coords: &SparseVec, p: u64) -> SparseVec {
    coords.apply(reps, p)
}

/// Homology of the stored differential: the next page.
pub fn turn_page(page: &SSPage) -> Result<SSPage, SsError> {
    let p = page.prime();
    let Some(d) = &page.differential else {
        let mut next = page.clone();
        next.page += 1;
        return Ok(next);
    };
    let shift = d.shift;
    // d² = 0
    for (&b, column) in &d.images {
        let mid = (b.0 + shift.0, b.1 + shift.1);
        let Some(second) = d.images.get(&mid) else {
            continue;
        };
        for (k, img) in column.iter().enumerate() {
            if !img.apply(second, p).is_zero() {
                return Err(SsError::SquareNonzero {
                    page: page.page,
                    monomial: page.rep_name(&page.cells[&b].reps[k], MonomialStyle::Ascii),
                });
            }
        }
    }
    let mut cells = BTreeMap::new();
    for (&b, cell) in &page.cells {
        let outgoing = page.images_at(b);
        let ker = kernel(&outgoing, p);
        let src = (b.0 - shift.0, b.1 - shift.1);
        let mut boundaries = cell.boundaries.clone();
        let mut hit = 0;
        if let Some(incoming) = d.images.get(&src) {
            for img in incoming {
                if boundaries.insert(combine(&cell.reps, img, p), p) {
                    hit += 1;
                }
            }
        }
        let survivors = ker
            .rows()
            .iter()
            .map(|k| boundaries.reduce(&combine(&cell.reps, k, p), p).0);
        let reps = Echelon::span(survivors, p).rows().to_vec();
        if reps.len() + hit != ker.dim() {
            return Err(SsError::Invalid(format!(
                "page {} at {:?}: image is not inside the kernel",
                page.page, b
            )));
        }
        cells.insert(
            b,
            Cell {
                monomials: cell.monomials.clone(),
                boundaries,
                reps,
            },
        );
    }
    Ok(SSPage {
        page: page.page + 1,
        presentation: page.presentation.clone(),
        window: page.window,
        margin: page.margin,
        basis: page.basis.clone(),
        index: page.index.clone(),
        cells,
        differential: None,
    })
}

/// Turns pages `e1.page() ..= max_page` with differentials from `spec`.
///
/// Generators absent from the spec at a page are cycles there, so nothing
/// changes after the last spec page; a nonzero differential at `max_page`
/// itself means the run cannot certify stability.
pub fn run_to_stable(
    e1: &SSPage,
    spec: &DifferentialSpec,
    rule: &BidegreeRule,
    max_page: u32,
) -> Result<(SSPage, PageLog), SsError> {
    spec.validate(e1.presentation(), rule)?;
    if let Some(last) = spec.last_page() {
        if last > max_page {
            return Err(SsError::PageOutOfRange {
                page: last,
                max_page,
            });
        }
    }
    // a class is certain once every partner along a chain of spec differentials is inside
    let margin = spec.pages().iter().fold((0, 0), |(dm, wm), &r| {
        let (a, b) = rule.shift(r);
        (dm + a.abs(), wm + b.abs())
    });
    let mut page = e1.clone();
    page.set_margin(margin);
    let mut log = PageLog::default();
    let pages: Vec<u32> = spec
        .pages()
        .into_iter()
        .filter(|&r| r >= e1.page())
        .collect();
    for r in pages {
        page.page = r;
        let with_d = page.with_differential(spec, rule)?;
        log.pages.push(with_d.record());
        if r == max_page && with_d.has_differential() {
            return Err(SsError::WindowInconclusive { page: r });
        }
        page = turn_page(&with_d)?;
    }
    page.page = page.page.max(e1.page());
    log.stable_from = page.page;
    log.pages.push(page.record());
    log.survivors = page.classes();
    Ok((page, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Catalog;

    fn mono(c: &Catalog, f: &[(&str, i64)]) -> Monomial {
        Monomial::from_names(c, f).unwrap().unwrap()
    }

    fn tp_setup(p: u64) -> (AlgebraPresentation, DifferentialSpec) {
        let c = Catalog::thh(p);
        let mut pres = AlgebraPresentation::new(p, c.clone()).unwrap();
        pres.set_invertible("t").unwrap();
        pres.set_max_exponent("mu", 0).unwrap();
        let ring = pres.ring();
        let pi = p as i64;
        let mut spec = DifferentialSpec::new();
        let img1 = BigradedPoly::term(
            c.clone(),
            ring,
            mono(&c, &[("t", pi + 1), ("lambda1", 1)]),
            ring.one(),
        );
        spec.add(&c, p as u32, "t", 1, img1).unwrap();
        let img2 = BigradedPoly::term(
            c.clone(),
            ring,
            mono(&c, &[("t", pi * pi + pi), ("lambda2", 1)]),
            ring.one(),
        );
        spec.add(&c, (p * p) as u32, "t", pi, img2).unwrap();
        (pres, spec)
    }

    #[test]
    fn leibniz_on_powers() {
        for p in [2u64, 3, 5] {
            let (pres, spec) = tp_setup(p);
            let c = pres.catalog().clone();
            let d = leibniz_extend(&pres, &spec, p as u32, &mono(&c, &[("t", 2)])).unwrap();
            let target = mono(&c, &[("t", p as i64 + 2), ("lambda1", 1)]);
            if p == 2 {
                assert!(d.is_zero());
            } else {
                assert_eq!(d.coefficient(&target).to_i64(), Some(2));
            }
            assert!(
                leibniz_extend(&pres, &spec, p as u32, &mono(&c, &[("lambda1", 1)]))
                    .unwrap()
                    .is_zero()
            );
            assert!(leibniz_extend(
                &pres,
                &spec,
                p as u32,
                &mono(&c, &[("t", 1), ("lambda1", 1)])
            )
            .unwrap()
            .is_zero());
        }
    }

    #[test]
    fn leibniz_undetermined_power() {
        let (pres, spec) = tp_setup(3);
        let c = pres.catalog().clone();
        let r = leibniz_extend(&pres, &spec, 9, &mono(&c, &[("t", 2)]));
        assert!(matches!(r, Err(SsError::LeibnizUndetermined { .. })));
    }

    #[test]
    fn zero_differential_keeps_basis() {
        let (pres, _) = tp_setup(2);
        let e1 = build_page(&pres, Window::new((-6, 6), (-3, 3))).unwrap();
        let (fin, log) =
            run_to_stable(&e1, &DifferentialSpec::new(), &BidegreeRule::adams(), 4).unwrap();
        assert_eq!(fin.classes(), e1.classes());
        assert_eq!(log.pages.len(), 1);
    }

    #[test]
    fn tp_at_two() {
        let (pres, spec) = tp_setup(2);
        let e1 = build_page(&pres, Window::new((-20, 20), (-16, 16))).unwrap();
        let (fin, log) = run_to_stable(&e1, &spec, &BidegreeRule::adams(), 5).unwrap();
        assert_eq!(
            log.pages
                .iter()
                .filter(|r| !r.differentials.is_empty())
                .count(),
            2
        );
        let names = fin.interior_names();
        assert!(names.contains(&"1".to_string()));
        assert!(names.contains(&"t^4lambda1".to_string()));
        for n in &names {
            let c = pres.catalog();
            let m = crate::ss::parse_monomial(c, n).unwrap();
            assert_eq!(m.exponent(0).rem_euclid(4), 0, "{n} survived");
        }
    }

    #[test]
    fn inconclusive_when_max_page_has_differentials() {
        let (pres, spec) = tp_setup(2);
        let e1 = build_page(&pres, Window::new((-20, 20), (-16, 16))).unwrap();
        assert_eq!(
            run_to_stable(&e1, &spec, &BidegreeRule::adams(), 4).unwrap_err(),
            SsError::WindowInconclusive { page: 4 }
        );
        assert!(matches!(
            run_to_stable(&e1, &spec, &BidegreeRule::adams(), 3),
            Err(SsError::PageOutOfRange { .. })
        ));
    }
}

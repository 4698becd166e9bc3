use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{adams_weight, FrobeniusUnit, SummandError};
use crate::graded::{Catalog, Monomial};
use crate::linalg::SparseVec;
use crate::ss::{parse_monomial, ClassInfo, SSPage, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub source: usize,
    pub target: usize,
    pub coefficient: u64,
}

/// A degree- and Adams-weight-preserving map between named bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedLinearMap {
    pub prime: u64,
    pub source: Vec<ClassInfo>,
    pub target: Vec<ClassInfo>,
    pub entries: Vec<MapEntry>,
}

impl GradedLinearMap {
    fn new(prime: u64, source: Vec<ClassInfo>, target: Vec<ClassInfo>) -> GradedLinearMap {
        GradedLinearMap {
            prime,
            source,
            target,
            entries: Vec::new(),
        }
    }

    /// Source and target positions in degree `n`, and the image of each
    /// source class in target-local coordinates.
    pub fn matrix_in_degree(&self, n: i64) -> (Vec<usize>, Vec<usize>, Vec<SparseVec>) {
        let src: Vec<usize> = (0..self.source.len())
            .filter(|&i| self.source[i].degree == n)
            .collect();
        let tgt: Vec<usize> = (0..self.target.len())
            .filter(|&i| self.target[i].degree == n)
            .collect();
        let local: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let columns = src
            .iter()
            .map(|&s| {
                SparseVec::from_pairs(
                    self.entries
                        .iter()
                        .filter(|e| e.source == s)
                        .map(|e| (local[&e.target], e.coefficient as i64)),
                    self.prime,
                )
            })
            .collect();
        (src, tgt, columns)
    }

    /// Image of the named source class as `(target name, coefficient)` pairs.
    pub fn apply_named(&self, name: &str) -> Result<Vec<(String, u64)>, SummandError> {
        let s = self
            .source
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| SummandError::BasisLookup(name.to_string()))?;
        Ok(self
            .entries
            .iter()
            .filter(|e| e.source == s)
            .map(|e| (self.target[e.target].name.clone(), e.coefficient))
            .collect())
    }

    /// `self − other` on identical bases.
    pub fn difference(&self, other: &GradedLinearMap) -> Result<GradedLinearMap, SummandError> {
        if self.source != other.source || self.target != other.target {
            return Err(SummandError::Check("maps have different bases".into()));
        }
        let p = self.prime;
        let mut acc: HashMap<(usize, usize), u64> = HashMap::new();
        for e in &self.entries {
            *acc.entry((e.source, e.target)).or_insert(0) += e.coefficient;
        }
        for e in &other.entries {
            *acc.entry((e.source, e.target)).or_insert(0) += p - e.coefficient % p;
        }
        let mut entries: Vec<MapEntry> = acc
            .into_iter()
            .filter(|&(_, c)| c % p != 0)
            .map(|((source, target), c)| MapEntry {
                source,
                target,
                coefficient: c % p,
            })
            .collect();
        entries.sort_by_key(|e| (e.source, e.target));
        Ok(GradedLinearMap {
            prime: p,
            source: self.source.clone(),
            target: self.target.clone(),
            entries,
        })
    }

    /// Checks that every entry preserves degree and Adams weight.
    pub fn check_graded(&self, catalog: &Catalog) -> Result<(), SummandError> {
        for e in &self.entries {
            let (s, t) = (&self.source[e.source], &self.target[e.target]);
            let ws = adams_weight(catalog, &parse_monomial(catalog, &s.name)?);
            let wt = adams_weight(catalog, &parse_monomial(catalog, &t.name)?);
            if s.degree != t.degree || ws != wt {
                return Err(SummandError::Check(format!(
                    "{} ↦ {} is not graded",
                    s.name, t.name
                )));
            }
        }
        Ok(())
    }
}

/// Interior classes of `page` with degree in `degrees`, in page order.
fn basis(page: &SSPage, degrees: (i64, i64)) -> Result<Vec<ClassInfo>, SummandError> {
    let mut out = Vec::new();
    for c in page.classes() {
        if c.degree < degrees.0 || c.degree > degrees.1 {
            continue;
        }
        if !c.interior {
            return Err(SummandError::WindowTooSmall(format!(
                "class {} at degree {} is too close to the spectral sequence window edge",
                c.name, c.degree
            )));
        }
        out.push(c);
    }
    Ok(out)
}

fn index_by_name(classes: &[ClassInfo]) -> HashMap<&str, usize> {
    classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.as_str(), i))
        .collect()
}

fn lookup(
    names: &HashMap<&str, usize>,
    m: &Monomial,
    catalog: &Catalog,
) -> Result<usize, SummandError> {
    let name = m.format(catalog, crate::graded::MonomialStyle::Ascii);
    names
        .get(name.as_str())
        .copied()
        .ok_or(SummandError::BasisLookup(name))
}

struct Parts {
    t: i64,
    mu: i64,
    e1: bool,
    e2: bool,
}

fn parts(catalog: &Catalog, c: &ClassInfo) -> Result<Parts, SummandError> {
    let m = parse_monomial(catalog, &c.name)?;
    let e = |n: &str| catalog.index_of(n).map_or(0, |i| m.exponent(i));
    Ok(Parts {
        t: e("t"),
        mu: e("mu"),
        e1: e("lambda1") == 1,
        e2: e("lambda2") == 1,
    })
}

/// Factors of `t^t λ₁^e1 λ₂^e2`.
fn factors(t: i64, e1: bool, e2: bool) -> Vec<(&'static str, i64)> {
    let mut f = vec![("t", t)];
    if e1 {
        f.push(("lambda1", 1));
    }
    if e2 {
        f.push(("lambda2", 1));
    }
    f
}

/// `can`: `λ₁^ε₁ λ₂^ε₂ t^{kp²} ↦` the class of the same name for `k ≥ 0`, zero
/// on every other class.
pub fn can_map(
    tcminus: &SSPage,
    tp: &SSPage,
    degrees: (i64, i64),
) -> Result<GradedLinearMap, SummandError> {
    let p = tp.prime();
    let p2 = (p * p) as i64;
    let catalog = tp.presentation().catalog().clone();
    let mut map = GradedLinearMap::new(p, basis(tcminus, degrees)?, basis(tp, degrees)?);
    let names = index_by_name(&map.target);
    let mut entries = Vec::new();
    for (i, c) in map.source.iter().enumerate() {
        let x = parts(&catalog, c)?;
        if x.mu == 0 && x.t >= 0 && x.t % p2 == 0 {
            let m = Monomial::from_names(&catalog, &factors(x.t, x.e1, x.e2))?.expect("exterior");
            entries.push(MapEntry {
                source: i,
                target: lookup(&names, &m, &catalog)?,
                coefficient: 1,
            });
        }
    }
    map.entries = entries;
    Ok(map)
}

/// `φ`: `λ₁^ε₁ λ₂^ε₂ μ^k ↦ u(k, ε₁, ε₂)·λ₁^ε₁ λ₂^ε₂ t^{−p²k}`, zero on every other class.
pub fn frobenius_map(
    tcminus: &SSPage,
    tp: &SSPage,
    degrees: (i64, i64),
    unit: FrobeniusUnit,
) -> Result<GradedLinearMap, SummandError> {
    let p = tp.prime();
    let p2 = (p * p) as i64;
    let catalog = tp.presentation().catalog().clone();
    let mut map = GradedLinearMap::new(p, basis(tcminus, degrees)?, basis(tp, degrees)?);
    let names = index_by_name(&map.target);
    let mut entries = Vec::new();
    for (i, c) in map.source.iter().enumerate() {
        let x = parts(&catalog, c)?;
        if x.t == 0 && x.mu >= 0 {
            let m = Monomial::from_names(&catalog, &factors(-p2 * x.mu, x.e1, x.e2))?
                .expect("exterior");
            let u = unit.value(p, x.mu, x.e1, x.e2);
            entries.push(MapEntry {
                source: i,
                target: lookup(&names, &m, &catalog)?,
                coefficient: u,
            });
        }
    }
    map.entries = entries;
    Ok(map)
}

/// `can` on the `E∞`-pages computed in the default spectral sequence window
/// for table degrees `window.degree`.
pub fn build_can(p: u64, window: Window) -> Result<GradedLinearMap, SummandError> {
    let (tcm, tp) = pages(p, window)?;
    can_map(&tcm, &tp, (window.degree.0, window.degree.1 + 1))
}

pub fn build_frobenius(
    p: u64,
    window: Window,
    unit: FrobeniusUnit,
) -> Result<GradedLinearMap, SummandError> {
    let (tcm, tp) = pages(p, window)?;
    frobenius_map(&tcm, &tp, (window.degree.0, window.degree.1 + 1), unit)
}

fn pages(p: u64, window: Window) -> Result<(SSPage, SSPage), SummandError> {
    let ssw = super::ss_window(p, window.degree);
    Ok((super::tcminus_einfty(p, ssw)?, super::tp_einfty(p, ssw)?))
}

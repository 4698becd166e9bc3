use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::BidegreeRule;

/// Populated bidegrees `base + k·period` for all `k ≥ 0`; a zero period is a
/// single bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub label: String,
    pub base: (i64, i64),
    pub period: (i64, i64),
}

impl Family {
    pub fn point(label: &str, degree: i64, weight: i64) -> Family {
        Family {
            label: label.to_string(),
            base: (degree, weight),
            period: (0, 0),
        }
    }

    pub fn tower(label: &str, degree: i64, weight: i64, period: (i64, i64)) -> Family {
        Family {
            label: label.to_string(),
            base: (degree, weight),
            period,
        }
    }

    fn at(&self, k: i64) -> (i64, i64) {
        (
            self.base.0 + k * self.period.0,
            self.base.1 + k * self.period.1,
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidegreeTable {
    pub families: Vec<Family>,
}

impl BidegreeTable {
    pub fn new() -> BidegreeTable {
        BidegreeTable::default()
    }

    pub fn push(&mut self, f: Family) {
        self.families.push(f);
    }
}

/// A possible differential: `d_page` from `source` to `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub page: i64,
    pub source: String,
    pub source_bidegree: (i64, i64),
    pub target: String,
    pub target_bidegree: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineParity {
    pub weight: i64,
    /// `even`, `odd`, or `mixed`: parity of the degrees on this line.
    pub parity: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseReport {
    /// `collapse` or `non-collapse`.
    pub verdict: String,
    pub witnesses: Vec<Witness>,
    pub lines: Vec<LineParity>,
    pub notes: Vec<String>,
}

impl CollapseReport {
    pub fn collapses(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Bound for the exhaustive fallback when no closed-form solve applies.
const SEARCH_LIMIT: i64 = 256;

/// Finds `r ≥ r_min` with `delta = r·dir`.
fn solve_multiple(delta: (i64, i64), dir: (i64, i64), r_min: i64) -> Option<i64> {
    let r = match dir {
        (0, 0) => return (delta == (0, 0)).then_some(r_min),
        (0, b) => {
            if delta.0 != 0 || delta.1 % b != 0 {
                return None;
            }
            delta.1 / b
        }
        (a, b) => {
            if delta.0 % a != 0 {
                return None;
            }
            let r = delta.0 / a;
            if r * b != delta.1 {
                return None;
            }
            r
        }
    };
    (r >= r_min).then_some(r)
}

/// Finds `(i, j, r)` with `i, j ≥ 0`, `r ≥ r_min` and
/// `target(j) = source(i) + shift(r)`.
fn find_pair(s: &Family, t: &Family, rule: &BidegreeRule, r_min: i64) -> Option<(i64, i64, i64)> {
    let d0 = (rule.degree.0, rule.weight.0);
    let dir = (rule.degree.1, rule.weight.1);
    // delta = target − source − shift(0)
    let delta = |i: i64, j: i64| {
        let (a, b) = (s.at(i), t.at(j));
        (b.0 - a.0 - d0.0, b.1 - a.1 - d0.1)
    };
    if s.period == (0, 0) && t.period == (0, 0) {
        return solve_multiple(delta(0, 0), dir, r_min).map(|r| (0, 0, r));
    }
    if s.period == t.period {
        // k = j − i ranges over all integers: k·P − r·D = −Δ
        let p = s.period;
        let base = delta(0, 0);
        let det = -p.0 * dir.1 + dir.0 * p.1;
        if det != 0 {
            let kn = base.0 * dir.1 - dir.0 * base.1;
            let rn = p.1 * base.0 - p.0 * base.1;
            if kn % det != 0 || rn % det != 0 {
                return None;
            }
            let (k, r) = (kn / det, rn / det);
            if r < r_min {
                return None;
            }
            let i = (-k).max(0);
            return Some((i, i + k, r));
        }
        // P ∥ D: scan pages
        for r in r_min..r_min + SEARCH_LIMIT {
            let rest = (r * dir.0 - base.0, r * dir.1 - base.1);
            if let Some(k) = solve_multiple(rest, p, i64::MIN) {
                let i = (-k).max(0);
                return Some((i, i + k, r));
            }
        }
        return None;
    }
    for i in 0..SEARCH_LIMIT {
        for j in 0..SEARCH_LIMIT {
            if let Some(r) = solve_multiple(delta(i, j), dir, r_min) {
                return Some((i, j, r));
            }
            if t.period == (0, 0) {
                break;
            }
        }
        if s.period == (0, 0) {
            break;
        }
    }
    None
}

/// Looks for every populated source/target pair of a `d_r`, `r ≥ r_min`.
/// Families repeat forever, so a pair is searched exactly when both families
/// share a period and by bounded search otherwise.
pub fn collapse_check(table: &BidegreeTable, rule: &BidegreeRule, r_min: i64) -> CollapseReport {
    let mut witnesses = Vec::new();
    for s in &table.families {
        for t in &table.families {
            if let Some((i, j, r)) = find_pair(s, t, rule, r_min) {
                witnesses.push(Witness {
                    page: r,
                    source: s.label.clone(),
                    source_bidegree: s.at(i),
                    target: t.label.clone(),
                    target_bidegree: t.at(j),
                });
            }
        }
    }
    let mut parity: BTreeMap<i64, (bool, bool)> = BTreeMap::new();
    for f in &table.families {
        let entry = parity.entry(f.base.1).or_insert((false, false));
        if f.period.0 % 2 != 0 {
            *entry = (true, true);
        } else if f.base.0.rem_euclid(2) == 0 {
            entry.0 = true;
        } else {
            entry.1 = true;
        }
    }
    let lines = parity
        .into_iter()
        .map(|(weight, (even, odd))| LineParity {
            weight,
            parity: match (even, odd) {
                (true, false) => "even",
                (false, true) => "odd",
                _ => "mixed",
            }
            .to_string(),
        })
        .collect();
    CollapseReport {
        verdict: if witnesses.is_empty() {
            "collapse"
        } else {
            "non-collapse"
        }
        .to_string(),
        witnesses,
        lines,
        notes: Vec::new(),
    }
}

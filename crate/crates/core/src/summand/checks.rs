use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{require_prime, syntomic_table, GeneratorTable, Origin, SummandError};
use crate::formal_group::{p_series, Ideal};
use crate::graded::{Catalog, Generator, Monomial};
use crate::ss::{
    collapse_check, AlgebraPresentation, BidegreeRule, BidegreeTable, CollapseReport, Family,
    Window,
};

/// Outcome of the Hodge–Tate comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeTateReport {
    pub prime: u64,
    /// `c` in `[p](t) ≡ c·v₂t^{p²} mod (p, v₁, t^{p²+1})`.
    pub unit: u64,
    pub leading: String,
    pub degrees_checked: usize,
    /// `(degree, dim F_p[t^{±p²}]⊗Λ, dim Λ⊗F_p[μ^{±1}])`.
    pub dims: Vec<(i64, usize, usize)>,
}

fn degree_dims(
    p: u64,
    periodic: (&str, i64),
    degrees: (i64, i64),
) -> Result<BTreeMap<i64, usize>, SummandError> {
    let pi = p as i64;
    let catalog = Arc::new(Catalog::new(vec![
        Generator::new(periodic.0, periodic.1, 0),
        Generator::new("lambda1", 2 * pi - 1, 0),
        Generator::new("lambda2", 2 * pi * pi - 1, 0),
    ])?);
    let mut pres = AlgebraPresentation::new(p, catalog.clone())?;
    pres.set_invertible(periodic.0)?;
    let mut dims: BTreeMap<i64, usize> = (degrees.0..=degrees.1).map(|d| (d, 0)).collect();
    for m in pres.enumerate(&Window::new(degrees, (0, 0)))? {
        *dims.get_mut(&m.degree(&catalog)).expect("degree in window") += 1;
    }
    Ok(dims)
}

/// Checks that `[p](t)` mod `(p, v₁)` is a unit times `v₂t^{p²}` up to higher
/// order, and that `F_p[t^{±p²}] ⊗ Λ(λ₁, λ₂)` and `Λ(λ₁, λ₂) ⊗ F_p[μ^{±1}]`
/// have the same dimension in every degree of `degrees`.
pub fn hodge_tate_check(p: u64, degrees: (i64, i64)) -> Result<HodgeTateReport, SummandError> {
    require_prime(p)?;
    let pi = p as i64;
    let series = p_series(p, pi * pi + 1, &Ideal::invariant_prime(2))?;
    let catalog = series.catalog().clone();
    let v2t = Monomial::from_names(&catalog, &[("v2", 1), ("t", pi * pi)])?.expect("even factors");
    let c = series
        .poly
        .coefficient(&v2t)
        .to_i64()
        .unwrap_or(0)
        .rem_euclid(pi) as u64;
    if series.poly.len() != 1 || c == 0 {
        return Err(SummandError::Check(format!(
            "[{p}](t) mod (p, v1) = {}, expected a unit times v2·t^{}",
            series.display(true),
            pi * pi
        )));
    }
    let mut report = HodgeTateReport {
        prime: p,
        unit: c,
        leading: series.display(true),
        degrees_checked: 0,
        dims: Vec::new(),
    };
    if degrees.0 > degrees.1 {
        return Ok(report);
    }
    let a = degree_dims(p, ("T", -2 * pi * pi), degrees)?;
    let b = degree_dims(p, ("mu", 2 * pi * pi), degrees)?;
    for (d, &x) in &a {
        let y = b[d];
        if x != y {
            return Err(SummandError::Check(format!(
                "degree {d}: {x} classes against {y}"
            )));
        }
        report.dims.push((*d, x, y));
    }
    report.degrees_checked = report.dims.len();
    Ok(report)
}

fn parity_notes(table: &GeneratorTable) -> Vec<String> {
    let p = table.prime as i64;
    let period = 2 * p * p - 2;
    let mut notes = vec![
        "every d_r lowers degree by one and raises weight by r".to_string(),
        "lines 0 and 2 lie in even degrees and lines 1 and 3 in odd degrees, so d_2 and any d_r between lines of equal parity vanish"
            .to_string(),
        format!(
            "the only candidates are d_3 from line 0 (degrees = 0 mod {period}) to line 3 (degrees = {} mod {period}); d_3 lands in degrees = -1 mod {period}, which line 3 never occupies",
            (2 * p - 1).rem_euclid(period)
        ),
    ];
    if p == 2 {
        notes.push("p = 2: the chart-level statement only".into());
    }
    notes
}

/// Collapse check for the motivic spectral sequence whose `E₂`-page is
/// `table ⊗ F_p[v₂]`, with `v₂` on the 0-line in degree `2p² − 2`.
pub fn motivic_collapse_from_table(table: &GeneratorTable) -> CollapseReport {
    let p = table.prime as i64;
    let period = (2 * p * p - 2, 0);
    let mut chart = BidegreeTable::new();
    for e in &table.generators {
        chart.push(Family::tower(&e.name, e.degree, e.weight, period));
    }
    let mut report = collapse_check(&chart, &BidegreeRule::adams(), 2);
    report.notes.extend(parity_notes(table));
    report
}

pub fn motivic_collapse_check(p: u64) -> Result<CollapseReport, SummandError> {
    Ok(motivic_collapse_from_table(&syntomic_table(p, None)?))
}

/// Collapse check for the `v₂`-Bockstein spectral sequence on the finite
/// chart `table`, with `(n, a) = (2p² − 2, p² − 1)`.
pub fn v2_bockstein_from_table(table: &GeneratorTable) -> CollapseReport {
    let p = table.prime as i64;
    let mut chart = BidegreeTable::new();
    for e in &table.generators {
        chart.push(Family::point(&e.name, e.degree, e.weight));
    }
    let mut report = collapse_check(
        &chart,
        &BidegreeRule::bockstein(2 * p * p - 2, p * p - 1),
        1,
    );
    let kernel = table
        .generators
        .iter()
        .filter(|e| e.origin == Origin::Kernel)
        .count();
    report.notes.push(format!(
        "{} generators ({kernel} kernel, {} cokernel); v2 has bidegree ({}, {})",
        table.len(),
        table.len() - kernel,
        2 * p * p - 2,
        p * p - 1
    ));
    report
}

pub fn v2_bockstein_check(p: u64) -> Result<CollapseReport, SummandError> {
    Ok(v2_bockstein_from_table(&syntomic_table(p, None)?))
}

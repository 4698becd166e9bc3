use std::fmt::Write;

use serde::{Deserialize, Serialize};
use synto_core::formal_group::TruncatedSeries;
use synto_core::graded::MonomialStyle;
use synto_core::ss::PageLog;
use synto_core::summand::{GeneratorTable, Origin, TableEntry};

use crate::{generated_by, CliError};

const BOLD: &str = "\x1b[1m";
const DIM: &str = "\x1b[2m";
const RESET: &str = "\x1b[0m";

/// Human-readable table, one row per generator.
pub fn table_text(table: &GeneratorTable, color: bool) -> String {
    let (b, d, r) = if color {
        (BOLD, DIM, RESET)
    } else {
        ("", "", "")
    };
    let mut s = String::new();
    let _ = writeln!(s, "{d}# {}{r}", generated_by());
    let _ = writeln!(
        s,
        "{b}free over F_p[v₂] on these generators{r} (p = {}, {} generators, |v₂| = ({}, {}))",
        table.prime,
        table.len(),
        table.v2_bidegree[0],
        table.v2_bidegree[1]
    );
    let _ = writeln!(
        s,
        "{:>6}  {:>6}  {:<10}  {:<22}  name",
        "weight", "degree", "origin", "generator"
    );
    for e in &table.generators {
        let _ = writeln!(
            s,
            "{:>6}  {:>6}  {:<10}  {:<22}  {}",
            e.weight,
            e.degree,
            e.origin.to_string(),
            e.label(),
            e.name
        );
    }
    for n in &table.notes {
        let _ = writeln!(s, "{d}note: {n}{r}");
    }
    s
}

/// JSON in the published schema; stable key order, trailing newline.
pub fn table_json(table: &GeneratorTable) -> String {
    serde_json::to_string_pretty(table).expect("tables serialize") + "\n"
}

pub fn table_csv(table: &GeneratorTable) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for e in &table.generators {
        w.serialize(e)
            .map_err(|e| CliError::Assertion(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Assertion(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Entries of a CSV written by [`table_csv`].
pub fn read_csv(text: &str) -> Result<Vec<TableEntry>, CliError> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<TableEntry>, _>>()
        .map_err(|e| CliError::Usage(format!("bad table csv: {e}")))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub power: i64,
    pub coefficient: String,
    pub monomial: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub series: String,
    pub prime: u64,
    pub ideal: String,
    pub truncation: i64,
    pub text: String,
    pub terms: Vec<SeriesTerm>,
}

pub fn series_json(series: &TruncatedSeries, kind: &str) -> String {
    let catalog = series.catalog();
    let t = catalog.require("t").expect("series in t");
    let mut terms: Vec<SeriesTerm> = series
        .poly
        .terms()
        .map(|(m, c)| SeriesTerm {
            power: m.exponent(t),
            coefficient: c.to_string(),
            monomial: m.with_exponent(t, 0).format(catalog, MonomialStyle::Ascii),
        })
        .collect();
    terms.sort_by(|a, b| (a.power, &a.monomial).cmp(&(b.power, &b.monomial)));
    let out = SeriesJson {
        series: kind.to_string(),
        prime: series.prime,
        ideal: series.ideal.to_string(),
        truncation: series.bound,
        text: series.display(true),
        terms,
    };
    serde_json::to_string_pretty(&out).expect("series serialize") + "\n"
}

/// Bigraded dimensions and differentials page by page, then the survivors.
pub fn page_log_text(log: &PageLog) -> String {
    let mut s = String::new();
    for rec in &log.pages {
        let total: usize = rec.dims.iter().map(|d| d.dim).sum();
        let _ = writeln!(
            s,
            "E{} page: {} classes in {} bidegrees",
            rec.page,
            total,
            rec.dims.len()
        );
        for d in &rec.dims {
            let _ = writeln!(s, "  ({}, {}): {}", d.degree, d.weight, d.dim);
        }
        for d in &rec.differentials {
            let _ = writeln!(s, "  d{}({}) = {}", rec.page, d.source, d.target);
        }
    }
    let _ = writeln!(s, "stable from E{}", log.stable_from);
    let _ = writeln!(s, "survivors: {}", log.survivors.len());
    for c in &log.survivors {
        let mark = if c.interior { "" } else { " (edge)" };
        let _ = writeln!(s, "  ({}, {}) {}{mark}", c.degree, c.weight, c.name);
    }
    s
}

/// Kernel and cokernel counts, for summaries.
pub fn origin_counts(table: &GeneratorTable) -> (usize, usize) {
    let k = table
        .generators
        .iter()
        .filter(|e| e.origin == Origin::Kernel)
        .count();
    (k, table.len() - k)
}

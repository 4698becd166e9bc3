use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::bockstein::{check_tcminus, check_tp};
use super::checks::{hodge_tate_check, HodgeTateReport};
use super::{
    adams_weight, can_map, derive_differentials, frobenius_map, require_prime, run_tcminus, run_tp,
    ss_window, FrobeniusUnit, SummandError,
};
use crate::graded::Catalog;
use crate::linalg::{kernel, rank, Echelon, SparseVec};
use crate::ss::{parse_monomial, PageLog, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Kernel,
    Cokernel,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Kernel => "kernel",
            Origin::Cokernel => "cokernel",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
    pub origin: Origin,
}

impl TableEntry {
    /// Display form of the ASCII name, e.g. `∂λ₁λ₂` or `t⁵λ₂`.
    pub fn label(&self) -> String {
        pretty_name(&self.name)
    }
}

/// Turns an ASCII class name (`del`, `lambda1`, `t^-9`, ...) into its display form.
pub fn pretty_name(name: &str) -> String {
    let mut out = String::new();
    let mut rest = name;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("del") {
            out.push('∂');
            rest = r;
        } else if let Some(r) = rest.strip_prefix("lambda1") {
            out.push_str("λ₁");
            rest = r;
        } else if let Some(r) = rest.strip_prefix("lambda2") {
            out.push_str("λ₂");
            rest = r;
        } else if let Some(r) = rest.strip_prefix("mu") {
            out.push('μ');
            rest = r;
        } else if let Some(r) = rest.strip_prefix('^') {
            let end = r
                .char_indices()
                .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                .map_or(r.len(), |(i, _)| i);
            out.extend(r[..end].chars().map(superscript));
            rest = &r[end..];
        } else {
            let c = rest.chars().next().unwrap();
            out.push(c);
            rest = &rest[c.len_utf8()..];
        }
    }
    out
}

fn superscript(c: char) -> char {
    match c {
        '-' => '⁻',
        '0' => '⁰',
        '1' => '¹',
        '2' => '²',
        '3' => '³',
        '4' => '⁴',
        '5' => '⁵',
        '6' => '⁶',
        '7' => '⁷',
        '8' => '⁸',
        '9' => '⁹',
        c => c,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableConvention {
    pub frobenius_unit: FrobeniusUnit,
    pub generators: String,
}

/// Generators of mod `(p, v₁)` syntomic cohomology as a free `F_p[v₂]`-module.
/// Serializes to the tool's JSON schema (field order is significant).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorTable {
    pub prime: u64,
    pub convention: TableConvention,
    pub module: String,
    pub v2_bidegree: [i64; 2],
    pub generators: Vec<TableEntry>,
    pub notes: Vec<String>,
}

impl GeneratorTable {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Sorted `(degree, weight)` multiset.
    pub fn positions(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = self
            .generators
            .iter()
            .map(|e| (e.degree, e.weight))
            .collect();
        v.sort();
        v
    }

    pub fn get(&self, name: &str) -> Option<&TableEntry> {
        self.generators.iter().find(|e| e.name == name)
    }

    /// Sorts entries by `(weight, −degree)`, kernel before cokernel, then name.
    pub fn sort(&mut self) {
        self.generators.sort_by(|a, b| {
            (a.weight, -a.degree, a.origin, &a.name).cmp(&(b.weight, -b.degree, b.origin, &b.name))
        });
    }

    /// Checks the ordering and name uniqueness invariants.
    pub fn validate(&self) -> Result<(), SummandError> {
        let mut names = BTreeSet::new();
        for e in &self.generators {
            if !names.insert(&e.name) {
                return Err(SummandError::Check(format!(
                    "duplicate generator {}",
                    e.name
                )));
            }
        }
        let key = |e: &TableEntry| (e.weight, -e.degree);
        if self.generators.windows(2).any(|w| key(&w[0]) > key(&w[1])) {
            return Err(SummandError::Check(
                "generators are not sorted by (weight, -degree)".into(),
            ));
        }
        Ok(())
    }
}

/// Degrees `[−2, 2p²+2p+2]`, weights `[0, 2p²]`.
pub fn default_window(p: u64) -> Window {
    let p = p as i64;
    Window::new((-2, 2 * p * p + 2 * p + 2), (0, 2 * p * p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub prime: u64,
    pub window: Option<Window>,
    pub unit: FrobeniusUnit,
    pub verify: bool,
}

impl PipelineConfig {
    pub fn new(prime: u64) -> PipelineConfig {
        PipelineConfig {
            prime,
            window: None,
            unit: FrobeniusUnit::One,
            verify: true,
        }
    }
}

/// Per-degree bookkeeping: generators of degree `n` versus
/// `dim ker(φ−can)_n + dim coker(φ−can)_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBookkeeping {
    pub degree: i64,
    pub generators: usize,
    pub kernel: usize,
    pub cokernel_above: usize,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub table: GeneratorTable,
    pub differentials: Vec<String>,
    pub derivation_checks: Vec<String>,
    pub tp_log: PageLog,
    pub tcminus_log: PageLog,
    pub bookkeeping: Vec<DegreeBookkeeping>,
    pub hodge_tate: Option<HodgeTateReport>,
    /// Names of the verification steps that ran.
    pub verified: Vec<String>,
}

fn weight_of(catalog: &Catalog, name: &str) -> Result<i64, SummandError> {
    Ok(adams_weight(catalog, &parse_monomial(catalog, name)?))
}

fn notes(p: u64) -> Vec<String> {
    let pi = p as i64;
    vec![
        format!("free over F_p[v2] on these generators; v2 is detected by t*mu in bidegree ({}, {})", 2 * pi * pi - 2, pi * pi - 1),
        format!(
            "degree of t^d lambda1lambda2 is 2p^2+2p-2-2d = {}-2d, consistent with |t| = -2; the closed form 2p^2-2p-2d-2 disagrees and is not used",
            2 * pi * pi + 2 * pi - 2
        ),
        "the d=0 members of the two lambda1lambda2 families coincide and are listed once".into(),
        "right unit computed with t1 -> -t1 so that eta_R(t) = t + t1 t^p mod (p, v1)".into(),
        "Frobenius units are 1 on k=0 classes; other units only rescale and do not change the table".into(),
    ]
}

/// Runs the full pipeline: differentials, both spectral sequences, `can`, `φ`,
/// and the degreewise kernel and cokernel of `φ − can`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutput, SummandError> {
    let p = config.prime;
    require_prime(p)?;
    let pi = p as i64;
    let window = config.window.unwrap_or_else(|| default_window(p));
    let top = 2 * pi * pi + 2 * pi - 2;
    if window.degree.0 > -1 || window.degree.1 < top || window.weight.0 > 0 || window.weight.1 < 3 {
        return Err(SummandError::WindowTooSmall(format!(
            "table window degrees [{}, {}] weights [{}, {}] must contain degrees [-1, {top}] and weights [0, 3]",
            window.degree.0, window.degree.1, window.weight.0, window.weight.1
        )));
    }
    let mut verified = Vec::new();
    let derived = derive_differentials(p)?;
    let catalog = derived.catalog.clone();
    let ssw = ss_window(p, window.degree);
    let (tp, tp_log) = run_tp(&derived, ssw)?;
    let (tcm, tcminus_log) = run_tcminus(&derived, ssw)?;
    if config.verify {
        check_tp(&tp)?;
        check_tcminus(&tcm)?;
        verified.push("tp closed form".to_string());
        verified.push("tcminus closed form".to_string());
    }

    let degrees = (window.degree.0, window.degree.1 + 1);
    let can = can_map(&tcm, &tp, degrees)?;
    let phi = frobenius_map(&tcm, &tp, degrees, config.unit)?;
    can.check_graded(&catalog)?;
    phi.check_graded(&catalog)?;
    let f = phi.difference(&can)?;

    let mut generators = Vec::new();
    let mut bookkeeping = Vec::new();
    for n in window.degree.0..=window.degree.1 {
        let (src, _, cols) = f.matrix_in_degree(n);
        let ker = kernel(&cols, p);
        let before = generators.len();
        for piv in ker.pivots() {
            let c = &f.source[src[piv]];
            generators.push(TableEntry {
                name: c.name.clone(),
                degree: n,
                weight: weight_of(&catalog, &c.name)?,
                origin: Origin::Kernel,
            });
        }
        let (_, tgt, cols_above) = f.matrix_in_degree(n + 1);
        let image = Echelon::span(cols_above.iter().cloned(), p);
        let pivots: BTreeSet<usize> = image.pivots().collect();
        for (k, &t) in tgt.iter().enumerate() {
            if pivots.contains(&k) {
                continue;
            }
            let c = &f.target[t];
            let name = if c.name == "1" {
                "del".to_string()
            } else {
                format!("del{}", c.name)
            };
            generators.push(TableEntry {
                name,
                degree: n,
                weight: weight_of(&catalog, &c.name)? + 1,
                origin: Origin::Cokernel,
            });
        }
        bookkeeping.push(DegreeBookkeeping {
            degree: n,
            generators: generators.len() - before,
            kernel: src.len() - rank(&cols, p),
            cokernel_above: tgt.len() - rank(&cols_above, p),
        });
    }
    generators.retain(|e| window.weight.0 <= e.weight && e.weight <= window.weight.1);

    let mut table = GeneratorTable {
        prime: p,
        convention: TableConvention {
            frobenius_unit: config.unit,
            generators: "hazewinkel".into(),
        },
        module: "free_over_v2".into(),
        v2_bidegree: [2 * pi * pi - 2, pi * pi - 1],
        generators,
        notes: notes(p),
    };
    table.sort();

    let mut hodge_tate = None;
    if config.verify {
        table.validate()?;
        for b in &bookkeeping {
            if b.generators != b.kernel + b.cokernel_above {
                return Err(SummandError::Check(format!(
                    "bookkeeping fails in degree {}",
                    b.degree
                )));
            }
        }
        verified.push("bookkeeping".into());
        injectivity(
            &can,
            &catalog,
            |t, mu| mu == 0 && t >= 0 && t % (pi * pi) == 0,
            "can",
        )?;
        injectivity(&phi, &catalog, |t, mu| t == 0 && mu >= 0, "phi")?;
        verified.push("injectivity".into());
        check_shape(&table)?;
        verified.push("generator count".into());
        hodge_tate = Some(hodge_tate_check(p, (0, 4 * pi * pi))?);
        verified.push("hodge-tate".into());
    }

    Ok(PipelineOutput {
        table,
        differentials: derived.spec.describe(&catalog),
        derivation_checks: derived.checks,
        tp_log,
        tcminus_log,
        bookkeeping,
        hodge_tate,
        verified,
    })
}

/// The map restricted to sources selected by their `(t, μ)` exponents must
/// have full rank.
fn injectivity(
    map: &super::GradedLinearMap,
    catalog: &Catalog,
    select: impl Fn(i64, i64) -> bool,
    what: &str,
) -> Result<(), SummandError> {
    let (t, mu) = (catalog.require("t")?, catalog.require("mu")?);
    let mut cols = Vec::new();
    for (i, c) in map.source.iter().enumerate() {
        let m = parse_monomial(catalog, &c.name)?;
        if select(m.exponent(t), m.exponent(mu)) {
            let pairs = map
                .entries
                .iter()
                .filter(|e| e.source == i)
                .map(|e| (e.target, e.coefficient as i64));
            cols.push(SparseVec::from_pairs(pairs, map.prime));
        }
    }
    if rank(&cols, map.prime) != cols.len() {
        return Err(SummandError::Check(format!(
            "{what} is not injective on its distinguished classes"
        )));
    }
    Ok(())
}

/// `4p + 4` generators, and the cokernel part is exactly `∂, ∂λ₁, ∂λ₂, ∂λ₁λ₂`
/// one degree below the corresponding `TP` class.
fn check_shape(table: &GeneratorTable) -> Result<(), SummandError> {
    let p = table.prime as i64;
    if table.len() as i64 != 4 * p + 4 {
        return Err(SummandError::Check(format!(
            "{} generators, expected {}",
            table.len(),
            4 * p + 4
        )));
    }
    let expected = [
        ("del", -1),
        ("dellambda1", 2 * p - 2),
        ("dellambda2", 2 * p * p - 2),
        ("dellambda1lambda2", 2 * p * p + 2 * p - 3),
    ];
    let got: BTreeSet<(String, i64)> = table
        .generators
        .iter()
        .filter(|e| e.origin == Origin::Cokernel)
        .map(|e| (e.name.clone(), e.degree))
        .collect();
    let want: BTreeSet<(String, i64)> = expected.iter().map(|&(n, d)| (n.to_string(), d)).collect();
    if got != want {
        return Err(SummandError::Check(format!(
            "cokernel classes {got:?}, expected {want:?}"
        )));
    }
    Ok(())
}

/// The generator table in `window` (default window if `None`), with every
/// verification step.
pub fn syntomic_table(p: u64, window: Option<Window>) -> Result<GeneratorTable, SummandError> {
    let mut config = PipelineConfig::new(p);
    config.window = window;
    Ok(run_pipeline(&config)?.table)
}

//! The pipeline for the connective Adams summand `ℓ` mod `(p, v₁)`.
//!
//! From the formal group law we derive the t-Bockstein differentials, run
//! the spectral sequences for `TC⁻` and `TP`, build `can` and `φ` on their
//! `E∞`-pages, and read off the syntomic generator table degreewise from the
//! two-term complex `φ − can`.

mod bockstein;
mod checks;
mod differentials;
mod maps;
mod table;

pub use bockstein::{
    run_tcminus, run_tp, ss_window, tcminus_closed_form, tcminus_einfty, tcminus_presentation,
    tp_closed_form, tp_einfty, tp_presentation,
};
pub use checks::{
    hodge_tate_check, motivic_collapse_check, motivic_collapse_from_table, v2_bockstein_check,
    v2_bockstein_from_table, HodgeTateReport,
};
pub use differentials::{derive_differentials, DerivedDifferentials};
pub use maps::{build_can, build_frobenius, can_map, frobenius_map, GradedLinearMap, MapEntry};
pub use table::{
    default_window, run_pipeline, syntomic_table, GeneratorTable, Origin, PipelineConfig,
    PipelineOutput, TableConvention, TableEntry,
};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formal_group::FormalGroupError;
use crate::graded::{Catalog, GradedError, Monomial};
use crate::ss::SsError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SummandError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("sign convention mismatch: {0}")]
    SignConvention(String),
    #[error("{run} E∞ differs from its closed form; missing {missing:?}, unexpected {extra:?}")]
    ClosedForm {
        run: String,
        missing: Vec<String>,
        extra: Vec<String>,
    },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("no class named `{0}` in the target basis")]
    BasisLookup(String),
    #[error(transparent)]
    Ss(#[from] SsError),
    #[error(transparent)]
    FormalGroup(#[from] FormalGroupError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

pub(crate) fn require_prime(p: u64) -> Result<(), SummandError> {
    if crate::graded::is_prime(p) {
        Ok(())
    } else {
        Err(SummandError::NotPrime(p))
    }
}

/// The axiomatic inputs: `THH` mod `(p, v₁)` is `Λ(λ₁, λ₂) ⊗ F_p[μ]`, the
/// Frobenius inverts `μ`, and `λ₁, λ₂, μ` are represented in the cobar
/// complex by `σ²t₁, (σ²t₁)^p, σ²v₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSet {
    pub prime: u64,
    pub catalog: Arc<Catalog>,
    pub segal: bool,
    pub identifications: Vec<(String, String)>,
}

impl AxiomSet {
    pub fn standard(p: u64) -> Result<AxiomSet, SummandError> {
        require_prime(p)?;
        Ok(AxiomSet {
            prime: p,
            catalog: Catalog::thh(p),
            segal: true,
            identifications: vec![
                ("lambda1".into(), "sigma2t1".into()),
                ("lambda2".into(), format!("sigma2t1^{p}")),
                ("mu".into(), "sigma2v2".into()),
            ],
        })
    }

    /// Checks the degrees against `|λ₁| = 2p−1`, `|λ₂| = 2p²−1`, `|μ| = 2p²`.
    pub fn validate(&self) -> Result<(), SummandError> {
        let p = self.prime as i64;
        for (name, deg) in [
            ("t", -2),
            ("lambda1", 2 * p - 1),
            ("lambda2", 2 * p * p - 1),
            ("mu", 2 * p * p),
        ] {
            let g = self.catalog.get(self.catalog.require(name)?);
            if g.degree != deg {
                return Err(SummandError::Check(format!(
                    "|{name}| = {} ≠ {deg}",
                    g.degree
                )));
            }
        }
        Ok(())
    }
}

/// Number of `λ` factors: the Adams weight of a class on the `E∞`-pages.
pub fn adams_weight(catalog: &Catalog, m: &Monomial) -> i64 {
    m.factors()
        .filter(|&(i, _)| catalog.get(i).is_odd())
        .count() as i64
}

/// Choice of the units `u(k, ε₁, ε₂) ∈ F_p^×` in `φ(λ₁^ε₁ λ₂^ε₂ μ^k) = u·λ₁^ε₁ λ₂^ε₂ t^{−p²k}`
/// for `k ≥ 1`. At `k = 0` the unit is always 1: `φ` and `can` agree on
/// `1, λ₁, λ₂, λ₁λ₂`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrobeniusUnit {
    #[default]
    One,
    MinusOne,
    /// A non-constant choice, `u = 1 + (k + 2ε₁ + 3ε₂ mod (p − 1))`.
    Indexed,
}

impl FrobeniusUnit {
    pub fn value(&self, p: u64, k: i64, e1: bool, e2: bool) -> u64 {
        if k == 0 {
            return 1;
        }
        match self {
            FrobeniusUnit::One => 1,
            FrobeniusUnit::MinusOne => p - 1,
            FrobeniusUnit::Indexed => {
                let s = k + 2 * e1 as i64 + 3 * e2 as i64;
                1 + s.rem_euclid(p as i64 - 1) as u64
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FrobeniusUnit::One => "one",
            FrobeniusUnit::MinusOne => "minus-one",
            FrobeniusUnit::Indexed => "indexed",
        }
    }
}

impl fmt::Display for FrobeniusUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrobeniusUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<FrobeniusUnit, String> {
        match s {
            "one" => Ok(FrobeniusUnit::One),
            "minus-one" => Ok(FrobeniusUnit::MinusOne),
            "indexed" => Ok(FrobeniusUnit::Indexed),
            _ => Err(format!(
                "unknown Frobenius unit convention `{s}` (one, minus-one, indexed)"
            )),
        }
    }
}

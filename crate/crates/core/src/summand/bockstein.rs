use std::collections::BTreeSet;
use std::sync::Arc;

use super::{derive_differentials, DerivedDifferentials, SummandError};
use crate::graded::{Catalog, Monomial, MonomialStyle};
use crate::ss::{
    build_page, run_to_stable, AlgebraPresentation, BidegreeRule, PageLog, SSPage, Window,
};

/// `F_p[t^{±1}] ⊗ Λ(λ₁, λ₂)`, graded by (degree, t-adic filtration).
pub fn tp_presentation(p: u64, catalog: Arc<Catalog>) -> Result<AlgebraPresentation, SummandError> {
    let mut pres = AlgebraPresentation::new(p, catalog)?;
    pres.set_invertible("t")?;
    pres.set_max_exponent("mu", 0)?;
    Ok(pres)
}

/// `F_p[t, μ]/(tμ) ⊗ Λ(λ₁, λ₂)`.
pub fn tcminus_presentation(
    p: u64,
    catalog: Arc<Catalog>,
) -> Result<AlgebraPresentation, SummandError> {
    let mut pres = AlgebraPresentation::new(p, catalog.clone())?;
    let tmu = Monomial::from_names(&catalog, &[("t", 1), ("mu", 1)])?.expect("even factors");
    pres.add_relation(tmu)?;
    Ok(pres)
}

/// Spectral sequence window whose interior holds every `E∞` class in degrees
/// `[a, b + 1]` for a table degree window `[a, b]`.
pub fn ss_window(p: u64, degrees: (i64, i64)) -> Window {
    let pi = p as i64;
    let (a, b) = degrees;
    let top = 2 * pi * pi + 2 * pi - 2; // |λ₁λ₂|
                                        // filtration j of t^j·X with |X| ∈ [0, top] and degree in [a, b + 1]
    let jmin = (-b - 1).div_euclid(2);
    let jmax = (top - a + 1).div_euclid(2);
    let fm = pi + pi * pi;
    Window::new((a - 2, b + 3), (jmin - fm, jmax + fm))
}

fn max_page(p: u64) -> u32 {
    (p * p + 1) as u32
}

fn run(
    pres: &AlgebraPresentation,
    derived: &DerivedDifferentials,
    window: Window,
) -> Result<(SSPage, PageLog), SummandError> {
    let e1 = build_page(pres, window)?;
    Ok(run_to_stable(
        &e1,
        &derived.spec,
        &BidegreeRule::adams(),
        max_page(derived.prime),
    )?)
}

pub fn run_tp(
    derived: &DerivedDifferentials,
    window: Window,
) -> Result<(SSPage, PageLog), SummandError> {
    run(
        &tp_presentation(derived.prime, derived.catalog.clone())?,
        derived,
        window,
    )
}

pub fn run_tcminus(
    derived: &DerivedDifferentials,
    window: Window,
) -> Result<(SSPage, PageLog), SummandError> {
    run(
        &tcminus_presentation(derived.prime, derived.catalog.clone())?,
        derived,
        window,
    )
}

type Named = BTreeSet<(String, i64, i64)>;

fn named(catalog: &Catalog, factors: &[(&str, i64)]) -> Option<(String, (i64, i64))> {
    let m = Monomial::from_names(catalog, factors).ok()??;
    Some((m.format(catalog, MonomialStyle::Ascii), m.bidegree(catalog)))
}

fn exterior() -> [Vec<(&'static str, i64)>; 4] {
    [
        vec![],
        vec![("lambda1", 1)],
        vec![("lambda2", 1)],
        vec![("lambda1", 1), ("lambda2", 1)],
    ]
}

fn collect(catalog: &Catalog, interior: &Window, out: &mut Named, factors: Vec<(&str, i64)>) {
    if let Some((name, b)) = named(catalog, &factors) {
        if interior.contains(b) {
            out.insert((name, b.0, b.1));
        }
    }
}

/// `F_p[t^{±p²}] ⊗ Λ(λ₁, λ₂)` restricted to `interior`.
pub fn tp_closed_form(p: u64, catalog: &Catalog, interior: &Window) -> Named {
    let p2 = (p * p) as i64;
    let mut out = Named::new();
    if interior.is_empty() {
        return out;
    }
    // filtration of t^{p²k}·X is p²k
    let kmin = interior.weight.0.div_euclid(p2) - 1;
    let kmax = interior.weight.1.div_euclid(p2) + 1;
    for k in kmin..=kmax {
        for x in exterior() {
            let mut f = x.clone();
            f.push(("t", p2 * k));
            collect(catalog, interior, &mut out, f);
        }
    }
    out
}

/// `F_p[t^{p²}, μ]/(t^{p²}μ) ⊗ Λ(λ₁, λ₂)` plus the leftover families
/// `t^d λ₁, t^{pd} λ₂, t^d λ₁λ₂, t^{pd} λ₁λ₂` for `0 < d < p`, restricted to `interior`.
pub fn tcminus_closed_form(p: u64, catalog: &Catalog, interior: &Window) -> Named {
    let pi = p as i64;
    let p2 = pi * pi;
    let mut out = Named::new();
    if interior.is_empty() {
        return out;
    }
    let kmax = interior.weight.1.max(0) / p2 + 1;
    for k in 0..=kmax {
        for x in exterior() {
            let mut f = x.clone();
            f.push(("t", p2 * k));
            collect(catalog, interior, &mut out, f);
        }
    }
    // μ^k has degree 2p²k
    let mmax = interior.degree.1.max(0) / (2 * p2) + 1;
    for k in 1..=mmax {
        for x in exterior() {
            let mut f = x.clone();
            f.push(("mu", k));
            collect(catalog, interior, &mut out, f);
        }
    }
    for d in 1..pi {
        collect(catalog, interior, &mut out, vec![("t", d), ("lambda1", 1)]);
        collect(
            catalog,
            interior,
            &mut out,
            vec![("t", pi * d), ("lambda2", 1)],
        );
        collect(
            catalog,
            interior,
            &mut out,
            vec![("t", d), ("lambda1", 1), ("lambda2", 1)],
        );
        collect(
            catalog,
            interior,
            &mut out,
            vec![("t", pi * d), ("lambda1", 1), ("lambda2", 1)],
        );
    }
    out
}

fn compare(run: &str, page: &SSPage, expected: &Named) -> Result<(), SummandError> {
    let got: Named = page
        .classes()
        .into_iter()
        .filter(|c| c.interior)
        .map(|c| (c.name, c.degree, c.weight))
        .collect();
    if &got == expected {
        return Ok(());
    }
    Err(SummandError::ClosedForm {
        run: run.to_string(),
        missing: expected.difference(&got).map(|c| c.0.clone()).collect(),
        extra: got.difference(expected).map(|c| c.0.clone()).collect(),
    })
}

pub(crate) fn check_tp(page: &SSPage) -> Result<(), SummandError> {
    let p = page.prime();
    compare(
        "TP",
        page,
        &tp_closed_form(p, page.presentation().catalog(), &page.interior()),
    )
}

pub(crate) fn check_tcminus(page: &SSPage) -> Result<(), SummandError> {
    let p = page.prime();
    compare(
        "TC-",
        page,
        &tcminus_closed_form(p, page.presentation().catalog(), &page.interior()),
    )
}

/// Runs the `TP` t-Bockstein spectral sequence in `window` and checks the
/// interior of `E∞` against `F_p[t^{±p²}] ⊗ Λ(λ₁, λ₂)`.
pub fn tp_einfty(p: u64, window: Window) -> Result<SSPage, SummandError> {
    let derived = derive_differentials(p)?;
    let (page, _) = run_tp(&derived, window)?;
    check_tp(&page)?;
    Ok(page)
}

/// Runs the `TC⁻` t-Bockstein spectral sequence in `window` and checks the
/// interior of `E∞` against its closed form.
pub fn tcminus_einfty(p: u64, window: Window) -> Result<SSPage, SummandError> {
    let derived = derive_differentials(p)?;
    let (page, _) = run_tcminus(&derived, window)?;
    check_tcminus(&page)?;
    Ok(page)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tp_at_two_in_wide_window() {
        let page = tp_einfty(2, Window::new((-20, 20), (-16, 16))).unwrap();
        let names = page.interior_names();
        for n in ["1", "lambda1", "t^4", "t^4lambda1lambda2", "t^-4lambda2"] {
            assert!(names.contains(&n.to_string()), "{n} missing");
        }
        assert!(!names.contains(&"t".to_string()));
    }

    #[test]
    fn tcminus_at_three() {
        let page = tcminus_einfty(3, ss_window(3, (-2, 26))).unwrap();
        let names = page.interior_names();
        for n in [
            "t^3lambda2",
            "t^6lambda2",
            "tlambda1",
            "t^2lambda1",
            "tlambda1lambda2",
            "t^6lambda1lambda2",
            "mu",
        ] {
            assert!(names.contains(&n.to_string()), "{n} missing");
        }
        assert!(!names.contains(&"t^3lambda1".to_string()));
    }
}

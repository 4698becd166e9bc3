use std::sync::Arc;

use super::{require_prime, SummandError};
use crate::formal_group::{
    cobar_d_t, cobar_d_t_frobenius, right_unit_frobenius, t_adic_order, Ideal,
};
use crate::graded::{BigradedPoly, Catalog, Monomial, Ring};
use crate::ss::{leibniz_extend, AlgebraPresentation, DifferentialSpec};

/// The t-Bockstein differentials together with the checks that produced them.
#[derive(Clone, Debug)]
pub struct DerivedDifferentials {
    pub prime: u64,
    pub catalog: Arc<Catalog>,
    pub spec: DifferentialSpec,
    pub permanent_cycles: Vec<String>,
    pub checks: Vec<String>,
}

fn single_term(poly: &BigradedPoly, factors: &[(&str, i64)]) -> Result<bool, SummandError> {
    let m = Monomial::from_names(poly.catalog(), factors)?.expect("even factors");
    Ok(poly.len() == 1 && poly.coefficient(&m).is_one())
}

/// Rewrites a cobar expression `Σ c·t^a (σ²t₁)^b (σ²v₂)^c` through
/// `λ₁ ↔ σ²t₁`, `λ₂ ↔ (σ²t₁)^p`, `μ ↔ σ²v₂`.
fn translate(
    poly: &BigradedPoly,
    p: u64,
    thh: &Arc<Catalog>,
) -> Result<BigradedPoly, SummandError> {
    let bp = poly.catalog();
    let (t, s1, s2) = (
        bp.require("t")?,
        bp.require("sigma2t1")?,
        bp.require("sigma2v2")?,
    );
    let ring = Ring::PrimeField(p);
    let mut out = BigradedPoly::zero(thh.clone(), ring);
    for (m, c) in poly.terms() {
        if m.factors().any(|(i, _)| i != t && i != s1 && i != s2) {
            return Err(SummandError::SignConvention(format!(
                "unexpected cobar term in {poly}"
            )));
        }
        let mut factors = vec![("t", m.exponent(t)), ("mu", m.exponent(s2))];
        match m.exponent(s1) {
            0 => {}
            1 => factors.push(("lambda1", 1)),
            b if b == p as i64 => factors.push(("lambda2", 1)),
            b => {
                return Err(SummandError::SignConvention(format!(
                    "(σ²t1)^{b} has no THH name"
                )))
            }
        }
        let target = Monomial::from_names(thh, &factors)?.expect("distinct odd factors");
        out.add_term(target, ring.from_int(c.to_i64().unwrap_or(0)));
    }
    Ok(out)
}

/// `d_p(t) = t^{p+1}λ₁` and `d_{p²}(t^p) = t^{p²+p}λ₂`, read off from
/// `η_R(t) − t` and its `p`-th power in the mod `(p, v₁)` cobar complex.
///
/// Also verifies `η_R(t^{p²}) ≡ t^{p²}` modulo `t^{p³+p²}` and that
/// `t^{p²}, λ₁, λ₂, μ` are cycles for both differentials.
pub fn derive_differentials(p: u64) -> Result<DerivedDifferentials, SummandError> {
    require_prime(p)?;
    let pi = p as i64;
    let ideal = Ideal::invariant_prime(2);
    let thh = Catalog::thh(p);
    let mut checks = Vec::new();

    let d1 = cobar_d_t(p, pi + 2, &ideal)?;
    if !single_term(&d1, &[("t", pi + 1), ("sigma2t1", 1)])? {
        return Err(SummandError::SignConvention(format!(
            "η_R(t) − t = {d1} mod (p, v1, t^{}), expected t^{}·σ²t1",
            pi + 2,
            pi + 1
        )));
    }
    checks.push(format!("eta_R(t) - t = {d1} mod (p, v1, t^{})", pi + 2));

    let d2 = cobar_d_t_frobenius(p, pi * pi + 2 * pi, &ideal)?;
    if !single_term(&d2, &[("t", pi * pi + pi), ("sigma2t1", pi)])? {
        return Err(SummandError::SignConvention(format!(
            "η_R(t)^p − t^p = {d2}, expected t^{}·(σ²t1)^{p}",
            pi * pi + pi
        )));
    }
    checks.push(format!(
        "eta_R(t)^p - t^p = {d2} mod (p, v1, t^{})",
        pi * pi + 2 * pi
    ));

    let bound = pi.pow(3) + pi * pi;
    let eta = right_unit_frobenius(p, 2, bound, &ideal)?;
    let tp2 = BigradedPoly::generator_power(eta.catalog().clone(), eta.ring(), "t", pi * pi)?;
    let order = t_adic_order(&eta.sub(&tp2)?)?;
    if order.is_some_and(|o| o < bound) {
        return Err(SummandError::Check(format!(
            "η_R(t^{}) − t^{} has t-adic order {order:?} < {bound}",
            pi * pi,
            pi * pi
        )));
    }
    checks.push(format!(
        "eta_R(t^{}) = t^{} mod t^{bound}",
        pi * pi,
        pi * pi
    ));

    let mut spec = DifferentialSpec::new();
    spec.add(&thh, p as u32, "t", 1, translate(&d1, p, &thh)?)?;
    let d2_thh = translate(&d2, p, &thh)?;
    // d_{p²}(t^p) is the p-th power of the cocycle relation, with t^p as source
    spec.add(&thh, (p * p) as u32, "t", pi, d2_thh)?;

    let pres = AlgebraPresentation::new(p, thh.clone())?;
    let permanent = [
        vec![("t", pi * pi)],
        vec![("lambda1", 1)],
        vec![("lambda2", 1)],
        vec![("mu", 1)],
    ];
    let mut names = Vec::new();
    for f in &permanent {
        let m = Monomial::from_names(&thh, f)?.expect("single factor");
        for r in spec.pages() {
            if !leibniz_extend(&pres, &spec, r, &m)?.is_zero() {
                return Err(SummandError::Check(format!(
                    "d{r} is nonzero on a permanent cycle"
                )));
            }
        }
        names.push(m.format(&thh, crate::graded::MonomialStyle::Ascii));
    }
    Ok(DerivedDifferentials {
        prime: p,
        catalog: thh,
        spec,
        permanent_cycles: names,
        checks,
    })
}

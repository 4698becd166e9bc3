//! Text formats: monomials like `t^-2lambda1` or `t^2*lambda1`, combinations
//! like `2t^4lambda1 - t^3lambda2`, and line-oriented presentation files.

use std::sync::Arc;

use super::{AlgebraPresentation, DifferentialSpec, SsError, Window};
use crate::graded::{BigradedPoly, Catalog, Generator, Monomial, Parity, Ring};

fn err(line: usize, message: impl Into<String>) -> SsError {
    SsError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a product of generators; factors may be juxtaposed or separated by
/// `*`, `·` or spaces, each optionally raised to an integer power. `1` is the
/// empty product.
pub fn parse_monomial(catalog: &Catalog, s: &str) -> Result<Monomial, SsError> {
    parse_monomial_opt(catalog, s)?
        .ok_or_else(|| err(0, format!("`{s}` vanishes (odd generator squared)")))
}

fn parse_monomial_opt(catalog: &Catalog, s: &str) -> Result<Option<Monomial>, SsError> {
    let mut exps = vec![0i64; catalog.len()];
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Some(Monomial::one(catalog)));
    }
    let mut rest = s;
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c == '*' || c == '·' || c.is_whitespace());
        if rest.is_empty() {
            break;
        }
        // longest generator name (or label) that prefixes the remainder
        let mut best: Option<(usize, usize)> = None;
        for (i, g) in catalog.generators().iter().enumerate() {
            for name in [g.name.as_str(), g.label.as_str()] {
                if rest.starts_with(name) && best.is_none_or(|(_, len)| name.len() > len) {
                    best = Some((i, name.len()));
                }
            }
        }
        let Some((i, len)) = best else {
            return Err(err(0, format!("unknown generator at `{rest}`")));
        };
        rest = &rest[len..];
        let mut e = 1i64;
        if let Some(after) = rest.strip_prefix('^') {
            let digits: String = after
                .char_indices()
                .take_while(|&(k, c)| c.is_ascii_digit() || (k == 0 && c == '-'))
                .map(|(_, c)| c)
                .collect();
            e = digits
                .parse()
                .map_err(|_| err(0, format!("bad exponent in `{s}`")))?;
            rest = &after[digits.len()..];
        }
        exps[i] += e;
    }
    Ok(Monomial::new(catalog, exps)?)
}

/// Parses an `F_p`- or integer-linear combination of monomials.
pub fn parse_combination(
    catalog: &Arc<Catalog>,
    ring: Ring,
    s: &str,
) -> Result<BigradedPoly, SsError> {
    let mut out = BigradedPoly::zero(catalog.clone(), ring);
    let s = s.trim();
    if s == "0" {
        return Ok(out);
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut sign: Option<bool> = None;
    let mut last = ' ';
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && last != '^' {
            if current.trim().is_empty() {
                if sign.is_some() {
                    return Err(err(0, format!("dangling sign in `{s}`")));
                }
            } else {
                terms.push((sign.unwrap_or(false), std::mem::take(&mut current)));
            }
            sign = Some(ch == '-');
        } else {
            current.push(ch);
        }
        if !ch.is_whitespace() {
            last = ch;
        }
    }
    if current.trim().is_empty() {
        return Err(err(0, format!("dangling sign in `{s}`")));
    }
    terms.push((sign.unwrap_or(false), current));
    for (negative, term) in terms {
        let term = term.trim();
        let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
        let coef: i64 = if digits.is_empty() {
            1
        } else {
            digits
                .parse()
                .map_err(|_| err(0, format!("bad coefficient in `{term}`")))?
        };
        let body = term[digits.len()..].trim_start_matches(|c: char| c == '*' || c.is_whitespace());
        let c = ring.from_int(if negative { -coef } else { coef });
        if body.is_empty() {
            out.add_term(Monomial::one(catalog), c);
        } else if let Some(m) = parse_monomial_opt(catalog, body)? {
            out.add_term(m, c);
        }
    }
    Ok(out)
}

/// A parsed presentation file.
#[derive(Clone, Debug)]
pub struct PresentationFile {
    pub presentation: AlgebraPresentation,
    pub spec: DifferentialSpec,
    pub window: Window,
}

struct GenLine {
    line: usize,
    generator: Generator,
    invertible: bool,
    maxexp: Option<i64>,
}

fn int(line: usize, tok: Option<&&str>, what: &str) -> Result<i64, SsError> {
    tok.ok_or_else(|| err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| err(line, format!("bad integer for {what}")))
}

fn expect(line: usize, tok: Option<&&str>, word: &str) -> Result<(), SsError> {
    match tok {
        Some(&t) if t == word => Ok(()),
        Some(t) => Err(err(line, format!("expected `{word}`, found `{t}`"))),
        None => Err(err(line, format!("expected `{word}`"))),
    }
}

/// Parses the line-oriented presentation format:
///
/// ```text
/// prime 2
/// gen t deg -2 weight 1 parity even invertible
/// gen lambda1 deg 3 weight 0 parity odd
/// rel t mu
/// diff page 2 t -> t^3lambda1
/// window deg -20 20 weight -10 10
/// ```
///
/// `#` starts a comment. Without a `window` line the window is empty; without
/// a `prime` line the prime is 2.
pub fn parse_presentation(text: &str) -> Result<PresentationFile, SsError> {
    let mut prime = 2u64;
    let mut window = Window::empty();
    let mut gens: Vec<GenLine> = Vec::new();
    let mut deferred: Vec<(usize, Vec<String>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "prime" => {
                let p = int(line, toks.get(1), "prime")?;
                if p < 2 || !crate::graded::is_prime(p as u64) {
                    return Err(err(line, format!("{p} is not prime")));
                }
                prime = p as u64;
            }
            "gen" => {
                let name = toks
                    .get(1)
                    .ok_or_else(|| err(line, "missing generator name"))?;
                expect(line, toks.get(2), "deg")?;
                let degree = int(line, toks.get(3), "deg")?;
                expect(line, toks.get(4), "weight")?;
                let weight = int(line, toks.get(5), "weight")?;
                expect(line, toks.get(6), "parity")?;
                let parity = match toks.get(7) {
                    Some(&"even") => Parity::Even,
                    Some(&"odd") => Parity::Odd,
                    _ => return Err(err(line, "parity must be `even` or `odd`")),
                };
                if Parity::of_degree(degree) != parity {
                    return Err(err(
                        line,
                        format!("parity of `{name}` disagrees with degree {degree}"),
                    ));
                }
                let mut invertible = false;
                let mut maxexp = None;
                let mut i = 8;
                while i < toks.len() {
                    match toks[i] {
                        "invertible" => invertible = true,
                        "maxexp" => {
                            maxexp = Some(int(line, toks.get(i + 1), "maxexp")?);
                            i += 1;
                        }
                        t => return Err(err(line, format!("unexpected `{t}`"))),
                    }
                    i += 1;
                }
                gens.push(GenLine {
                    line,
                    generator: Generator::new(name, degree, weight),
                    invertible,
                    maxexp,
                });
            }
            "window" => {
                expect(line, toks.get(1), "deg")?;
                let (a, b) = (
                    int(line, toks.get(2), "deg min")?,
                    int(line, toks.get(3), "deg max")?,
                );
                expect(line, toks.get(4), "weight")?;
                let (c, d) = (
                    int(line, toks.get(5), "weight min")?,
                    int(line, toks.get(6), "weight max")?,
                );
                if a > b || c > d {
                    return Err(err(line, "window bounds must satisfy min ≤ max"));
                }
                window = Window::new((a, b), (c, d));
            }
            "rel" | "diff" => deferred.push((line, toks.iter().map(|s| s.to_string()).collect())),
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let catalog =
        Catalog::new(gens.iter().map(|g| g.generator.clone()).collect()).map_err(|e| {
            let line = gens.last().map_or(0, |g| g.line);
            err(line, e.to_string())
        })?;
    let catalog = Arc::new(catalog);
    let mut pres = AlgebraPresentation::new(prime, catalog.clone())?;
    for g in &gens {
        let at = |e: SsError| err(g.line, e.to_string());
        if g.invertible {
            pres.set_invertible(&g.generator.name).map_err(at)?;
        }
        if let Some(m) = g.maxexp {
            pres.set_max_exponent(&g.generator.name, m).map_err(at)?;
        }
    }
    let mut spec = DifferentialSpec::new();
    let relocate = |line: usize| {
        move |e: SsError| match e {
            SsError::Parse { message, .. } => err(line, message),
            e => err(line, e.to_string()),
        }
    };
    for (line, toks) in deferred {
        if toks[0] == "rel" {
            let m = parse_monomial(&catalog, &toks[1..].join(" ")).map_err(relocate(line))?;
            pres.add_relation(m).map_err(relocate(line))?;
            continue;
        }
        // diff page <r> <gen> -> <combination>
        let t: Vec<&str> = toks.iter().map(|s| s.as_str()).collect();
        expect(line, t.get(1), "page")?;
        let r = int(line, t.get(2), "page")?;
        if r < 1 {
            return Err(err(line, "pages start at 1"));
        }
        let src = t
            .get(3)
            .ok_or_else(|| err(line, "missing source generator"))?;
        expect(line, t.get(4), "->")?;
        let (name, e) = match src.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| err(line, "bad source exponent"))?,
            ),
            None => (*src, 1),
        };
        let image =
            parse_combination(&catalog, pres.ring(), &t[5..].join(" ")).map_err(relocate(line))?;
        spec.add(&catalog, r as u32, name, e, image)
            .map_err(relocate(line))?;
    }
    Ok(PresentationFile {
        presentation: pres,
        spec,
        window,
    })
}

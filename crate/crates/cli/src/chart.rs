//! Charts of a generator table: degree to the right, Adams weight upward.

use std::collections::BTreeMap;
use std::fmt::Write;

use synto_core::summand::{GeneratorTable, TableEntry};

/// Pixels per unit of degree and of weight.
pub const UNIT: f64 = 24.0;
const MARGIN: f64 = 40.0;
/// Horizontal offset between classes sharing a bidegree.
const NUDGE: f64 = 7.0;

/// Where each entry is drawn, in table order.
#[derive(Clone, Debug, PartialEq)]
pub struct Glyph {
    pub name: String,
    pub label: String,
    pub degree: i64,
    pub weight: i64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartLayout {
    pub degrees: (i64, i64),
    pub weights: (i64, i64),
    pub width: f64,
    pub height: f64,
    pub glyphs: Vec<Glyph>,
}

impl ChartLayout {
    pub fn new(table: &GeneratorTable) -> ChartLayout {
        let degrees = span(table.generators.iter().map(|e| e.degree), (-1, 1));
        let weights = span(table.generators.iter().map(|e| e.weight), (0, 3));
        let weights = (weights.0.min(0), weights.1.max(3));
        let width = (degrees.1 - degrees.0) as f64 * UNIT + 2.0 * MARGIN;
        let height = (weights.1 - weights.0) as f64 * UNIT + 2.0 * MARGIN;

        // coincident classes are spread out in table order (kernel classes first)
        let mut groups: BTreeMap<(i64, i64), Vec<&TableEntry>> = BTreeMap::new();
        for e in &table.generators {
            groups.entry((e.degree, e.weight)).or_default().push(e);
        }
        let mut glyphs = Vec::new();
        for e in &table.generators {
            let group = &groups[&(e.degree, e.weight)];
            let k = group.iter().position(|g| g.name == e.name).unwrap() as f64;
            let offset = (k - (group.len() as f64 - 1.0) / 2.0) * NUDGE;
            glyphs.push(Glyph {
                name: e.name.clone(),
                label: e.label(),
                degree: e.degree,
                weight: e.weight,
                x: MARGIN + (e.degree - degrees.0) as f64 * UNIT + offset,
                y: height - MARGIN - (e.weight - weights.0) as f64 * UNIT,
            });
        }
        ChartLayout {
            degrees,
            weights,
            width,
            height,
            glyphs,
        }
    }

    fn x_of(&self, degree: i64) -> f64 {
        MARGIN + (degree - self.degrees.0) as f64 * UNIT
    }

    fn y_of(&self, weight: i64) -> f64 {
        self.height - MARGIN - (weight - self.weights.0) as f64 * UNIT
    }
}

fn span(values: impl Iterator<Item = i64>, empty: (i64, i64)) -> (i64, i64) {
    values
        .fold(None, |acc: Option<(i64, i64)>, v| {
            Some(acc.map_or((v, v), |(a, b)| (a.min(v), b.max(v))))
        })
        .map_or(empty, |(a, b)| (a - 1, b + 1))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Standalone SVG document. Output depends only on the table.
pub fn svg(table: &GeneratorTable, generated_by: &str) -> String {
    let l = ChartLayout::new(table);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="serif">"#,
        w = l.width,
        h = l.height
    );
    let _ = writeln!(s, "<!-- generated_by: {} -->", escape(generated_by));
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r##"<g stroke="#ddd" stroke-width="0.5">"##);
    for d in l.degrees.0..=l.degrees.1 {
        let x = l.x_of(d);
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#,
            l.y_of(l.weights.1),
            l.y_of(l.weights.0)
        );
    }
    for w in l.weights.0..=l.weights.1 {
        let y = l.y_of(w);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#,
            l.x_of(l.degrees.0),
            l.x_of(l.degrees.1)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g font-size="8pt" fill="#666">"##);
    for d in l.degrees.0..=l.degrees.1 {
        if d % 5 == 0 {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle">{d}</text>"#,
                l.x_of(d),
                l.y_of(l.weights.0) + 16.0
            );
        }
    }
    for w in l.weights.0..=l.weights.1 {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{w}</text>"#,
            l.x_of(l.degrees.0) - 8.0,
            l.y_of(w) + 3.0
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g font-size="10pt">"#);
    for g in &l.glyphs {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="3" data-name="{}" data-degree="{}" data-weight="{}"/>"#,
            g.x,
            g.y,
            escape(&g.name),
            g.degree,
            g.weight
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="start">{}</text>"#,
            g.x + 4.0,
            g.y - 5.0,
            escape(&g.label)
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

/// Character grid: one column per degree, one row per weight (top row is the
/// highest weight). A cell shows the number of classes there.
pub fn ascii(table: &GeneratorTable) -> String {
    let l = ChartLayout::new(table);
    let mut counts: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for e in &table.generators {
        *counts.entry((e.degree, e.weight)).or_insert(0) += 1;
    }
    let mut s = String::new();
    for w in (l.weights.0..=l.weights.1).rev() {
        let _ = write!(s, "{w:>3} |");
        for d in l.degrees.0..=l.degrees.1 {
            s.push(match counts.get(&(d, w)) {
                None => '.',
                Some(1) => 'o',
                Some(&n) => char::from_digit(n.min(9) as u32, 10).unwrap(),
            });
        }
        s.push('\n');
    }
    let _ = writeln!(
        s,
        "    +{}",
        "-".repeat((l.degrees.1 - l.degrees.0 + 1) as usize)
    );
    let _ = writeln!(s, "     degrees {} to {}", l.degrees.0, l.degrees.1);
    for e in &table.generators {
        let _ = writeln!(s, "  ({:>3}, {}) {}", e.degree, e.weight, e.label());
    }
    s
}

use std::fs;
use std::process::Command;

use synto_cli::chart::{ascii, svg, ChartLayout, UNIT};
use synto_cli::render::{read_csv, table_csv, table_json};
use synto_core::summand::{syntomic_table, GeneratorTable};

fn synto(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_synto"))
        .args(args)
        .env("SYNTO_COLOR", "never")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = synto(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn syntomic_table_at_five() {
    let out = ok(&["syntomic", "--prime", "5", "--format", "table"]);
    assert!(out.lines().nth(1).unwrap().starts_with("free over F_p[v₂]"));
    let rows = out
        .lines()
        .filter(|l| l.contains("kernel") || l.contains("cokernel"))
        .count();
    assert_eq!(rows, 24);
    assert!(out.contains("∂λ₁λ₂"));
}

#[test]
fn syntomic_json_at_two() {
    let out = ok(&["syntomic", "--prime", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 12);
    assert_eq!(v["module"], "free_over_v2");
    assert_eq!(v["v2_bidegree"], serde_json::json!([6, 3]));
    assert_eq!(
        v["convention"],
        serde_json::json!({"frobenius_unit": "one", "generators": "hazewinkel"})
    );
    // keys appear in schema order and nothing else is emitted
    let top: Vec<usize> = [
        "\"prime\"",
        "\"convention\"",
        "\"module\"",
        "\"v2_bidegree\"",
        "\"generators\"",
        "\"notes\"",
    ]
    .iter()
    .map(|k| out.find(&format!("\n  {k}:")).unwrap())
    .collect();
    assert!(top.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(v.as_object().unwrap().len(), 6);
    for g in v["generators"].as_array().unwrap() {
        let mut keys: Vec<&str> = g.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["degree", "name", "origin", "weight"]);
    }
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = synto(&["syntomic", "--prime", "4"]);
    assert_eq!(code, 1);
    assert!(err.contains("not prime"), "{err}");
    assert_eq!(synto(&["syntomic"]).0, 1);
    assert_eq!(synto(&["syntomic", "--prime", "3", "--format", "pdf"]).0, 1);
    assert_eq!(synto(&["syntomic", "--prime", "3", "--window", "5,1"]).0, 1);
    assert_eq!(synto(&["--help"]).0, 0);
}

#[test]
fn too_small_a_window_is_reported() {
    let (code, _, err) = synto(&["syntomic", "--prime", "5", "--window", "0,20"]);
    assert_ne!(code, 0);
    assert!(err.contains("window"), "{err}");
}

#[test]
fn fgl_examples() {
    let out = ok(&[
        "fgl", "p-series", "--prime", "3", "--mod", "p,v1", "--trunc", "10",
    ]);
    assert!(out.contains("v2·t^9 + O(t^10)"), "{out}");
    let out = ok(&[
        "fgl",
        "right-unit",
        "--prime",
        "2",
        "--mod",
        "p,v1",
        "--trunc",
        "4",
    ]);
    assert!(out.contains("t + t1·t^2"), "{out}");
    let out = ok(&["fgl", "p-series", "--prime", "2", "--trunc", "2"]);
    assert!(out.contains("2t + O(t^2)"), "{out}");
}

#[test]
fn fgl_json() {
    let out = ok(&[
        "fgl", "p-series", "--prime", "3", "--mod", "p,v1", "--trunc", "10", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["series"], "p-series");
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    assert_eq!(v["terms"][0]["power"], 9);
    assert_eq!(v["terms"][0]["monomial"], "v2");
}

#[test]
fn ss_tp_preset_shows_d2_then_d4() {
    let out = ok(&["ss", "--preset", "tp", "--prime", "2"]);
    let first_d2 = out.find("d2(").unwrap();
    let first_d4 = out.find("d4(").unwrap();
    assert!(first_d2 < first_d4);
    assert!(!out.contains("d3("));
    let stable = out.find("stable from E").unwrap();
    assert!(first_d4 < stable);
}

#[test]
fn ss_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let out = ok(&["ss", empty.to_str().unwrap()]);
    assert!(out.contains("survivors: 0"), "{out}");

    let bad = dir.path().join("bad.txt");
    fs::write(
        &bad,
        "prime 3\ngen x deg 2 weight 0 parity even\nfrobnicate\n",
    )
    .unwrap();
    let (code, _, err) = synto(&["ss", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("bad.txt:3:"), "{err}");

    let small = dir.path().join("small.txt");
    fs::write(
        &small,
        "prime 2\n\
         gen x deg 0 weight 0 parity even maxexp 1\n\
         gen y deg -1 weight 1 parity odd\n\
         rel xy\n\
         diff page 1 x -> y\n\
         window deg -2 1 weight -1 2\n",
    )
    .unwrap();
    let out = ok(&["ss", small.to_str().unwrap()]);
    assert!(out.contains("d1(x) = y"), "{out}");
    assert!(out.contains("survivors: 1"), "{out}");
}

fn glyph<'a>(layout: &'a ChartLayout, label: &str) -> &'a synto_cli::chart::Glyph {
    layout
        .glyphs
        .iter()
        .find(|g| g.label == label)
        .unwrap_or_else(|| panic!("no glyph {label}"))
}

#[test]
fn chart_positions() {
    let five = syntomic_table(5, None).unwrap();
    let l = ChartLayout::new(&five);
    assert_eq!(l.glyphs.len(), 24);
    let one = glyph(&l, "1");
    assert_eq!((one.degree, one.weight), (0, 0));
    let top = glyph(&l, "∂λ₁λ₂");
    assert_eq!((top.degree, top.weight), (57, 3));
    // 24px per unit, y upward
    assert_eq!(top.x - one.x, 57.0 * UNIT);
    assert_eq!(one.y - top.y, 3.0 * UNIT);
    // the two classes at (48, 2) are pulled apart
    let pair: Vec<_> = l
        .glyphs
        .iter()
        .filter(|g| (g.degree, g.weight) == (48, 2))
        .collect();
    assert_eq!(pair.len(), 2);
    assert_ne!(pair[0].x, pair[1].x);

    let two = ChartLayout::new(&syntomic_table(2, None).unwrap());
    let g = glyph(&two, "λ₁λ₂");
    assert_eq!((g.degree, g.weight), (10, 2));
}

#[test]
fn single_entry_chart() {
    let mut t = syntomic_table(2, None).unwrap();
    t.generators.truncate(1);
    let s = svg(&t, "test");
    assert_eq!(s.matches("<circle").count(), 1);
    assert!(ascii(&t).contains('o'));
}

#[test]
fn chart_command_reads_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    fs::write(&path, ok(&["syntomic", "--prime", "5", "--format", "json"])).unwrap();
    let s = ok(&["chart", path.to_str().unwrap()]);
    assert_eq!(s.matches("<circle").count(), 24);
    assert!(s.contains(r#"data-name="dellambda1lambda2" data-degree="57" data-weight="3""#));
    assert_eq!(s, ok(&["chart", "--prime", "5"]));
    assert_eq!(s, ok(&["syntomic", "--prime", "5", "--format", "svg"]));
    let a = ok(&["chart", "--prime", "2", "--format", "ascii"]);
    assert!(a.contains("λ₁λ₂"));
}

#[test]
fn json_and_csv_round_trip() {
    for p in [2u64, 3, 5] {
        let t = syntomic_table(p, None).unwrap();
        let back: GeneratorTable = serde_json::from_str(&table_json(&t)).unwrap();
        assert_eq!(back, t);
        let rows = read_csv(&table_csv(&t).unwrap()).unwrap();
        assert_eq!(rows, t.generators);
    }
    let json: GeneratorTable =
        serde_json::from_str(&ok(&["syntomic", "--prime", "3", "--format", "json"])).unwrap();
    let csv = read_csv(&ok(&["syntomic", "--prime", "3", "--format", "csv"])).unwrap();
    let mut a = json.generators.clone();
    let mut b = csv;
    a.sort_by(|x, y| x.name.cmp(&y.name));
    b.sort_by(|x, y| x.name.cmp(&y.name));
    assert_eq!(a, b);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    ok(&[
        "syntomic",
        "--prime",
        "3",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        ok(&["syntomic", "--prime", "3", "--format", "csv"])
    );
}

#[test]
fn reruns_are_bit_identical() {
    for args in [
        &["syntomic", "--prime", "5", "--format", "table"][..],
        &["chart", "--prime", "3", "--format", "ascii"],
        &["ss", "--preset", "tcminus", "--prime", "2"],
    ] {
        assert_eq!(ok(args), ok(args));
    }
}

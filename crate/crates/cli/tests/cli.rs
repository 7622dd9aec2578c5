use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quord::format::parse_relation;
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }
}

fn quord(args: &[&str]) -> Output {
    quord_env(args, &[])
}

fn quord_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quord"));
    cmd.args(args).env_remove("QUORD_MAX_N");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const M2: &str = "elements: bot a b top\nbot a\nbot b\nbot top\na top\nb top\n";
const TWO_CHAINS: &str = "elements: a b c d\na c\nb d\n";
const S3: &str = "elements: a1 a2 a3 b1 b2 b3\na1 b2\na1 b3\na2 b1\na2 b3\na3 b1\na3 b2\n";

#[test]
fn m2_is_a_halfspace() {
    let ws = Workspace::new();
    let m2 = ws.file("m2.rel", M2);
    let out = quord(&["check", "halfspace", p(&m2)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("halfspace: true"));
}

#[test]
fn failed_check_prints_witness_and_exits_one() {
    let ws = Workspace::new();
    let f = ws.file("two.rel", TWO_CHAINS);
    let out = quord(&["check", "halfspace", p(&f)]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("halfspace: false"));
    assert!(text.contains("witness: a(0) b(1) c(2)"), "{text}");
}

#[test]
fn m2_dimensions() {
    let ws = Workspace::new();
    let m2 = ws.file("m2.rel", M2);
    let hs = quord(&["hsdim", p(&m2)]);
    assert_eq!(hs.status.code(), Some(0));
    assert_eq!(stdout(&hs).lines().next(), Some("1"));
    let d = quord(&["dim", p(&m2)]);
    assert_eq!(d.status.code(), Some(0));
    assert_eq!(stdout(&d).lines().next(), Some("2"));
}

#[test]
fn standard_example_dimensions() {
    let ws = Workspace::new();
    let s3 = ws.file("s3.rel", S3);
    assert_eq!(stdout(&quord(&["dim", p(&s3)])).lines().next(), Some("3"));
    assert_eq!(stdout(&quord(&["hsdim", p(&s3)])).lines().next(), Some("3"));
}

#[test]
fn oracle_suite_summary() {
    for id in ["prop2.2-equivalence-n3", "halfspace-criteria-n3"] {
        let out = quord(&["oracle", id]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out).lines().next(), Some("29 instances, 0 failures"));
    }
}

#[test]
fn oracle_list_and_unknown_suite() {
    let out = quord(&["oracle", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("thm3.4-products -> product-classification"));
    assert_eq!(quord(&["oracle", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn invalid_input_exits_two() {
    let ws = Workspace::new();
    let bad = ws.file("bad.rel", "elements: a b\na c\n");
    assert_eq!(quord(&["classify", p(&bad)]).status.code(), Some(2));
    let cyclic = ws.file("cyc.rel", "elements: a b c\na b\nb c\n");
    // not transitive, so not a quasiorder
    let out = quord(&["check", "halfspace", p(&cyclic)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a(0)"));
    assert_eq!(quord(&["decompose", p(&ws.file("v.rel", "elements: a b c\na b\n"))]).status.code(), Some(2));
    assert_eq!(quord(&["check", "halfspace", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(quord(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn resource_cap_exits_three() {
    let ws = Workspace::new();
    let m2 = ws.file("m2.rel", M2);
    let out = quord_env(&["hsdim", p(&m2)], &[("QUORD_MAX_N", "3")]);
    assert_eq!(out.status.code(), Some(3));
    let out = quord(&["enumerate", "quasiorders", "6"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn decompose_renders_boxes() {
    let ws = Workspace::new();
    let m2 = ws.file("m2.rel", M2);
    let out = quord(&["decompose", p(&m2)]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("boxes: [{bot} < {a,b}∅ < {top}]"));
    assert!(text.contains("box 1: empty a(1) b(2)"));
}

#[test]
fn emitted_relations_round_trip() {
    let ws = Workspace::new();
    let m2 = ws.file("m2.rel", M2);
    let two = ws.file("two.rel", TWO_CHAINS);
    let chain = ws.file("c.rel", "elements: x y\nx y\n");
    let runs: Vec<Vec<&str>> = vec![
        vec!["complement", p(&m2)],
        vec!["extend", p(&two)],
        vec!["extend", p(&two), "--seed", "d,c,b,a"],
        vec!["product", p(&chain), p(&chain)],
    ];
    for args in runs {
        let out = quord(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let text = stdout(&out);
        let doc = parse_relation(&text).unwrap();
        let again = ws.file("again.rel", &text);
        let second = quord(&["classify", p(&again)]);
        assert_eq!(second.status.code(), Some(0));
        assert_eq!(parse_relation(&std::fs::read_to_string(&again).unwrap()).unwrap(), doc);
    }
}

#[test]
fn complement_of_m2() {
    let ws = Workspace::new();
    let m2 = ws.file("m2.rel", M2);
    let text = stdout(&quord(&["complement", p(&m2)]));
    let doc = parse_relation(&text).unwrap();
    let expected = parse_relation("elements: bot a b top\ntop a\ntop b\na bot\nb bot\na b\nb a\n").unwrap();
    assert_eq!(doc.relation.transitive_closure(), expected.relation.transitive_closure());
    assert!(text.contains("# boxes: [{top} < {a,b}■ < {bot}]"), "{text}");
}

#[test]
fn product_of_chains_is_m2() {
    let ws = Workspace::new();
    let chain = ws.file("c.rel", "elements: 0 1\n0 1\n");
    let out = quord(&["product", p(&chain), p(&chain)]);
    let text = stdout(&out);
    assert!(text.contains("# halfspace: true"));
    let doc = parse_relation(&text).unwrap();
    assert_eq!(doc.relation.len(), 9);

    let three = ws.file("c3.rel", "elements: 0 1 2\n0 1\n1 2\n0 2\n");
    let out = quord(&["product", p(&chain), p(&three)]);
    let text = stdout(&out);
    assert!(text.contains("# halfspace: false"));
    assert!(text.contains("# refuting_triple:"));

    let out = quord(&["product", p(&chain), p(&chain), p(&chain), "--structural-only"]);
    assert_eq!(stdout(&out).lines().next(), Some("halfspace: false"));
    let full = ws.file("f.rel", "elements: u v\nu v\nv u\n");
    assert_eq!(quord(&["product", p(&chain), p(&full), "--strict-factors"]).status.code(), Some(2));
}

#[test]
fn tighten_and_linearize() {
    let ws = Workspace::new();
    let gamma = ws.file("g.rel", "elements: a b c d\na b\nb a\nc d\n");
    let alpha = ws.file("al.rel", "elements: a b c d\na b\nb a\na c\nb c\na d\nb d\nc d\nd c\n");
    let out = quord(&["tighten", "--gamma", p(&gamma), "--alpha", p(&alpha)]);
    assert_eq!(out.status.code(), Some(0));
    let tau = parse_relation(&stdout(&out)).unwrap().relation;
    assert!(!tau.contains(3, 2));
    assert!(tau.contains(0, 1) && tau.contains(1, 0));

    let h = ws.file("h.rel", "elements: a b c\na b\na c\n");
    let lam = ws.file("l.rel", "elements: a b c\nc b\nb a\nc a\n");
    let out = quord(&["linearize", "--alpha", p(&h), "--lambda", p(&lam), "--both"]);
    let text = stdout(&out);
    assert!(text.contains("lambda: a < c < b"), "{text}");
    assert!(text.contains("meet_is_alpha: true"));

    let not_above = ws.file("na.rel", "elements: a b c d\nc d\n");
    let out = quord(&["tighten", "--gamma", p(&gamma), "--alpha", p(&not_above)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_both_constructions() {
    let ws = Workspace::new();
    let gamma = ws.file("g.rel", TWO_CHAINS);
    let r1 = ws.file("r1.rel", "elements: a b c d\na c\na b\na d\nc b\nc d\nb d\n");
    let r2 = ws.file("r2.rel", "elements: a b c d\nb d\nb a\nb c\nd a\nd c\na c\n");
    for extra in [&[][..], &["--alt", "--istar", "1", "--mu", "d,c,b,a"][..]] {
        let mut args = vec!["transform", "--gamma", p(&gamma), "--realizer", p(&r1), p(&r2)];
        args.extend_from_slice(extra);
        let out = quord(&args);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        assert!(text.contains("meet_is_quotient_order: true"), "{text}");
        assert!(text.contains("padded: false"));
    }
    let m2 = ws.file("m2.rel", M2);
    let out = quord(&["transform", "--gamma", p(&m2), "--realizer", p(&m2)]);
    assert!(stdout(&out).contains("padded: true"));
}

#[test]
fn enumerate_streams_json_lines() {
    let out = quord(&["enumerate", "quasiorders", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 29);
    let out = quord(&["enumerate", "halfspaces", "3"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 20);
    for line in text.lines() {
        let doc = parse_relation(line).unwrap();
        assert_eq!(doc.relation.n(), 3);
    }
}

#[test]
fn reports_are_deterministic() {
    let ws = Workspace::new();
    let s3 = ws.file("s3.rel", S3);
    let two = ws.file("two.rel", TWO_CHAINS);
    let runs: Vec<Vec<&str>> = vec![
        vec!["hsdim", p(&s3)],
        vec!["dim", p(&s3)],
        vec!["classify", p(&two)],
        vec!["extend", p(&two)],
        vec!["oracle", "extension-sampled-n4"],
        vec!["enumerate", "halfspaces", "3"],
    ];
    for args in runs {
        let a = quord(&args);
        let b = quord(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn json_input_is_accepted() {
    let ws = Workspace::new();
    let m2 = ws.file(
        "m2.json",
        r#"{"elements": ["bot", "a", "b", "top"], "pairs": [["bot","a"],["bot","b"],["a","top"],["b","top"],["bot","top"]], "reflexive_implicit": true}"#,
    );
    assert_eq!(quord(&["check", "halfspace", p(&m2)]).status.code(), Some(0));
}

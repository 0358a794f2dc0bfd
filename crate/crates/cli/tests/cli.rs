use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use tempfile::TempDir;

use tcspace_cli::{run, Outcome, EXIT_FAIL, EXIT_INPUT, EXIT_OK};

fn tcspace(args: &[&str]) -> Outcome {
    run(std::iter::once("tcspace").chain(args.iter().copied()))
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Fixture {
            dir: tempfile::tempdir().unwrap(),
        };
        f.write("line3.metric", "# points 0, 1, 3 on a line\n3\n1 3\n2\n");
        f.write("f.tp", "0 2\n1 -1\n2 -1\n");
        f.write("lift.ev", "0 1 1\n0 2 1\n");
        f.write("line4.metric", "4\n1 10 11\n9 10\n1\n");
        f
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_owned()
    }
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.text).unwrap()
}

#[test]
fn tcnorm_line_example() {
    let fx = Fixture::new();
    let out = tcspace(&["tcnorm", &fx.path("line3.metric"), &fx.path("f.tp")]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.text, "norm 4\nmove 0 -> 1 1\nmove 0 -> 2 1\n");
}

#[test]
fn quad_check_family_a() {
    let out = tcspace(&["quad-check", "--family", "a", "--max", "20"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.text, "PASS 4845 quadruples\n");
}

#[test]
fn nested_check_fails_on_family_a() {
    let fx = Fixture::new();
    let fam = fx.path("fam_a4.metric");
    let out = tcspace(&["family", "--family", "a", "--n", "4", "--out", &fam]);
    assert_eq!(out, Outcome { code: EXIT_OK, text: String::new() });
    let text = fs::read_to_string(&fam).unwrap();
    assert!(text.contains("# labels v1 v2 v3 v4"));

    let out = tcspace(&["nested-check", &fam, "--pairs", "0:1,2:3"]);
    assert_eq!(out.code, EXIT_FAIL);
    assert_eq!(
        out.text,
        "FAIL at n=2\nprescribed weight 26/3\nwitness weight 17/2\nedge 0 2\nedge 1 3\n"
    );
}

#[test]
fn nested_check_passes_on_line() {
    let fx = Fixture::new();
    let out = tcspace(&["nested-check", &fx.path("line4.metric"), "--pairs", "0:1,2:3"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.text, "PASS 2 prefixes\n");
    let out = tcspace(&["l1check", &fx.path("line4.metric"), "--pairs", "0:1,2:3"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.text, "PASS 4 sign patterns\n");
}

#[test]
fn l1check_reports_shortfall() {
    let fx = Fixture::new();
    let fam = fx.path("fam_a4.metric");
    tcspace(&["family", "--family", "a", "--n", "4", "--out", &fam]);
    let out = tcspace(&["l1check", &fam, "--pairs", "0:1,2:3", "--coeffs", "1,1", "--json"]);
    assert_eq!(out.code, EXIT_FAIL);
    let v = json(&out);
    assert_eq!(v["result"], "FAIL");
    assert_eq!(v["signs"], "++");
    assert_eq!(v["achieved"], "79/40");
    assert_eq!(v["expected"], "2");
}

#[test]
fn matching_quotient_dual_and_l1norm() {
    let fx = Fixture::new();
    let out = tcspace(&["matching", &fx.path("line4.metric")]);
    assert_eq!(out.text, "weight 2\nedge 0 1\nedge 2 3\n");

    let out = tcspace(&["quotient", &fx.path("line3.metric"), &fx.path("lift.ev")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.text.starts_with("quotient 4\nl1d 4\n"), "{}", out.text);

    let out = tcspace(&["dual", &fx.path("line3.metric"), &fx.path("f.tp"), "--base", "0"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.text.starts_with("dual 4\nbase 0\nh 0 0\n"), "{}", out.text);

    let out = tcspace(&["l1norm", &fx.path("f.tp")]);
    assert_eq!(out.text, "l1 4\n");

    let out = tcspace(&["validate", &fx.path("line3.metric")]);
    assert_eq!(out.text, "valid metric on 3 points\nmin distance 1\ndiameter 3\n");
}

/// Every rational in the plain report also appears in the JSON report.
fn rationals(text: &str) -> Vec<String> {
    let mut v: Vec<String> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| tcspace::parse_rational(t).is_some())
        .map(str::to_owned)
        .collect();
    v.sort();
    v
}

fn json_leaves(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => out.extend(rationals(s)),
        Value::Number(n) => out.push(n.to_string()),
        Value::Array(a) => a.iter().for_each(|x| json_leaves(x, out)),
        Value::Object(o) => o.values().for_each(|x| json_leaves(x, out)),
        _ => {}
    }
}

#[test]
fn json_and_plain_agree() {
    let fx = Fixture::new();
    let m = fx.path("line3.metric");
    let f = fx.path("f.tp");
    let e = fx.path("lift.ev");
    let l4 = fx.path("line4.metric");
    let cases: Vec<Vec<&str>> = vec![
        vec!["tcnorm", &m, &f],
        vec!["dual", &m, &f, "--base", "2"],
        vec!["quotient", &m, &e],
        vec!["matching", &l4],
        vec!["l1norm", &f],
    ];
    for args in cases {
        let plain = tcspace(&args);
        let mut with_json = args.clone();
        with_json.push("--json");
        let structured = tcspace(&with_json);
        assert_eq!(plain.code, structured.code);
        let mut from_json = Vec::new();
        json_leaves(&json(&structured), &mut from_json);
        from_json.sort();
        let from_plain = rationals(&plain.text);
        for r in &from_plain {
            assert!(from_json.contains(r), "{args:?}: {r} missing from json");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let fx = Fixture::new();
    for args in [
        vec!["selftest".to_owned(), "--n".into(), "8".into()],
        vec!["tcnorm".to_owned(), fx.path("line3.metric"), fx.path("f.tp"), "--json".into()],
        vec!["family".to_owned(), "--family".into(), "e".into(), "--n".into(), "6".into()],
    ] {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(tcspace(&a), tcspace(&a));
    }
}

#[test]
fn selftest_passes() {
    let out = tcspace(&["selftest", "--n", "12"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.text, "PASS 12 instances\n");
}

fn assert_input_error(out: &Outcome, culprit: &str) {
    assert_eq!(out.code, EXIT_INPUT, "{}", out.text);
    assert!(out.text.contains(culprit), "{:?} does not name {culprit}", out.text);
}

#[test]
fn input_errors_name_the_culprit() {
    let fx = Fixture::new();
    let m = fx.path("line3.metric");
    let f = fx.path("f.tp");
    let bad = fx.write("bad.metric", "3\n1 5\n1\n");
    let bad = bad.to_str().unwrap();
    let unbalanced = fx.write("u.tp", "0 1\n1 1\n");
    let unbalanced = unbalanced.to_str().unwrap();
    let outside = fx.write("o.tp", "0 1\n7 -1\n");
    let outside = outside.to_str().unwrap();

    assert_input_error(&tcspace(&["validate", bad]), "bad.metric");
    assert_input_error(&tcspace(&["tcnorm", &m, unbalanced]), "u.tp");
    assert_input_error(&tcspace(&["tcnorm", &m, outside]), "o.tp");
    assert_input_error(&tcspace(&["tcnorm", &m, "missing.tp"]), "missing.tp");
    assert_input_error(&tcspace(&["dual", &m, &f, "--base", "3"]), "--base");
    assert_input_error(&tcspace(&["nested-check", &m, "--pairs", "0:1,1:2"]), "--pairs");
    assert_input_error(&tcspace(&["nested-check", &m, "--pairs", "0-1"]), "--pairs");
    assert_input_error(&tcspace(&["l1check", &m, "--pairs", "0:1", "--coeffs", "1/0"]), "--coeffs");
    assert_input_error(&tcspace(&["l1check", &m, "--pairs", "0:1", "--coeffs", "1,1"]), "--coeffs");
    assert_input_error(&tcspace(&["matching", &m]), "--vertices");
    assert_input_error(&tcspace(&["family", "--family", "q", "--n", "3"]), "--family");
    assert_input_error(&tcspace(&["family", "--family", "a", "--n", "1"]), "--n");
    assert_input_error(&tcspace(&["frobnicate"]), "frobnicate");
}

#[test]
fn help_is_not_an_error() {
    let out = tcspace(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.text.contains("quad-check"));
}

#[test]
fn out_flag_writes_report() {
    let fx = Fixture::new();
    let target = fx.path("report.json");
    let out = tcspace(&["l1norm", &fx.path("f.tp"), "--json", "--out", &target]);
    assert_eq!(out, Outcome { code: EXIT_OK, text: String::new() });
    let v: Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["l1"], "4");
    let dir_as_file = fx.dir.path().to_str().unwrap().to_owned();
    assert_input_error(&tcspace(&["l1norm", &fx.path("f.tp"), "--out", &dir_as_file]), "--out");
    assert!(Path::new(&target).exists());
}

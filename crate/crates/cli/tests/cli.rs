use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const M1: &str = "letters a b c\nindependent a b\n";
const M2: &str = "# pentagon dependence\nletters a1 a2 a3 a4 a5\nindependent a1 a3\nindependent a1 a4\nindependent a2 a4\nindependent a2 a5\nindependent a3 a5\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        ws.write("m1.tm", M1);
        ws.write("m2.tm", M2);
        ws
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn tracemon(args: &[&str], spec: &Path) -> Output {
    let (sub, rest) = args.split_first().unwrap();
    Command::new(env!("CARGO_BIN_EXE_tracemon"))
        .arg(sub)
        .arg(spec)
        .args(rest)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn value_after(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim().parse().unwrap()))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

const SQRT5: f64 = 2.236_067_977_499_79;

#[test]
fn info_reports_m1_structure() {
    let ws = Workspace::new();
    let out = tracemon(&["info"], &ws.path("m1.tm"));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("letters      3 (a b c)"));
    assert!(text.contains("cliques      5"));
    assert!(text.contains("irreducible  true"));
    assert!(text.contains("1 - 3X + X^2"));
    assert!((value_after(&text, "p0") - (3.0 - SQRT5) / 2.0).abs() < 1e-11);

    let j = json(&tracemon(&["info", "--json"], &ws.path("m1.tm")));
    assert_eq!(j["command"], "info");
    assert_eq!(j["monoid"]["letters"], serde_json::json!(["a", "b", "c"]));
    assert_eq!(j["result"]["mobius"], serde_json::json!([1, -3, 1]));
    assert_eq!(j["result"]["cliques"], 5);
}

#[test]
fn speedups_exact_and_montecarlo() {
    let ws = Workspace::new();
    let text = stdout(&tracemon(&["speedup", "--valuation", "uniform", "--exact"], &ws.path("m2.tm")));
    assert!((value_after(&text, "rho") - (29.0 - SQRT5) / 22.0).abs() < 1e-11);
    assert!((value_after(&text, "gamma") - (29.0 + SQRT5) / 38.0).abs() < 1e-11);

    let args = ["speedup", "--valuation", "uniform", "--mc", "--steps", "200000", "--seed", "3", "--threads", "4", "--json"];
    let a = json(&tracemon(&args, &ws.path("m1.tm")));
    let b = json(&tracemon(&args, &ws.path("m1.tm")));
    assert_eq!(a, b);
    assert!((a["result"]["rho"].as_f64().unwrap() - 1.0827).abs() < 0.02);
    assert_eq!(a["result"]["threads"], 4);
}

#[test]
fn check_rejects_non_mobius_valuation() {
    let ws = Workspace::new();
    let out = tracemon(&["check", "--valuation", "a=0.5,b=0.5,c=0.5"], &ws.path("m1.tm"));
    assert_eq!(out.status.code(), Some(1));
    assert!((value_after(&stdout(&out), "h(ε)") + 0.25).abs() < 1e-15);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not Möbius"));

    let ok = tracemon(&["check", "--valuation", "a=0.5,b=0.5,c=0.25", "--json"], &ws.path("m1.tm"));
    let j = json(&ok);
    assert_eq!(j["result"]["is_mobius"], true);
    assert_eq!(j["result"]["h0"], 0.0);
}

#[test]
fn sampling_is_reproducible() {
    let ws = Workspace::new();
    let args = ["sample", "--valuation", "uniform", "--steps", "50", "--seed", "11"];
    let a = tracemon(&args, &ws.path("m2.tm"));
    let b = tracemon(&args, &ws.path("m2.tm"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 51);
    assert!(lines[0].starts_with("1\t"));
    let trailer = lines[50];
    assert!(trailer.starts_with("# seed=11 steps=50 "));
    assert!(trailer.contains("height=50"));
    assert!(trailer.ends_with("generator=chacha8"));
    let length: usize = lines[..50].iter().map(|l| l.split('\t').nth(1).unwrap().split('.').count()).sum();
    assert!(trailer.contains(&format!("length={length} ")));
    let other = tracemon(&["sample", "--valuation", "uniform", "--steps", "50", "--seed", "12"], &ws.path("m2.tm"));
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn json_output_round_trips_byte_for_byte() {
    let ws = Workspace::new();
    let commands: [&[&str]; 9] = [
        &["info"],
        &["cliques"],
        &["mobius"],
        &["count", "--max-length", "40"],
        &["check", "--valuation", "uniform"],
        &["complete", "--fixed", "a1=0.3,a2=0.25,a3=0.2,a4=0.21", "--free", "a5"],
        &["chain", "--valuation", "uniform"],
        &["sample", "--valuation", "uniform", "--steps", "20", "--seed", "1"],
        &["cylinder", "--valuation", "uniform", "--trace", "a1 a3 a2", "--mc", "--runs", "1000", "--seed", "2"],
    ];
    for args in commands {
        let mut with_json = args.to_vec();
        with_json.push("--json");
        let out = tracemon(&with_json, &ws.path("m2.tm"));
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let raw = stdout(&out);
        let parsed: Value = serde_json::from_str(&raw).unwrap();
        assert_eq!(format!("{parsed}\n"), raw, "{args:?}");
        assert_eq!(parsed["command"], args[0]);
        assert!(parsed["monoid"].is_object() && parsed["result"].is_object());
    }
}

#[test]
fn chain_prints_m1_matrix() {
    let ws = Workspace::new();
    let j = json(&tracemon(&["chain", "--valuation", "a=0.5,b=0.5,c=0.25", "--json"], &ws.path("m1.tm")));
    let expected = serde_json::json!([
        [0.5, 0.0, 0.5, 0.0],
        [0.0, 0.5, 0.5, 0.0],
        [0.25, 0.25, 0.25, 0.25],
        [0.25, 0.25, 0.25, 0.25]
    ]);
    assert_eq!(j["result"]["transition"], expected);
    assert_eq!(j["result"]["states"], serde_json::json!([["a"], ["b"], ["c"], ["a", "b"]]));
}

#[test]
fn cylinders() {
    let ws = Workspace::new();
    let exact = stdout(&tracemon(&["cylinder", "--valuation", "uniform", "--trace", "ca", "--exact"], &ws.path("m1.tm")));
    let p0 = (3.0 - SQRT5) / 2.0;
    assert!((value_after(&exact, "probability") - p0 * p0).abs() < 1e-11);
    let waived = tracemon(
        &["cylinder", "--valuation", "a=0.5,b=0.5,c=0.5", "--trace", "ab", "--exact", "--waive"],
        &ws.path("m1.tm"),
    );
    assert!((value_after(&stdout(&waived), "probability") - 0.25).abs() < 1e-15);
    let unit = stdout(&tracemon(
        &["cylinder", "--valuation", "uniform", "--trace", "", "--mc", "--runs", "10", "--seed", "1"],
        &ws.path("m1.tm"),
    ));
    assert_eq!(value_after(&unit, "probability"), 1.0);
}

#[test]
fn domain_errors_exit_with_one() {
    let ws = Workspace::new();
    let reducible = ws.write("split.tm", "letters a b\nindependent a b\n");
    let cases: [(&[&str], &Path); 5] = [
        (&["speedup", "--valuation", "uniform", "--exact"], &reducible),
        (&["chain", "--valuation", "a=0.5,b=0.5,c=0.5"], &ws.path("m1.tm")),
        (&["sample", "--valuation", "a=0.9,b=0.9,c=0.9", "--steps", "3", "--seed", "1"], &ws.path("m1.tm")),
        (&["cylinder", "--valuation", "a=0.5,b=0.5,c=0.5", "--trace", "a", "--exact"], &ws.path("m1.tm")),
        (&["complete", "--fixed", "a=2,b=0.5", "--free", "c"], &ws.path("m1.tm")),
    ];
    for (args, spec) in cases {
        let out = tracemon(args, spec);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn malformed_input_exits_with_two() {
    let ws = Workspace::new();
    let self_pair = ws.write("bad.tm", "letters a b\n\nindependent a a\n");
    let out = tracemon(&["info"], &self_pair);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("`a`"), "{err}");

    let undeclared = ws.write("undeclared.tm", "letters a b\nindependent a c\n");
    assert!(String::from_utf8_lossy(&tracemon(&["info"], &undeclared).stderr).contains("line 2"));

    let m1 = ws.path("m1.tm");
    let cases: [&[&str]; 7] = [
        &["check", "--valuation", "a=0.5,b=0.5"],
        &["check", "--valuation", "a=0.5,b=x,c=1"],
        &["check", "--valuation", "a=0.5,b=0.5,c=-1"],
        &["cylinder", "--valuation", "uniform", "--trace", "abz", "--exact"],
        &["speedup", "--valuation", "uniform"],
        &["speedup", "--valuation", "uniform", "--mc", "--steps", "0", "--seed", "1"],
        &["complete", "--fixed", "a=0.5,c=0.5", "--free", "c"],
    ];
    for args in cases {
        let out = tracemon(args, &m1);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(tracemon(&["info"], &ws.path("missing.tm")).status.code(), Some(2));
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const GOLDEN_CNF: &str = include_str!("../../core/tests/golden/x1x2_plus_2_q3.cnf");
const GOLDEN_MAP: &str = include_str!("../../core/tests/golden/x1x2_plus_2_q3.map.json");

/// `x_1·x_2 + 2` over F_3, gate by gate.
const CIRCUIT: &str = r#"{"field":"3","gates":[{"op":"input","var":"x_1"},{"op":"input","var":"x_2"},{"op":"mul","args":[0,1]},{"op":"const","c":"2"},{"op":"add","args":[2,3]}],"output":4}"#;

fn ipskit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ipskit")).current_dir(dir).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn translate_matches_golden_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), CIRCUIT).unwrap();
    let out = ipskit(dir.path(), &["translate", "--circuit", "c.json", "--q", "3", "--emit", "dimacs", "-o", "f.cnf", "--check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(dir.path().join("f.cnf")).unwrap(), GOLDEN_CNF);
    assert_eq!(std::fs::read_to_string(dir.path().join("f.map.json")).unwrap(), GOLDEN_MAP);
    let r = report(&out);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["result"]["clauses"], 43);
    assert_eq!(r["outputs"]["sidecar"], "f.map.json");
}

#[test]
fn gen_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ipskit(d, &["gen", "ks-modp", "--word", "1,-1", "--p", "5", "--beta", "2", "-o", "inst.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["result"]["certificate"]["verify"]["verdict"], "verified");
    assert_eq!(r["config"]["field"], "5");
    assert!(r["hashes"]["instance"].as_str().unwrap().len() == 64);
    for f in ["inst.json", "inst.cert.json", "inst.circuit.json"] {
        assert!(d.join(f).exists(), "{f}");
    }
    for mode in ["exact", "sz"] {
        let out = ipskit(d, &["verify", "--cert", "inst.cert.json", "--instance", "inst.json", "--mode", mode, "--trials", "6"]);
        assert_eq!(out.status.code(), Some(0), "{mode}");
        let want = if mode == "exact" { "verified" } else { "probabilistic" };
        assert_eq!(report(&out)["result"]["report"]["verdict"], want);
    }

    // A certificate bound to another instance fails with exit status 1.
    let out = ipskit(d, &["gen", "ks-modp", "--word", "1,-1", "--p", "5", "--beta", "3", "-o", "other.json"]);
    assert_eq!(out.status.code(), Some(0));
    let out = ipskit(d, &["verify", "--cert", "inst.cert.json", "--instance", "other.json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["verdict"], "fail");
    assert!(!r["result"]["report"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        vec!["frobnicate"],
        vec!["gen", "ks-modp", "--p", "4", "--word", "1,-1", "-o", "x.json"],
        vec!["gen", "subset-sum", "--p", "7", "--n", "3", "-o", "x.json"],
        vec!["verify", "--cert", "missing.json", "--instance", "missing.json"],
        vec!["oracle", "run", "--lemma", "nope"],
        vec!["params", "--n", "8"],
    ] {
        let out = ipskit(d, &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let diag: Value = serde_json::from_slice(&out.stderr).expect("machine-readable diagnostic");
        assert!(diag["error"]["kind"].is_string() && diag["error"]["message"].is_string());
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = ipskit(d, &["oracle", "sweep", "--cap-n", "6", "--seed", "9"]);
    let b = ipskit(d, &["oracle", "sweep", "--cap-n", "6", "--seed", "9", "--threads", "1"]);
    let c = ipskit(d, &["oracle", "sweep", "--cap-n", "6", "--seed", "9", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let r = report(&a);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["config"]["seed"], 9);
    assert_eq!(r["result"]["aggregate"]["pass"], true);

    let sz = ["verify", "--cert", "i.cert.json", "--instance", "i.json", "--mode", "sz", "--seed", "4"];
    assert_eq!(ipskit(d, &["gen", "subset-sum", "--p", "7", "--n", "3", "--beta", "5", "-o", "i.json"]).status.code(), Some(0));
    let x = ipskit(d, &sz);
    let y = ipskit(d, &[&sz[..], &["--threads", "2"]].concat());
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn analyzers() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ipskit(d, &["dims", "eval", "--field", "5", "--poly", "x_1*x_2 + x_3*x_4", "--x", "x_1,x_3"]);
    let r = report(&out);
    assert_eq!((r["result"]["coeff_dim"].as_u64(), r["result"]["eval_dim"].as_u64()), (Some(2), Some(2)));

    let out = ipskit(d, &["roabp", "build", "--field", "5", "--poly", "x_1*x_2 + x_3*x_4 + 3", "-o", "a.json"]);
    assert_eq!(report(&out)["result"]["widths"], serde_json::json!([1, 2, 2, 2, 1]));
    let out = ipskit(d, &["roabp", "prod", "--a", "a.json", "--b", "a.json", "-o", "p.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["result"]["width"].as_u64().unwrap() <= 4);
    let out = ipskit(d, &["roabp", "width", "--field", "5", "--poly", "x_1*x_2 + 1 + x_3"]);
    assert_eq!(out.status.code(), Some(0));

    let out = ipskit(d, &["oracle", "run", "--lemma", "rank", "--param", "word=1,-1", "--param", "p=5"]);
    assert_eq!(report(&out)["result"]["pass"], true);
    let out = ipskit(d, &["params", "--log-n", "256", "--delta", "1"]);
    assert_eq!(report(&out)["result"]["d"], 64);
}

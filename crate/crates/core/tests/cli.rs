use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use qpchar::io::{parse_potential, parse_quiver, ses_to_value};
use qpchar::potential::DEFAULT_TRUNC_DEGREE;
use qpchar::repgrass::a3_ses_data;

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("qpchar-cli-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, contents).unwrap();
        p.to_str().unwrap().to_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn qpchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpchar")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const A2: &str = r#"{"vertices": 2, "arrows": [[1, 2, "a"]]}"#;
const CYCLE: &str = r#"{"vertices": 3, "arrows": [[1, 2, "a"], [2, 3, "b"], [3, 1, "c"]]}"#;
const CBA: &str = r#"[["1", ["c", "b", "a"]]]"#;

#[test]
fn mutate_quiver_emits_reversed_arrow() {
    let s = Scratch::new("mq");
    let q = s.file("a2.json", A2);
    let o = qpchar(&["mutate-quiver", "-q", &q, "--seq", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"arrows\":[[2,1,\"a*\"]],\"vertices\":2}\n");
}

#[test]
fn bfs_lists_five_variables_and_closes() {
    let s = Scratch::new("bfs");
    let q = s.file("a2.json", A2);
    let o = qpchar(&["bfs", "-q", &q, "--depth", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("variables: 5\n"), "{out}");
    assert!(out.contains("closure: yes"));
    let again = qpchar(&["bfs", "-q", &q, "--depth", "6"]);
    assert_eq!(o.stdout, again.stdout, "output is not deterministic");
    let shallow = qpchar(&["--format", "json", "bfs", "-q", &q, "--depth", "1"]);
    let v: Value = serde_json::from_slice(&shallow.stdout).unwrap();
    assert_eq!(v["result"]["closed"], false);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn mutate_qp_output_reparses() {
    let s = Scratch::new("mqp");
    let q = s.file("c3.json", CYCLE);
    let w = s.file("w.json", CBA);
    let o = qpchar(&["--format", "json", "mutate-qp", "-q", &q, "-w", &w, "--seq", "1,1", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exact"], true);
    let quiver = parse_quiver(&v["result"]["quiver"].to_string()).unwrap();
    assert_eq!(quiver.b_matrix().unwrap(), parse_quiver(CYCLE).unwrap().b_matrix().unwrap());
    let w = parse_potential(quiver.into(), &v["result"]["potential"].to_string(), DEFAULT_TRUNC_DEGREE).unwrap();
    assert_eq!(w.terms().count(), 1);
    assert_eq!(v["result"]["probe"]["obstructions"].as_array().unwrap().len(), 0);
}

#[test]
fn jacobian_reports_stabilization() {
    let s = Scratch::new("jac");
    let q = s.file("c3.json", CYCLE);
    let w = s.file("w.json", CBA);
    let out = stdout(&qpchar(&["jacobian", "-q", &q, "-w", &w]));
    assert!(out.contains("total: 6\n") && out.contains("stabilized: yes"), "{out}");
    let lp = s.file("loop.json", r#"{"vertices": 1, "arrows": [[1, 1, "l"]]}"#);
    let o = qpchar(&["--format", "json", "jacobian", "-q", &lp, "--trunc-degree", "8"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["stabilized"], false);
    assert_eq!(v["exact"], false);
}

#[test]
fn char_and_seed_mutate_agree() {
    let s = Scratch::new("char");
    let q = s.file("a2.json", A2);
    let m = s.file("m.json", r#"{"module": {"dims": [1, 1], "maps": {"a": [[1]]}}, "g": [-1, 0]}"#);
    let c = stdout(&qpchar(&["char", "-q", &q, "-i", &m]));
    assert_eq!(c, "(x1 + x2 + 1)/(x1*x2)\n");
    let seeds = stdout(&qpchar(&["seed-mutate", "-q", &q, "--seq", "1,2"]));
    assert!(seeds.contains(&format!("x'_2 = {c}")), "{seeds}");
}

#[test]
fn dichotomy_on_shipped_sequences() {
    let s = Scratch::new("dich");
    let q = s.file("a3.json", r#"{"vertices": 3, "arrows": [[1, 2, "a"], [2, 3, "b"]]}"#);
    for (k, data) in a3_ses_data().iter().enumerate() {
        let f = s.file(&format!("ses{k}.json"), &ses_to_value(data).to_string());
        let o = qpchar(&["dichotomy", "-q", &q, "-s", &f]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert_eq!(out.matches("dichotomy holds, dimension identity holds").count(), 3, "{out}");
        assert!(out.contains("euler identity: holds"));
    }
}

#[test]
fn verify_suites_and_exit_codes() {
    for suite in ["a2", "a3", "cycle3"] {
        let o = qpchar(&["verify", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(!stdout(&o).contains("[FAIL]"));
    }
    assert_eq!(qpchar(&["verify", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(qpchar(&["bfs"]).status.code(), Some(2));
    assert_eq!(qpchar(&["mutate-quiver", "-q", "x.json", "--seq", "one"]).status.code(), Some(2));
    let s = Scratch::new("err");
    let two = s.file("two.json", r#"{"vertices": 2, "arrows": [[1, 2, "a"], [2, 1, "b"]]}"#);
    let o = qpchar(&["mutate-quiver", "-q", &two, "--seq", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Files {
        Files { dir: tempfile::tempdir().unwrap() }
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

fn vmkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vmkit")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const STAR: &str = "4 3\n0 1\n0 2\n0 3\n";
const K3: &str = "3 3\n1 2\n1 3\n2 3\n";

#[test]
fn vm_star_to_triangle_succeeds_with_sequence() {
    let f = Files::new();
    let (g, h) = (f.write("g", STAR), f.write("h", K3));
    let o = vmkit(&["--json", "vm", g.to_str().unwrap(), h.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["is_minor"], true);
    assert_eq!(v["measure"], serde_json::json!([0]));
    let seq: Vec<u32> = serde_json::from_value(v["sequence"].clone()).unwrap();
    let gg: vmkit::Graph = STAR.parse().unwrap();
    let hh: vmkit::Graph = K3.parse().unwrap();
    let out = gg.apply_sequence(&seq.into()).unwrap().induced_subgraph(&hh.vertex_set()).unwrap();
    assert_eq!(out, hh);
}

#[test]
fn ghz_on_disconnected_nodes_is_false() {
    let f = Files::new();
    let g = f.write("g", "4 1\nV: 0 1 2 3\n0 1\n");
    let o = vmkit(&["ghz", g.to_str().unwrap(), "--nodes", "1,2,3"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn malformed_graph_file_is_an_input_error() {
    let f = Files::new();
    let bad = f.write("bad", "3 2\n0 1\n");
    let h = f.write("h", K3);
    assert_eq!(code(&vmkit(&["vm", bad.to_str().unwrap(), h.to_str().unwrap()])), 2);
    let missing = f.dir.path().join("nope");
    assert_eq!(code(&vmkit(&["rankwidth", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&vmkit(&["frobnicate"])), 2);
}

#[test]
fn caps_exit_with_three() {
    let f = Files::new();
    let (g, h) = (f.write("g", STAR), f.write("h", K3));
    let o = vmkit(&["--max-n", "3", "vm", g.to_str().unwrap(), h.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let o = vmkit(&["--max-orbit", "3", "orbit", g.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let o = vmkit(&["--max-n", "3", "rankwidth", g.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn plan_json_has_documented_fields() {
    let f = Files::new();
    let (g, h) = (f.write("g", STAR), f.write("h", K3));
    let o = vmkit(&["--json", "plan", g.to_str().unwrap(), h.to_str().unwrap(), "--preserve-rest"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for key in ["sequence", "measured", "corrections", "boundary", "residual_edges"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["measured"], serde_json::json!([0]));
}

#[test]
fn rankwidth_lc_equiv_and_orbit() {
    let f = Files::new();
    let c5 = f.write("c5", "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n");
    let o = vmkit(&["--json", "rankwidth", c5.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["width"], 2);
    let o = vmkit(&["rankwidth", c5.to_str().unwrap()]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("rank-width: 2\n"));
    assert_eq!(text.lines().count(), 1 + 7, "a subcubic tree on 5 leaves has 7 edges");

    let k3 = f.write("k3", K3);
    let p3 = f.write("p3", "3 2\n1 2\n1 3\n");
    let o = vmkit(&["--json", "lc-equiv", k3.to_str().unwrap(), p3.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["sequence"], serde_json::json!([1]));
    let e = f.write("e", "3 0\nV: 1 2 3\n");
    assert_eq!(code(&vmkit(&["lc-equiv", k3.to_str().unwrap(), e.to_str().unwrap()])), 1);

    let o = vmkit(&["--json", "orbit", k3.to_str().unwrap()]);
    assert_eq!(json(&o)["size"], 4);
}

#[test]
fn eval_formula_by_name_and_vm() {
    let f = Files::new();
    let k3 = f.write("k3", K3);
    let star = f.write("star", STAR);
    let o = vmkit(&["--json", "eval-formula", "Eul", k3.to_str().unwrap(), r#"{"Xe":[1,2,3],"Ye":[],"Ze":[]}"#]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["quantifier_rank"], 7);
    let o = vmkit(&["eval-formula", "eul", k3.to_str().unwrap(), r#"{"Xe":[],"Ye":[1,2,3],"Ze":[]}"#]);
    assert_eq!(code(&o), 1);
    let asg = f.write("a.json", r#"{"Q":[1,2],"v":3}"#);
    let arg = format!("@{}", asg.display());
    assert_eq!(code(&vmkit(&["eval-formula", "EvenInter", k3.to_str().unwrap(), &arg])), 0);

    let o = vmkit(&["--json", "eval-formula", "VM", star.to_str().unwrap(), "--target", k3.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["quantifier_rank"], 10);

    assert_eq!(code(&vmkit(&["eval-formula", "Nope", k3.to_str().unwrap()])), 2);
    assert_eq!(code(&vmkit(&["eval-formula", "Eul", k3.to_str().unwrap(), "{}"])), 2);
    let big = f.write("big", "9 8\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n");
    let o = vmkit(&["eval-formula", "Eul", big.to_str().unwrap(), r#"{"Xe":[],"Ye":[],"Ze":[]}"#]);
    assert_eq!(code(&o), 3);
}

#[test]
fn sequence_methods_return_valid_witnesses() {
    let f = Files::new();
    let (g, h) = (f.write("g", STAR), f.write("h", K3));
    let gg: vmkit::Graph = STAR.parse().unwrap();
    let hh: vmkit::Graph = K3.parse().unwrap();
    for method in ["1", "2"] {
        let o = vmkit(&["--json", "sequence", g.to_str().unwrap(), h.to_str().unwrap(), "--method", method]);
        assert_eq!(code(&o), 0, "method {method}");
        let seq: Vec<u32> = serde_json::from_value(json(&o)["sequence"].clone()).unwrap();
        let out = gg.apply_sequence(&seq.into()).unwrap().induced_subgraph(&hh.vertex_set()).unwrap();
        assert_eq!(out, hh, "method {method}");
    }
    let e = f.write("e", "4 0\nV: 0 1 2 3\n");
    let o = vmkit(&["sequence", e.to_str().unwrap(), h.to_str().unwrap(), "--method", "2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_emits_json_lines_and_is_deterministic() {
    let run = || vmkit(&["--json", "--seed", "7", "verify", "--count", "6"]);
    let (a, b) = (run(), run());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = lines.last().unwrap();
    assert_eq!(summary["summary"]["failed"], 0);
    assert_eq!(summary["summary"]["checks"].as_u64().unwrap() as usize, lines.len() - 1);
    assert!(lines[..lines.len() - 1].iter().all(|l| l["passed"] == true));

    let other = vmkit(&["--json", "--seed", "8", "verify", "--count", "6"]);
    assert_ne!(other.stdout, text.as_bytes());
}

#[test]
fn verify_on_files_and_simulator_cap() {
    let f = Files::new();
    let g = f.write("g", STAR);
    assert_eq!(code(&vmkit(&["verify", g.to_str().unwrap()])), 0);
    assert_eq!(code(&vmkit(&["--max-n", "3", "verify", g.to_str().unwrap()])), 3);
}

#[test]
fn json_graph_files_are_accepted() {
    let f = Files::new();
    let g = f.write("g.json", r#"{"vertices":[0,1,2,3],"edges":[[0,1],[0,2],[0,3]]}"#);
    let h = f.write("h", K3);
    assert_eq!(code(&vmkit(&["vm", g.to_str().unwrap(), h.to_str().unwrap()])), 0);
}

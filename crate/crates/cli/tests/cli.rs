use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dopt_core::designs::{build_example_26, build_example_66};
use dopt_core::exactmat::{parse_matrices, parse_matrix, write_matrix};
use dopt_core::snf::{format_factors, parse_factors};
use dopt_core::{invariant_factors, IntMatrix};
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dopt-snf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &TempDir, name: &str, m: &IntMatrix) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, write_matrix(m)).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn validate(doc: &Value) {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc:#}");
}

fn json(o: &Output) -> Value {
    let doc: Value = serde_json::from_str(&stdout(o)).expect("stdout is JSON");
    validate(&doc);
    doc
}

#[test]
fn construct_example26_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.mat");
    let o = run(&["construct", "--family", "example26", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let m = parse_matrix(&text).unwrap();
    assert_eq!(m, build_example_26());
    let first: Vec<&str> = text.lines().nth(1).unwrap().split_whitespace().take(13).collect();
    assert_eq!(first.join(" "), "1 1 1 1 -1 1 -1 -1 1 1 1 -1 1");
}

#[test]
fn construct_families() {
    let o = run(&["construct", "--family", "circulant", "--row", "0 1 0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "3 3\n0 1 0\n0 0 1\n1 0 0\n");

    let dir = TempDir::new().unwrap();
    let tour = dir.path().join("t.mat");
    std::fs::write(&tour, stdout(&o)).unwrap();
    let o = run(&["construct", "--family", "skew-from-tournament", "-i", s(&tour)]);
    assert_eq!(code(&o), 0);
    assert_eq!(parse_matrix(&stdout(&o)).unwrap().shape(), (4, 4));

    let r = write(&dir, "r.mat", &IntMatrix::from_rows(&[[1]]).unwrap());
    let o = run(&["construct", "--family", "barba-double", "-i", s(&r)]);
    assert_eq!(stdout(&o), "2 2\n1 1\n-1 1\n");

    let o = run(&["construct", "--family", "example66"]);
    assert_eq!(parse_matrix(&stdout(&o)).unwrap(), build_example_66());
}

#[test]
fn construct_errors() {
    assert_eq!(code(&run(&["construct", "--family", "nope"])), 2);
    assert_eq!(code(&run(&["construct", "--family", "circulant"])), 2);
    assert_eq!(code(&run(&["construct", "--family", "circulant", "--row", "1 x"])), 2);
    let dir = TempDir::new().unwrap();
    let not_tournament = write(&dir, "n.mat", &IntMatrix::ones(3, 3));
    assert_eq!(code(&run(&["construct", "--family", "skew-from-tournament", "-i", s(&not_tournament)])), 1);
}

#[test]
fn snf_outputs() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.mat", &build_example_26());
    let o = run(&["snf", s(&x)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "1, 2^13, 12^10, 60^2");

    let id = write(&dir, "i.mat", &IntMatrix::identity(5));
    assert_eq!(stdout(&run(&["snf", s(&id)])).trim(), "1^5");
    let zero = write(&dir, "z.mat", &IntMatrix::zeros(2, 2));
    assert_eq!(stdout(&run(&["snf", s(&zero)])).trim(), "0^2");

    let small = write(&dir, "s.mat", &IntMatrix::from_rows(&[[2, 4], [6, 8]]).unwrap());
    let o = run(&["snf", "--transforms", s(&small)]);
    let text = stdout(&o);
    assert!(text.starts_with("2, 4\n"));
    let ms = parse_matrices(&text.lines().skip(1).collect::<Vec<_>>().join("\n")).unwrap();
    assert_eq!(ms.len(), 2);
    let a = IntMatrix::from_rows(&[[2, 4], [6, 8]]).unwrap();
    assert_eq!(&(&ms[0] * &a) * &ms[1], IntMatrix::from_rows(&[[2, 0], [0, 4]]).unwrap());

    let bad = dir.path().join("bad.mat");
    std::fs::write(&bad, "2 2\n1 2\n").unwrap();
    assert_eq!(code(&run(&["snf", s(&bad)])), 2);
    assert_eq!(code(&run(&["snf", s(&dir.path().join("missing.mat"))])), 2);
}

#[test]
fn snf_json_is_decimal_strings() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.mat", &build_example_66());
    let o = run(&["snf", "--json", s(&x)]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    assert_eq!(doc["status"], "pass");
    let snf = &doc["results"][0];
    assert_eq!(snf["kind"], "snf");
    assert_eq!(snf["rank"], "66");
    assert_eq!(snf["factors"][65], "2080");
    let rle = doc["results"][1]["value"].as_str().unwrap();
    assert_eq!(parse_factors(rle).unwrap(), invariant_factors(&build_example_66()));
    assert_eq!(format_factors(&parse_factors(rle).unwrap()), rle);
}

#[test]
fn verify_properties() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.mat", &build_example_26());
    assert_eq!(code(&run(&["verify", s(&x), "--property", "ew"])), 0);
    assert_eq!(code(&run(&["verify", s(&x), "--property", "skew"])), 1);
    let o = run(&["verify", s(&x), "--property", "ew", "--json"]);
    let doc = json(&o);
    assert_eq!(doc["results"][0]["verdict"], true);
    assert_eq!(doc["results"][0]["row_block_sums"], serde_json::json!(["5", "5"]));

    let r = write(&dir, "r.mat", &IntMatrix::circulant(&dopt_core::designs::EXAMPLE_26_ROW).unwrap());
    assert_eq!(code(&run(&["verify", s(&r), "--property", "barba"])), 0);
    let zeros = write(&dir, "z.mat", &IntMatrix::zeros(2, 2));
    assert_eq!(code(&run(&["verify", s(&zeros), "--property", "ew"])), 1);
    assert_eq!(code(&run(&["verify", s(&x), "--property", "bogus"])), 2);
}

#[test]
fn check_claims() {
    let dir = TempDir::new().unwrap();
    let x66 = write(&dir, "x66.mat", &build_example_66());
    let o = run(&["check", s(&x66), "--theorem", "block-squarefree"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let x26 = write(&dir, "x26.mat", &build_example_26());
    assert_eq!(code(&run(&["check", s(&x26), "--theorem", "block-prime-square"])), 0);
    let o = run(&["check", s(&x26), "--theorem", "main", "--json"]);
    assert_eq!(code(&o), 1);
    let doc = json(&o);
    assert_eq!(doc["status"], "error");
    assert!(doc["results"][0]["message"].as_str().unwrap().contains("skew"));

    assert_eq!(code(&run(&["check", s(&x26), "--theorem", "nope"])), 2);
    assert_eq!(code(&run(&["check", s(&x26)])), 2);
}

#[test]
fn check_on_search_witness() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("w.mat");
    let o = run(&["search", "--kind", "ew-tournament", "--order", "5", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    let ws = parse_matrices(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(ws.len(), 40);
    let a = write(&dir, "a.mat", &ws[0]);
    for claim in ["tournament-snf", "prop-3.3", "lemma-8.4"] {
        let o = run(&["check", s(&a), "--theorem", claim, "--json"]);
        assert_eq!(code(&o), 0, "{claim}");
        assert_eq!(json(&o)["results"][0]["pass"], true);
    }
    let o = run(&["construct", "--family", "skew-from-tournament", "-i", s(&a)]);
    let sk = dir.path().join("s.mat");
    std::fs::write(&sk, stdout(&o)).unwrap();
    for claim in ["main", "scaled-inverse", "lemma-1.5", "lemma-2.2", "ew-determinant", "lemma-6.1"] {
        assert_eq!(code(&run(&["check", s(&sk), "--theorem", claim])), 0, "{claim}");
    }
    assert_eq!(code(&run(&["verify", s(&a), "--property", "ew-tournament"])), 0);
}

#[test]
fn search_modes() {
    let seq = run(&["search", "--kind", "circulant-barba", "--order", "13", "--json"]);
    let par = run(&["search", "--kind", "circulant-barba", "--order", "13", "--json", "--parallel", "4"]);
    assert_eq!(json(&seq)["results"], json(&par)["results"]);

    assert_eq!(code(&run(&["search", "--kind", "ew-tournament", "--order", "7"])), 1);
    assert_eq!(code(&run(&["search", "--kind", "ew-tournament", "--order", "5", "--limit", "10"])), 1);
    assert_eq!(code(&run(&["search", "--kind", "nope", "--order", "5"])), 2);

    let o = run(&["search", "--kind", "circulant-tournament", "--order", "13", "--json"]);
    assert_eq!(json(&o)["results"][0]["witnesses"], "0");

    let o = run(&["search", "--kind", "barba-problem", "--order", "1,13", "--json"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    assert_eq!(doc["results"][0]["snf_counts"]["1, 2"], "2");
    let counts = doc["results"][1]["snf_counts"].as_object().unwrap();
    assert_eq!(counts.keys().collect::<Vec<_>>(), vec!["1, 2^13, 12^10, 60^2"]);
}

#[test]
fn env_gate_applies() {
    let o = Command::new(env!("CARGO_BIN_EXE_dopt-snf"))
        .args(["search", "--kind", "ew-tournament", "--order", "5"])
        .env("DOPT_SNF_MAX_CANDIDATES", "100")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("DOPT_SNF_MAX_CANDIDATES"));
}

#[test]
fn help_on_every_command() {
    for cmd in ["construct", "snf", "verify", "check", "search"] {
        let o = run(&[cmd, "--help"]);
        assert_eq!(code(&o), 0, "{cmd}");
        assert!(stdout(&o).contains("Usage"));
    }
}

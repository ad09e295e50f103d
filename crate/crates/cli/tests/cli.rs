use std::process::{Command, Output};

use serde_json::Value;
use typea_sheets::ab_diagram::ABDiagram;
use typea_sheets::epsilon::EpsilonMap;
use typea_sheets::gl_setup::{build_triple, TorusElement};
use typea_sheets::linalg::{parse_rational, RatMatrix};
use typea_sheets::Partition;

fn sheets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sheets")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let o = sheets(&all);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn matrix_from_json(v: &Value) -> RatMatrix {
    let rows = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| parse_rational(x.as_str().unwrap()).unwrap()).collect())
        .collect();
    RatMatrix::from_rows(rows).unwrap()
}

#[test]
fn components_text_output() {
    let o = sheets(&["components", "--partition", "4,3,1", "--signature", "4,4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("4 orbits in 2 components"), "{out}");
    assert!(out.contains("rigidified ab/a/b: abab/aba/b, abab/bab/a"));
    assert!(out.contains("rigidified ba/a/b: baba/aba/b, baba/bab/a"));
    assert!(out.contains("dim S_G in p = 24"));
}

#[test]
fn epsilon_gl2_example() {
    let o = sheets(&["epsilon", "--partition", "2", "--pair", "AI", "--t", "2,0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("[1 1]\n  [1 1]"), "{out}");
    assert!(out.contains("in-slice: yes"));
    assert!(out.contains("in-p (AI): yes"));
}

#[test]
fn orbits_single_box() {
    let v = json(&["orbits", "--partition", "1", "--signature", "1,0"]);
    assert_eq!(v["diagrams"], serde_json::json!(["a"]));
    let o = sheets(&["orbits", "--partition", "1", "--signature", "1,0"]);
    assert!(stdout(&o).contains("1 admissible diagram"));
}

#[test]
fn epsilon_json_round_trips_exactly() {
    let lambda: Partition = "3,2".parse().unwrap();
    let t = ["-1/2", "3", "2/3"];
    let v = json(&["epsilon", "--partition", "3,2", "--pair", "AI", "--t", &t.join(",")]);
    let got = matrix_from_json(&v["epsilon"]);
    let coords = t.iter().map(|s| parse_rational(s).unwrap()).collect();
    let want = EpsilonMap::new(&build_triple(&lambda)).unwrap().apply_torus(&TorusElement::new(coords)).unwrap();
    assert_eq!(got, want);
    let back: Vec<String> = v["t"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    assert_eq!(back, ["-1/2", "3/1", "2/3"]);
    assert_eq!(v["in_slice"], true);
    assert_eq!(v["in_p"], true);
}

#[test]
fn components_json_round_trips_diagrams() {
    let v = json(&["components", "--partition", "4,3,1", "--phi", "aab"]);
    assert_eq!(v["signature"], serde_json::json!([4, 4]));
    assert_eq!(v["dims"]["dim_intersection"], 24);
    for c in v["components"].as_array().unwrap() {
        for o in c["orbits"].as_array().unwrap() {
            let s = o.as_str().unwrap();
            assert_eq!(s.parse::<ABDiagram>().unwrap().to_string(), s);
        }
    }
}

#[test]
fn triple_json_round_trips() {
    let v = json(&["triple", "--partition", "3,1"]);
    let t = build_triple(&"3,1".parse().unwrap());
    assert_eq!(matrix_from_json(&v["e"]), t.e);
    assert_eq!(matrix_from_json(&v["h"]), t.h);
    assert_eq!(matrix_from_json(&v["f"]), t.f);
}

#[test]
fn dims_lists_every_valid_pair() {
    let v = json(&["dims", "--partition", "2,2"]);
    let pairs: Vec<&str> = v["by_pair"].as_array().unwrap().iter().map(|p| p["pair"].as_str().unwrap()).collect();
    assert_eq!(pairs, ["AI", "AII", "AIII"]);
    let v = json(&["dims", "--partition", "4,3,1"]);
    assert_eq!(v["by_pair"].as_array().unwrap().len(), 2);
}

#[test]
fn validation_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["triple", "--partition", "1,3"],
        &["components", "--partition", "3,2", "--pair", "AII"],
        &["orbits", "--partition", "4,3,1", "--phi", "ab"],
        &["epsilon", "--partition", "2", "--t", "1"],
        &["epsilon", "--partition", "2", "--t", "1/0,1"],
        &["components", "--partition", "2", "--signature", "2,1"],
        &["orbits", "--partition", "2"],
        &["frobnicate"],
        &["dims"],
    ];
    for args in cases {
        let o = sheets(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert!(String::from_utf8_lossy(&sheets(cases[1]).stderr).contains("unpaired"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(sheets(&["--help"]).status.code(), Some(0));
    assert_eq!(sheets(&["components", "--help"]).status.code(), Some(0));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--max-size", "4", "--seed", "11", "--samples", "2", "--output", "json"];
    let (a, b) = (sheets(&args), sheets(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["failed"] == 0));
}

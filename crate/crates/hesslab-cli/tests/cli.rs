use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn hesslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hesslab")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = hesslab(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn orbit_tables() {
    let v = json(&["orbits", "--n", "2"]);
    assert_eq!(v["command"], "orbits");
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
    assert_eq!(json(&["orbits", "--n", "1"])["results"].as_array().unwrap().len(), 3);
    let out = hesslab(&["orbits", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompositions_with_oracle() {
    let v = json(&["decompose", "--n", "2", "--m", "2"]);
    let r = &v["results"];
    assert_eq!(r["table"]["total"], 5);
    assert_eq!(r["oracle"], 5);
    assert_eq!(r["match"], true);
    assert_eq!(r["table"]["summands"].as_array().unwrap().len(), 1);

    let v = json(&["decompose", "--n", "2", "--m", "2", "--tilde"]);
    assert_eq!(v["results"]["table"]["total"], 16);
    assert_eq!(v["results"]["oracle"], 16);

    assert!(!hesslab(&["decompose", "--n", "2", "--m", "9"]).status.success());
}

#[test]
fn fiber_with_enumeration() {
    let v = json(&["fiber", "--flavor", "e", "--n", "3", "--m", "2", "--partition", "2,2,2,1", "--q", "3", "--brute"]);
    assert_eq!(v["results"]["polynomial"], serde_json::json!([1, 1]));
    assert_eq!(v["results"]["brute_force"], 4);
    assert_eq!(v["results"]["match"], true);
}

#[test]
fn csv_output() {
    let out = hesslab(&["orbits", "--n", "2", "--format", "csv"]);
    let s = String::from_utf8(out.stdout).unwrap();
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("partition,dim,parity,gaps,local_systems"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn verify_dims_is_fast() {
    let start = Instant::now();
    let out = hesslab(&["verify", "dims", "--n-max", "8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(start.elapsed() < Duration::from_secs(10));
}

#[test]
fn verify_pavings_small() {
    let v = json(&["verify", "pavings", "--n-max", "4", "--q", "3"]);
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["status"], "pass", "{r}");
    }
}

#[test]
fn verify_springer_reports_counts() {
    let v = json(&["verify", "springer", "--n-max", "12"]);
    let r = &v["results"][0];
    assert_eq!(r["status"], "pass");
    assert!(r["checked"].as_u64().unwrap() >= 84);
}

#[test]
fn springer_schema() {
    let v = json(&["springer", "--n", "4"]);
    let r = &v["results"];
    assert_eq!(r["n"], 4);
    let odd = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "odd_exhaustion").unwrap();
    assert_eq!((odd["lhs"].as_u64(), odd["rhs"].as_u64(), odd["status"].as_str()), (Some(4), Some(4), Some("pass")));
    let image = |i: u64, j: u64| {
        r["map"]
            .as_array()
            .unwrap()
            .iter()
            .find(|m| m["source"]["family"] == "E" && m["source"]["i"] == i && m["source"]["j"] == j)
            .cloned()
            .unwrap()
    };
    let e41 = image(4, 1);
    assert_eq!(e41["orbit"], serde_json::json!([3, 1, 1, 1, 1, 1, 1]));
    assert_eq!((e41["system"].as_str(), e41["status"].as_str()), (Some("E1"), Some("proven")));
    let e43 = image(4, 3);
    assert_eq!(e43["orbit"], serde_json::json!([3, 2, 2, 1, 1]));
    assert_eq!((e43["system"].as_str(), e43["status"].as_str()), (Some("E1"), Some("proven")));
}

#[test]
fn output_does_not_depend_on_threads() {
    let args = ["verify", "counts", "--n-max", "2", "--trials", "4", "--q", "5,7", "--json"];
    let one = hesslab(&[&args[..], &["--threads", "1"]].concat());
    let four = hesslab(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_hesslab"))
        .args(args)
        .env("HESSLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(one.stdout, env.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert!(v["config"].get("threads").is_none());
}

#[test]
fn seeds_change_counts_reproducibly() {
    let a = hesslab(&["count", "--n", "2", "--m", "2", "--q", "11", "--trials", "3", "--seed", "7", "--json"]);
    let b = hesslab(&["count", "--n", "2", "--m", "2", "--q", "11", "--trials", "3", "--seed", "7", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(rel: &str) -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/").to_string() + rel
}

fn ekr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--report", "-"]);
    let out = ekr(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

fn bound(v: &Value) -> &str {
    v["bounds"]["bounds"][0]["value"]["exact"].as_str().unwrap()
}

#[test]
fn psl27_is_certified() {
    let (code, v) = json(&["analyze", "--family", "psl", "--n", "2", "--q", "7"]);
    assert_eq!(code, 0);
    assert_eq!(bound(&v), "21");
    assert_eq!(v["bounds"]["target"], "21");
    assert_eq!(v["group"]["order"], 168);
    assert_eq!(v["trace_identity"], true);
    assert_eq!(v["schema_version"], 1);
    let spectrum: Vec<(&str, u64)> = v["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["value"]["exact"].as_str().unwrap(), e["multiplicity"].as_u64().unwrap()))
        .collect();
    assert_eq!(spectrum, [("-9", 49), ("0", 64), ("7", 54), ("63", 1)]);
}

#[test]
fn sz8_from_file() {
    let (code, v) = json(&["analyze", "--file", &data("groups/sz8.gens")]);
    assert_eq!(code, 0);
    assert_eq!(bound(&v), "448");
    assert_eq!(v["bounds"]["verdict"], "ekr-certified-with-conjecture-surrogate");
}

#[test]
fn hs_chartab() {
    let hs = data("hs.ctab");
    let (code, v) = json(&["analyze", "--chartab", &hs, "--weights", "11A,11B"]);
    assert_eq!(code, 0);
    assert_eq!(bound(&v), "252000");
    assert_eq!(v["group"]["source"], "character-table");
    // all five derangement classes at weight 1 do not certify
    let (code, v) = json(&["analyze", "--chartab", &hs]);
    assert_eq!(code, 2);
    assert_eq!(v["bounds"]["verdict"], "inconclusive");
}

#[test]
fn explicit_weights() {
    // PSU(3,3): order-7 classes (size 864) get 5/432, the order-4 class 1/54
    let (_, v) = json(&["analyze", "--family", "psu3", "--q", "3"]);
    let der: Vec<u64> = v["stats"]["classes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["fixed_points"] == 0)
        .map(|c| c["size"].as_u64().unwrap())
        .collect();
    let w: Vec<&str> = der.iter().map(|&s| if s == 864 { "5/432" } else { "1/54" }).collect();
    let (code, v) = json(&["analyze", "--family", "psu3", "--q", "3", "--weights", &w.join(",")]);
    assert_eq!(code, 0);
    assert_eq!(bound(&v), "216");
    let out = ekr(&["analyze", "--family", "psu3", "--q", "3", "--weights", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("length 1, expected 3"));
}

#[test]
fn search_and_brute() {
    let (code, v) = json(&["analyze", "--family", "psl", "--n", "2", "--q", "7", "--search"]);
    assert_eq!(code, 0);
    assert_eq!(v["coclique"]["witness"]["size"], 21);
    assert_eq!(v["clique"]["elements"].as_array().unwrap().len(), 8);
    let (code, v) = json(&["brute", "--family", "psl", "--n", "2", "--q", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["coclique"]["witness"]["size"], 12);
    assert_eq!(v["module_v_rank"], 17);

    let dir = std::env::temp_dir().join(format!("ekr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let s3: PathBuf = dir.join("s3.gens");
    std::fs::write(&s3, "degree 3\n(1,2)\n(1,2,3)\n").unwrap();
    let (code, v) = json(&["brute", "--file", s3.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["coclique"]["witness"]["size"], 2);
    assert_eq!(v["module_v_rank"], 5);
    // a one-node budget leaves a partial result
    let (code, v) = json(&["brute", "--family", "psl", "--n", "2", "--q", "7", "--budget", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["coclique"]["complete"], false);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn reports_are_deterministic() {
    let args = ["analyze", "--family", "psl", "--n", "3", "--q", "3", "--weights", "search", "--report", "-"];
    let a = ekr(&args);
    let b = ekr(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = ekr(&seq);
    assert!(a.status.success() || a.status.code() == Some(2));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn errors_exit_1() {
    assert_eq!(ekr(&["analyze", "--family", "psl", "--n", "2", "--q", "6"]).status.code(), Some(1));
    assert_eq!(ekr(&["analyze", "--family", "psl", "--n", "2"]).status.code(), Some(1));
    assert_eq!(ekr(&["analyze"]).status.code(), Some(1));
    assert_eq!(ekr(&["analyze", "--file", "a", "--chartab", "b"]).status.code(), Some(1));
    assert_eq!(ekr(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ekr(&["verify-paper", "--scope", "nonsense"]).status.code(), Some(1));
    let out = ekr(&["analyze", "--family", "psl", "--n", "3", "--q", "4", "--cap", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("character-table"));
    assert_eq!(ekr(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_scopes() {
    let out = ekr(&["verify-paper", "--scope", "ree"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("15 passed, 0 failed"), "{text}");
    let (code, v) = json(&["verify-paper", "--scope", "small-sporadics"]);
    assert_eq!(code, 0);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["sections"].as_array().unwrap().len(), 7);
}

#[test]
fn data_dir_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_ekr"))
        .args(["verify-paper", "--scope", "small-sporadics"])
        .env("EKR_DATA_DIR", "/nonexistent/ekr-data")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/ekr-data"));
    let out = Command::new(env!("CARGO_BIN_EXE_ekr"))
        .args(["verify-paper", "--scope", "small-sporadics"])
        .env("EKR_DATA_DIR", data(""))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

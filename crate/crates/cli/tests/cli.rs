use lzero_cli::{run_cli, CliOutput, ENV_CACHE_DIR};
use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> CliOutput {
    let mut argv = vec!["lzero"];
    argv.extend_from_slice(args);
    run_cli(argv)
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn hminus_report() {
    let v = json(&["hminus", "-p", "23", "--format", "json"]);
    assert_eq!(v["p"], 23);
    assert_eq!(v["h_minus"], 3);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["records"].as_array().unwrap().len(), 11);
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["hminus", "-p", "4"][..],
        &["hminus"],
        &["nonsense"],
        &["prop1", "--fmax", "2", "--pmax", "7"],
        &["corollary1", "-p", "5", "-q", "7"],
        &["lvalue", "-f", "6", "--chi", "1"],
        &["lvalue", "-f", "5", "--chi", "x"],
        &["kummer", "-p", "9"],
        &["remark2", "-p", "3", "--rmax", "9"],
        &["prop1", "--fmax", "10", "--pmax", "7", "--jobs", "0"],
        &["prop1", "--fmax", "10", "--pmax", "7", "--precision", "0"],
        &["star", "-p", "7", "--format", "xml"],
    ] {
        let out = run(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    assert!(run(&["nonsense"]).stderr.contains("Usage"));
}

#[test]
fn prop1_small_scan() {
    let v = json(&["prop1", "--fmax", "10", "--pmax", "7"]);
    assert_eq!(v["non_integral"], 5);
    let loci: Vec<(u64, u64)> = v["loci"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| (l["f"].as_u64().unwrap(), l["p"].as_u64().unwrap()))
        .collect();
    assert_eq!(loci, vec![(3, 3), (5, 5), (7, 7), (9, 3), (9, 3)]);
    // every record carries a tower that is also listed at the top
    let towers = v["towers"].as_array().unwrap();
    for r in v["records"].as_array().unwrap() {
        assert!(towers.contains(&r["tower"]));
        assert!(r["valuation"].as_str().unwrap().contains('/'));
    }
}

#[test]
fn valuations_are_exact_strings() {
    let v = json(&["remark2", "-p", "3", "--rmax", "3"]);
    let vals: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["computed"].as_str().unwrap()).collect();
    assert_eq!(vals.iter().filter(|s| **s == "-1/6").count(), 6);
    assert_eq!(vals.iter().filter(|s| **s == "-1/2").count(), 2);
    assert_eq!(vals.iter().filter(|s| **s == "-1/1").count(), 1);
}

#[test]
fn lvalue_single_character() {
    let v = json(&["lvalue", "-f", "5", "--chi", "1", "-p", "5"]);
    let r = &v["records"][0];
    assert_eq!(r["l0"], serde_json::json!(["3/5", "1/5"]));
    assert_eq!(r["valuation"], "0/1");
    let all = json(&["lvalue", "-f", "5"]);
    assert_eq!(all["characters"], 3);
}

#[test]
fn other_subcommands_succeed() {
    let v = json(&["irregular", "--pmax", "60"]);
    assert_eq!(v["irregular_primes"], serde_json::json!([37, 59]));
    let v = json(&["kummer", "--pmax", "20"]);
    assert_eq!(v["violations"], 0);
    let v = json(&["deligne-ribet", "-f", "3", "--chi", "1"]);
    assert_eq!(v["records"][0]["w"], 6);
    let v = json(&["deligne-ribet", "--fmax", "20"]);
    assert_eq!(v["violations"], 0);
    let v = json(&["star", "-p", "5"]);
    assert_eq!(v["unique_pole"], true);
    let v = json(&["corollary1", "-p", "3", "-q", "7"]);
    assert_eq!(v["verified"], true);
    let v = json(&["congruence", "--fmax", "40", "-p", "5", "--strict"]);
    assert_eq!(v["anomalies"], 0);
}

#[test]
fn csv_is_a_table_of_records() {
    let out = run(&["kummer", "-p", "7", "--format", "csv"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "equal,lhs,n,p,rhs\ntrue,3,1,7,3\ntrue,6,3,7,6\n");
}

#[test]
fn help_mentions_lossy_csv() {
    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("lossy projection"));
    assert!(out.stdout.contains(ENV_CACHE_DIR));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(ENV_CACHE_DIR, dir.path());
    let first = run(&["hminus", "-p", "13"]);
    std::env::remove_var(ENV_CACHE_DIR);
    assert_eq!(first.code, 0);
    let file = dir.path().join(lzero_core::bernoulli::CACHE_FILE_NAME);
    let lines = std::fs::read_to_string(&file).unwrap();
    assert_eq!(lines.lines().count(), 6);
    let second = run(&["hminus", "-p", "13", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(first, second);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = run(&["congruence", "--fmax", "30", "-p", "3"]);
    let b = run(&["congruence", "--fmax", "30", "-p", "3", "--jobs", "3"]);
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn jobs_do_not_change_output(fmax in 3u64..24, pmax in 3u64..14, jobs in 2usize..6) {
        let f = fmax.to_string();
        let p = pmax.to_string();
        let j = jobs.to_string();
        let base = run(&["prop1", "--fmax", &f, "--pmax", &p]);
        let par = run(&["prop1", "--fmax", &f, "--pmax", &p, "--jobs", &j]);
        prop_assert_eq!(base, par);
    }
}

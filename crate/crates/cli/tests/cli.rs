use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbitcodes"))
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/cli-output.schema.json");
    let text = std::fs::read_to_string(path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

/// Runs with `--json`, validates the document and returns it with the exit code.
fn run_json(args: &[&str]) -> (Value, i32) {
    let out = bin().arg("--json").args(args).output().unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    let v = schema();
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    (doc, out.status.code().unwrap())
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("orbitcodes-cli-{}-{name}", std::process::id()))
}

#[test]
fn field_reports_companion_and_element() {
    let (doc, code) = run_json(&["field", "--field", "2,4,1,1,0,0,1", "--element-log", "5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["primitive"], true);
    assert_eq!(doc["subfield_degrees"], serde_json::json!([1, 2, 4]));
    assert_eq!(doc["element"]["order"], 3);
    assert_eq!(doc["element"]["degree"], 2);
}

#[test]
fn analyze_small_code() {
    let (doc, code) = run_json(&["analyze", "--field", "2,6,1,1,0,0,0,0,1", "--gen", "logs:0,1,4"]);
    assert_eq!(code, 0);
    assert_eq!((doc["N"].as_u64(), doc["r"].as_u64(), doc["d"].as_u64()), (Some(63), Some(1), Some(4)));
    assert_eq!(doc["spread"], false);
}

#[test]
fn distance_methods_agree_and_csv_is_written() {
    let csv = temp_path("dist.csv");
    let args = ["distance", "--field", "2,6,1,1,0,0,0,0,1", "--gen", "logs:0,1,4", "--distribution"];
    let (brute, _) = run_json(&[&args[..], &["--method", "brute"]].concat());
    let (multi, code) = run_json(&[&args[..], &["--method", "multiset", "--csv", csv.to_str().unwrap()]].concat());
    assert_eq!(code, 0);
    assert_eq!(brute["d"], multi["d"]);
    assert_eq!(brute["distribution"], multi["distribution"]);
    let text = std::fs::read_to_string(&csv).unwrap();
    std::fs::remove_file(&csv).ok();
    assert!(text.starts_with("distance,pairs\n"));
    let pairs: u64 = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(pairs, 63 * 62 / 2);
}

#[test]
fn multiset_refuses_non_primitive_beta() {
    let (doc, code) = run_json(&[
        "distance", "--field", "2,4,1,1,0,0,1", "--gen", "logs:0,1", "--beta-log", "3", "--method", "multiset",
    ]);
    assert_eq!(code, 2);
    assert_eq!(doc["command"], "error");
}

#[test]
fn orbit_lists_spread_members() {
    let (doc, code) = run_json(&["orbit", "--field", "2,6,1,1,0,0,0,0,1", "--gen", "F(3)", "--members"]);
    assert_eq!(code, 0);
    assert_eq!(doc["members"].as_array().unwrap().len(), 9);
    assert_eq!(doc["partial_spread"], true);
}

#[test]
fn link_two_verifies_and_checks_cardinality() {
    let c = "2,3,1,1,0,1@logs:0";
    let (doc, code) = run_json(&["link", "--two", "--code", c, "--code", c, "--verify", "--spot-check", "10", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(doc["N"], "63");
    assert_eq!(doc["verified_distance"], 2);
    assert_eq!(doc["cardinality_bound"]["equality"], true);
}

#[test]
fn link_rejects_wrong_arity() {
    let (_, code) = run_json(&["link", "--two", "--code", "2,3,1,1,0,1@logs:0"]);
    assert_eq!(code, 2);
}

#[test]
fn spot_check_needs_seed() {
    let c = "2,3,1,1,0,1@logs:0";
    let (_, code) = run_json(&["link", "--many", "--code", c, "--code", c, "--spot-check", "5"]);
    assert_eq!(code, 2);
}

#[test]
fn search_exit_codes() {
    let (found, code) = run_json(&["search", "--mode", "exhaustive", "--q", "2", "--n", "6", "--k", "3", "--target-d", "4"]);
    assert_eq!(code, 0);
    assert_eq!(found["best_found"]["validated_distance"], 4);

    let (none, code) = run_json(&["search", "--mode", "exhaustive", "--q", "2", "--n", "8", "--k", "4", "--target-d", "6"]);
    assert_eq!(code, 3);
    assert_eq!(none["candidates_examined"], 11811);
    assert_eq!(none["certified_nonexistence"], true);

    let (_, code) = run_json(&[
        "search", "--mode", "random", "--q", "2", "--n", "10", "--k", "4", "--target-d", "8", "--trials", "20", "--seed", "1",
    ]);
    assert_eq!(code, 4);

    let (_, code) = run_json(&["search", "--mode", "random", "--q", "2", "--n", "8", "--k", "4", "--target-d", "4", "--trials", "5"]);
    assert_eq!(code, 2);

    let (doc, code) = run_json(&["search", "--mode", "exhaustive", "--q", "2", "--n", "20", "--k", "6", "--target-d", "8"]);
    assert_eq!(code, 4);
    assert!(doc["error"].as_str().unwrap().contains("cap"));
}

#[test]
fn random_search_is_reproducible() {
    let args = ["search", "--mode", "random", "--q", "2", "--n", "9", "--k", "3", "--target-d", "4", "--trials", "40", "--seed", "11"];
    let (a, _) = run_json(&[&args[..], &["--jobs", "1"]].concat());
    let (b, _) = run_json(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(a["best_found"], b["best_found"]);
    assert_eq!(a["histogram"], b["histogram"]);
}

#[test]
fn verify_fixtures_filter() {
    let (doc, code) = run_json(&["verify-fixtures", "--filter", "distance-"]);
    assert_eq!(code, 0);
    assert_eq!(doc["total"], 3);
    assert_eq!(doc["passed"], 3);
}

#[test]
fn corrupted_catalog_names_the_fixture() {
    // x^6+x^2+1 = (x^3+x+1)^2
    let path = temp_path("catalog.json");
    let fixture = serde_json::json!([{
        "name": "distance-f64",
        "origin": "published",
        "note": "reducible modulus on purpose",
        "check": {
            "kind": "orbit",
            "field": { "q": 2, "n": 6, "modulus": [1, 0, 1, 0, 0, 0, 1] },
            "generator": "logs:0,1,4",
            "beta_log": 1,
            "expect": { "N": 63, "r": 1, "d": 4 }
        }
    }]);
    std::fs::write(&path, fixture.to_string()).unwrap();
    let (doc, code) = run_json(&["verify-fixtures", "--catalog", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 2);
    let err = doc["reports"][0]["error"].as_str().unwrap();
    assert!(err.starts_with("distance-f64:") && err.contains("reducible"), "{err}");
}

#[test]
fn malformed_field_is_invalid_input() {
    let out = bin().args(["analyze", "--field", "2,6,1,1", "--gen", "logs:0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn cyclic_link_of_spread_and_partial_spread() {
    let (doc, code) = run_json(&[
        "link",
        "--cyclic",
        "--code",
        "2,6,1,1,0,0,0,0,1@F(3)",
        "--cyclic-field",
        "2,7,1,1,0,0,0,0,0,1",
        "--cyclic-gen",
        "rows:1000000;0100101;0011010",
        "--exponents",
        "0,2,5,10,20,23,57,72,75,91,95,109,113",
        "--verify",
    ]);
    assert_eq!(code, 0);
    assert_eq!((doc["n"].as_u64(), doc["N"].as_str()), (Some(13), Some("1165")));
    assert_eq!(doc["verified_distance"], 6);
}

use std::io::Write;
use std::process::{Command, Output};

fn leftq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leftq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn analyze_projection_from_file() {
    let f = temp_file("2\n0 1\n0 1\n");
    let o = leftq(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("projection       true"));
}

#[test]
fn analyze_dihedral_json() {
    let f = temp_file("3\n0 2 1\n2 1 0\n1 0 2\n");
    let o = leftq(&["analyze", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["commutator"]["abelian"], true);
    assert_eq!(v["maltsev"]["maltsev"], "found");
    assert_eq!(v["properties"]["quandle"], true);
}

#[test]
fn analyze_json_is_byte_identical_across_runs() {
    let a = leftq(&["analyze", "dihedral-3xP2", "--json"]);
    let b = leftq(&["analyze", "dihedral-3xP2", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_input_exits_two() {
    let f = temp_file("3\n0 1\n");
    let o = leftq(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed input"));
    let o = leftq(&["analyze", "/no/such/file.lq"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn census_counts() {
    let o = leftq(&["census", "2", "--json", "--count"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["total"], 4);
    let o = leftq(&["census", "3", "--idempotent", "--json", "--count"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["total"], 8);
}

#[test]
fn census_semiregular_idempotent_non_quandle_is_empty() {
    let o = leftq(&["census", "3", "--filter", "semiregular,idempotent,not-quandle", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matching"], 0);
    assert_eq!(v["instances"].as_array().unwrap().len(), 0);
}

#[test]
fn census_iso_classes_cover_every_table() {
    let o = leftq(&["census", "3", "--iso", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sizes: u64 = v["instances"].as_array().unwrap().iter().map(|i| i["class_size"].as_u64().unwrap()).sum();
    assert_eq!(sizes, 216);
}

#[test]
fn census_sampling_is_seeded() {
    let a = leftq(&["census", "5", "--idempotent", "--sample", "5", "--seed", "7", "--json"]);
    let b = leftq(&["census", "5", "--idempotent", "--sample", "5", "--seed", "7", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let o = leftq(&["census", "5"]);
    assert_eq!(o.status.code(), Some(3), "exhaustive order 5 exceeds the cap");
}

#[test]
fn verify_galois_on_order_three() {
    let o = leftq(&["verify", "galois", "--order", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["instances"], 216);
    let conn = v["lemmas"].as_array().unwrap().iter().find(|t| t["id"] == "galois_connection").unwrap();
    assert_eq!(conn["pass"], 216);
}

#[test]
fn verify_fixture_suites() {
    let o = leftq(&["verify", "semiregular-decomposition"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: pass"));
    let o = leftq(&["verify", "nilpotent-latin", "--table", "dihedral-3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_failure_exits_one_and_replays() {
    let o = leftq(&["verify", "tc-monotone", "--table", "non-monotone"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let table: String = out.split("FAIL tc-monotone: ").nth(1).unwrap().lines().skip(1).take(5).collect::<Vec<_>>().join("\n");
    let f = temp_file(&table);
    let again = leftq(&["verify", "tc-monotone", "--table", f.path().to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(1));
}

#[test]
fn verify_extension_suite() {
    let o = leftq(&["verify", "extension", "--sample", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn extend_affine_gives_dihedral() {
    let f = temp_file(r#"{"factors": [3], "g": [0, 2, 1], "f": [0, 2, 1], "c": 0}"#);
    let o = leftq(&["extend", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("3\n0 2 1\n2 1 0\n1 0 2\n"));
    assert!(out.contains("# idempotent: predicted true, observed true"));
}

#[test]
fn extend_trivial_group_echoes_base() {
    let f = temp_file(r#"{"base": "3\n0 2 1\n2 1 0\n1 0 2\n", "factors": [], "g": [0], "f": [0], "theta": [0,0,0,0,0,0,0,0,0]}"#);
    let o = leftq(&["extend", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["table"], serde_json::json!([[0, 2, 1], [2, 1, 0], [1, 0, 2]]));
}

#[test]
fn extend_non_additive_map_exits_two() {
    let f = temp_file(r#"{"factors": [3], "g": [1, 2, 0], "f": [0, 1, 2], "c": 0}"#);
    let o = leftq(&["extend", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn maltsev_command() {
    let o = leftq(&["maltsev", "dihedral-3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("status: found"));
    let o = leftq(&["maltsev", "P2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "notfound");
    let o = leftq(&["maltsev", "dihedral-5", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

use polar_ekr::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("polar-ekr").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out) = call(&a);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn count_w_2_3() {
    assert_eq!(call(&["count", "--family", "W", "--q", "2", "--d", "3"]).1.lines().next(), Some("135"));
}

#[test]
fn hoffman_w_2_2() {
    let v = json(&["hoffman", "--family", "W", "--q", "2", "--d", "2", "--t", "1"]);
    assert_eq!(v["hoffman"], "3");
}

#[test]
fn search_qplus_2_3() {
    let v = json(&["search", "--family", "Qplus", "--q", "2", "--d", "3", "--t", "2"]);
    assert_eq!(v["size"], 15);
    assert_eq!(v["optimal"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 15);
}

#[test]
fn search_is_worker_independent() {
    let base = ["search", "--family", "W", "--q", "2", "--d", "3", "--t", "2"];
    let one = json(&[&base[..], &["--workers", "1"]].concat());
    let four = json(&[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one["witness"], four["witness"]);
    assert_eq!(one["size"], 15);
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().to_str().unwrap();
    let args = ["spectrum", "--family", "W", "--q", "2", "--d", "2", "--verify", "--cache", p];
    assert_eq!(call(&args).0, 0);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(call(&args).0, 0);
}

#[test]
fn lp_and_explicit() {
    let v = json(&["lp", "--family", "W", "--q", "2", "--d", "3", "--t", "1"]);
    assert_eq!(v["lp_value"], "3");
    assert_eq!(v["floor"], "3");
    let v = json(&["explicit", "--family", "W", "--q", "3", "--d", "4", "--t", "2"]);
    assert!(v["explicit"].as_f64().unwrap() > 0.0);
    // q = 2 is outside the closed-form regime
    assert_eq!(call(&["explicit", "--family", "W", "--q", "2", "--d", "4", "--t", "2"]).0, 2);
}

#[test]
fn bounds_grid_json() {
    let v = json(&["bounds", "--family", "Qminus", "--q", "3", "--grid", "d=4..6;t=2..3"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["reports"].as_array().unwrap().len(), 6);
    // big integers are strings
    assert!(v["reports"][0]["n"].is_string());
}

#[test]
fn table_header_is_fixed() {
    let (code, out) = call(&["table", "--family", "W", "--q", "3", "--grid", "d=3..4", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), polar_ekr::cli::BOUND_COLUMNS.join(","));
    assert_eq!(out.lines().count(), 1 + 4 + 5);
}

#[test]
fn verify_single_suite() {
    let (code, out) = call(&["verify", "--suite", "12"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("[PASS] 12"), "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["count", "--family", "X", "--q", "2", "--d", "2"]).0, 2);
    assert_eq!(call(&["count", "--family", "W", "--q", "6", "--d", "2"]).0, 2);
    assert_eq!(call(&["bounds", "--family", "W", "--q", "3", "--grid", "d=2..x"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

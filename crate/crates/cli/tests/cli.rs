use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starlike"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, String) {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    (serde_json::from_str(&text).unwrap(), text)
}

#[test]
fn poly_lehmer_tree() {
    let out = run(&["poly", "2", "3", "7"]);
    assert!(out.status.success());
    // CAS expansion of (z - 1)^{-3} P for T(2,3,7)
    assert!(stdout(&out).contains("[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]"));
    assert!(stdout(&out).contains("P = z^10 Q + z^4 R + S"));
}

#[test]
fn poly_two_arms_and_unordered() {
    let out = run(&["poly", "2", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[1, 1, 1, 1, 1]"));

    let out = run(&["poly", "3", "3", "5"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the Salem-factor hypotheses"));
    assert!(stdout(&out).contains("R_T"));
}

#[test]
fn factor_salem_and_cyclotomic() {
    let (v, _) = json(&["factor", "2", "3", "7", "--json"]);
    assert_eq!(v["classification"], "Salem");
    assert_eq!(v["salem_degree"], 10);
    assert_eq!(v["unramified"], true);
    let tau = v["certificate"]["tau"].as_str().unwrap();
    assert!(tau.starts_with("1.176280818"), "{tau}");
    assert_eq!(tau.len(), "1.".len() + 30);

    let (v, _) = json(&["factor", "2", "3", "5", "--format", "json"]);
    assert_eq!(v["classification"], "CyclotomicOnly");
    assert!(v["certificate"].is_null());
    assert_eq!(v["cyclotomic"][0]["order"], 30);
}

#[test]
fn factor_record_schema_and_round_trip() {
    let (v, text) = json(&["factor", "2", "3", "4", "--json"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "arms",
            "certificate",
            "classification",
            "cyclotomic",
            "degree_lower_bound",
            "order_bound",
            "salem_coeffs",
            "salem_degree",
            "unramified"
        ]
    );
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, text);
    assert!(v["salem_coeffs"].as_array().unwrap().iter().all(Value::is_string));
}

#[test]
fn mbonacci_csv() {
    let out = run(&["converge", "mbonacci", "--a0", "2", "--eta", "1", "--a1", "10,20,30,40"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "a_arms,tau,limit,gap");
    let gaps: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap().abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn bound_trace() {
    let (v, _) = json(&["bound", "2", "1"]);
    let m: u64 = v["m"].as_str().unwrap().parse().unwrap();
    assert!(m >= 1);
    let eta = v["eta_lower"].as_str().unwrap();
    assert!(!eta.starts_with('-') && eta != "0");
    assert_eq!(v["f0_upper"], "2");
}

#[test]
fn mann_cube_roots() {
    let (v, _) = json(&["mann", "1", "1", "1", "1", "2"]);
    let orders: Vec<u64> = v["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, [3, 3]);
    assert_eq!(v["all_divide"], true);
    // negative values parse as numbers, not flags
    assert!(run(&["mann", "-1", "1", "1", "-1", "2"]).status.success());
}

#[test]
fn scan_csv_and_output_file() {
    let path = std::env::temp_dir().join(format!("starlike-scan-{}.csv", std::process::id()));
    let out = run(&["scan", "--k-max", "8", "--a1", "4..12", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a0,eta,a1,k,a1_mod_k,divides");
    assert_eq!(lines.len(), 1 + 9 * 8);
    assert_eq!(lines[2], "2,1,4,2,0,true");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["poly", "1", "3"]).status.code(), Some(2));
    assert_eq!(run(&["poly", "4"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--a0", "5", "--a1", "4..10"]).status.code(), Some(2));
    assert_eq!(run(&["factor", "2", "3", "7", "--digits", "9"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "1", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn small_grid_summary() {
    let (v, _) = json(&["grid", "--a0", "2..4", "--a1", "3..7", "--a2", "4..8"]);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["skipped"], 3);
    assert_eq!(v["triples"], 31);
    assert_eq!(v["checked"].as_u64().unwrap() + 3, 31);
    assert!(v["max_observed_order"].as_u64().unwrap() >= 2);
    assert!(v["max_bridge_gap"].is_string());
}

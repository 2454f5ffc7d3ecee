use std::process::{Command, Output};

use serde_json::Value;

fn bolza(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bolza")).args(args).output().expect("failed to run bolza")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is not JSON")
}

#[test]
fn spectrum_to_length_five_has_the_two_simple_rows() {
    let out = bolza(&["spectrum", "--max-length", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let l2 = 2.0 * (3.0 + 2.0 * 2f64.sqrt()).acosh();
    for (row, (len, p, q)) in rows.iter().zip([(2.0 * (1.0 + 2f64.sqrt()).acosh(), 2, 2), (l2, 6, 4)]) {
        assert!((row["length"].as_f64().unwrap() - len).abs() < 1e-9);
        assert_eq!((row["trace_p"].as_i64().unwrap(), row["trace_q"].as_i64().unwrap()), (p, q));
        assert_eq!(row["mult_simple"], 12);
    }
    assert_eq!(v["certified"], true);
}

#[test]
fn spectrum_below_the_systole_is_empty() {
    let out = bolza(&["spectrum", "--max-length", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn high_precision_spectrum_has_the_same_classes() {
    let words = |p: &str| -> Vec<Value> {
        let v = json(&bolza(&["spectrum", "--max-length", "8", "--precision", p]));
        v["rows"].as_array().unwrap().iter().flat_map(|r| r["words"].as_array().unwrap().clone()).collect()
    };
    let double = words("double");
    assert_eq!(double.len(), 196);
    assert_eq!(double, words("high"));
}

#[test]
fn csv_output_uses_crlf_records() {
    let out = bolza(&["spectrum", "--max-length", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.split_terminator("\r\n").collect();
    assert_eq!(lines[0], "length,trace_p,trace_q,mult_total,mult_simple,words");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with(",2,2,12,12,A B C D Ab AD Bc Cd AbC AbD AcD BcD"));
}

#[test]
fn output_does_not_depend_on_the_worker_count() {
    for args in [["spectrum", "--max-length", "7"], ["render", "--system", "second"]] {
        let one = bolza(&[&args[..], &["--jobs", "1"]].concat());
        let many = bolza(&[&args[..], &["--jobs", "4"]].concat());
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, many.stdout, "{args:?}");
    }
}

#[test]
fn complexity_rows_start_at_zero() {
    let out = bolza(&["complexity", "--kmax", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r["T_k"] == 0 && r["certified"] == true));
}

#[test]
fn certified_only_rejects_rows_beyond_the_sweep() {
    let out = bolza(&["complexity", "--kmax", "8", "--max-length", "9", "--certified-only"]);
    assert_eq!(out.status.code(), Some(2));
    let rows = json(&out);
    let flags: Vec<bool> = rows.as_array().unwrap().iter().map(|r| r["certified"].as_bool().unwrap()).collect();
    assert_eq!(flags, [true, true, true, true, true, false, false, false]);
}

#[test]
fn graph_of_the_second_systoles() {
    let dir = std::env::temp_dir().join(format!("bolza-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("second.dot");
    let out = bolza(&["graph", "--system", "second", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["V"].as_u64(), v["E"].as_u64(), v["F"].as_u64()), (Some(22), Some(72), Some(48)));
    assert_eq!(v["euler"], -2);
    assert_eq!(v["census"][0]["signature"], "(4,3,3)");
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches(" -- ").count(), 72);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn graph_of_a_non_filling_pair() {
    let v = json(&bolza(&["graph", "--words", "A,C"]));
    assert_eq!(v["filling"], false);
    assert!(v["V"].is_null());
}

#[test]
fn render_is_deterministic_and_capped() {
    let a = bolza(&["render", "--system", "sys"]);
    let b = bolza(&["render", "--system", "sys"]);
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert_eq!(svg.matches("class=\"curve\"").count(), 12);
    assert_eq!(bolza(&["render", "--depth", "7"]).status.code(), Some(1));
}

#[test]
fn verify_skips_criteria_above_kmax() {
    let out = bolza(&["verify", "--kmax", "6", "--only", "3,4,5,8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let status: Vec<&str> = v["criteria"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap()).collect();
    assert_eq!(status, ["skipped", "skipped", "skipped", "pass"]);
}

#[test]
fn verify_catches_a_sabotaged_generator() {
    let out = bolza(&["verify", "--perturb", "1e-6", "--only", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["criteria"][0]["status"], "fail");
    assert!(String::from_utf8_lossy(&out.stderr).contains("failing criteria: [9]"));
}

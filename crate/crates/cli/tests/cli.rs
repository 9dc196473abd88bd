use std::process::{Command, Output};

use serde_json::Value;

fn obstruct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstruct")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = obstruct(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn delta2_text_and_json() {
    let out = obstruct(&["delta2", "-1", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("delta2 mod 2: zero"), "{text}");
    assert!(text.contains("(4)_5"), "{text}");

    let v = json(&["delta2", "18", "5", "--json"]);
    assert_eq!(v["delta2"]["global"], "nonzero");
    assert!(v["delta2"]["witnesses"].as_array().unwrap().iter().any(|w| w["place"] == "5"));
    assert_eq!(v["point"]["b"], "18");
}

#[test]
fn delta3_single_place() {
    let v = json(&["delta3", "-1", "5", "--place", "5", "--json"]);
    let local = v["delta3_mod2"]["local"].as_array().unwrap();
    assert_eq!(local.len(), 1);
    assert_eq!(local[0]["status"], "nonzero");
    assert_eq!(local[0]["cases"][0]["cup"], 1);

    let text = stdout(&obstruct(&["delta3", "-3", "5", "--place", "R"]));
    assert!(text.contains("place R: ZERO"), "{text}");
}

#[test]
fn report_schema() {
    let v = json(&["report", "12/7", "10", "--json"]);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["point", "delta2", "delta3_mod2", "notes"]);
    let places: Vec<&str> =
        v["delta2"]["local"].as_array().unwrap().iter().map(|l| l["place"].as_str().unwrap()).collect();
    assert_eq!(places, ["3", "5", "7", "R"]);
    for entry in v["delta3_mod2"]["local"].as_array().unwrap() {
        let status = entry["status"].as_str().unwrap();
        assert!(["zero", "nonzero", "blocked_by_delta2"].contains(&status));
        for case in entry["cases"].as_array().unwrap() {
            assert!(case["applicable"].is_boolean());
            assert!(case["cup"] == 0 || case["cup"] == 1);
        }
    }
    assert!(v["notes"][0].as_str().unwrap().starts_with("verdict:"));
}

#[test]
fn report_text_gives_a_verdict() {
    let text = stdout(&obstruct(&["report", "-1", "5"]));
    assert!(text.contains("verdict: not on the curve: delta3 mod 2 is nonzero at 5"), "{text}");
}

#[test]
fn family_commands() {
    let out = obstruct(&["family", "specific-lift", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("place 5: (1/2, 1/2)"));
    let out = obstruct(&["family", "global", "13"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("ZERO"));
}

#[test]
fn precondition_errors_exit_with_2() {
    for args in [
        &["family", "global", "7"][..],
        &["family", "specific-lift", "7"],
        &["family", "global", "15"],
        &["delta3", "1", "2", "--place", "2"],
        &["delta2", "0", "5"],
        &["delta2", "1/0", "5"],
        &["report", "abc", "5"],
        &["verify", "--suite", "bogus"],
    ] {
        let out = obstruct(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_nilpotent_suite() {
    let out = obstruct(&["verify", "--suite", "nilpotent", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains(" 0 failures"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_cochain_suite_small_models() {
    let out = obstruct(&["verify", "--suite", "cochain", "--max-group-order", "4"]);
    assert!(out.status.success(), "{}", stdout(&out));
}

use std::process::{Command, Output};

use serde_json::Value;

fn linset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linset")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_examples_pass() {
    let out = linset(&["--json", "verify", "lemma21", "--p", "3", "--e", "1", "--n", "6", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["summary"]["fail"], 0);

    let out = linset(&["--json", "verify", "thm34", "--p", "5", "--e", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let witness = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "constructive_witness").unwrap();
    assert_eq!(witness["status"], "pass");
    assert!(witness["detail"]["witness"].is_object());

    let out = linset(&["verify", "d6", "--p", "3", "--e", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d6/power_sum_collapse: pass"));
}

#[test]
fn exit_codes() {
    assert_eq!(linset(&["verify", "nope", "--p", "3"]).status.code(), Some(2));
    assert_eq!(linset(&["--field", "3^1^6", "eval", "x^q^6", "1"]).status.code(), Some(2));
    assert_eq!(linset(&["--field", "3^1^6", "bogus"]).status.code(), Some(2));
    let out = linset(&["--field", "5^1^6", "--json", "equiv", "x^q", "x^q^5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["equivalent"], "unknown");
    let out = linset(&["--field", "3^1^6", "family", "witness", "binomial", "--theta", "g", "--delta", "g^2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn equivalence_report() {
    let out = linset(&["--field", "3^1^6", "--json", "equiv", "x^q + g*x^q^4", "x^q + g^3*x^q^4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["equivalent"], true);
    assert!(v["candidates_scanned"].as_u64().unwrap() > 0);
    assert_eq!(v["witness"]["matrix_dlogs"].as_array().unwrap().len(), 4);

    // Same linear set, inequivalent subspaces.
    let out = linset(&["--field", "3^1^5", "--json", "equiv", "--mode", "gammal", "x^q", "x^q^2"]);
    assert_eq!(json_of(&out)["equivalent"], false);
    let out = linset(&["--field", "3^1^5", "--json", "equiv", "x^q", "x^q^2"]);
    assert_eq!(json_of(&out)["equivalent"], true);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let run = |t: &str| linset(&["--json", "--threads", t, "verify", "thm34", "--p", "3"]).stdout;
    assert_eq!(run("1"), run("4"));
}

#[test]
fn basic_subcommands() {
    let out = linset(&["--field", "3^1^6", "--json", "field"]);
    let v = json_of(&out);
    assert_eq!(v["size"], 729);
    assert_eq!(v["modulus"].as_array().unwrap().len(), 7);

    let out = linset(&["--p", "3", "--n", "6", "--json", "scattered", "x^q + x^q^3 + g^455*x^q^5"]);
    assert_eq!(json_of(&out)["scattered"], true);

    let out = linset(&["--field", "3^1^6", "--json", "eval", "x^q", "g"]);
    assert_eq!(json_of(&out)["value"], 3);

    let out = linset(&["--field", "3^1^6", "--json", "linset", "x^q"]);
    assert_eq!(json_of(&out)["linset"]["card"], 364);

    let out = linset(&["--field", "3^1^6", "--json", "invariants", "x^q + g*x^q^4", "--other", "x^q^5 + g^9*x^q^2"]);
    let v = json_of(&out);
    assert_eq!(v["power_sums_equal"], true);
    assert_eq!(v["identity_failures"].as_array().unwrap().len(), 0);

    let out = linset(&["--field", "3^1^6", "--json", "family", "invert", "cmmz", "--theta", "g^455"]);
    assert_eq!(json_of(&out)["inverse"]["text"], "g^455*x^q + x^q^3 + x^q^5");

    let out = linset(&["--field", "3^1^6", "autgroup", "x^q + g*x^q^4", "--predicted", "binomial", "--theta", "g"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("order: 52"));
}

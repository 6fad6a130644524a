use std::process::Command;

use qcoord::cli::{run, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn qcoord(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qcoord").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = qcoord(args);
    assert_eq!(code, EXIT_OK, "args {args:?}: {err}");
    out.trim_end().to_string()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

#[test]
fn determinant_example() {
    assert_eq!(ok(&["det", "--n", "2"]), "t[1,1] t[2,2] - q t[1,2] t[2,1]");
    assert_eq!(
        ok(&["nf", "t[1,1] t[2,2] - q t[1,2] t[2,1]", "--variant", "gl"]),
        "D"
    );
    assert_eq!(
        ok(&["nf", "t[1,1] t[2,2] - q t[1,2] t[2,1]", "--variant", "sl"]),
        "1"
    );
}

#[test]
fn normal_forms_and_products() {
    assert_eq!(ok(&["nf", "t[1,2] t[1,1]"]), "q^-1 t[1,1] t[1,2]");
    assert_eq!(
        ok(&["mul", "t[2,2]", "t[1,1]"]),
        "t[1,1] t[2,2] + (q^-1 - q) t[1,2] t[2,1]"
    );
    assert_eq!(ok(&["mul", "t[2,1]", "t[1,2]"]), "t[1,2] t[2,1]");
    assert_eq!(ok(&["nf", "-t[1,1]"]), "-t[1,1]");
    assert_eq!(ok(&["nf", "D^-1 D", "--variant", "gl"]), "1");
    // Odd root of unity: q^3 = 1.
    assert_eq!(ok(&["nf", "q^3 t[1,1] - t[1,1]", "--ell", "3"]), "0");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["nf", "t[1,3]"][..],
        &["nf", "t[1,1"],
        &["nf", "D"],
        &["frobnicate"],
        &["expand", "t[1,1]"],
        &["basis", "--ell", "4"],
        &["det", "--n", "0"],
        &["det", "--variant", "x"],
        &["phi", "t[1,1]", "--ell", "3", "--order", "opposite"],
    ] {
        let (code, _, err) = qcoord(args);
        assert_eq!(code, EXIT_USAGE, "args {args:?}");
        assert!(!err.is_empty(), "args {args:?}");
    }
}

#[test]
fn parse_errors_point_at_the_offset() {
    let (_, _, err) = qcoord(&["nf", "t[1,1] + t[1,3]"]);
    let lines: Vec<&str> = err.lines().collect();
    assert!(lines[0].contains("byte 13"), "{err}");
    assert_eq!(lines[2].find('^'), lines[1].find("t[1,3]").map(|k| k + 4));
}

#[test]
fn help_exits_0() {
    let (code, out, _) = qcoord(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("check"));
}

#[test]
fn check_exit_codes() {
    assert_eq!(qcoord(&["check", "central", "--n", "3"]).0, EXIT_OK);
    assert_eq!(qcoord(&["check", "iso"]).0, EXIT_OK);
    assert_eq!(
        qcoord(&["check", "pbw-confluence", "--max-len", "3"]).0,
        EXIT_OK
    );
    assert_eq!(qcoord(&["check", "frobenius"]).0, EXIT_OK);
    // Both fail against the algebra as defined; see the README.
    assert_eq!(
        qcoord(&["check", "identities", "--max-degree", "2"]).0,
        EXIT_CHECK_FAILED
    );
    assert_eq!(qcoord(&["check", "nakayama"]).0, EXIT_CHECK_FAILED);
}

#[test]
fn check_report_json_shape() {
    let v = json(&["check", "central", "--json"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["check"], "central");
    assert_eq!(v["n"], 2);
    assert!(v.get("ell").is_none());
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 4);
    for c in cases {
        assert!(c["input"].is_string());
        assert_eq!(c["residual"], "0");
        assert_eq!(c["pass"], true);
    }
    let v = json(&["check", "frobenius", "--ell", "3", "--json"]);
    assert_eq!(v["ell"], 3);
}

#[test]
fn expand_json_shape() {
    let v = json(&["expand", "t[1,1]^4 t[2,2] + q", "--ell", "3", "--json"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["ell"], 3);
    assert_eq!(v["n"], 2);
    assert_eq!(v["variant"], "m");
    let entries = v["entries"].as_array().unwrap();
    let pairs: Vec<(&str, &str)> = entries
        .iter()
        .map(|e| {
            (
                e["basis_key"].as_str().unwrap(),
                e["classical_coeff"].as_str().unwrap(),
            )
        })
        .collect();
    assert_eq!(pairs, [("t[1,1] t[2,2]", "tbar[1,1]"), ("1", "q")]);
}

#[test]
fn root_of_unity_commands() {
    assert_eq!(
        ok(&["phi", "t[1,1]^2 t[1,2]^2 t[2,1]^2 t[2,2]^2", "--ell", "3"]),
        "1"
    );
    assert_eq!(ok(&["phi", "t[1,1]", "--ell", "3"]), "0");
    // nu(t[i,j]) = eps^(2(i+j-n-1)) t[i,j]: t[1,1] picks up eps^-2 = eps at ell = 3.
    assert_eq!(ok(&["nakayama", "t[1,1]", "--ell", "3"]), "q t[1,1]");
    assert_eq!(
        ok(&["nakayama", "t[1,2] t[2,1]", "--ell", "3"]),
        "t[1,2] t[2,1]"
    );
    let basis = ok(&["basis", "--ell", "3"]);
    assert_eq!(basis.lines().count(), 81);
    assert_eq!(basis.lines().next(), Some("1"));
    let v = json(&["basis", "--ell", "3", "--variant", "gl", "--json"]);
    assert_eq!(v["basis"].as_array().unwrap().len(), 81);
}

#[test]
fn gl_expand_round_trip_through_cli() {
    let out = ok(&["expand", "D^2 t[1,2]", "--ell", "3", "--variant", "gl"]);
    assert!(out.lines().all(|l| l.contains(": ")), "{out}");
    assert!(!out.contains('D') || out.contains("Dbar"), "{out}");
}

#[test]
fn json_normal_form() {
    let v = json(&["nf", "t[2,2] t[1,1]", "--json"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"], "t[1,1] t[2,2] + (q^-1 - q) t[1,2] t[2,1]");
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
}

/// Printing a normal form and parsing it back reproduces the same normal form.
#[test]
fn print_parse_round_trip_corpus() {
    let corpus = include_str!("data/roundtrip_corpus.txt");
    let mut checked = 0;
    for line in corpus
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let (config, expr) = line.split_once(" | ").unwrap();
        let fields: Vec<&str> = config.split_whitespace().collect();
        let [variant, n, ell] = fields[..] else {
            panic!("bad corpus line {line}")
        };
        let mut args = vec!["nf", expr, "--variant", variant, "--n", n];
        if ell != "-" {
            args.extend(["--ell", ell]);
        }
        let first = ok(&args);
        args[1] = &first;
        let second = ok(&args);
        assert_eq!(first, second, "corpus line {line}");
        checked += 1;
    }
    assert_eq!(checked, 100);
}

#[test]
fn binary_end_to_end() {
    let bin = env!("CARGO_BIN_EXE_qcoord");
    let out = Command::new(bin)
        .args(["det", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim_end(),
        "t[1,1] t[2,2] - q t[1,2] t[2,1]"
    );

    let out = Command::new(bin).args(["nf", "t[9,9]"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(bin)
        .args(["check", "nakayama", "--json"])
        .env("QCOORD_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["check"], "nakayama");
    assert_eq!(v["ell"], 3);
    let failed = v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .count();
    assert_eq!(failed, 74);
}

//! End-to-end runs of the `affauto` binary.

use std::process::Command;

fn affauto(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_affauto"))
        .args(args)
        .env_remove("AFFAUTO_MAX_DEGREE")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).trim().to_string(),
        String::from_utf8_lossy(&out.stderr).trim().to_string(),
    )
}

#[test]
fn weights_table() {
    assert_eq!(affauto(&["weights", "--d", "4", "--n", "2", "--bound", "9", "--json"]).1, "[1,3,5,7,9]");
    assert_eq!(affauto(&["weights", "--d", "2", "--bound", "5"]).1, "1 2 3 4 5");
}

#[test]
fn semigroup_commands() {
    assert_eq!(affauto(&["semigroup", "saturate", "--gens", "4:2,6:1", "--json"]).1, r#"{"d":2,"s":3}"#);
    assert_eq!(affauto(&["semigroup", "recognize", "--gens", "3:2", "--json"]).1, r#"{"d":3,"s":2}"#);
    assert_eq!(affauto(&["semigroup", "recognize", "--gens", "4:2,6:1", "--json"]).1, "null");
    let (code, _, err) = affauto(&["semigroup", "closure", "--gens", "7:3", "--bound", "25"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn polynomial_commands() {
    assert_eq!(affauto(&["poly", "root", "x1^2 + 2*x1*x2 + x2^2", "--n", "2", "--d", "2"]).1, "x1 + x2");
    assert_eq!(affauto(&["poly", "root", "x1^2 + 1", "--n", "1", "--d", "2"]).0, 1);
    assert_eq!(affauto(&["poly", "parse", "x1 +", "--n", "1"]).0, 2);
}

#[test]
fn automorphism_commands() {
    assert_eq!(affauto(&["auto", "invert", "(x1 + x2^2, x2)"]).1, "(-x2^2 + x1, x2)");
    assert_eq!(affauto(&["auto", "compose", "(x1 + x2, x2)", "(x1, x2 + x1^2)"]).1, "(x1^2 + x1 + x2, x1^2 + x2)");
    let (_, jac, _) = affauto(&["auto", "jacobian", "(x1 + x2^2, x2)", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&jac).unwrap();
    assert_eq!(v["constant"], true);
    let (code, out, _) = affauto(&["auto", "decompose", "(x1 + x2^2, x2)"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert_eq!(affauto(&["auto", "invert", "(x1^3, x2)"]).0, 1);
}

#[test]
fn equivariant_commands() {
    assert_eq!(affauto(&["equi", "check", "(x1 + x2^3, x2)", "--d", "2"]).1, "equivariant under mu_2");
    assert_eq!(affauto(&["equi", "check", "(x1 + x2^2, x2)", "--d", "2"]).1, "not equivariant under mu_2");
    let (code, json, _) = affauto(&["equi", "descend", "(x1 + x2^3, x2)", "--d", "2", "--json"]);
    assert_eq!(code, 0);
    let path = std::env::temp_dir().join(format!("affauto-cli-{}.json", std::process::id()));
    std::fs::write(&path, &json).unwrap();
    let (code, lifted, err) = affauto(&["equi", "lift", "--images", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0, "{err}");
    assert!(lifted.starts_with("lift: (x2^3 + x1, x2)") || lifted.starts_with("lift: (-x2^3 - x1, -x2)"), "{lifted}");
    let (_, kernel, _) = affauto(&["equi", "kernel", "--d", "6", "--n", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&kernel).unwrap();
    assert_eq!(v["order"], 6);
    assert_eq!(v["sl_scalar_kernel"], 2);
}

#[test]
fn lnd_commands() {
    assert!(affauto(&["lnd", "check", "x2, 0"]).1.starts_with("certified_yes"));
    assert!(affauto(&["lnd", "check", "x1, 0"]).1.starts_with("no"));
    assert_eq!(affauto(&["lnd", "exp", "x2, 0"]).1, "(x2*x3 + x1, x2, x3)");
    assert_eq!(affauto(&["lnd", "exp", "x2, 0", "--t", "-2"]).1, "(x1 - 2*x2, x2)");
    assert_eq!(affauto(&["lnd", "modify", "x2, 0", "--f", "x2"]).1, "x2^2*d/dx1");
    assert_eq!(affauto(&["lnd", "modify", "x2, 0", "--f", "x1"]).0, 1);
    assert_eq!(affauto(&["lnd", "kernel", "x2, 0", "--bound", "2"]).1, "1\nx2\nx2^2");
}

#[test]
fn surface_commands() {
    assert_eq!(affauto(&["surface", "weights", "--bound", "7", "--tau"]).1, "1 3 5 7");
    assert_eq!(affauto(&["surface", "tau", "--p", "z^2 + 1"]).1, "commutes with tau");
    assert_eq!(affauto(&["surface", "tau", "--p", "z^3"]).1, "does not commute with tau");
    assert_eq!(affauto(&["surface", "identity", "--p", "z^5"]).1, "identity holds");
    assert_eq!(affauto(&["surface", "quotient", "--matrix", "1,2,3,4"]).0, 1);
}

#[test]
fn verification_driver() {
    let (code, out, _) = affauto(&["verify", "kernels"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS"));
    assert_eq!(affauto(&["verify", "nonsense"]).0, 2);
}

#[test]
fn degree_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_affauto"))
        .args(["poly", "parse", "x1^5", "--n", "1"])
        .env("AFFAUTO_MAX_DEGREE", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ring_membership_flag() {
    assert_eq!(affauto(&["poly", "parse", "x1^4 + x2^2", "--n", "2", "--d", "2", "--s", "1"]).1, "x1^4 + x2^2\nin R(d=2, s=1): true");
    assert!(affauto(&["poly", "parse", "x1^4 + x2^2", "--n", "2", "--d", "2", "--s", "2"]).1.ends_with("false"));
}

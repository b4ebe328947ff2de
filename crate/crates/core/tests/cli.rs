use std::process::{Command, Output};

fn hqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hqm"))
        .args(args)
        .env("HQM_THREADS", "2")
        .output()
        .expect("run hqm")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn phi_prints_monomials() {
    let out = hqm(&["phi", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["m"], 3);
    assert_eq!(v["monomials"].as_array().unwrap().len(), 3);
}

#[test]
fn genus_one_counts() {
    let out = hqm(&["counts", "--m", "2", "--g", "1", "--dmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"3/2\""), "{text}");
}

#[test]
fn fit_genus_two() {
    let out = hqm(&["fit", "--m", "2", "--g", "2", "--dmax", "24"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["homogeneous_weight"], 6);
    assert_eq!(v["expected_weight_matches"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(
        hqm(&["fit", "--m", "2", "--g", "2", "--dmax", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hqm(&["fit", "--m", "2", "--g", "3", "--dmax", "40", "--wmax", "10"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        hqm(&["oracle", "--m", "2", "--d", "8", "--b", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hqm(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(hqm(&["phi", "--m", "1"]).status.code(), Some(2));
}

#[test]
fn injected_fault_is_caught() {
    let out = hqm(&[
        "selftest",
        "--only",
        "1,2",
        "--inject-fault",
        "phi3-constant",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("FAIL  1"), "{err}");
    assert!(err.contains("f_phi"), "{err}");
}

#[test]
fn output_is_deterministic() {
    let a = hqm(&["counts", "--m", "3", "--g", "2", "--dmax", "8"]);
    let b = hqm(&["counts", "--m", "3", "--g", "2", "--dmax", "8"]);
    assert_eq!(a.stdout, b.stdout);
}

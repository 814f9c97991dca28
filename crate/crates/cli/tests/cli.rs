//! Binary-level tests: exit-code contract, diagnostics, fixture
//! canonicality, certificate self-validation on reload, and the search
//! bound environment override.

mod common;

use std::process::Command;

use serde_json::Value;

use statcat_cli::certificate::kernel_from_value;
use statcat_cli::document::{model_to_value, parse_model, to_canonical_string};
use statcat_core::inference::verify_equivalence_certificate;

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(common::binary())
        .args(args)
        .output()
        .expect("binary runs");
    (
        output.status.code().expect("exit code"),
        String::from_utf8(output.stdout).unwrap(),
        String::from_utf8(output.stderr).unwrap(),
    )
}

fn fixture_arg(name: &str) -> String {
    common::fixture(name).display().to_string()
}

#[test]
fn exit_codes_cover_pass_fail_and_error() {
    let (code, _, _) = run(&[
        "sufficient",
        "--model",
        &fixture_arg("coinpair.json"),
        "--map",
        &fixture_arg("sum.json"),
    ]);
    assert_eq!(code, 0);

    let (code, stdout, _) = run(&[
        "sufficient",
        "--model",
        &fixture_arg("coinpair.json"),
        "--map",
        &fixture_arg("first.json"),
    ]);
    assert_eq!(code, 1);
    let cert: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(cert["report"]["witness"]["member"], "P_1/4");

    let (code, _, stderr) = run(&[
        "sufficient",
        "--model",
        "does-not-exist.json",
        "--map",
        &fixture_arg("sum.json"),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("does-not-exist.json"));

    // usage errors from clap are exit code 2 as well
    let (code, _, _) = run(&["sufficient", "--model", &fixture_arg("coinpair.json")]);
    assert_eq!(code, 2);

    let (code, _, stderr) = run(&[
        "structural",
        "--model-a",
        &fixture_arg("coinpair.json"),
        "--model-b",
        &fixture_arg("coinsum.json"),
        "--category",
        "group",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unsupported category"));
}

#[test]
fn invariant_errors_name_the_offending_entry() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(common::fixture("coinpair.json")).unwrap();
    std::fs::write(&bad, text.replace("\"1/16\"", "\"2/16\"")).unwrap();
    let (code, _, stderr) = run(&[
        "sufficient",
        "--model",
        bad.to_str().unwrap(),
        "--map",
        &fixture_arg("sum.json"),
    ]);
    assert_eq!(code, 2);
    assert!(
        stderr.contains("P_1/4"),
        "diagnostic names the family member: {stderr}"
    );
}

#[test]
fn json_parse_errors_carry_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.json");
    std::fs::write(&bad, "{\"space\": [\"a\",]}").unwrap();
    let (code, _, stderr) = run(&["quotient", "--model", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(
        stderr.contains("line"),
        "diagnostic carries a position: {stderr}"
    );
}

#[test]
fn model_fixtures_are_canonical() {
    for name in [
        "coinpair.json",
        "coinsum.json",
        "coinsum_uniform.json",
        "coinfirst.json",
    ] {
        let path = common::fixture(name);
        let bytes = std::fs::read_to_string(&path).unwrap();
        let document = parse_model(&path).unwrap();
        let canonical = to_canonical_string(&model_to_value(&document));
        assert_eq!(bytes, canonical, "{name} must round-trip byte-identically");
    }
}

#[test]
fn emitted_reverse_kernels_reverify_on_reload() {
    let (code, stdout, _) = run(&[
        "equivalent",
        "--model-a",
        &fixture_arg("coinpair.json"),
        "--model-b",
        &fixture_arg("coinsum.json"),
        "--map",
        &fixture_arg("sum.json"),
    ]);
    assert_eq!(code, 0);
    let cert: Value = serde_json::from_str(&stdout).unwrap();
    let a = parse_model(&common::fixture("coinpair.json"))
        .unwrap()
        .model;
    let b = parse_model(&common::fixture("coinsum.json")).unwrap().model;
    let forward = kernel_from_value(&cert["forward_kernel"], a.sigma(), b.sigma()).unwrap();
    let reverse = kernel_from_value(&cert["reverse_kernel"], b.sigma(), a.sigma()).unwrap();
    assert!(verify_equivalence_certificate(&a, &b, &forward, &reverse).unwrap());
}

#[test]
fn search_bound_env_is_honored() {
    let output = Command::new(common::binary())
        .args([
            "kq-equivalent",
            "--model-a",
            &fixture_arg("coinpair.json"),
            "--model-b",
            &fixture_arg("coinsum.json"),
        ])
        .env("STATCAT_SEARCH_BOUND", "2")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("bound"), "bound error surfaces: {stderr}");

    let output = Command::new(common::binary())
        .args([
            "kq-equivalent",
            "--model-a",
            &fixture_arg("coinpair.json"),
            "--model-b",
            &fixture_arg("coinsum.json"),
        ])
        .env("STATCAT_SEARCH_BOUND", "8")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let (_, stdout, _) = run(&[
        "balance",
        "--model",
        &fixture_arg("coinpair.json"),
        "--map",
        &fixture_arg("sum.json"),
    ]);
    let (code, printed, _) = run(&[
        "balance",
        "--model",
        &fixture_arg("coinpair.json"),
        "--map",
        &fixture_arg("sum.json"),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(printed.is_empty());
    assert_eq!(std::fs::read_to_string(out).unwrap(), stdout);
}

#[test]
fn param_requires_a_parametrisation_block() {
    let (code, _, stderr) = run(&["param", "--model", &fixture_arg("coinsum.json")]);
    assert_eq!(code, 2);
    assert!(stderr.contains("parametrisation"));

    let (code, stdout, _) = run(&["param", "--model", &fixture_arg("coinpair.json")]);
    assert_eq!(code, 0);
    let cert: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(cert["cardinality"], 3);
    assert_eq!(cert["length"], 1);
}

#[test]
fn completeness_counterexample_matches_the_block_structure() {
    let (code, stdout, _) = run(&[
        "complete",
        "--model",
        &fixture_arg("coinpair.json"),
        "--map",
        &fixture_arg("sum.json"),
        "--target",
        &fixture_arg("coinsum_uniform.json"),
        "--source-sigma",
        &fixture_arg("sigma_trivial_pairs.json"),
    ]);
    assert_eq!(code, 1);
    let cert: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(cert["report"]["witness"]["kind"], "null-density");
    assert_eq!(cert["report"]["witness"]["values"]["0"], "1");
    assert_eq!(cert["report"]["witness"]["values"]["1"], "-1");
    assert_eq!(cert["report"]["witness"]["values"]["2"], "0");
    assert_eq!(cert["image_sigma"][0], "{0,1,2}");
}

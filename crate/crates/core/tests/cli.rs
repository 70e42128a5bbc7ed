//! End-to-end runs of the `orthopair` binary.

use std::path::{Path, PathBuf};
use std::process::Command;

use orthopair::{cli, parse, workbench};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_orthopair")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fixtures_parse_to_the_reference_pairs() {
    let remark = std::fs::read_to_string(fixture("remark_pair.json")).unwrap();
    assert_eq!(parse::parse_pair(&remark).unwrap(), workbench::remark_pair());
    let example = std::fs::read_to_string(fixture("example_pair.json")).unwrap();
    assert_eq!(parse::parse_pair(&example).unwrap(), workbench::example_pair());
    // fixtures are stored in canonical form
    assert_eq!(parse::document_to_string(&parse::pair_to_json(&workbench::remark_pair())), remark);
}

#[test]
fn classify_boundary_pair_is_unresolved() {
    let (code, cert) = run_json(&["classify", path_str(&fixture("remark_pair.json"))]);
    assert_eq!(code, cli::EXIT_UNRESOLVED);
    assert_eq!(cert["verdict"]["tag"], "Unresolved");
    assert_eq!(cert["exit_status"], cli::EXIT_UNRESOLVED);
    assert_eq!(cert["seed"], 0);
    assert!(cert["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn check_orthogonal_reports_the_quotient() {
    let (code, cert) = run_json(&["check-orthogonal", path_str(&fixture("example_pair.json"))]);
    assert_eq!(code, cli::EXIT_OK);
    assert_eq!(cert["verdict"]["tag"], "Orthogonal");
    assert_eq!(cert["verdict"]["quotient"], "xi1");
    let (_, cert) = run_json(&["check-orthogonal", path_str(&fixture("remark_pair.json"))]);
    assert_eq!(cert["verdict"]["quotient"], "z1*xi1 + z2*xi2 + z3*xi3 + z4*xi4");
}

#[test]
fn not_orthogonal_pairs_exit_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("squares.json");
    std::fs::write(&input, r#"{"source":{"r":1,"s":1},"target":{"r":1,"s":1},"f1":["z1^2","z2^2"],"f2":["w1","w2"]}"#).unwrap();
    let (code, cert) = run_json(&["classify", path_str(&input), "--seed", "5"]);
    assert_eq!(code, cli::EXIT_NOT_ORTHOGONAL);
    assert_eq!(cert["verdict"]["tag"], "NotOrthogonal");
    assert_eq!(cert["seed"], 5);
    assert_eq!(cert["verdict"]["witness"]["z"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_witness_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let example = fixture("example_pair.json");
    let (code, _) = run(&["classify", path_str(&example), "--output", path_str(&cert)]);
    assert_eq!(code, 0);
    let (code, out) = run_json(&["verify-witness", path_str(&example), path_str(&cert)]);
    assert_eq!(code, cli::EXIT_OK, "{out}");
    assert_eq!(out["verdict"]["tag"], "Accepted");

    let tampered = dir.path().join("tampered.json");
    let text = std::fs::read_to_string(&cert).unwrap().replace("\"lambda\": \"1\"", "\"lambda\": \"2\"");
    std::fs::write(&tampered, text).unwrap();
    let (code, out) = run_json(&["verify-witness", path_str(&example), path_str(&tampered)]);
    assert_eq!(code, cli::EXIT_VERIFY_FAILED);
    assert_eq!(out["verdict"]["tag"], "Rejected");

    let (code, _) = run(&["verify-witness", path_str(&fixture("remark_pair.json")), path_str(&cert)]);
    assert_eq!(code, cli::EXIT_VERIFY_FAILED);
}

#[test]
fn generated_pairs_replay() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("gen.json");
    let pair = dir.path().join("pair.json");
    let (code, _) = run(&[
        "generate", "--construction", "null", "--null-pattern", "isotropic-line", "--source", "1,2", "--target", "2,2",
        "--seed", "11", "--output", path_str(&cert), "--pair-output", path_str(&pair),
    ]);
    assert_eq!(code, 0);
    let (code, out) = run_json(&["verify-witness", path_str(&pair), path_str(&cert)]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run_json(&["classify", path_str(&pair)]);
    assert_eq!(code, 0);
    assert_eq!(out["verdict"]["tag"], "Null");
}

#[test]
fn segre_documents() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("segre.json");
    std::fs::write(
        &input,
        r#"{"affine_heisenberg": true, "n": 3, "N": 4, "f1": ["z1", "z2", "z1*z2 + zeta^2", "zeta"], "f2": ["xi1", "xi2", "0", "omega"]}"#,
    )
    .unwrap();
    let (code, cert) = run_json(&["segre-check", path_str(&input)]);
    assert_eq!(code, 0);
    assert_eq!(cert["verdict"]["identity_holds"], true);
    assert_eq!(cert["verdict"]["classification"]["tag"], "QuasiStandard");
    let pair = dir.path().join("pair.json");
    let (code, _) = run(&["segre-convert", path_str(&input), "--pair-output", path_str(&pair)]);
    assert_eq!(code, 0);
    let (code, cert) = run_json(&["check-orthogonal", path_str(&pair)]);
    assert_eq!(code, 0);
    assert_eq!(cert["verdict"]["tag"], "Orthogonal");
}

#[test]
fn span_and_planes() {
    let (code, cert) = run_json(&["span", path_str(&fixture("remark_pair.json")), "--component", "f1"]);
    assert_eq!(code, 0);
    assert_eq!(cert["verdict"]["f1"]["restricted_signature"], "(2;3;1)");
    assert_eq!(cert["verdict"]["f1"]["report"]["span_dim"], 5);
    let (code, cert) = run_json(&["planes", path_str(&fixture("remark_pair.json"))]);
    assert_eq!(code, cli::EXIT_UNRESOLVED);
    assert_eq!(cert["verdict"]["f1"]["tag"], "HypothesisViolated");
    let (code, cert) = run_json(&["planes", path_str(&fixture("example_pair.json")), "--component", "f1"]);
    assert_eq!(code, 0);
    assert_eq!(cert["verdict"]["f1"]["report"]["l_prime"], 1);
}

#[test]
fn falsify_empty_region() {
    let (code, cert) = run_json(&["falsify", "--region", "empty"]);
    assert_eq!(code, 0);
    assert_eq!(cert["verdict"]["candidates"], 0);
    assert_eq!(cert["verdict"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn text_format() {
    let (code, out) = run(&["classify", path_str(&fixture("example_pair.json")), "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("classify: QuasiStandard, scenario 1"), "{out}");
}

#[test]
fn error_exit_codes() {
    assert_eq!(run(&["frobnicate"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["classify"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["classify", "/nonexistent.json"]).0, cli::EXIT_UNREADABLE);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"source":{"r":1,"s":1},"target":{"r":1,"s":1},"f1":["z1 +","z2"],"f2":["w1","w2"]}"#).unwrap();
    assert_eq!(run(&["classify", path_str(&bad)]).0, cli::EXIT_PARSE);
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["check-orthogonal", path_str(&bad)]).0, cli::EXIT_PARSE);
    assert_eq!(run(&["generate", "--construction", "standard", "--source", "x"]).0, cli::EXIT_USAGE);
}

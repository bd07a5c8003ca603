use std::path::PathBuf;
use std::process::{Command, Output};

use kxcore::format::parse_matrix;
use kxcore::{verify_drazin, Field, Matrix, Scalar};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kxcert"))
        .args(args)
        .env_remove("KXCERT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn json_stderr(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "{text}");
    serde_json::from_str(&text).expect("stderr is one JSON line")
}

fn matrix_from(v: &Value, field: Field) -> Matrix {
    let rows = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|s| Scalar::parse(s.as_str().unwrap(), field).unwrap())
                .collect()
        })
        .collect();
    Matrix::from_rows(field, rows).unwrap()
}

fn all_checks_pass(cert: &Value) -> bool {
    cert["verification"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == Value::Bool(true))
}

const JORDAN_PLUS_TWO: &str = "matrix 3 3 over Q\n0 1 0\n0 0 0\n0 0 2\n";

#[test]
fn cn_on_jordan_block_plus_scalar() {
    let file = scratch("j2_plus_2.mat", JORDAN_PLUS_TWO);
    let out = run(&["cn", &file]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json_stdout(&out);
    assert_eq!(cert["analysis"], "cn");
    assert_eq!(cert["results"]["index"], 2);
    let ad = matrix_from(&cert["results"]["drazin"], Field::Rational);
    let expected = parse_matrix("matrix 3 3 over Q\n0 0 0\n0 0 0\n0 0 1/2\n", None).unwrap();
    assert_eq!(ad, expected);
    assert!(all_checks_pass(&cert));
    let keys: Vec<&String> = cert.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        [
            "analysis",
            "input_digest",
            "results",
            "tool_version",
            "verification"
        ]
    );
}

#[test]
fn cn_certificate_round_trips() {
    for (name, text) in [
        ("rt_q.mat", JORDAN_PLUS_TWO),
        ("rt_f7.mat", "matrix 3 3 over Fp 7\n3 1 0\n0 0 1\n0 0 0\n"),
        ("rt_rational.mat", "matrix 2 2 over Q\n1/3 1\n0 0\n"),
    ] {
        let file = scratch(name, text);
        let cert = json_stdout(&run(&["cn", &file]));
        let a = parse_matrix(text, None).unwrap();
        let f = a.field();
        let r = &cert["results"];
        let m = r["index"].as_u64().unwrap() as usize;
        let core = matrix_from(&r["core"], f);
        let nil = matrix_from(&r["nilpotent"], f);
        let ad = matrix_from(&r["drazin"], f);
        assert_eq!(core.add(&nil).unwrap(), a);
        assert!(verify_drazin(&a, &ad, m).unwrap().all());
        assert!(nil.pow(m.max(1)).unwrap().is_zero());
    }
}

#[test]
fn verify_reports_failures_with_exit_3() {
    let a = scratch("j2.mat", "matrix 2 2 over Q\n0 1\n0 0\n");
    let id = scratch("i2.mat", "matrix 2 2 over Q\n1 0\n0 1\n");
    let out = run(&["verify", &a, &id, "--index", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let r = &json_stdout(&out)["results"];
    assert_eq!(r["reflexive"], false);
    assert_eq!(r["commutes"], true);
    // J^3 = J^2 = 0, so the power identity holds at m = 2 and fails at m = 1.
    assert_eq!(r["power_identity"], true);
    let at_one = json_stdout(&run(&["verify", &a, &id, "--index", "1"]));
    assert_eq!(at_one["results"]["power_identity"], false);

    let zero = scratch("z2.mat", "matrix 2 2 over Q\n0 0\n0 0\n");
    let ok = run(&["verify", &a, &zero]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json_stdout(&ok)["results"]["index_source"], "computed");
}

#[test]
fn module_analyze_free_plus_nilpotent() {
    for n in 1..=4 {
        let file = scratch(
            &format!("free_x{n}.mod"),
            &format!("module over Q\nfree 1\nx^{n}\n"),
        );
        let out = run(&["module", "analyze", &file]);
        assert_eq!(out.status.code(), Some(0));
        let r = &json_stdout(&out)["results"];
        assert_eq!(r["surjective"], false);
        let expected = if n == 1 {
            "x".to_string()
        } else {
            format!("x^{n}")
        };
        assert_eq!(r["kernel"], serde_json::json!([expected]));
        assert_eq!(r["sections"], Value::Null);
    }
}

#[test]
fn module_sections_are_emitted_when_surjective() {
    let file = scratch("torsion.mod", "module over Q\nfree 0\nx^2 - 2*x\n");
    let cert = json_stdout(&run(&["module", "analyze", &file]));
    let sections = cert["results"]["sections"].as_array().unwrap();
    assert_eq!(sections.len(), 1);
    assert_eq!(sections[0]["valuation"], 1);
    assert_eq!(cert["results"]["pointwise_cn"]["uniform_index"], 1);
    assert!(all_checks_pass(&cert));
}

#[test]
fn parse_errors_exit_2_with_one_line_reason() {
    let bad = scratch("bad.mat", "matrix 2 2 over Q\n1 2\n3\n");
    let out = run(&["index", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = json_stderr(&out);
    assert_eq!(err["kind"], "parse");
    assert!(err["reason"].as_str().unwrap().contains("line 3"));

    let missing = run(&["cn", "/nonexistent/input.mat"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(json_stderr(&missing)["kind"], "io");
}

#[test]
fn field_override_conflict_is_an_error() {
    let file = scratch("q.mat", JORDAN_PLUS_TWO);
    let out = run(&["--field", "Fp:7", "index", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_stderr(&out)["kind"], "parse");

    let agree = run(&["--field", "Q", "index", &file]);
    assert_eq!(agree.status.code(), Some(0));

    let headerless = scratch("ops.op", "operator poly_derivative\n");
    let vecs = scratch("ops.vec", "x^3\n");
    let over_f5 = json_stdout(&run(&[
        "op",
        "check",
        &headerless,
        &vecs,
        "--field",
        "Fp:5",
    ]));
    assert_eq!(over_f5["results"]["field"], "Fp 5");
}

#[test]
fn index_certificate_lists_rank_chain() {
    let file = scratch(
        "n4.mat",
        "matrix 4 4 over Q\n0 1 0 0\n0 0 1 0\n0 0 0 1\n0 0 0 0\n",
    );
    let cert = json_stdout(&run(&["index", &file]));
    assert_eq!(cert["results"]["index"], 4);
    assert_eq!(
        cert["results"]["rank_chain"],
        serde_json::json!([4, 3, 2, 1, 0, 0])
    );
}

#[test]
fn op_check_even_odd() {
    let op_file = scratch("eo.op", "operator even_odd over Q\n");
    let vecs = scratch("eo.vec", "x\nx^4 + x^2\n");
    let out = run(&["op", "check", &op_file, &vecs, "--budget", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json_stdout(&out);
    let v = &cert["results"]["vectors"];
    assert_eq!(v[0]["drazin"]["image"], "1/2*e1");
    assert_eq!(v[0]["in_kernel"], false);
    assert_eq!(v[1]["in_kernel"], true);
    assert_eq!(v[1]["nilpotency_witness"], 3);
    assert!(all_checks_pass(&cert));
}

#[test]
fn undecided_queries_exit_4() {
    let op_file = scratch("loop.op", "operator banded 0 over Q\ne0 -> e0\ne1 -> 0\n");
    let vecs = scratch("loop.vec", "e0\ne1\n");
    let out = run(&["op", "check", &op_file, &vecs, "--budget", "8"]);
    assert_eq!(out.status.code(), Some(4));
    let cert = json_stdout(&out);
    assert_eq!(cert["results"]["vectors"][0]["in_kernel"], Value::Null);
    assert_eq!(cert["results"]["vectors"][1]["in_kernel"], true);
    assert_eq!(json_stderr(&out)["kind"], "budget-exhausted");
}

#[test]
fn batch_writes_certificates_to_output_dir() {
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("batch-out");
    let _ = std::fs::remove_dir_all(&out_dir);
    std::fs::create_dir_all(&out_dir).unwrap();
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let out = Command::new(env!("CARGO_BIN_EXE_kxcert"))
        .args(["batch", fixtures.to_str().unwrap(), "--jobs", "3"])
        .env("KXCERT_OUT_DIR", &out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report.as_object().unwrap().len(), 20);
    let single = run(&["cn", fixtures.join("01_jordan_block.mat").to_str().unwrap()]);
    let written = std::fs::read(out_dir.join("01_jordan_block.mat.json")).unwrap();
    assert_eq!(written, single.stdout);
}

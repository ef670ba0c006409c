//! Integration tests for the `hoqt` binary: command surfaces, file formats,
//! and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hoqt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hoqt"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// A qubit transpose-map file, written by hand so the test does not depend
/// on the library's serializer.
fn write_transpose(path: &PathBuf) {
    let mut rows = Vec::new();
    for r in 0..4 {
        let mut row = Vec::new();
        for c in 0..4 {
            // transpose permutation: E_ij -> E_ji
            let (i, j) = (r / 2, r % 2);
            let hit = c == j * 2 + i;
            row.push(serde_json::json!([if hit { 1.0 } else { 0.0 }, 0.0]));
        }
        rows.push(serde_json::Value::Array(row));
    }
    let doc = serde_json::json!({
        "format_version": 1,
        "type": "A->A",
        "dims": {"A": 2},
        "matrix": rows,
        "convention": "rowmajor-v1",
    });
    std::fs::write(path, doc.to_string()).unwrap();
}

#[test]
fn parse_reports_order_and_tree() {
    let dir = tempfile::tempdir().unwrap();
    let out = hoqt(&["parse", "(AB->C)->(DEF->(GH->K))"], dir.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("order:       3"), "{text}");
    assert!(text.contains("canonical:   (AB->C)->(DEF->(GH->K))"));

    let out = hoqt(&["parse", "I", "--format", "json"], dir.path());
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["order"], 0);
    assert_eq!(v["canonical"], "I");
    assert_eq!(v["tree"], "I");
}

#[test]
fn parse_reports_dims_with_registry() {
    let dir = tempfile::tempdir().unwrap();
    let out = hoqt(
        &["parse", "A->B", "--dims", "A=2,B=3", "--format", "json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["space_dim"], 36);

    let out = hoqt(&["parse", "AB", "--dims", "A=2,B=3", "--format", "json"], dir.path());
    let v = json(&out);
    assert_eq!(v["hilbert_dim"], 6);
    assert_eq!(v["space_dim"], 36);
}

#[test]
fn ambiguous_arrows_exit_2_with_caret() {
    let dir = tempfile::tempdir().unwrap();
    let out = hoqt(&["parse", "A->B->C"], dir.path());
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains('^'), "no caret in: {err}");
    assert!(err.contains("A->B->C"));
}

#[test]
fn partype_golden_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (x, y, expected) in [
        ("A->B", "C->D", "AC->BD"),
        ("A", "C->D", "C->AD"),
        ("A->(B->C)", "(D->E)->F", "(D->AE)->(B->CF)"),
        ("I", "A", "A"),
    ] {
        let out = hoqt(&["partype", x, y, "--format", "json"], dir.path());
        assert_eq!(code(&out), 0);
        assert_eq!(json(&out)["result"], expected, "{x} ⊠ {y}");
    }
}

#[test]
fn partype_pad_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = hoqt(
        &["partype", "A->(B->C)", "(D->E)->F", "--pad", "--trace", "--format", "json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["padded"]["left"], "(I->A)->(B->C)");
    assert_eq!(v["padded"]["right"], "(D->E)->(I->F)");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace[0]["case"], "symmetric");
    let cases: Vec<&str> = trace.iter().map(|s| s["case"].as_str().unwrap()).collect();
    assert!(cases.contains(&"asymmetric-left"));
    assert!(cases.contains(&"asymmetric-right"));
    assert!(cases.contains(&"elementary"));
}

#[test]
fn unicode_arrow_is_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let out = hoqt(&["parse", "A⇒B", "--format", "json"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["canonical"], "A->B");
}

#[test]
fn random_is_deterministic_and_passes_check() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["random", "--type", "A->B", "--cone", "K", "--seed", "7", "--dims", "A=2,B=2", "-o", "k.json"];
    assert_eq!(code(&hoqt(&args, dir.path())), 0);
    let first = std::fs::read(dir.path().join("k.json")).unwrap();
    let args2 = ["random", "--type", "A->B", "--cone", "K", "--seed", "7", "--dims", "A=2,B=2", "-o", "k2.json"];
    assert_eq!(code(&hoqt(&args2, dir.path())), 0);
    let second = std::fs::read(dir.path().join("k2.json")).unwrap();
    assert_eq!(first, second, "same seed must give identical files");

    let out = hoqt(&["check", "k.json", "--cone", "K"], dir.path());
    assert_eq!(code(&out), 0);

    // H elements pass the H check
    let args = ["random", "--type", "A->B", "--cone", "H", "--seed", "9", "--dims", "A=2,B=2", "-o", "h.json"];
    assert_eq!(code(&hoqt(&args, dir.path())), 0);
    let out = hoqt(&["check", "h.json", "--cone", "H"], dir.path());
    assert_eq!(code(&out), 0);
}

#[test]
fn transpose_is_rejected_with_witness_eigenvalue() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("transpose.json");
    write_transpose(&path);

    let out = hoqt(&["check", "transpose.json", "--cone", "K", "--format", "json"], dir.path());
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["decision"], "non_member");
    let eig = v["min_eigenvalue"].as_f64().unwrap();
    assert!((eig + 1.0).abs() < 1e-10, "witness eigenvalue {eig}");

    // but it is Hermitian-preserving
    let out = hoqt(&["check", "transpose.json", "--cone", "H"], dir.path());
    assert_eq!(code(&out), 0);
}

#[test]
fn definitional_check_never_claims_proof() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["random", "--type", "A->B", "--cone", "K", "--seed", "3", "--dims", "A=2,B=2", "-o", "k.json"];
    assert_eq!(code(&hoqt(&args, dir.path())), 0);
    let out = hoqt(
        &["check", "k.json", "--cone", "K", "--method", "definitional", "--probes", "4"],
        dir.path(),
    );
    assert_eq!(code(&out), 5);
    assert!(stdout(&out).contains("no violation found"));
}

#[test]
fn map_ops_compose_apply_parmap() {
    let dir = tempfile::tempdir().unwrap();
    let dims = "A=2,B=2,C=2,D=2";
    for (ty, seed, name) in [("A", "11", "rho.json"), ("C->D", "12", "chan.json"), ("A->B", "13", "m.json")] {
        let args = ["random", "--type", ty, "--cone", "K", "--seed", seed, "--dims", dims, "-o", name];
        assert_eq!(code(&hoqt(&args, dir.path())), 0);
    }

    // state ⊠ channel lands at C->AD
    let out = hoqt(
        &["parmap", "rho.json", "chan.json", "-o", "prod.json", "--format", "json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result_type"], "C->AD");

    // applying the channel to a state gives a D operator
    let args = ["random", "--type", "C", "--cone", "K", "--seed", "14", "--dims", dims, "-o", "sigma.json"];
    assert_eq!(code(&hoqt(&args, dir.path())), 0);
    let out = hoqt(&["apply", "chan.json", "sigma.json", "-o", "out.json", "--format", "json"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result_type"], "D");

    // compose with the identity is byte-identical on the matrix
    let id_doc = serde_json::json!({
        "format_version": 1,
        "type": "B->B",
        "dims": {"A": 2, "B": 2, "C": 2, "D": 2},
        "matrix": (0..4).map(|i| (0..4).map(|j| {
            serde_json::json!([if i == j { 1.0 } else { 0.0 }, 0.0])
        }).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "convention": "rowmajor-v1",
    });
    std::fs::write(dir.path().join("id.json"), id_doc.to_string()).unwrap();
    let out = hoqt(&["compose", "id.json", "m.json", "-o", "same.json", "--format", "json"], dir.path());
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(json(&out)["result_type"], "A->B");
    let original: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    let composed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("same.json")).unwrap()).unwrap();
    assert_eq!(original["matrix"], composed["matrix"]);
}

#[test]
fn format_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    let out = hoqt(&["check", "bad.json", "--cone", "K"], dir.path());
    assert_eq!(code(&out), 3);

    let out = hoqt(&["check", "missing.json", "--cone", "K"], dir.path());
    assert_eq!(code(&out), 3);
}

#[test]
fn type_mismatch_exits_4_and_prints_both_types() {
    let dir = tempfile::tempdir().unwrap();
    let dims = "A=2,B=2,C=2,D=2";
    for (ty, name) in [("A->B", "m.json"), ("C", "sigma.json")] {
        let args = ["random", "--type", ty, "--cone", "K", "--seed", "5", "--dims", dims, "-o", name];
        assert_eq!(code(&hoqt(&args, dir.path())), 0);
    }
    let out = hoqt(&["apply", "m.json", "sigma.json", "-o", "x.json"], dir.path());
    assert_eq!(code(&out), 4);
    let err = stderr(&out);
    assert!(err.contains('A') && err.contains('C'), "{err}");

    // registry mismatch is also a 4
    let args = ["random", "--type", "A", "--cone", "K", "--seed", "5", "--dims", "A=3", "-o", "other.json"];
    assert_eq!(code(&hoqt(&args, dir.path())), 0);
    let out = hoqt(&["parmap", "m.json", "other.json", "-o", "x.json"], dir.path());
    assert_eq!(code(&out), 4);
}

#[test]
fn registry_comes_from_config_file_with_inline_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("systems.conf"),
        "# qubit lab\nA = 2\nB = 4   # overridden below\n",
    )
    .unwrap();
    let out = hoqt(
        &["parse", "AB", "--config", "systems.conf", "--dims", "B=3", "--format", "json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["hilbert_dim"], 6);

    // unknown label under a supplied registry is a parse-level failure
    let out = hoqt(&["parse", "AX", "--config", "systems.conf"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn random_requires_a_registry() {
    let dir = tempfile::tempdir().unwrap();
    let out = hoqt(&["random", "--type", "A", "--cone", "K", "-o", "x.json"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--dims"));
}

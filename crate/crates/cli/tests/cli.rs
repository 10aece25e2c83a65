use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run_in(dir: &Path, args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cliffdiv"));
    cmd.current_dir(dir).args(args).env_remove("CLIFFDIV_WORKERS");
    if let Some(w) = workers {
        cmd.env("CLIFFDIV_WORKERS", w);
    }
    cmd.output().expect("binary runs")
}

/// Runs from the data directory so reports echo short relative paths.
fn run(args: &[&str]) -> (i32, Value) {
    let out = run_in(&data(""), args, None);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    let code = out.status.code().unwrap();
    assert_eq!(v["exit_code"], code, "{text}");
    (code, v)
}

#[test]
fn ward_check_reports_r() {
    let (code, v) = run(&["check", "--kind", "ward", "t_z3rd.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["ward"], true);
    assert_eq!(v["result"]["r"], 0);
    assert_eq!(v["command"], "check");
    assert_eq!(v["inputs"][0]["path"], "t_z3rd.json");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn double_roundtrip_on_slg4() {
    let (code, v) = run(&["roundtrip", "--kind", "double", "t_slg4.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["identical"], true);
}

#[test]
fn identity_needs_decoration_for_inverses() {
    let (code, v) = run(&["identity", "--name", "3.24", "t_rd4.json"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["inverse"], "right");

    let (code, v) = run(&["identity", "--name", "3.24", "t_z3.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "missing-decoration");
}

#[test]
fn exit_one_always_carries_a_witness() {
    let failing: &[&[&str]] = &[
        &["check", "--kind", "ward", "t_z3.json"],
        &["check", "--kind", "ward-dual", "t_z3rd.json"],
        &["check", "--kind", "double-ward", "t_lp2.json"],
        &["check", "--kind", "group", "t_sl2.json"],
        &["check", "--kind", "quasigroup", "t_sl2.json"],
        &["check", "--kind", "semilattice", "t_z2.json"],
        &["check", "--kind", "associative", "t_z3rd.json"],
        &["check", "--kind", "slg", "t_lp2.json"],
        &["check", "--kind", "medial", "t_s3.json"],
        &["decompose", "t_lp2.json"],
        &["divide", "--kind", "right", "t_z3rd.json"],
        &["membership", "--kind", "right", "t_slg4.json"],
        &["membership", "--kind", "left", "t_rd4.json"],
        &["reconstruct", "--kind", "double", "t_lp2.json"],
        &["identity", "--name", "1", "t_z3.json"],
        &["identity", "--name", "2", "--exists", "r", "t_z3.json"],
    ];
    for args in failing {
        let (code, v) = run(args);
        assert_eq!(code, 1, "{args:?}: {v}");
        assert_eq!(v["status"], "fail");
        let ws = v["witnesses"].as_array().unwrap();
        assert!(!ws.is_empty(), "{args:?}: {v}");
        assert!(!ws[0]["assignment"].as_array().unwrap().is_empty(), "{args:?}");
    }
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    };
    let cases = [
        (
            write("ragged.json", r#"{"n": 2, "table": [[0, 1], [1]]}"#),
            "malformed-table",
        ),
        (
            write("range.json", r#"{"n": 2, "table": [[0, 1], [1, 2]]}"#),
            "malformed-table",
        ),
        (
            write("size.json", r#"{"n": 3, "table": [[0, 1], [1, 0]]}"#),
            "malformed-table",
        ),
        (write("junk.json", "{ not json"), "malformed-json"),
        ("missing.json".to_string(), "unreadable-file"),
    ];
    for (path, kind) in &cases {
        let (code, v) = run(&["check", "--kind", "group", path]);
        assert_eq!(code, 2, "{path}");
        assert_eq!(v["error"]["kind"], *kind, "{path}: {v}");
        assert!(v["result"].is_null());
    }
    let (code, v) = run(&["identity", "--name", "no-such-law", "t_z3.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "unknown-identity");
}

#[test]
fn bad_worker_count_is_an_input_error() {
    let out = run_in(&data(""), &["check", "--kind", "group", "t_z3.json"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_deterministic() {
    let args = ["verify-theorems", "--max-total", "6", "--group-order", "6"];
    let a = run_in(&data(""), &args, Some("1"));
    let b = run_in(&data(""), &args, Some("4"));
    let c = run_in(&data(""), &args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);

    let args = ["divide", "--kind", "double", "t_slg4.json"];
    assert_eq!(
        run_in(&data(""), &args, None).stdout,
        run_in(&data(""), &args, None).stdout
    );
}

#[test]
fn digest_ignores_layout_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("z2.json");
    std::fs::write(&p, r#"{"n":2,"table":[[0,1],[1,0]],"labels":["e","a"]}"#).unwrap();
    let (_, a) = run(&["check", "--kind", "group", p.to_str().unwrap()]);
    let (_, b) = run(&["check", "--kind", "group", "t_z2.json"]);
    assert_eq!(a["inputs"][0]["sha256"], b["inputs"][0]["sha256"]);
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let out = run_in(
        &data(""),
        &[
            "--report",
            rep.to_str().unwrap(),
            "check",
            "--kind",
            "slg",
            "t_slg3.json",
        ],
        None,
    );
    assert_eq!(std::fs::read(&rep).unwrap(), out.stdout);
}

#[test]
fn divided_tables_reconstruct_to_the_input() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["right", "left", "double"] {
        let q = dir.path().join(format!("q-{kind}.json"));
        let s = dir.path().join(format!("s-{kind}.json"));
        let (code, _) = run(&["divide", "--kind", kind, "t_slg4.json", "--out", q.to_str().unwrap()]);
        assert_eq!(code, 0);
        let (code, v) = run(&[
            "reconstruct",
            "--kind",
            kind,
            q.to_str().unwrap(),
            "--out",
            s.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["result"]["decoration_given"], true);
        let (_, orig) = run(&["decompose", "t_slg4.json"]);
        let back: Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
        assert_eq!(back["table"], orig["result"]["decorated"]["table"], "{kind}");
        let (code, v) = run(&["membership", "--kind", kind, q.to_str().unwrap()]);
        assert_eq!(code, 0, "{v}");
        let (code, _) = run(&["roundtrip", "--kind", kind, q.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
}

#[test]
fn fixtures_are_members_of_their_collection() {
    for (kind, file) in [
        ("right", "t_rd4.json"),
        ("left", "t_ld4.json"),
        ("double", "t_dd4.json"),
    ] {
        let (code, v) = run(&["membership", "--kind", kind, file]);
        assert_eq!(code, 0, "{v}");
        let (code, v) = run(&["roundtrip", "--kind", kind, file]);
        assert_eq!(code, 0, "{v}");
    }
}

#[test]
fn build_then_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let built = dir.path().join("built.json");
    let spec = dir.path().join("spec.json");
    let (code, v) = run(&["build", "slg4_spec.json", "--out", built.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["classes"], 2);
    let (code, v) = run(&["decompose", built.to_str().unwrap(), "--out", spec.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    let (code, again) = run(&["build", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(again["result"]["table"]["table"], v["result"]["decorated"]["table"]);
}

#[test]
fn identity_bindings_and_inverse_sources() {
    let (code, v) = run(&["identity", "--name", "2", "--name", "3", "--bind", "r=0", "t_z3rd.json"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["identities"].as_array().unwrap().len(), 2);

    let (code, _) = run(&["identity", "--name", "2", "--bind", "r=1", "t_z3rd.json"]);
    assert_eq!(code, 1);

    let (code, v) = run(&["identity", "--name", "3.24", "--inverse", "groupoid", "t_z3.json"]);
    assert_eq!(code, 1, "a group is not a right division quotient: {v}");

    let (code, v) = run(&["identity", "--name", "3.24", "--inverse", "right", "t_z3rd.json"]);
    assert_eq!(code, 0, "{v}");

    let (code, v) = run(&["identity", "--name", "3.24", "--inverse", "groupoid", "t_lp2.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "missing-inverse");

    let (code, _) = run(&["identity", "--name", "1", "--bind", "r=x", "t_z3rd.json"]);
    assert_eq!(code, 2);
}

#[test]
fn own_identity_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("ids.txt");
    std::fs::write(&p, "comm [x y] (* x y) = (* y x)\n").unwrap();
    let (code, v) = run(&[
        "identity",
        "--identities",
        p.to_str().unwrap(),
        "--name",
        "comm",
        "t_z3.json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
    let (code, _) = run(&[
        "identity",
        "--identities",
        p.to_str().unwrap(),
        "--name",
        "comm",
        "t_s3.json",
    ]);
    assert_eq!(code, 1);
    std::fs::write(&p, "bad [x] (* x\n").unwrap();
    let (code, v) = run(&[
        "identity",
        "--identities",
        p.to_str().unwrap(),
        "--name",
        "bad",
        "t_z3.json",
    ]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "identity-syntax");
}

#[test]
fn verify_theorems_covers_every_check() {
    let (code, v) = run(&["verify-theorems", "--max-total", "10"]);
    assert_eq!(code, 0, "{}", v["result"]["failures"]);
    let cov = &v["result"]["coverage"];
    assert_eq!(cov["complete"], true, "{cov}");
    assert_eq!(cov["covered"], cov["expected"]);
    assert_eq!(v["result"]["checks"]["fail"], 0);
}

#[test]
fn enumerate_counts_and_export() {
    let dir = tempfile::tempdir().unwrap();
    for (what, n, count) in [("groups", "8", 5), ("semilattices", "4", 5), ("ward", "4", 2)] {
        let (code, v) = run(&["enumerate", "--what", what, "--n", n]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["count"], count, "{what}");
    }
    let out = dir.path().join("slgs");
    let (code, v) = run(&[
        "enumerate",
        "--what",
        "slgs",
        "--max-total",
        "3",
        "--max-group",
        "3",
        "--max-classes",
        "3",
        "--export",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 8);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["count"], 8);
    let first = manifest["items"][0]["file"].as_str().unwrap();
    let (code, _) = run(&["check", "--kind", "slg", out.join(first).to_str().unwrap()]);
    assert_eq!(code, 0);

    let (code, v) = run(&["enumerate", "--what", "groups"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn search_question1_reports_its_control() {
    let (code, v) = run(&["search-question1", "--max-total", "5"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["search"]["control"]["failures"], 0);
    assert_eq!(v["result"]["search"]["counterexamples_total"], 0);
    let (code, v) = run(&["search-question1", "--max-total", "30"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "size-limit");
}

#[test]
fn text_rendering_is_a_view_of_the_same_report() {
    let out = run_in(
        &data(""),
        &["--format", "text", "check", "--kind", "ward", "t_z3.json"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check: FAIL (exit 1)"), "{text}");
    assert!(text.contains("witness {x=0, y=0, z=1}"), "{text}");
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use homqg::io::StructureFile;
use serde_json::{json, Value};
use tempfile::TempDir;

fn homqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homqg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs a constructing command with `--out` and returns the written path.
fn build(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut all = args.to_vec();
    all.extend(["--out", path_str(&path)]);
    let out = homqg(&all);
    assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
    path
}

#[test]
fn anyon_catalog_then_verify_passes() {
    let dir = TempDir::new().unwrap();
    let file = build(
        &dir,
        "a.json",
        &["catalog", "anyon", "--n", "5", "--k", "4"],
    );
    let out = homqg(&["verify", path_str(&file)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn perturbed_mu_fails_and_names_the_axiom() {
    let dir = TempDir::new().unwrap();
    let file = build(
        &dir,
        "a.json",
        &["catalog", "anyon", "--n", "3", "--k", "2"],
    );
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    v["mu"][1][1][2] = json!([1.001, 0.0]);
    fs::write(&file, v.to_string()).unwrap();
    let out = homqg(&["verify", path_str(&file)]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("FAIL hom_associativity"), "{text}");
}

#[test]
fn malformed_inputs_exit_2_with_a_diagnostic() {
    let dir = TempDir::new().unwrap();
    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "not json at all").unwrap();
    let out = homqg(&["verify", path_str(&garbage)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));

    let good = build(&dir, "a.json", &["catalog", "anyon", "--n", "3"]);
    let text = fs::read_to_string(&good).unwrap();
    let truncated = dir.path().join("truncated.json");
    fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&homqg(&["verify", path_str(&truncated)])), 2);

    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["delta"][2][0] = json!([[1, 0]]);
    let wrong = dir.path().join("wrong.json");
    fs::write(&wrong, v.to_string()).unwrap();
    let out = homqg(&["verify", path_str(&wrong)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("$.delta[2][0]"), "{}", stderr(&out));

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&homqg(&["verify", path_str(&missing)])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&homqg(&[])), 2);
    assert_eq!(code(&homqg(&["frobnicate"])), 2);
    assert_eq!(code(&homqg(&["verify"])), 2);
    assert_eq!(code(&homqg(&["--tolerance", "-1", "verify", "x.json"])), 2);
    assert_eq!(code(&homqg(&["hybe"])), 2);
    assert_eq!(code(&homqg(&["--help"])), 0);
}

#[test]
fn r_twist_of_a_classical_structure_is_the_identity() {
    let dir = TempDir::new().unwrap();
    let input = build(&dir, "a.json", &["catalog", "anyon", "--n", "4"]);
    let output = build(
        &dir,
        "b.json",
        &["twist", "--structure", path_str(&input), "--power", "2"],
    );
    assert_eq!(fs::read(&input).unwrap(), fs::read(&output).unwrap());
}

#[test]
fn twist_along_an_alpha_file() {
    let dir = TempDir::new().unwrap();
    let input = build(&dir, "a.json", &["catalog", "anyon", "--n", "3"]);
    let alpha = dir.path().join("alpha.json");
    // g -> g^2 on Z/3: e0 -> e0, e1 -> e2, e2 -> e1
    fs::write(&alpha, "[[1,0,0],[0,0,1],[0,1,0]]").unwrap();
    let out = build(
        &dir,
        "b.json",
        &[
            "twist",
            "--structure",
            path_str(&input),
            "--alpha",
            path_str(&alpha),
            "--power",
            "1",
        ],
    );
    assert_eq!(code(&homqg(&["verify", path_str(&out)])), 0);

    // A non-morphism alpha violates the Yau-twist hypothesis.
    fs::write(&alpha, "[[1,0,0],[0,2,0],[0,0,1]]").unwrap();
    let bad = homqg(&[
        "twist",
        "--structure",
        path_str(&input),
        "--alpha",
        path_str(&alpha),
    ]);
    assert_eq!(code(&bad), 1, "{}", stderr(&bad));
    assert!(stderr(&bad).contains("hypothesis violated"));
}

#[test]
fn twist_needs_something_to_do() {
    let dir = TempDir::new().unwrap();
    let input = build(&dir, "a.json", &["catalog", "anyon", "--n", "3"]);
    assert_eq!(code(&homqg(&["twist", "--structure", path_str(&input)])), 2);
}

#[test]
fn non_coprime_r_twist_names_the_hypothesis() {
    let out = homqg(&["catalog", "anyon", "--n", "6", "--k", "2", "--t", "1"]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("alpha not surjective"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn emitted_structures_round_trip_exactly() {
    let dir = TempDir::new().unwrap();
    let r_table = dir.path().join("r.json");
    fs::write(&r_table, "[[0.5, 0.5], [0.5, -0.5]]").unwrap();
    let files = [
        build(
            &dir,
            "a.json",
            &["catalog", "anyon", "--n", "5", "--k", "2", "--t", "3"],
        ),
        build(
            &dir,
            "b.json",
            &["catalog", "kfun", "--orders", "2,3", "--bicharacter", "exp"],
        ),
        build(
            &dir,
            "c.json",
            &["catalog", "kg", "--orders", "2", "--r", path_str(&r_table)],
        ),
    ];
    for f in &files {
        let text = fs::read_to_string(f).unwrap();
        let parsed = StructureFile::parse(&text).unwrap();
        assert_eq!(format!("{}\n", parsed.to_json_string().unwrap()), text);
        assert_eq!(code(&homqg(&["verify", path_str(f)])), 0);
    }
}

#[test]
fn kg_rejects_a_table_that_is_not_an_r_matrix() {
    let dir = TempDir::new().unwrap();
    let r_table = dir.path().join("r.json");
    fs::write(&r_table, json!({"R": [[1, 0], [0, 1]]}).to_string()).unwrap();
    let out = homqg(&["catalog", "kg", "--orders", "2", "--r", path_str(&r_table)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("R table"));
}

#[test]
fn uhsl2_hybe_with_strands_passes() {
    let out = homqg(&[
        "hybe",
        "uhsl2",
        "--n",
        "1",
        "--c",
        "0",
        "--order",
        "8",
        "--strands",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("order 8"));
}

#[test]
fn emitted_b_matrix_feeds_braid() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("b.json");
    let out = homqg(&[
        "hybe",
        "uhsl2",
        "--n",
        "1",
        "--c",
        "1+0.5i",
        "--order",
        "6",
        "--emit-matrix",
        path_str(&m),
    ]);
    assert_eq!(code(&out), 0);
    let out = homqg(&[
        "--format",
        "json",
        "braid",
        "--matrix",
        path_str(&m),
        "--strands",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pass"], json!(true));
    assert_eq!(report["order"], json!(6));
    assert!(report["axioms"]["far_1_3"].is_number());

    // Read at a lower order than written.
    let out = homqg(&["--order", "3", "braid", "--matrix", path_str(&m)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("order 3"));
    let out = homqg(&["--order", "9", "braid", "--matrix", path_str(&m)]);
    assert_eq!(code(&out), 2);

    // Without its alpha the operator is not a braid solution.
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&m).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("alpha");
    fs::write(&m, v.to_string()).unwrap();
    assert_eq!(code(&homqg(&["braid", "--matrix", path_str(&m)])), 1);
    assert_eq!(
        code(&homqg(&[
            "braid",
            "--matrix",
            path_str(&m),
            "--strands",
            "2"
        ])),
        2
    );
}

#[test]
fn regular_module_hybe_checks_alpha_invariance() {
    let dir = TempDir::new().unwrap();
    let good = build(
        &dir,
        "a.json",
        &["catalog", "anyon", "--n", "5", "--k", "4"],
    );
    let out = homqg(&[
        "hybe",
        "--structure",
        path_str(&good),
        "--module",
        "regular",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let bad = build(
        &dir,
        "b.json",
        &["catalog", "anyon", "--n", "5", "--k", "2"],
    );
    let out = homqg(&["hybe", "--structure", path_str(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("R is alpha-invariant"),
        "{}",
        stderr(&out)
    );

    let out = homqg(&[
        "--format",
        "json",
        "hybe",
        "--structure",
        path_str(&bad),
        "--force",
    ]);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["status"], json!("unverified-hypotheses"));
}

#[test]
fn multi_file_verify_combines_exit_codes() {
    let dir = TempDir::new().unwrap();
    let a = build(&dir, "a.json", &["catalog", "anyon", "--n", "3"]);
    let b = build(
        &dir,
        "b.json",
        &["catalog", "anyon", "--n", "4", "--k", "3"],
    );
    let out = homqg(&["--format", "json", "verify", path_str(&a), path_str(&b)]);
    assert_eq!(code(&out), 0);
    let docs: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(docs.as_array().unwrap().len(), 2);
    assert_eq!(docs[1]["file"], json!(path_str(&b)));

    let garbage = dir.path().join("g.json");
    fs::write(&garbage, "{").unwrap();
    let out = homqg(&["verify", path_str(&a), path_str(&garbage)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tolerance_override_is_echoed_and_applied() {
    let dir = TempDir::new().unwrap();
    let a = build(
        &dir,
        "a.json",
        &["catalog", "anyon", "--n", "5", "--k", "2"],
    );
    let out = homqg(&[
        "--format",
        "json",
        "--tolerance",
        "1e-30",
        "verify",
        path_str(&a),
    ]);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["tolerance"], json!(1e-30));
    // Rounding residuals of order 1e-17 fail a 1e-30 tolerance.
    assert_eq!(code(&out), 1);
    assert!(report["info"]["alpha_invariance"].as_f64().unwrap() > 1e-3);
}

#[test]
fn uhsl2_catalog_writes_an_operator() {
    let out = homqg(&[
        "catalog", "uhsl2", "--n", "1", "--m", "2", "--c", "0.3", "--order", "4",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let op: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(op["out_dims"], json!([2, 3]));
    assert_eq!(op["matrix"].as_array().unwrap().len(), 6);
    assert_eq!(op["matrix"][0][0].as_array().unwrap().len(), 5);
}

use std::path::Path;
use std::process::{Command, Output};

use povmkit_cli::document::{JointDocument, KernelDocument, PovmDocument};
use povmkit_cli::report::Report;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_povmkit"));
    for var in ["TOL_VALIDATE", "TOL_SOLVE", "TOL_RANGE"] {
        c.env_remove(var);
    }
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read<T: for<'de> serde::Deserialize<'de>>(p: &Path) -> T {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn report_shape_and_digests() {
    let out = run(&["analyze", "fixture:example4_M"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.command, "analyze");
    assert_eq!(r.inputs.len(), 1);
    assert_eq!(r.inputs[0].sha256.len(), 64);
    assert_eq!(r.verdict["extreme"], Value::Bool(false));
    assert_eq!(r.verdict["null_dim"], 1);
    assert_eq!(r.verdict["dilation"]["dim"], 4);
    assert_eq!(run(&["analyze", "fixture:example4_M"]).stdout, out.stdout);
}

#[test]
fn tolerance_flags_and_environment() {
    let r = report(&run(&["validate", "fixture:trine", "--tol-validate=1e-6", "--tol-solve", "1e-7"]));
    assert_eq!(r.tolerances_used.validate, 1e-6);
    assert_eq!(r.tolerances_used.lp_feasibility, 1e-7);
    assert_eq!(r.tolerances_used.dykstra_feasible, 1e-7);
    let out = bin().args(["validate", "fixture:trine"]).env("TOL_RANGE", "1e-5").output().unwrap();
    assert_eq!(report(&out).tolerances_used.range, 1e-5);
    // flags win over the environment
    let out = bin().args(["validate", "fixture:trine", "--tol-range=1e-3"]).env("TOL_RANGE", "1e-5").output().unwrap();
    assert_eq!(report(&out).tolerances_used.range, 1e-3);
    assert_eq!(run(&["validate", "fixture:trine", "--tol-validate=-1"]).status.code(), Some(2));
}

#[test]
fn joint_then_kernel_extract() {
    let dir = tempfile::tempdir().unwrap();
    let joint = dir.path().join("joint.json");
    let kernel = dir.path().join("kernel.json");
    let out = run(&["joint", "fixture:example4_M", "fixture:example4_Mprime", "--joint-out", s(&joint)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.verdict["status"], "feasible");
    assert_eq!(r.verdict["method"], "lp");
    let doc: JointDocument = read(&joint);
    assert_eq!((doc.rows.len(), doc.cols.len()), (4, 2));

    let out = run(&["kernel-extract", "fixture:example4_M", s(&joint), "--kernel-out", s(&kernel)]);
    assert_eq!(out.status.code(), Some(0));
    let k: KernelDocument = read(&kernel);
    for row in &k.p {
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
    assert_eq!(report(&out).verdict["kernel"], serde_json::to_value(&k).unwrap());
}

#[test]
fn smear_writes_labelled_povm() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = dir.path().join("k.json");
    std::fs::write(
        &kernel,
        r#"{"schema_version":"1","rows":["x1","x2","x3","x4"],"cols":["a","b"],"p":[[1,0],[0,1],[1,0],[0,1]]}"#,
    )
    .unwrap();
    let povm_out = dir.path().join("out.json");
    let out = run(&["smear", "fixture:example4_M", s(&kernel), "--povm-out", s(&povm_out)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: PovmDocument = read(&povm_out);
    let labels: Vec<_> = doc.outcomes.iter().map(|o| o.label.as_str()).collect();
    assert_eq!(labels, ["a", "b"]);
    assert_eq!(doc.outcomes[0].matrix, vec![vec![[0.5, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [0.5, 0.0]]]);

    std::fs::write(&kernel, r#"{"schema_version":"1","rows":["a"],"cols":["b"],"p":[[1]]}"#).unwrap();
    assert_eq!(run(&["smear", "fixture:example4_M", s(&kernel)]).status.code(), Some(2));
}

#[test]
fn coexist_reports_smearing_kernel() {
    let r = report(&run(&["coexist", "fixture:remark4_relabel", "fixture:remark4_M", "fixture:remark4_M"]));
    assert_eq!(r.verdict["coexistent"], true);
    let p = &r.verdict["smearing_kernel"]["kernel"]["p"];
    assert_eq!(p[0], serde_json::json!([1.0, 0.0, 0.0]));
    let r = report(&run(&["coexist", "fixture:qubit_X", "fixture:qubit_Z", "fixture:qubit_X"]));
    assert_eq!(r.verdict["coexistent"], false);
}

#[test]
fn out_flag_writes_file_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("r.json");
    let out = run(&["validate", "fixture:qubit_Z", "--out", s(&path)]);
    // missing parent directory is an output failure
    assert_eq!(out.status.code(), Some(3));
    let path = dir.path().join("r.json");
    let out = run(&["validate", "fixture:qubit_Z", "--out", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Report = read(&path);
    assert_eq!(r.verdict["valid"], true);
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);
}

#[test]
fn fixtures_directory() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["fixtures", "--dir", s(dir.path())]).status.code(), Some(0));
    for name in povmkit::fixtures::NAMES {
        let bytes = std::fs::read(dir.path().join(format!("{name}.json"))).unwrap();
        assert_eq!(bytes, run(&["fixtures", name]).stdout);
    }
}

#[test]
fn batch_runs_jobs_and_takes_worst_code() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let manifest = dir.path().join("jobs.json");
    let jobs = serde_json::json!({"jobs": [
        {"args": ["analyze", "fixture:trine"], "out": s(&a)},
        {"args": ["joint", "fixture:qubit_X", "fixture:qubit_Z"], "out": s(&b)},
    ]});
    std::fs::write(&manifest, jobs.to_string()).unwrap();
    let out = run(&["--batch", s(&manifest)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read::<Report>(&a).command, "analyze");
    assert_eq!(read::<Report>(&b).verdict["status"], "infeasible");

    let jobs = serde_json::json!({"jobs": [
        {"args": ["validate", "fixture:trine"], "out": s(&a)},
        {"args": ["validate", s(&manifest)]},
    ]});
    std::fs::write(&manifest, jobs.to_string()).unwrap();
    assert_eq!(run(&["--batch", s(&manifest)]).status.code(), Some(3));
    assert_eq!(run(&["--batch", s(&manifest), "validate", "fixture:trine"]).status.code(), Some(2));
}

#[test]
fn prune_zero_effects() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.json");
    std::fs::write(
        &path,
        r#"{"schema_version":"1","dim":1,"outcomes":[{"label":"a","matrix":[[[1,0]]]},{"label":"b","matrix":[[[0,0]]]}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["analyze", s(&path)]).status.code(), Some(2));
    let out = run(&["analyze", s(&path), "--prune-zero"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.inputs[0].pruned, ["b"]);
    assert_eq!(r.verdict["labels"], serde_json::json!(["a"]));
}

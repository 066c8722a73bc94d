use std::path::Path;

use approx::assert_abs_diff_eq;
use twc_cli::{run_cli_with, ChannelFile, CliError};
use twc_core::binary_entropy;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("twc").chain(args.iter().copied());
    let code = run_cli_with(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn csv_points(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("R1") && !l.is_empty())
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

#[test]
fn missing_file_is_an_input_error() {
    let r = run(&["check", "nosuch.json"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("nosuch.json"));
}

#[test]
fn malformed_and_invalid_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["check", &bad]).code, 2);
    let rows = path(dir.path(), "rows.json");
    let doc = r#"{"kind":"twc","nx1":1,"nx2":1,"ny1":1,"ny2":2,"matrix":[[0.5,0.6]]}"#;
    std::fs::write(&rows, doc).unwrap();
    assert_eq!(run(&["check", &rows]).code, 2);
    let kind = path(dir.path(), "kind.json");
    std::fs::write(&kind, r#"{"kind":"gaussian"}"#).unwrap();
    assert_eq!(run(&["region", &kind]).code, 2);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["check"]).code, 2);
    let h = run(&["--help"]);
    assert_eq!(h.code, 0);
    assert!(h.out.contains("repro"));
    assert_eq!(run(&["gen", "qary-erasure", "--a1", "1.5"]).code, 2);
}

#[test]
fn exit_code_mapping() {
    use twc_core::Error;
    assert_eq!(CliError::Input("x".into()).exit_code(), 2);
    assert_eq!(CliError::Lib(Error::NonConvergence { iterations: 5, gap: 1.0 }).exit_code(), 3);
    assert_eq!(CliError::Lib(Error::SearchBudgetExceeded { needed: 40_320, budget: 14_400 }).exit_code(), 4);
    assert_eq!(CliError::Lib(Error::UnknownFixture("x".into())).exit_code(), 2);
}

#[test]
fn generated_files_round_trip_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "c.json");
    let r = run(&[
        "gen",
        "qary-erasure",
        "--q",
        "3",
        "--a1",
        "0.07",
        "--e1",
        "0.1",
        "--a2",
        "0.1",
        "--e2",
        "0.2",
        "-o",
        &f,
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    let loaded = ChannelFile::load(Path::new(&f)).unwrap();
    let want = twc_chanlib::gen_qary_noise_erasure(3, 0.07, 0.1, 0.1, 0.2).unwrap();
    let ChannelFile::Twc(m) = &loaded else { panic!("wrong kind") };
    assert_eq!(m.channel().unwrap().rows(), want.rows());
    assert_eq!(std::fs::read_to_string(&f).unwrap(), loaded.to_json());

    let r = run(&["madb", "gen", "additive", "--q", "2", "--pz1", "0.9,0.1", "--pz2", "0.8,0.2", "--pz3", "0.7,0.3"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(ChannelFile::from_json(&r.out).unwrap().to_json(), r.out);
}

#[test]
fn identical_arguments_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "m.json");
    assert_eq!(run(&["gen", "fixture", "motivational", "-o", &f]).code, 0);
    for args in [
        vec!["region", f.as_str(), "--grid", "12", "--directions", "11", "--seed", "7"],
        vec!["check", f.as_str(), "--trials", "300", "--json"],
        vec!["memsim", "--n", "500", "--seed", "3"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.code, 0, "{}", a.err);
        assert_eq!(a.out, b.out);
    }
}

#[test]
fn erasure_region_is_the_closed_form_rectangle() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "c.json");
    let out = path(dir.path(), "inner.csv");
    run(&["gen", "qary-erasure", "--q", "2", "--a1", "0.05", "--e1", "0.1", "--a2", "0.1", "--e2", "0.2", "-o", &f]);
    let r = run(&["region", &f, "--bound", "inner", "-o", &out]);
    assert_eq!(r.code, 0, "{}", r.err);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("R1,R2\n"));
    let pts = csv_points(&text);
    let r1 = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    let r2 = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    assert_abs_diff_eq!(r1, 0.8 * (1.0 - binary_entropy(0.125).unwrap()), epsilon = 1e-3);
    assert_abs_diff_eq!(r2, 0.9 * (1.0 - binary_entropy(0.05 / 0.9).unwrap()), epsilon = 1e-3);
}

#[test]
fn both_bounds_go_to_separate_files_or_sections() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "a.json");
    run(&["gen", "binary-additive", "--a1", "0.1", "--a2", "0.2", "-o", &f]);
    let out = path(dir.path(), "r.csv");
    assert_eq!(run(&["region", &f, "--grid", "10", "--directions", "9", "-o", &out]).code, 0);
    assert!(dir.path().join("r.inner.csv").exists());
    assert!(dir.path().join("r.outer.csv").exists());
    let r = run(&["region", &f, "--grid", "10", "--directions", "9"]);
    assert!(r.out.starts_with("# inner\nR1,R2\n"));
    assert!(r.out.contains("\n# outer\nR1,R2\n"));
}

#[test]
fn failing_verdicts_are_data() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "e4.json");
    run(&["gen", "fixture", "example4", "-o", &f]);
    let r = run(&["check", &f, "--conditions", "shannon_one_sided,cva", "--trials", "500"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.lines().any(|l| l.starts_with("shannon_one_sided[user1]") && l.contains("fails")));
    assert!(!r.out.contains("common_maximizer"));
    assert_eq!(run(&["check", &f, "--conditions", "no_such_condition"]).code, 2);
    assert_eq!(run(&["check", &f, "--conditions", "madb_relabeling"]).code, 2);
}

#[test]
fn relabeling_search_over_budget_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "q8.json");
    let pz = "0.3,0.1,0.1,0.1,0.1,0.1,0.1,0.1";
    let r = run(&["madb", "gen", "additive", "--q", "8", "--pz1", pz, "--pz2", pz, "--pz3", pz, "-o", &f]);
    assert_eq!(r.code, 0, "{}", r.err);
    let r = run(&["madb", "check", &f, "--conditions", "madb_relabeling"]);
    assert_eq!(r.code, 4, "{}", r.err);
}

#[test]
fn madb_support_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "m.json");
    run(&["madb", "gen", "erasure", "--eps", "0.1", "--pz1", "0.9,0.1", "--pz2", "0.8,0.2", "-o", &f]);
    let r = run(&["madb", "support", &f, "--weights", "1,1,0,0"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let mut lines = r.out.lines();
    assert_eq!(lines.next(), Some("w13,w23,w31,w32,inner,outer"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    assert_abs_diff_eq!(row[4], 0.9, epsilon = 1e-5);
    assert!(row[5] >= row[4] - 1e-9);
    assert_eq!(run(&["madb", "support", &f, "--weights", "1,1"]).code, 2);
}

#[test]
fn memory_regions() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "mem.json");
    run(&["gen", "memory-binary", "--stay1", "0.9", "--stay2", "0.9", "-o", &f]);
    let r = run(&["region", &f, "--bound", "inner"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let pts = csv_points(&r.out);
    let c = 1.0 - binary_entropy(0.1).unwrap();
    assert!(pts.iter().any(|&(a, b)| (a - c).abs() < 1e-9 && (b - c).abs() < 1e-9));

    let g = path(dir.path(), "lag.json");
    run(&["gen", "memory-lagged", "-o", &g]);
    assert_eq!(run(&["region", &g, "--bound", "inner"]).code, 2);
    let r = run(&["region", &g, "--bound", "outer"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let pts = csv_points(&r.out);
    assert!(pts.contains(&(1.0, 0.0)));
    assert!(pts.iter().all(|p| p.1 == 0.0));
}

#[test]
fn memsim_report() {
    let r = run(&["memsim", "--n", "2000", "--seed", "9"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["errors"], 0);
    assert_eq!(v["rate"], 1.0);
    assert_eq!(v["shannon_type_bound"], 0.0);
}

#[test]
fn repro_prints_a_summary() {
    let r = run(&["repro", "example5", "--trials", "500"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.lines().filter(|l| l.starts_with("PASS")).count() == 3, "{}", r.out);
    assert!(r.out.ends_with("example5: 3/3 stated outcomes reproduced\n"));
    assert_eq!(run(&["repro", "example7"]).code, 2);
}

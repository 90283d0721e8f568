use std::process::Command;

use flagres::cli::{run, CliError, Report};
use serde_json::Value;

fn report(args: &str) -> Report {
    let argv = std::iter::once("flagres").chain(args.split_whitespace());
    run(argv).unwrap_or_else(|e| panic!("{args}: {e}")).report
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flagres")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn bruhat_report() {
    let r = report("perm bruhat --n 4 --sigma 3412 --tau 4231");
    assert_eq!(r.results["leq"], Value::Bool(false));
    let c = r.check("oracle-agreement").unwrap();
    assert!(c.pass);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn resolution_report_matches_schubert_count() {
    let r = report("bs resolve --p 2 --n 4 --flag standard --word 3,1,2,3,1");
    assert!(r.all_pass(), "{:?}", r.checks);
    let count = report("schubert count --p 2 --n 4 --sigma 4231");
    assert_eq!(r.results["image_size"], count.results["variety"]);
}

#[test]
fn grass_example_report() {
    let r = report("grass example --p 2");
    assert!(r.all_pass(), "{:?}", r.checks);
    let hist = &r.results["example_fiber_histogram"];
    assert_eq!(hist["9"], 2);
    assert_eq!(hist["1"], 9);
    assert_eq!(r.results["singular_points"].as_array().unwrap().len(), 2);
}

#[test]
fn every_subcommand_passes_its_checks() {
    for args in [
        "perm word --sigma 4231",
        "perm word --word 2,1,2",
        "perm pattern --sigma 52341 --n 5 --pattern 4231",
        "relpos --p 3 --flag random --flag2 random --seed 9",
        "schubert enumerate --n 3 --sigma 231",
        "schubert enumerate --n 3 --sigma 321 --cell",
        "schubert tangent --p 5 --sigma 4231",
        "schubert smoothlocus --n 3 --p 3 --sigma 231 --tau 321",
        "bs richardson --n 3 --word 1,2 --word2 2,1",
        "grass member --lambda 1,0 --subspace 1,0,0,0;0,0,1,1",
        "grass resolve --lambda 1,0 --lambda2 1,0 --variant example",
        "grass convert --vanishing 0,2 --d 3",
        "grass convert --lambda 4,3,3,2,1 --n 10",
        "family demo --n 3 --t 1",
        "family profile --family search --n 3 --t 2",
        "family total --n 3 --t 1 --sigma 231 --tau 321",
        "family singular --n 3 --t 1 --sigma 231 --tau 312",
        "report dimension --n 3 --all",
        "report dimension --n 3 --all --pairs",
    ] {
        let r = report(args);
        assert!(r.all_pass(), "{args}: {:?}", r.checks);
        assert!(!r.checks.is_empty(), "{args}");
        assert!(!r.caveats.is_empty(), "{args}");
    }
}

#[test]
fn conversion_example() {
    let r = report("grass convert --vanishing 0,2 --d 3");
    assert_eq!(r.results["partition"], serde_json::json!([1, 0]));
}

#[test]
fn dimension_report_states_both_readings() {
    let r = report("report dimension --n 3 --sigma 321 --tau 321");
    let readings = &r.results["readings"];
    assert!(readings.get("dimension").is_some());
    assert!(readings.get("codimension").is_some());
    assert_eq!(readings["supported"], "codimension");
}

#[test]
fn output_is_deterministic() {
    let args = ["relpos", "--flag", "random", "--flag2", "random", "--seed", "42", "--p", "5"];
    let (c1, a) = binary(&args);
    let (c2, b) = binary(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let (_, other) = binary(&["relpos", "--flag", "random", "--flag2", "random", "--seed", "43", "--p", "5"]);
    assert_ne!(a, other);
}

#[test]
fn exit_codes() {
    assert_eq!(binary(&["perm", "bruhat", "--sigma", "2143", "--tau", "4231"]).0, 0);
    assert_eq!(binary(&["nonsense"]).0, 2);
    assert_eq!(binary(&["perm", "bruhat", "--sigma", "21", "--tau", "4231"]).0, 2);
    assert_eq!(binary(&["--p", "4", "relpos"]).0, 2);
    assert_eq!(binary(&["--help"]).0, 0);
    // the opposite flag is not in X_1234 of the standard flag
    assert_eq!(binary(&["schubert", "tangent", "--sigma", "1234", "--point", "opposite"]).0, 1);
}

#[test]
fn usage_errors_are_reported_as_such() {
    let err = run(["flagres", "grass", "example", "--n", "3"]).unwrap_err();
    assert!(matches!(err, CliError::Usage(_)));
    let err = run(["flagres", "perm", "bruhat"]).unwrap_err();
    assert!(matches!(err, CliError::Clap(_)));
}

#[test]
fn flags_load_from_files() {
    let dir = std::env::temp_dir().join(format!("flagres-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("flag.json");
    std::fs::write(&path, r#"{"p": 3, "n": 3, "rows": [[0,0,1],[0,1,0],[1,0,0]]}"#).unwrap();
    let spec = format!("@{}", path.display());
    let r = run(["flagres", "--p", "3", "--n", "3", "relpos", "--flag2", spec.as_str()]).unwrap().report;
    assert_eq!(r.results["relative_position"], "321");
    let bad = run(["flagres", "--p", "2", "--n", "3", "relpos", "--flag2", spec.as_str()]);
    assert!(matches!(bad, Err(CliError::Usage(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}

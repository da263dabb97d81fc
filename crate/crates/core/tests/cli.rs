//! Command-line behaviour: exit codes, file formats and determinism.

mod common;

use std::path::Path;

use common::fixture;
use nominate_core::cli::{run_cli_with, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK};
use nominate_core::{Instance, SolveReport, Status};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nominate").chain(args.iter().copied());
    let code = run_cli_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen_instance(dir: &Path, seed: u64) -> std::path::PathBuf {
    let file = dir.join(format!("inst{seed}.json"));
    let seed = seed.to_string();
    let r = run(&[
        "gen",
        "--n",
        "8",
        "--m",
        "5",
        "--amin",
        "1",
        "--amax",
        "3",
        "--seed",
        &seed,
        "-o",
        path(&file),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    file
}

#[test]
fn validate_accepts_fixtures() {
    for name in [
        "stranded_2x2.json",
        "stranded_tie_2x2.json",
        "frac_2x2.json",
        "infeasible_5x1.json",
    ] {
        let r = run(&["validate", path(&fixture(name))]);
        assert_eq!(r.code, EXIT_OK, "{name}: {}", r.out);
        assert!(r.out.starts_with("ok:"));
    }
}

#[test]
fn validate_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"format":1,"n":2,"m":2,"papers":[[],[3]],"p":[0.5,1.5]}"#).unwrap();
    let r = run(&["validate", path(&file)]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.out.contains("paper 1 has no authors"), "{}", r.out);
    assert!(r.out.contains("out of range"), "{}", r.out);
    assert!(r.out.contains("p_2 out of [0,1]"), "{}", r.out);
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("junk.json");
    std::fs::write(&file, "{not json").unwrap();
    assert_eq!(run(&["validate", path(&file)]).code, EXIT_INPUT);
    assert_eq!(
        run(&["solve", path(&file), "--variant", "basic", "--algorithm", "greedy"]).code,
        EXIT_INPUT
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["validate", path(&missing)]).code, EXIT_INPUT);
    std::fs::write(&file, r#"{"format":7,"n":1,"m":1,"papers":[[1]],"p":[0.5]}"#).unwrap();
    assert_eq!(run(&["validate", path(&file)]).code, EXIT_INPUT);
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(run(&["solve"]).code, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).code, EXIT_INPUT);
    let f = fixture("stranded_2x2.json");
    let r = run(&["solve", path(&f), "--variant", "basic", "--algorithm", "flow"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("algorithm flow does not apply"), "{}", r.err);
    let h = run(&["--help"]);
    assert_eq!(h.code, EXIT_OK);
    assert!(h.out.contains("solve"));
}

#[test]
fn missing_parameters_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen_instance(dir.path(), 3);
    let r = run(&["solve", path(&file), "--variant", "hard", "--algorithm", "flow"]);
    assert_eq!(r.code, EXIT_INPUT);
    let r = run(&[
        "solve",
        path(&file),
        "--variant",
        "soft",
        "--b",
        "2",
        "--algorithm",
        "lp-round",
    ]);
    assert_eq!(r.code, EXIT_INPUT);
    let r = run(&[
        "solve",
        path(&file),
        "--variant",
        "hard",
        "--b",
        "0",
        "--algorithm",
        "flow",
    ]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn infeasible_hard_instance_exits_two() {
    let f = fixture("infeasible_5x1.json");
    for alg in ["flow", "lp", "oracle"] {
        let r = run(&["solve", path(&f), "--variant", "hard", "--algorithm", alg]);
        assert_eq!(r.code, EXIT_INFEASIBLE, "{alg}");
        let report = SolveReport::from_json_str(&r.out).unwrap();
        assert_eq!(report.status, Status::Infeasible);
        assert!(report.nominee.is_none());
    }
    let r = run(&["oracle", path(&f), "--variant", "hard"]);
    assert_eq!(r.code, EXIT_INFEASIBLE);
}

#[test]
fn limit_from_file_and_flag_override() {
    let f = fixture("infeasible_5x1.json");
    let r = run(&[
        "solve",
        path(&f),
        "--variant",
        "hard",
        "--b",
        "5",
        "--algorithm",
        "flow",
    ]);
    assert_eq!(r.code, EXIT_OK);
    let report = SolveReport::from_json_str(&r.out).unwrap();
    assert_eq!(report.b, Some(5));
    assert_eq!(report.nominee.as_deref(), Some(&[1usize; 5][..]));
}

#[test]
fn every_algorithm_reports_consistently() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen_instance(dir.path(), 11);
    let cases: &[(&str, &[&str], &[&str])] = &[
        ("basic", &[], &["greedy", "oracle"]),
        (
            "hard",
            &["--b", "2"],
            &["flow", "lp", "baseline-rand", "baseline-greedy", "oracle"],
        ),
        (
            "soft",
            &["--b", "2", "--lambda", "0.5"],
            &["lp-round", "exact-flow", "baseline-rand", "baseline-greedy", "oracle"],
        ),
    ];
    for (variant, params, algorithms) in cases {
        for alg in *algorithms {
            let mut args = vec!["solve", path(&file), "--variant", variant, "--algorithm", alg];
            args.extend_from_slice(params);
            let r = run(&args);
            assert_eq!(r.code, EXIT_OK, "{variant}/{alg}: {}", r.err);
            let report = SolveReport::from_json_str(&r.out).unwrap();
            assert_eq!(report.variant, *variant);
            assert_eq!(report.solver, *alg);
            assert!(report.objective.is_some());
        }
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen_instance(dir.path(), 5);
    let b = dir.path().join("again.json");
    run(&[
        "gen",
        "--n",
        "8",
        "--m",
        "5",
        "--amin",
        "1",
        "--amax",
        "3",
        "--seed",
        "5",
        "-o",
        path(&b),
    ]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let runs: &[&[&str]] = &[
        &["--variant", "basic", "--algorithm", "greedy", "--seed", "9"],
        &["--variant", "hard", "--b", "2", "--algorithm", "flow"],
        &[
            "--variant",
            "hard",
            "--b",
            "2",
            "--algorithm",
            "baseline-rand",
            "--seed",
            "4",
        ],
        &[
            "--variant",
            "soft",
            "--b",
            "2",
            "--lambda",
            "1",
            "--algorithm",
            "lp-round",
        ],
        &[
            "--variant",
            "soft",
            "--b",
            "2",
            "--lambda",
            "1",
            "--algorithm",
            "baseline-greedy",
            "--seed",
            "4",
        ],
    ];
    for extra in runs {
        let mut args = vec!["solve", path(&a)];
        args.extend_from_slice(extra);
        assert_eq!(run(&args).out, run(&args).out, "{extra:?}");
    }
}

#[test]
fn import_matches_json_instance() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.csv");
    let probs = dir.path().join("p.csv");
    std::fs::write(&pairs, "paper,author\n1,1\n1,2\n2,1\n").unwrap();
    std::fs::write(&probs, "author,p\n1,0.1\n2,0.9\n").unwrap();
    let out = dir.path().join("inst.json");
    let r = run(&["import", "--pairs", path(&pairs), "--p", path(&probs), "-o", path(&out)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let imported = Instance::load(&out).unwrap();
    let fixture = Instance::load(fixture("stranded_2x2.json")).unwrap();
    assert_eq!(imported.papers(), fixture.papers());
    assert_eq!(imported.p(), fixture.p());
}

#[test]
fn dumps_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("frac_2x2.json");
    let net = dir.path().join("net.json");
    let lp = dir.path().join("lp.json");
    let r = run(&[
        "solve",
        path(&f),
        "--variant",
        "hard",
        "--algorithm",
        "flow",
        "--dump-network",
        path(&net),
    ]);
    assert_eq!(r.code, EXIT_OK);
    let r = run(&[
        "solve",
        path(&f),
        "--variant",
        "soft",
        "--lambda",
        "1",
        "--algorithm",
        "lp-round",
        "--dump-lp",
        path(&lp),
    ]);
    assert_eq!(r.code, EXIT_OK);
    let net: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(net).unwrap()).unwrap();
    assert!(!net["edges"].as_array().unwrap().is_empty());
    let lp: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(lp).unwrap()).unwrap();
    assert!(!lp["constraints"].as_array().unwrap().is_empty());
}

use std::path::PathBuf;
use std::process::Command;

use folmod::cli::oracle::{run_suite, OracleConfig, Suite};
use folmod::cli::{run, Outcome};
use folmod::gg::random::{abelian_catalog, mixed_catalog, random_finite_gg, rng};
use folmod::gg::GroupGraphDoc;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("folmod").chain(args.iter().copied()))
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn example_file(n: usize) -> PathBuf {
    tmp(&format!("example{n}.json"), folmod::folmod::example_json(n).unwrap())
}

#[test]
fn check_exit_codes() {
    let ok = example_file(1);
    let out = cli(&["check", ok.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("ok: example1"));

    let bad = tmp("broken.json", "{\"schema_version\": 1,");
    assert_eq!(cli(&["check", bad.to_str().unwrap()]).code, 2);

    let mut v: serde_json::Value = serde_json::from_str(folmod::folmod::example_json(1).unwrap()).unwrap();
    v["singularities"][0]["component"] = "nowhere".into();
    let invalid = tmp("invalid.json", &v.to_string());
    let out = cli(&["check", invalid.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("unknown-reference"), "{}", out.stderr);

    assert_eq!(cli(&["check", "/nonexistent/file.json"]).code, 2);
}

#[test]
fn moduli_exit_codes_and_formats() {
    let f3 = example_file(3);
    let out = cli(&["moduli", f3.to_str().unwrap()]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("not connected"));

    let f1 = example_file(1);
    let text = cli(&["moduli", f1.to_str().unwrap()]);
    assert_eq!(text.code, 0);
    assert!(text.stdout.contains("pipelines agree: yes"));
    let json = cli(&["moduli", f1.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["tau"], 2);
    assert_eq!(v["pipelines_agree"], true);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cli(&[]).code, 2);
    assert_eq!(cli(&["examples", "7"]).code, 2);
    assert_eq!(cli(&["oracle", "--bound", "0"]).code, 2);
    let help = cli(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("oracle"));
}

#[test]
fn examples_command_prints_documents_and_reports() {
    let doc = cli(&["examples", "5"]);
    assert_eq!(doc.stdout, folmod::folmod::example_json(5).unwrap());
    let rep = cli(&["examples", "5", "--report"]);
    assert!(rep.stdout.contains("Mod ≅ C* ⊕ Z/2"), "{}", rep.stdout);
}

#[test]
fn cohomology_of_documents() {
    let mut r = rng(7);
    let f = random_finite_gg(&mut r, &abelian_catalog(), 4, 10_000);
    let path = tmp("abelian_gg.json", &serde_json::to_string(&GroupGraphDoc::from_finite(&f)).unwrap());
    let out = cli(&["cohomology", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let count = f.brute_force_h1(10_000).unwrap().count;
    assert_eq!(v["brute_force_count"], count);

    let out = cli(&["cohomology", path.to_str().unwrap(), "--bound", "1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("enumeration skipped"), "{}", out.stdout);

    let g = random_finite_gg(&mut r, &mixed_catalog(), 3, 10_000);
    let path = tmp("mixed_gg.json", &serde_json::to_string(&GroupGraphDoc::from_finite(&g)).unwrap());
    assert_eq!(cli(&["cohomology", path.to_str().unwrap()]).code, 0);

    let bad = tmp("bad_gg.json", "{\"vertices\": 3}");
    assert_eq!(cli(&["cohomology", bad.to_str().unwrap()]).code, 2);
}

#[test]
fn bound_one_skips_every_enumeration() {
    let cfg = OracleConfig {
        bound: 1,
        abelian_cases: 20,
        ..OracleConfig::default()
    };
    let res = run_suite(&cfg, Suite::AbelianBrute);
    assert!(res.failures.is_empty());
    assert_eq!(res.passed + res.skipped, 20);
    assert!(res.skipped >= 19);
}

#[test]
fn injected_fault_is_caught_with_a_replayable_instance() {
    let cfg = OracleConfig {
        pruning_cases: 20,
        inject_fault: true,
        ..OracleConfig::default()
    };
    let res = run_suite(&cfg, Suite::Pruning);
    let fail = res.failures.first().expect("the broken branch must be detected");
    let doc = fail.instance.clone().expect("failures carry the instance");
    let path = tmp("replay.json", &serde_json::to_string(&doc).unwrap());
    assert_eq!(cli(&["cohomology", path.to_str().unwrap()]).code, 0);
}

#[test]
fn binary_output_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_folmod");
    let runs: Vec<_> = (0..2)
        .map(|_| {
            Command::new(bin)
                .args(["examples", "1", "--report", "--format", "json"])
                .output()
                .unwrap()
        })
        .collect();
    assert!(runs[0].status.success());
    assert_eq!(runs[0].stdout, runs[1].stdout);

    let bad = Command::new(bin).args(["examples", "9"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));

    let env = Command::new(bin)
        .args(["oracle", "--seed", "3"])
        .env("FOLMOD_BOUND", "0")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn oracle_runs_are_reproducible() {
    let cfg = OracleConfig {
        seed: 11,
        abelian_cases: 10,
        pruning_cases: 10,
        mv_cases: 10,
        les_cases: 10,
        ..OracleConfig::default()
    };
    let a = folmod::cli::run_oracle(&cfg);
    assert!(a.ok(), "{}", a.text());
    assert_eq!(a.text(), folmod::cli::run_oracle(&cfg).text());
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn steerlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steerlab"))
        .args(args)
        .env_remove("STEERLAB_SEED")
        .output()
        .expect("binary runs")
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn equiv_is_reflexive() {
    let o = steerlab(&[
        "equiv",
        &path("p_geo.policy"),
        &path("p_geo.policy"),
        &path("u0.universe"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "equivalent\n");
}

#[test]
fn geo_and_weighted_differ_at_na_a() {
    let o = steerlab(&[
        "equiv",
        &path("p_geo.policy"),
        &path("p_w.policy"),
        &path("u0.universe"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: region=NA qtype=A\n"), "{}", stdout(&o));
}

#[test]
fn universe_line_is_resolved_next_to_the_policy() {
    let o = steerlab(&["normalize", &path("p_w.policy")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "when true serve { {a1}: 1/4, {a2}: 3/4 }\n");
}

#[test]
fn law_check_reports_seven_passing_families() {
    let o = steerlab(&["check-laws", &path("u0.universe"), "--trials", "1000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 7);
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn realization_verdicts() {
    let single = path("single.profile");
    let halves = path("halves.profile");
    let pw = path("p_w.policy");
    let admits = steerlab(&["admits", &single, &pw]);
    assert_eq!(admits.status.code(), Some(1));
    assert!(stdout(&admits).contains("weighted outcome not expressible"));

    assert_eq!(
        steerlab(&["represent", &path("identity.profile"), &pw]).status.code(),
        Some(0)
    );
    assert_eq!(steerlab(&["represent", &halves, &pw]).status.code(), Some(1));

    let approx = steerlab(&["approx", &single, &pw]);
    assert_eq!(approx.status.code(), Some(0));
    assert_eq!(stdout(&approx).matches("(minimal)").count(), 2);

    assert_eq!(
        steerlab(&["lower", &path("identity.profile"), &pw]).status.code(),
        Some(0)
    );
    let no = steerlab(&["lower", &halves, &pw]);
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).starts_with("NO: "));
    assert!(stdout(&no).contains("witness: "));
}

#[test]
fn serve_and_encode() {
    let o = steerlab(&["serve", &path("p_geo.policy"), "--context", "region=EU qtype=AAAA"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("answer: {a2}\n"));
    let e = steerlab(&["encode", &path("u0.universe"), "--answer", ""]);
    assert_eq!(e.status.code(), Some(0));
    let expected =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/empty.hex")).unwrap();
    assert_eq!(stdout(&e), expected);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.policy");
    std::fs::write(&bad, "merge(fixed {a1}, when zone = NA apply one)\n").unwrap();
    let bad = bad.to_string_lossy().into_owned();
    for args in [
        vec!["normalize", bad.as_str(), &path("u0.universe")],
        vec!["normalize", "/nonexistent.policy", &path("u0.universe")],
        vec!["normalize", &path("p_w.policy"), "/nonexistent.universe"],
        vec!["serve", &path("p_w.policy"), "--context", "region=MARS"],
        vec!["encode", &path("u0.universe"), "--answer", "a9"],
        vec!["equiv", &path("p_w.policy")],
        vec!["no-such-command"],
    ] {
        let o = steerlab(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    let unknown = steerlab(&["normalize", &bad, &path("u0.universe")]);
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("zone"));
}

#[test]
fn product_needs_the_extended_flag() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("prod.policy");
    std::fs::write(&p, "product(fixed {a1}, one)\n").unwrap();
    let p = p.to_string_lossy().into_owned();
    let u = path("u0.universe");
    assert_eq!(steerlab(&["normalize", &p, &u]).status.code(), Some(2));
    assert_eq!(
        steerlab(&["--extended-algebra", "normalize", &p, &u]).status.code(),
        Some(0)
    );
}

#[test]
fn json_reports_are_versioned() {
    let cases: Vec<Vec<String>> = vec![
        vec!["normalize".into(), path("p_geo.policy")],
        vec!["equiv".into(), path("p_geo.policy"), path("p_w.policy")],
        vec!["check-laws".into(), "--trials".into(), "50".into()],
        vec!["admits".into(), path("single.profile"), path("p_w.policy")],
        vec!["represent".into(), path("halves.profile"), path("p_w.policy")],
        vec!["approx".into(), path("flat.profile"), path("p_geo.policy")],
        vec!["lower".into(), path("halves.profile"), path("p_w.policy")],
        vec![
            "serve".into(),
            path("p_w.policy"),
            "--context".into(),
            "region=NA qtype=A".into(),
        ],
        vec!["encode".into(), path("u0.universe"), "--answer".into(), "a1".into()],
    ];
    for args in cases {
        let mut full = vec!["--json"];
        full.extend(args.iter().map(String::as_str));
        let o = steerlab(&full);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], args[0].as_str());
    }
    let o = steerlab(&["--json", "equiv", &path("p_geo.policy"), &path("p_w.policy")]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equivalent"], false);
    assert_eq!(v["witness"]["context"], "region=NA qtype=A");
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["check-laws", "--trials", "200", "--seed", "9"],
        vec!["--json", "check-laws", "--trials", "200", "--seed", "9"],
        vec!["lower", "halves.profile", "p_w.policy", "--trials", "50", "--seed", "5"],
        vec![
            "serve",
            "p_w.policy",
            "--context",
            "region=NA qtype=A",
            "--mode",
            "sample",
            "--seed",
            "77",
        ],
        vec!["approx", "single.profile", "p_w.policy"],
    ];
    for args in runs {
        let args: Vec<String> = args
            .iter()
            .map(|a| {
                if a.contains('.') && !a.contains(' ') {
                    path(a)
                } else {
                    a.to_string()
                }
            })
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = steerlab(&refs);
        let second = steerlab(&refs);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let args = [
        "serve",
        &path("p_w.policy"),
        "--context",
        "region=NA qtype=A",
        "--mode",
        "sample",
    ];
    let with_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_steerlab"))
            .args(args)
            .env("STEERLAB_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    let explicit = |seed: &str| {
        let mut a = args.to_vec();
        a.extend(["--seed", seed]);
        steerlab(&a).stdout
    };
    for seed in ["1", "2", "3"] {
        assert_eq!(with_env(seed), explicit(seed));
    }
}

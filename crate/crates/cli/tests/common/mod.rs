//! Paths, the binary runner and the command matrix shared by the CLI tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use jhtower::corpus;

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn updating() -> bool {
    std::env::var_os("UPDATE_GOLDEN").is_some()
}

pub fn check_file(path: &Path, contents: &str) {
    if updating() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, contents).unwrap();
        return;
    }
    let existing = std::fs::read_to_string(path)
        .unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(existing, contents, "{} is out of date", path.display());
}

pub fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

pub fn group_file(name: &str) -> PathBuf {
    root().join("data/groups").join(format!("{name}.json"))
}

pub fn tower_file(name: &str) -> PathBuf {
    root().join("data/towers").join(format!("{name}.json"))
}

pub fn subgroup_file(name: &str) -> PathBuf {
    root().join("data/subgroups").join(format!("{name}.json"))
}

pub fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_jhtower"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap())
}

/// Every verb over every corpus file it applies to.
pub fn matrix() -> Vec<(String, Vec<String>)> {
    let mut runs: Vec<(String, Vec<String>)> = Vec::new();
    let path = |p: PathBuf| p.to_string_lossy().into_owned();
    for (name, d) in corpus::groups() {
        let order = d.build().unwrap().order();
        let mut verbs = vec!["factors", "series", "jh-verify", "identify", "solvable", "radical-witness", "perfectness", "power-cover"];
        if order <= 500 {
            verbs.extend(["sections", "a5-check"]);
        }
        for verb in verbs {
            runs.push((
                format!("{verb}__{name}"),
                vec![verb.into(), path(group_file(name)), "--json".into(), "--seed".into(), "3".into()],
            ));
        }
    }
    for (name, _) in corpus::towers() {
        for verb in [
            "tower-validate",
            "tower-factors",
            "tower-series",
            "tower-match",
            "tower-prosolvable",
            "tower-anabelian",
        ] {
            runs.push((
                format!("{verb}__{name}"),
                vec![verb.into(), path(tower_file(name)), "--json".into(), "--trials".into(), "3".into()],
            ));
        }
    }
    for (name, tower, _) in corpus::closed_subgroups() {
        runs.push((
            format!("tower-intersect__{name}"),
            vec![
                "tower-intersect".into(),
                path(tower_file(tower)),
                path(subgroup_file(name)),
                "--json".into(),
                "--seed".into(),
                "1".into(),
            ],
        ));
    }
    for (target, ambient) in [("c2", "s4"), ("a5", "s5"), ("c7", "a5"), ("s3", "s4"), ("c2xc2", "a5"), ("d4", "s4")] {
        runs.push((
            format!("section__{target}__{ambient}"),
            vec!["section".into(), path(group_file(target)), path(group_file(ambient)), "--json".into()],
        ));
    }
    runs
}

/// Runs every matrix entry twice and returns the names whose exit code or
/// output differed between the runs, plus the outputs of the first run.
pub fn run_matrix_twice() -> (Vec<String>, Vec<(String, String)>) {
    let mut unstable = Vec::new();
    let mut outputs = Vec::new();
    for (name, args) in matrix() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code_a, out_a) = run(&args);
        let (code_b, out_b) = run(&args);
        if code_a != code_b || out_a != out_b {
            unstable.push(name.clone());
        }
        outputs.push((name, format!("exit: {code_a}\n{out_a}")));
    }
    (unstable, outputs)
}

pub fn golden_file(name: &str) -> PathBuf {
    root().join("golden").join(format!("{name}.txt"))
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use jhtower::sections::{
    a5_corollary_check, is_section, perfectness_check, power_word_coverage, simple_sections,
};
use jhtower::series::{is_solvable, jh_verify, radical_witness};
use jhtower::tower::{
    accumulate, anabelian, induced_series, intersect_series, load_closed_subgroup, load_tower,
    match_series, profile, prosolvable, validate, ClassReport,
};
use jhtower::{composition_series, factor_multiset, identify, load_group, Error, Tower};

#[derive(Parser)]
#[command(name = "jhtower", version, about = "Composition factors of finite groups and towers of finite groups")]
struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of seeds for jh-verify, or seed pairs for tower-match.
    #[arg(long, global = true, default_value_t = 10)]
    trials: u64,
    /// Exponent for power-cover.
    #[arg(long, global = true, default_value_t = 2)]
    q: u64,
    /// Number of power factors for power-cover.
    #[arg(long, global = true, default_value_t = 3)]
    m: u64,
    /// Use only the first N levels of a tower.
    #[arg(long, global = true)]
    levels: Option<usize>,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Composition factor multiset of a group.
    Factors { group: PathBuf },
    /// One composition series, chosen by --seed.
    Series { group: PathBuf },
    /// Compare the factor multisets of --trials series.
    JhVerify { group: PathBuf },
    /// Name a simple group.
    Identify { group: PathBuf },
    /// Whether every composition factor is cyclic
    Solvable { group: PathBuf },
    /// Prime degrees of a cyclic-factor series.
    RadicalWitness { group: PathBuf },
    /// Check that every map is an onto homomorphism
    TowerValidate { tower: PathBuf },
    /// Factor profile with per-level traces.
    TowerFactors { tower: PathBuf },
    /// Composition series induced by the kernel filtration.
    TowerSeries { tower: PathBuf },
    /// Compare induced series for seed pairs (seed, seed + k), k = 1..=trials.
    TowerMatch { tower: PathBuf },
    /// Whether every level is solvable
    TowerProsolvable { tower: PathBuf },
    /// Whether no level has an abelian composition factor
    TowerAnabelian { tower: PathBuf },
    /// Intersect an induced series with a closed subgroup.
    TowerIntersect { tower: PathBuf, subgroup: PathBuf },
    /// Look for the target group as a quotient of a subgroup of the ambient group.
    Section { target: PathBuf, ambient: PathBuf },
    /// Simple groups occurring as sections.
    Sections { group: PathBuf },
    /// Check that words g0 * s1 * .. * sm cover the group.
    PowerCover { group: PathBuf },
    /// Check that a group with no abelian factor is perfect
    Perfectness { group: PathBuf },
    /// Check that A5 is the only nonabelian simple section.
    A5Check { group: PathBuf },
}

struct Outcome {
    report: Value,
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(report: Value, text: String) -> Self {
        Outcome { report, text, ok: true }
    }

    fn check(report: Value, text: String, pass: bool) -> Self {
        Outcome { report, text, ok: pass }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn open_tower(cli: &Cli, path: &Path) -> Result<Tower, Error> {
    let tower = load_tower(path)?;
    match cli.levels {
        Some(n) => tower.truncate(n),
        None => Ok(tower),
    }
}

fn class_outcome(kind: &str, name: String, r: ClassReport) -> Outcome {
    let scope = if r.prefix_relative { " (stored levels only)" } else { "" };
    Outcome::ok(
        json!({ "tower": name, kind: r.value, "prefix_relative": r.prefix_relative }),
        format!("{kind}: {}{scope}", r.value),
    )
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    Ok(match &cli.verb {
        Verb::Factors { group } => {
            let g = load_group(group)?;
            let m = factor_multiset(&g)?;
            Outcome::ok(
                json!({ "group": stem(group), "order": g.order(), "factors": m }),
                format!("order {}\n{m}", g.order()),
            )
        }
        Verb::Series { group } => {
            let g = load_group(group)?;
            let steps = composition_series(&g, cli.seed)?;
            let mut text = format!("{}", g.order());
            for s in &steps {
                text.push_str(&format!(" > {} [{}]", s.subgroup.order(), s.factor));
            }
            let rows: Vec<Value> = steps
                .iter()
                .map(|s| json!({ "order": s.subgroup.order(), "factor": s.factor }))
                .collect();
            Outcome::ok(
                json!({ "group": stem(group), "seed": cli.seed, "order": g.order(), "steps": rows }),
                text,
            )
        }
        Verb::JhVerify { group } => {
            let g = load_group(group)?;
            let r = jh_verify(&g, cli.trials)?;
            let text = format!(
                "{}: {} seeds, {} distinct chains, factors {}",
                verdict(r.pass),
                cli.trials,
                r.chains_found,
                r.factors
            );
            let mut report = to_value(&r);
            report["group"] = json!(stem(group));
            report["trials"] = json!(cli.trials);
            Outcome::check(report, text, r.pass)
        }
        Verb::Identify { group } => {
            let g = load_group(group)?;
            let t = identify(&g)?;
            Outcome::ok(
                json!({ "group": stem(group), "order": g.order(), "type": t }),
                t.to_string(),
            )
        }
        Verb::Solvable { group } => {
            let g = load_group(group)?;
            let s = is_solvable(&g)?;
            Outcome::ok(json!({ "group": stem(group), "solvable": s }), s.to_string())
        }
        Verb::RadicalWitness { group } => {
            let g = load_group(group)?;
            match radical_witness(&g, cli.seed) {
                Ok(degrees) => {
                    let text = degrees.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
                    Outcome::ok(
                        json!({ "group": stem(group), "seed": cli.seed, "degrees": degrees, "pass": true }),
                        text,
                    )
                }
                Err(Error::NotSolvable) => Outcome::check(
                    json!({ "group": stem(group), "seed": cli.seed, "degrees": null, "pass": false }),
                    "not solvable".into(),
                    false,
                ),
                Err(e) => return Err(e),
            }
        }
        Verb::TowerValidate { tower } => {
            let loaded = open_tower(cli, tower);
            let t = match loaded {
                Err(e @ Error::InvalidMap { .. }) => return Ok(invalid_tower(tower, e)),
                other => other?,
            };
            match validate(&t) {
                Ok(r) => {
                    let mut text = String::new();
                    for l in &r.levels {
                        match l.kernel_order {
                            Some(k) => text.push_str(&format!("G{} order {} kernel {}\n", l.level, l.order, k)),
                            None => text.push_str(&format!("G{} order {}\n", l.level, l.order)),
                        }
                    }
                    text.push_str("valid");
                    let mut report = to_value(&r);
                    report["tower"] = json!(stem(tower));
                    Outcome::ok(report, text)
                }
                Err(e @ (Error::InvalidMap { .. } | Error::NotSurjective { .. })) => {
                    invalid_tower(tower, e)
                }
                Err(e) => return Err(e),
            }
        }
        Verb::TowerFactors { tower } => {
            let t = open_tower(cli, tower)?;
            let p = profile(&t)?;
            let mut text = String::new();
            for e in &p.entries {
                let trace: Vec<String> = e.trace.iter().map(u64::to_string).collect();
                text.push_str(&format!("{}: {} trace [{}]\n", e.ty, e.multiplicity, trace.join(", ")));
            }
            text.pop();
            let mut report = to_value(&p);
            report["tower"] = json!(stem(tower));
            Outcome::ok(report, text)
        }
        Verb::TowerSeries { tower } => {
            let t = open_tower(cli, tower)?;
            let s = induced_series(&t, cli.seed)?;
            let mut text = String::new();
            let mut blocks = Vec::new();
            for (b, block) in s.blocks.iter().enumerate() {
                let acc = accumulate(&s, b)?;
                let factors: Vec<String> = block.steps.iter().map(|x| x.factor.to_string()).collect();
                text.push_str(&format!("block {b} (G{}): [{}] total {acc}\n", block.level, factors.join(", ")));
                let steps: Vec<Value> = block
                    .steps
                    .iter()
                    .map(|x| json!({ "order": x.subgroup.order(), "factor": x.factor }))
                    .collect();
                blocks.push(json!({ "block": b, "level": block.level, "steps": steps, "accumulated": acc }));
            }
            text.pop();
            Outcome::ok(json!({ "tower": stem(tower), "seed": cli.seed, "blocks": blocks }), text)
        }
        Verb::TowerMatch { tower } => {
            let t = open_tower(cli, tower)?;
            if cli.trials == 0 {
                return Err(Error::InvalidArgument("tower-match needs --trials >= 1".into()));
            }
            let reports = (1..=cli.trials)
                .map(|k| match_series(&t, cli.seed, cli.seed + k))
                .collect::<Result<Vec<_>, _>>()?;
            let pass = reports.iter().all(|r| r.pass);
            let text = format!(
                "{}: {} seed pairs, factors {}",
                verdict(pass),
                reports.len(),
                reports[0].factors
            );
            Outcome::check(
                json!({ "tower": stem(tower), "pairs": reports, "pass": pass }),
                text,
                pass,
            )
        }
        Verb::TowerProsolvable { tower } => {
            let t = open_tower(cli, tower)?;
            class_outcome("prosolvable", stem(tower), prosolvable(&t)?)
        }
        Verb::TowerAnabelian { tower } => {
            let t = open_tower(cli, tower)?;
            class_outcome("anabelian", stem(tower), anabelian(&t)?)
        }
        Verb::TowerIntersect { tower, subgroup } => {
            let t = open_tower(cli, tower)?;
            let h = load_closed_subgroup(&t, subgroup)?;
            let s = induced_series(&t, cli.seed)?;
            let r = intersect_series(&t, &s, &h)?;
            let text = format!("{}: |H| = {}, factors {}", verdict(r.pass), r.subgroup_order, r.factors);
            let mut report = to_value(&r);
            report["tower"] = json!(stem(tower));
            report["subgroup"] = json!(stem(subgroup));
            report["seed"] = json!(cli.seed);
            Outcome::check(report, text, r.pass)
        }
        Verb::Section { target, ambient } => {
            let t = load_group(target)?;
            let a = load_group(ambient)?;
            let w = is_section(&t, &a)?;
            let (witness, text) = match &w {
                Some(w) => (
                    json!({ "c_order": w.c.order(), "d_order": w.d.order(), "quotient_type": w.quotient_type }),
                    format!("pass: C of order {}, D of order {}", w.c.order(), w.d.order()),
                ),
                None => (Value::Null, "FAIL: not a section".into()),
            };
            Outcome::check(
                json!({ "target": stem(target), "ambient": stem(ambient), "witness": witness, "pass": w.is_some() }),
                text,
                w.is_some(),
            )
        }
        Verb::Sections { group } => {
            let g = load_group(group)?;
            let s = simple_sections(&g)?;
            let names: Vec<String> = s.iter().map(ToString::to_string).collect();
            Outcome::ok(
                json!({ "group": stem(group), "sections": s }),
                format!("{{{}}}", names.join(", ")),
            )
        }
        Verb::PowerCover { group } => {
            let g = load_group(group)?;
            let r = power_word_coverage(&g, cli.q, cli.m)?;
            let text = format!("{}: covered {} of {}", verdict(r.pass), r.covered, r.order);
            let mut report = to_value(&r);
            report["group"] = json!(stem(group));
            Outcome::check(report, text, r.pass)
        }
        Verb::Perfectness { group } => {
            let g = load_group(group)?;
            let r = perfectness_check(&g)?;
            let text = format!(
                "{}: anabelian {}, perfect {}, converse {}",
                verdict(r.pass),
                r.anabelian,
                r.perfect,
                r.converse_holds
            );
            let mut report = to_value(&r);
            report["group"] = json!(stem(group));
            Outcome::check(report, text, r.pass)
        }
        Verb::A5Check { group } => {
            let g = load_group(group)?;
            let r = a5_corollary_check(&g)?;
            let names: Vec<String> = r.nonabelian_sections.iter().map(ToString::to_string).collect();
            let text = format!("{}: nonabelian sections {{{}}}", verdict(r.pass), names.join(", "));
            let mut report = to_value(&r);
            report["group"] = json!(stem(group));
            Outcome::check(report, text, r.pass)
        }
    })
}

fn invalid_tower(path: &Path, e: Error) -> Outcome {
    Outcome::check(
        json!({ "tower": stem(path), "valid": false, "error": e.to_string() }),
        format!("invalid: {e}"),
        false,
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.report).expect("reports serialize"));
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({ "error": e.to_string() })).expect("reports serialize"));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

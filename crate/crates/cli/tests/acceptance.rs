//! Acceptance run: one line per criterion, non-zero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod oracle;
mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jhtower::group::{derived_subgroup, normal_closure};
use jhtower::sections::{a5_corollary_check, perfectness_check, power_word_coverage, simple_sections};
use jhtower::series::jh_verify;
use jhtower::tower::{
    accumulate, anabelian, induced_series, intersect_series, match_series, profile, prosolvable,
    StepOutcome,
};
use jhtower::{corpus, factor_multiset, ClosedSubgroup, FiniteGroup, Tower};
use oracle::{named, Cayley, Set};

const JH_SEEDS: u64 = 50;
const JH_TIME_LIMIT: Duration = Duration::from_secs(60);
const TOWER_SEEDS: u64 = 10;
const TOWER_TIME_LIMIT: Duration = Duration::from_secs(120);
const MATCH_PAIRS: usize = 50;
const INTERSECT_PAIRS: usize = 20;
const TRIPLES: usize = 200;
const MIN_CORPUS: usize = 30;
const MAX_CORPUS_ORDER: u128 = 2000;

type Outcome = Result<String, String>;

fn groups() -> Vec<(&'static str, FiniteGroup)> {
    corpus::groups()
        .into_iter()
        .map(|(n, d)| (n, d.build().unwrap()))
        .collect()
}

fn towers() -> Vec<(&'static str, Tower)> {
    corpus::towers()
        .into_iter()
        .map(|(n, _)| (n, corpus::tower(n).unwrap()))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite_jh() -> Outcome {
    let start = Instant::now();
    let all = groups();
    ensure(all.len() >= MIN_CORPUS, || format!("corpus has {} groups", all.len()))?;
    for (name, g) in &all {
        ensure(g.order() <= MAX_CORPUS_ORDER, || format!("{name} has order {}", g.order()))?;
        let r = jh_verify(g, JH_SEEDS).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.pass, || format!("{name}: seeds disagree"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < JH_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{} groups x {JH_SEEDS} seeds in {:.1}s (limit {}s)", all.len(), elapsed.as_secs_f64(), JH_TIME_LIMIT.as_secs()))
}

fn known_multisets() -> Outcome {
    let cases = [
        ("s4", "{C2:3, C3:1}"),
        ("sl2_5", "{C2:1, A5:1}"),
        ("c720", "{C2:4, C3:2, C5:1}"),
    ];
    for (name, expected) in cases {
        let g = corpus::group(name).unwrap();
        let m = factor_multiset(&g).map_err(|e| e.to_string())?;
        ensure(m.to_string() == expected, || format!("{name}: {m}"))?;
        let t = Cayley::new(&g);
        let oracle = t.composition_factors(&(0..t.len()).collect());
        ensure(named(&m) == oracle, || format!("{name}: oracle gives {oracle:?}"))?;
    }
    Ok("S4, SL2(5), C720 match the normal-lattice oracle".into())
}

fn tower_accumulation() -> Outcome {
    let start = Instant::now();
    let all = towers();
    for (name, t) in &all {
        let levels = t.level_multisets().map_err(|e| e.to_string())?;
        for n in 1..t.len() {
            let mut expected = levels[n - 1].clone();
            expected.merge(&factor_multiset(t.kernel(n).group()).map_err(|e| e.to_string())?);
            ensure(levels[n] == expected, || format!("{name}: kernel additivity at level {}", n + 1))?;
        }
        for e in profile(t).map_err(|e| e.to_string())?.entries {
            ensure(e.trace.windows(2).all(|w| w[0] <= w[1]), || format!("{name}: trace of {} decreases", e.ty))?;
        }
        for seed in 0..TOWER_SEEDS {
            let s = induced_series(t, seed).map_err(|e| e.to_string())?;
            for b in 0..t.len() {
                let acc = accumulate(&s, b).map_err(|e| e.to_string())?;
                ensure(acc == levels[b], || format!("{name} seed {seed} block {b}: {acc} vs {}", levels[b]))?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < TOWER_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{} towers x {TOWER_SEEDS} seeds in {:.1}s (limit {}s)", all.len(), elapsed.as_secs_f64(), TOWER_TIME_LIMIT.as_secs()))
}

fn series_matching() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let all = towers();
    for (name, t) in &all {
        for _ in 0..MATCH_PAIRS {
            let a: u64 = rng.gen();
            let b: u64 = rng.gen();
            if a == b {
                continue;
            }
            let r = match_series(t, a, b).map_err(|e| e.to_string())?;
            ensure(r.pass, || format!("{name}: seeds {a}, {b} diverge at {:?}", r.first_divergence))?;
        }
    }
    Ok(format!("{MATCH_PAIRS} seed pairs on each of {} towers", all.len()))
}

fn level_solvable(g: &FiniteGroup) -> bool {
    if g.order() <= 720 {
        let t = Cayley::new(g);
        return t.solvable(&(0..t.len()).collect());
    }
    let mut current = g.clone();
    loop {
        if current.is_trivial() {
            return true;
        }
        let next = derived_subgroup(&current).into_group();
        if next.order() == current.order() {
            return false;
        }
        current = next;
    }
}

fn classification() -> Outcome {
    for (name, t) in towers() {
        let oracle = t.levels().iter().all(level_solvable);
        let got = prosolvable(&t).map_err(|e| e.to_string())?.value;
        ensure(got == oracle, || format!("{name}: prosolvable {got}, derived series says {oracle}"))?;
    }
    let prod = anabelian(&corpus::tower("prod_a5_psl2_7").unwrap()).map_err(|e| e.to_string())?;
    ensure(prod.value, || "prod_simple is not anabelian".into())?;
    let sl = anabelian(&corpus::tower("const_sl2_5").unwrap()).map_err(|e| e.to_string())?;
    ensure(!sl.value, || "SL2(5) tower is anabelian".into())?;
    Ok("prosolvable agrees with derived series on every tower".into())
}

fn intersections() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let candidates = ["zp2", "zp3", "zp5", "zhat", "const_s4", "const_a5", "const_c2xc2", "s4_s4", "a5_a5", "a5_psl2_7"];
    let mut checked = 0;
    let mut proper = 0;
    while checked < INTERSECT_PAIRS {
        let name = candidates[rng.gen_range(0..candidates.len())];
        let t = corpus::tower(name).unwrap();
        let top = t.level(t.len());
        // Subnormal subgroup: normal closures of random elements, nested.
        let mut h = top.clone();
        for _ in 0..rng.gen_range(1..4) {
            let x = h.random_element(&mut rng);
            h = normal_closure(&h, &[x]).map_err(|e| e.to_string())?.into_group();
        }
        if h.order() < top.order() && !h.is_trivial() {
            proper += 1;
        }
        let closed = ClosedSubgroup::from_top(&t, &h).map_err(|e| e.to_string())?;
        let seed: u64 = rng.gen();
        let s = induced_series(&t, seed).map_err(|e| e.to_string())?;
        let r = intersect_series(&t, &s, &closed).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.steps.iter().all(|x| x.outcome != StepOutcome::Mismatch), || format!("{name}: mismatched step"))?;
        ensure(r.pass, || format!("{name}: intersection fails"))?;
        checked += 1;
    }
    Ok(format!("{checked} random subnormal subgroups ({proper} proper and nontrivial)"))
}

fn finite_level_checks() -> Outcome {
    let a5 = corpus::group("a5").unwrap();
    let base = power_word_coverage(&a5, 2, 3).map_err(|e| e.to_string())?;
    ensure(base.pass, || format!("A5 q=2 m=3 covers {}", base.covered))?;
    let t = Cayley::new(&a5);
    let odd: Set = (0..t.len()).filter(|&x| t.element_order(x) % 2 == 1).collect();
    let squares: Set = (0..t.len()).map(|x| t.mul[x][x]).collect();
    let mut reach = odd;
    let mut previous = 0;
    for m in 1..=5u64 {
        reach = t.product(&reach, &squares);
        let r = power_word_coverage(&a5, 2, m).map_err(|e| e.to_string())?;
        ensure(r.covered as usize == reach.len(), || format!("m={m}: {} vs oracle {}", r.covered, reach.len()))?;
        ensure(r.covered >= previous, || format!("coverage drops at m={m}"))?;
        previous = r.covered;
    }
    let sections: Vec<String> = simple_sections(&a5).map_err(|e| e.to_string())?.iter().map(|t| t.to_string()).collect();
    ensure(sections == ["C2", "C3", "C5", "A5"], || format!("sections of A5: {sections:?}"))?;
    for name in ["a5", "a5xc2", "s5"] {
        let r = a5_corollary_check(&corpus::group(name).unwrap()).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("{name}: nonabelian sections {:?}", r.nonabelian_sections))?;
    }
    let mut anabelian_groups = 0;
    for (name, g) in groups() {
        if !factor_multiset(&g).map_err(|e| e.to_string())?.any_abelian() {
            anabelian_groups += 1;
            let r = perfectness_check(&g).map_err(|e| e.to_string())?;
            ensure(r.perfect && derived_subgroup(&g).order() == g.order(), || format!("{name} is not perfect"))?;
        }
    }
    Ok(format!("coverage, sections, A5 corollary, {anabelian_groups} anabelian groups perfect"))
}

fn product_sets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tables: Vec<(&str, Cayley)> = groups()
        .into_iter()
        .filter(|(_, g)| g.order() <= 200)
        .map(|(n, g)| (n, Cayley::new(&g)))
        .collect();
    let mut found = 0;
    let mut attempts = 0;
    while found < TRIPLES {
        attempts += 1;
        ensure(attempts < 100 * TRIPLES, || format!("only {found} triples after {attempts} attempts"))?;
        let (name, t) = &tables[rng.gen_range(0..tables.len())];
        let random_subgroup = |within: &Set, extra: &Set, rng: &mut ChaCha8Rng| {
            let pool: Vec<usize> = within.iter().copied().collect();
            let picks: Set = (0..rng.gen_range(1..3)).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
            t.generate(&picks.union(extra).copied().collect())
        };
        let all: Set = (0..t.len()).collect();
        let a = random_subgroup(&all, &Set::new(), &mut rng);
        let h = random_subgroup(&all, &Set::new(), &mut rng);
        let a_cap_h: Set = a.intersection(&h).copied().collect();
        let b = random_subgroup(&a, &a_cap_h, &mut rng);
        if b.len() >= a.len() {
            continue;
        }
        let b_cap_h: Set = b.intersection(&h).copied().collect();
        ensure(a_cap_h == b_cap_h, || format!("{name}: construction broke A∩H = B∩H"))?;
        ensure(t.product(&a, &h) != t.product(&b, &h), || format!("{name}: AH = BH"))?;
        found += 1;
    }
    Ok(format!("{found} triples with B < A and A∩H = B∩H, all AH ≠ BH"))
}

fn golden_files() -> Outcome {
    let (unstable, outputs) = common::run_matrix_twice();
    ensure(unstable.is_empty(), || format!("runs differ: {unstable:?}"))?;
    let mut stale = Vec::new();
    for (name, text) in &outputs {
        match std::fs::read_to_string(common::golden_file(name)) {
            Ok(existing) if existing == *text => {}
            _ => stale.push(name.clone()),
        }
    }
    ensure(stale.is_empty(), || format!("differs from golden: {stale:?}"))?;
    Ok(format!("{} commands byte-stable across two runs and equal to golden files", outputs.len()))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 9] = [
        ("AC1", "finite Jordan-Hölder suite", finite_jh),
        ("AC2", "known factor multisets", known_multisets),
        ("AC3", "tower accumulation and traces", tower_accumulation),
        ("AC4", "induced series match across seeds", series_matching),
        ("AC5", "prosolvable and anabelian", classification),
        ("AC6", "intersection with closed subgroups", intersections),
        ("AC7", "sections, power words, perfectness", finite_level_checks),
        ("AC8", "strict inclusion survives products", product_sets),
        ("AC9", "CLI golden files", golden_files),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        match check() {
            Ok(detail) => println!("{id} PASS {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{id} FAIL {title}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}

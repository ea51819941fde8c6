mod common;

use common::{Cayley, Set};
use jhtower::corpus;
use jhtower::group::derived_subgroup;
use jhtower::iso::find_isomorphism;
use jhtower::sections::{
    a5_corollary_check, is_section, perfectness_check, power_word_coverage, simple_sections, subgroups,
};
use jhtower::{composition_series, factor_multiset, quotient, FiniteGroup, SimpleType};

fn corpus_up_to(bound: u128) -> Vec<(&'static str, FiniteGroup)> {
    corpus::groups()
        .into_iter()
        .map(|(n, d)| (n, d.build().unwrap()))
        .filter(|(_, g)| g.order() <= bound)
        .collect()
}

/// Words `g0 s1 .. sm` by brute force over the table.
fn coverage_oracle(g: &FiniteGroup, q: usize, m: usize) -> usize {
    let t = Cayley::new(g);
    let coprime: Set = (0..t.len())
        .filter(|&x| num_gcd(t.element_order(x), q) == 1)
        .collect();
    let powers: Set = (0..t.len())
        .map(|x| (1..q).fold(x, |acc, _| t.mul[acc][x]))
        .collect();
    let mut reach = coprime;
    for _ in 0..m {
        reach = t.product(&reach, &powers);
    }
    reach.len()
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn power_cover_matches_oracle_and_grows_with_m() {
    let a5 = FiniteGroup::alternating(5).unwrap();
    assert!(power_word_coverage(&a5, 2, 3).unwrap().pass);
    for (name, g) in corpus_up_to(200) {
        for q in [2u64, 3] {
            let mut previous = 0;
            for m in 1..=4u64 {
                let r = power_word_coverage(&g, q, m).unwrap();
                assert_eq!(r.covered as usize, coverage_oracle(&g, q as usize, m as usize), "{name} q={q} m={m}");
                assert!(r.covered >= previous, "{name}");
                previous = r.covered;
            }
        }
    }
}

#[test]
fn sections_compose() {
    let small = corpus_up_to(24);
    for ambient in ["s4", "d6", "sl2_3", "c2xc2xc2", "d4xc3"] {
        let g = corpus::group(ambient).unwrap();
        let middles: Vec<&(&str, FiniteGroup)> = small
            .iter()
            .filter(|(_, m)| is_section(m, &g).unwrap().is_some())
            .collect();
        for (mname, m) in &middles {
            for (tname, t) in &small {
                if is_section(t, m).unwrap().is_some() {
                    assert!(
                        is_section(t, &g).unwrap().is_some(),
                        "{tname} in {mname} in {ambient}"
                    );
                }
            }
        }
    }
}

#[test]
fn section_witnesses_are_sound() {
    for (name, g) in corpus_up_to(120) {
        for (tname, t) in corpus_up_to(60) {
            let found = is_section(&t, &g).unwrap();
            if g.order() % t.order() != 0 {
                assert!(found.is_none(), "{tname} in {name}");
            }
            if let Some(w) = found {
                assert!(g.contains_group(w.c.group()));
                let d = w.c.group().subgroup(w.d.generators().to_vec()).unwrap();
                let (q, _) = quotient(w.c.group(), &d).unwrap();
                assert!(find_isomorphism(&q, &t).unwrap().is_some(), "{tname} in {name}");
            }
        }
    }
}

#[test]
fn subgroup_factors_are_sections_of_group_factors() {
    for (name, g) in corpus_up_to(120) {
        let series = composition_series(&g, 0).unwrap();
        let mut chain = vec![g.clone()];
        chain.extend(series.iter().map(|s| s.subgroup.group().clone()));
        let mut factor_sections = Vec::new();
        for w in chain.windows(2) {
            let lower = w[0].subgroup(w[1].generators().to_vec()).unwrap();
            let (q, _) = quotient(&w[0], &lower).unwrap();
            factor_sections.push(simple_sections(&q).unwrap());
        }
        for h in subgroups(&g).unwrap() {
            for t in factor_multiset(h.group()).unwrap().types() {
                assert!(
                    factor_sections.iter().any(|s| s.contains(t)),
                    "{name}: factor {t} of a subgroup of order {}",
                    h.order()
                );
            }
        }
    }
}

#[test]
fn anabelian_corpus_groups_are_perfect() {
    let mut seen = 0;
    for (name, g) in corpus_up_to(2000) {
        let r = perfectness_check(&g).unwrap();
        assert!(r.pass, "{name}");
        if !factor_multiset(&g).unwrap().any_abelian() {
            seen += 1;
            assert_eq!(derived_subgroup(&g).order(), g.order(), "{name}");
        }
    }
    assert!(seen >= 3);
}

#[test]
fn a5_corollary_on_examples() {
    for name in ["a5", "a5xc2", "s5"] {
        assert!(a5_corollary_check(&corpus::group(name).unwrap()).unwrap().pass, "{name}");
    }
    let a5 = corpus::group("a5").unwrap();
    let names: Vec<String> = simple_sections(&a5).unwrap().iter().map(SimpleType::to_string).collect();
    assert_eq!(names, ["C2", "C3", "C5", "A5"]);
}

use proptest::prelude::*;

use jhtower::corpus;
use jhtower::group::{derived_subgroup, is_subnormal, normal_closure};
use jhtower::tower::{
    accumulate, anabelian, induced_series, intersect_series, match_series, profile, prosolvable,
    validate, Multiplicity, StepOutcome,
};
use jhtower::{factor_multiset, ClosedSubgroup, Error, FiniteGroup, SimpleType, Tower};

fn towers() -> Vec<(&'static str, Tower)> {
    corpus::towers()
        .into_iter()
        .map(|(n, _)| (n, corpus::tower(n).unwrap()))
        .collect()
}

fn derived_length_finite(g: &FiniteGroup) -> bool {
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

#[test]
fn corpus_towers_validate() {
    for (name, t) in towers() {
        let r = validate(&t).unwrap();
        assert!(r.valid, "{name}");
        for w in r.levels.windows(2) {
            assert_eq!(w[1].order, w[0].order * w[1].kernel_order.unwrap(), "{name}");
        }
    }
}

#[test]
fn kernel_additivity_and_monotone_traces() {
    for (name, t) in towers() {
        let levels = t.level_multisets().unwrap();
        for n in 1..t.len() {
            let mut expected = levels[n - 1].clone();
            expected.merge(&factor_multiset(t.kernel(n).group()).unwrap());
            assert_eq!(levels[n], expected, "{name} level {}", n + 1);
        }
        for e in profile(&t).unwrap().entries {
            assert!(e.trace.windows(2).all(|w| w[0] <= w[1]), "{name} {}", e.ty);
        }
    }
}

#[test]
fn blocks_accumulate_to_level_multisets() {
    for (name, t) in towers() {
        for seed in 0..4 {
            let s = induced_series(&t, seed).unwrap();
            for b in 0..t.len() {
                assert_eq!(
                    accumulate(&s, b).unwrap(),
                    factor_multiset(t.level(b + 1)).unwrap(),
                    "{name} seed {seed} block {b}"
                );
            }
        }
    }
}

#[test]
fn induced_series_match_across_seeds() {
    for (name, t) in towers() {
        for k in 1..6 {
            assert!(match_series(&t, 0, k).unwrap().pass, "{name} (0, {k})");
        }
    }
}

#[test]
fn classification_agrees_with_derived_series() {
    for (name, t) in towers() {
        let oracle = t.levels().iter().all(derived_length_finite);
        let stripped = t.without_annotation();
        assert_eq!(prosolvable(&stripped).unwrap().value, oracle, "{name}");
        assert_eq!(prosolvable(&t).unwrap().value, oracle, "{name}");
    }
    let prod = corpus::tower("prod_a5_psl2_7").unwrap();
    assert!(anabelian(&prod).unwrap().value);
    assert!(!anabelian(&corpus::tower("const_sl2_5").unwrap()).unwrap().value);
    assert!(anabelian(&corpus::tower("a5_psl2_7").unwrap()).unwrap().value);
}

#[test]
fn profiles_of_families() {
    let zp = profile(&corpus::tower("zp5").unwrap()).unwrap();
    let c5 = zp.get(&SimpleType::Cyclic(5)).unwrap();
    assert_eq!(c5.multiplicity, Multiplicity::Infinite);
    assert_eq!(c5.trace, vec![1, 2, 3, 4, 5, 6]);
    let s4 = profile(&corpus::tower("const_s4").unwrap()).unwrap();
    assert_eq!(s4.get(&SimpleType::Cyclic(2)).unwrap().multiplicity, Multiplicity::Exact(3));
    let zhat = profile(&corpus::tower("zhat").unwrap().without_annotation()).unwrap();
    // 6! = 2^4 * 3^2 * 5
    assert_eq!(zhat.get(&SimpleType::Cyclic(2)).unwrap().multiplicity, Multiplicity::AtLeast(4));
    assert_eq!(zhat.get(&SimpleType::Cyclic(3)).unwrap().multiplicity, Multiplicity::AtLeast(2));
}

#[test]
fn corpus_closed_subgroups_intersect_cleanly() {
    for (name, tower_name, file) in corpus::closed_subgroups() {
        let t = corpus::tower(tower_name).unwrap();
        let h = jhtower::tower::parse_closed_subgroup(&t, &file.to_string()).unwrap();
        for seed in 0..3 {
            let s = induced_series(&t, seed).unwrap();
            let r = intersect_series(&t, &s, &h).unwrap();
            assert!(r.pass, "{name} seed {seed}");
            assert!(r.steps.iter().all(|x| x.outcome != StepOutcome::Mismatch));
        }
    }
}

/// A subnormal subgroup of `top`: iterated normal closures of picked elements,
/// each taken inside the previous one.
fn subnormal_from(top: &FiniteGroup, picks: &[prop::sample::Index]) -> FiniteGroup {
    let mut current = top.clone();
    for i in picks {
        let elements = current.elements().unwrap();
        let x = elements.get(i.index(elements.len())).clone();
        current = normal_closure(&current, &[x]).unwrap().into_group();
    }
    current
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_subnormal_subgroups_intersect_cleanly(
        which in prop::sample::select(vec!["zp2", "zp3", "zhat", "const_s4", "s4_s4", "a5_a5", "const_c2xc2", "a5_psl2_7"]),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4),
        seed in 0u64..1000,
    ) {
        let t = corpus::tower(which).unwrap();
        let h = subnormal_from(t.level(t.len()), &picks);
        let closed = ClosedSubgroup::from_top(&t, &h).unwrap();
        let s = induced_series(&t, seed).unwrap();
        let r = intersect_series(&t, &s, &closed).unwrap();
        prop_assert!(r.pass, "{} seed {}", which, seed);
        prop_assert_eq!(r.factors.order_product(), Some(h.order()));
    }

    #[test]
    fn other_subgroups_are_refused_or_pass(
        which in prop::sample::select(vec!["const_s4", "s4_s4", "a5_a5"]),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..3),
        seed in 0u64..1000,
    ) {
        let t = corpus::tower(which).unwrap();
        let top = t.level(t.len());
        let elements = top.elements().unwrap();
        let gens = picks.iter().map(|i| elements.get(i.index(elements.len())).clone()).collect();
        let h = top.subgroup(gens).unwrap().into_group();
        let closed = ClosedSubgroup::from_top(&t, &h).unwrap();
        let s = induced_series(&t, seed).unwrap();
        match intersect_series(&t, &s, &closed) {
            Ok(r) => {
                prop_assert!(is_subnormal(top, &h));
                prop_assert!(r.pass);
            }
            Err(Error::IncompatibleSubgroup(_)) => prop_assert!(!is_subnormal(top, &h)),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

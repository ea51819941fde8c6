//! A fixed collection of small groups and towers shared by the test suites
//! and the golden-file generator.

use serde_json::{json, Value};

use crate::description::GroupDescription;
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::perm::Permutation;
use crate::tower::{parse_tower, ClosedSubgroup, Tower};

fn cyclic(n: usize) -> GroupDescription {
    GroupDescription::Cyclic { n }
}

fn dihedral(n: usize) -> GroupDescription {
    GroupDescription::Dihedral { n }
}

fn symmetric(n: usize) -> GroupDescription {
    GroupDescription::Symmetric { n }
}

fn alternating(n: usize) -> GroupDescription {
    GroupDescription::Alternating { n }
}

fn sl2(q: u32) -> GroupDescription {
    GroupDescription::Sl2 { q }
}

fn product(parts: Vec<GroupDescription>) -> GroupDescription {
    GroupDescription::DirectProduct { parts }
}

fn psl2_7() -> GroupDescription {
    GroupDescription::from_group(&FiniteGroup::psl2(7).expect("PSL2(7) builds"))
}

/// Named group descriptions, all of order at most 2000.
pub fn groups() -> Vec<(&'static str, GroupDescription)> {
    let mut out: Vec<(&'static str, GroupDescription)> = vec![
        ("c1", cyclic(1)),
        ("c2", cyclic(2)),
        ("c3", cyclic(3)),
        ("c4", cyclic(4)),
        ("c5", cyclic(5)),
        ("c6", cyclic(6)),
        ("c7", cyclic(7)),
        ("c8", cyclic(8)),
        ("c12", cyclic(12)),
        ("c30", cyclic(30)),
        ("c720", cyclic(720)),
        ("d3", dihedral(3)),
        ("d4", dihedral(4)),
        ("d5", dihedral(5)),
        ("d6", dihedral(6)),
        ("d10", dihedral(10)),
        ("s3", symmetric(3)),
        ("s4", symmetric(4)),
        ("s5", symmetric(5)),
        ("s6", symmetric(6)),
        ("a4", alternating(4)),
        ("a5", alternating(5)),
        ("a6", alternating(6)),
        ("sl2_3", sl2(3)),
        ("sl2_5", sl2(5)),
        ("sl2_7", sl2(7)),
        ("sl2_11", sl2(11)),
        ("psl2_7", psl2_7()),
    ];
    out.extend([
        ("c2xc2", product(vec![cyclic(2), cyclic(2)])),
        ("c2xc2xc2", product(vec![cyclic(2), cyclic(2), cyclic(2)])),
        ("c3xc3", product(vec![cyclic(3), cyclic(3)])),
        ("c4xc2", product(vec![cyclic(4), cyclic(2)])),
        ("s3xc2", product(vec![symmetric(3), cyclic(2)])),
        ("s3xs3", product(vec![symmetric(3), symmetric(3)])),
        ("s4xc2", product(vec![symmetric(4), cyclic(2)])),
        ("a4xc2", product(vec![alternating(4), cyclic(2)])),
        ("a4xc3", product(vec![alternating(4), cyclic(3)])),
        ("d4xc3", product(vec![dihedral(4), cyclic(3)])),
        ("a5xc2", product(vec![alternating(5), cyclic(2)])),
    ]);
    out
}

/// Builds a corpus group by name.
pub fn group(name: &str) -> Option<FiniteGroup> {
    groups()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| d.build().expect("corpus groups build"))
}

fn image_strings(perms: &[Permutation]) -> Vec<String> {
    perms.iter().map(|p| p.to_string()).collect()
}

/// Two-level tower `lower <- lower x other`, projecting onto the first factor.
fn projection(lower: GroupDescription, other: GroupDescription) -> Result<Value> {
    let g = lower.build()?;
    let h = other.build()?;
    let mut images: Vec<Permutation> = g.generators().iter().filter(|x| !x.is_identity()).cloned().collect();
    let extra = h.generators().iter().filter(|x| !x.is_identity()).count();
    images.extend(std::iter::repeat(g.identity()).take(extra));
    Ok(json!({
        "levels": [lower.clone(), product(vec![lower, other])],
        "maps": [{ "gen_images": image_strings(&images) }],
    }))
}

/// Named tower files.
pub fn towers() -> Vec<(&'static str, Value)> {
    let mut out = vec![
        ("zp2", json!({"family": {"kind": "zp", "p": 2, "prefix": 6}})),
        ("zp3", json!({"family": {"kind": "zp", "p": 3, "prefix": 6}})),
        ("zp5", json!({"family": {"kind": "zp", "p": 5, "prefix": 6}})),
        ("zhat", json!({"family": {"kind": "zhat", "prefix": 6}})),
        (
            "prod_a5_psl2_7",
            json!({"family": {"kind": "prod_simple", "factors": ["A5", "PSL2(7)"], "prefix": 4}}),
        ),
    ];
    for (name, g) in [
        ("const_s4", symmetric(4)),
        ("const_a5", alternating(5)),
        ("const_sl2_5", sl2(5)),
        ("const_c2xc2", product(vec![cyclic(2), cyclic(2)])),
    ] {
        out.push((name, json!({"family": {"kind": "constant", "group": g, "prefix": 3}})));
    }
    out.push(("s4_s4", projection(symmetric(4), symmetric(4)).expect("S4 builds")));
    out.push(("a5_a5", projection(alternating(5), alternating(5)).expect("A5 builds")));
    out.push(("a5_psl2_7", projection(alternating(5), psl2_7()).expect("PSL2(7) builds")));
    out
}

/// Builds a corpus tower by name.
pub fn tower(name: &str) -> Option<Tower> {
    towers()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, v)| parse_tower(&v.to_string()).expect("corpus towers build"))
}

/// Closed subgroup file listing generators of every level.
pub fn closed_subgroup_json(h: &ClosedSubgroup) -> Value {
    let levels: Vec<Vec<String>> = (1..=h.len())
        .map(|n| image_strings(h.level(n).generators()))
        .collect();
    json!({ "levels": levels })
}

/// Named closed subgroups, each subnormal at the top level: `(name, tower name, file)`.
pub fn closed_subgroups() -> Vec<(&'static str, &'static str, Value)> {
    let parse = |top: &FiniteGroup, gens: &[&str]| -> Vec<Permutation> {
        gens.iter()
            .map(|s| Permutation::parse_cycles(s, top.degree()).expect("valid cycle string"))
            .collect()
    };
    let specs: Vec<(&'static str, &'static str, Box<dyn Fn(&FiniteGroup) -> Vec<Permutation>>)> = vec![
        ("zp2_squares", "zp2", Box::new(|top| vec![top.generators()[0].pow(2)])),
        (
            "s4_s4_v4xa4",
            "s4_s4",
            Box::new(move |top| parse(top, &["(0 1)(2 3)", "(0 2)(1 3)", "(4 5 6)", "(5 6 7)"])),
        ),
        ("a5_a5_second", "a5_a5", Box::new(move |top| parse(top, &["(5 6 7)", "(5 6 7 8 9)"]))),
        ("const_s4_a4", "const_s4", Box::new(move |top| parse(top, &["(0 1 2)", "(1 2 3)"]))),
        ("const_s4_c2", "const_s4", Box::new(move |top| parse(top, &["(0 1)(2 3)"]))),
    ];
    specs
        .into_iter()
        .map(|(name, tower_name, gens)| {
            let t = tower(tower_name).expect("known tower");
            let top = t.level(t.len());
            let h = top.subgroup(gens(top)).expect("generators lie in the top level").into_group();
            let closed = ClosedSubgroup::from_top(&t, &h).expect("images are compatible");
            (name, tower_name, closed_subgroup_json(&closed))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_builds_within_bounds() {
        let all = groups();
        assert!(all.len() >= 30);
        for (name, d) in all {
            let g = d.build().unwrap();
            assert!(g.order() <= 2000, "{name}");
        }
        assert_eq!(group("psl2_7").unwrap().order(), 168);
        assert_eq!(group("sl2_11").unwrap().order(), 1320);
    }

    #[test]
    fn towers_and_subgroups_build() {
        for (name, _) in towers() {
            assert!(tower(name).is_some(), "{name}");
        }
        assert_eq!(closed_subgroups().len(), 5);
    }
}

//! Brute-force checks on small groups: sections, simple sections, power-word
//! coverage and perfectness.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{derived_subgroup, ElementSet, FiniteGroup, Subgroup};
use crate::hom::quotient;
use crate::iso::find_isomorphism;
use crate::perm::Permutation;
use crate::series::{factor_multiset, maximal_normal_subgroups, normal_subgroups};
use crate::simple::{identify, label_simple, SimpleType};

/// Largest ambient order for full subgroup enumeration.
pub const SUBGROUP_LATTICE_BOUND: u128 = 500;

/// Largest order for the power-word coverage sweep.
pub const POWER_COVER_BOUND: u128 = 2_000;

/// Elements of a group with their multiplication table.
pub struct Table {
    pub elements: Arc<ElementSet>,
    mul: Vec<u16>,
    identity: usize,
}

impl Table {
    pub fn new(group: &FiniteGroup, bound: u128) -> Result<Self> {
        let order = group.order();
        if order > bound {
            return Err(Error::BoundExceeded {
                what: "group order",
                size: order,
                bound,
            });
        }
        let elements = group.elements()?;
        let n = elements.len();
        let mut mul = vec![0u16; n * n];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                mul[i * n + j] = elements.index_of(&x.then(y)).expect("closed under products") as u16;
            }
        }
        let identity = elements.index_of(&group.identity()).expect("identity");
        Ok(Table { elements, mul, identity })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.len() + j] as usize
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Subgroup generated by the given element indices, as a sorted index list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.len()];
        member[self.identity] = true;
        let mut out = vec![self.identity];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }

    /// `{ab : a in A, b in B}` as a sorted index list.
    pub fn product_set(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.len()];
        for &x in a {
            for &y in b {
                member[self.mul(x, y)] = true;
            }
        }
        (0..self.len()).filter(|&i| member[i]).collect()
    }

    pub fn to_group(&self, indices: &[usize], parent: &FiniteGroup) -> Subgroup {
        let gens: Vec<Permutation> = indices.iter().map(|&i| self.elements.get(i).clone()).collect();
        parent.subgroup(gens).expect("table elements lie in the group")
    }
}

/// A subgroup found by the lattice sweep: its sorted elements and a small
/// generating set, both as indices into the table.
#[derive(Clone, Debug)]
pub struct LatticeEntry {
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
}

/// All subgroups, by layered closure: the cyclic subgroups, then joins of
/// known subgroups with one more cyclic subgroup until nothing new appears.
/// Sorted by order, then by element list.
pub fn subgroup_lattice(table: &Table) -> Vec<LatticeEntry> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut entries: Vec<LatticeEntry> = Vec::new();
    let mut cyclic_reps: Vec<usize> = Vec::new();
    for x in 0..table.len() {
        let gens = if x == table.identity() { vec![] } else { vec![x] };
        let elements = table.closure(&gens);
        if seen.insert(elements.clone()) {
            if !gens.is_empty() {
                cyclic_reps.push(x);
            }
            entries.push(LatticeEntry { elements, generators: gens });
        }
    }
    let mut k = 0;
    while k < entries.len() {
        let current = entries[k].clone();
        let mut member = vec![false; table.len()];
        for &e in &current.elements {
            member[e] = true;
        }
        for &c in &cyclic_reps {
            if member[c] {
                continue;
            }
            let mut gens = current.generators.clone();
            gens.push(c);
            let elements = table.closure(&gens);
            if seen.insert(elements.clone()) {
                entries.push(LatticeEntry { elements, generators: gens });
            }
        }
        k += 1;
    }
    entries.sort_by(|a, b| (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements)));
    entries
}

/// All subgroups of a group of order at most 500.
pub fn subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let table = Table::new(group, SUBGROUP_LATTICE_BOUND)?;
    Ok(subgroup_lattice(&table)
        .iter()
        .map(|e| table.to_group(&e.generators, group))
        .collect())
}

#[derive(Clone, Debug)]
pub struct SectionWitness {
    pub c: Subgroup,
    pub d: Subgroup,
    /// Simple label of `C/D`, or `order=<n>` when `C/D` is not simple.
    pub quotient_type: String,
}

fn describe(group: &FiniteGroup) -> Result<String> {
    match identify(group) {
        Ok(t) => Ok(t.to_string()),
        Err(Error::NotSimple) => Ok(format!("order={}", group.order())),
        Err(e) => Err(e),
    }
}

/// Searches for `D ◁ C <= ambient` with `C/D ≅ target`, trying `C` in order
/// of increasing size.
pub fn is_section(target: &FiniteGroup, ambient: &FiniteGroup) -> Result<Option<SectionWitness>> {
    let table = Table::new(ambient, SUBGROUP_LATTICE_BOUND)?;
    let t = target.order();
    if t > ambient.order() || ambient.order() % t != 0 {
        return Ok(None);
    }
    for entry in subgroup_lattice(&table) {
        let c_order = entry.elements.len() as u128;
        if c_order < t || c_order % t != 0 {
            continue;
        }
        let c = table.to_group(&entry.generators, ambient);
        for d in normal_subgroups(c.group())? {
            if d.order() * t != c_order {
                continue;
            }
            let (q, _) = quotient(c.group(), &d)?;
            if find_isomorphism(target, &q)?.is_some() {
                let d = Subgroup::from_group_unchecked(ambient.clone(), d.into_group());
                return Ok(Some(SectionWitness {
                    c,
                    d,
                    quotient_type: describe(target)?,
                }));
            }
        }
    }
    Ok(None)
}

/// Simple groups occurring as `C/D` with `D ◁ C <= ambient`.
pub fn simple_sections(ambient: &FiniteGroup) -> Result<BTreeSet<SimpleType>> {
    let table = Table::new(ambient, SUBGROUP_LATTICE_BOUND)?;
    let mut found = BTreeSet::new();
    for entry in subgroup_lattice(&table) {
        if entry.elements.len() == 1 {
            continue;
        }
        let c = table.to_group(&entry.generators, ambient);
        let c = c.group();
        if c.is_abelian() {
            let n = c.order();
            let mut m = n;
            let mut p = 2u128;
            while m > 1 {
                if m % p == 0 {
                    found.insert(SimpleType::Cyclic(p as u64));
                    while m % p == 0 {
                        m /= p;
                    }
                }
                p += 1;
            }
            continue;
        }
        for d in maximal_normal_subgroups(c)? {
            let (q, _) = quotient(c, &d)?;
            found.insert(label_simple(&q)?);
        }
    }
    Ok(found)
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerCoverReport {
    pub order: u128,
    pub q: u64,
    pub m: u64,
    pub covered: u128,
    pub coverage_fraction: f64,
    pub pass: bool,
}

/// Whether every element is `g0 * s_1 * ... * s_m` with `o(g0)` coprime to `q`
/// and every `s_i` a `q`-th power.
pub fn power_word_coverage(group: &FiniteGroup, q: u64, m: u64) -> Result<PowerCoverReport> {
    if q < 2 || m < 1 {
        return Err(Error::InvalidArgument(format!("need q >= 2 and m >= 1, got q={q}, m={m}")));
    }
    let table = Table::new(group, POWER_COVER_BOUND)?;
    let elements = table.elements.clone();
    let coprime: Vec<usize> = (0..table.len())
        .filter(|&i| elements.get(i).order().gcd(&q) == 1)
        .collect();
    let powers: Vec<usize> = {
        let set: BTreeSet<usize> = elements
            .iter()
            .map(|x| elements.index_of(&x.pow(q as i128)).expect("powers lie in the group"))
            .collect();
        set.into_iter().collect()
    };
    let mut reach = coprime;
    for _ in 0..m {
        if reach.len() == table.len() {
            break;
        }
        reach = table.product_set(&reach, &powers);
    }
    let covered = reach.len() as u128;
    let order = table.len() as u128;
    Ok(PowerCoverReport {
        order,
        q,
        m,
        covered,
        coverage_fraction: covered as f64 / order as f64,
        pass: covered == order,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PerfectnessReport {
    /// No abelian composition factor.
    pub anabelian: bool,
    /// The derived subgroup is the whole group.
    pub perfect: bool,
    /// `anabelian => perfect`.
    pub pass: bool,
    /// `perfect => anabelian`; reported only, it can fail.
    pub converse_holds: bool,
}

pub fn perfectness_check(group: &FiniteGroup) -> Result<PerfectnessReport> {
    let anabelian = !factor_multiset(group)?.any_abelian();
    let perfect = derived_subgroup(group).order() == group.order();
    Ok(PerfectnessReport {
        anabelian,
        perfect,
        pass: !anabelian || perfect,
        converse_holds: !perfect || anabelian,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct A5Report {
    pub nonabelian_sections: Vec<SimpleType>,
    pub pass: bool,
}

/// For a group whose nonabelian composition factors are all `A5`, checks that
/// `A5` is also the only nonabelian simple section.
pub fn a5_corollary_check(group: &FiniteGroup) -> Result<A5Report> {
    if group.order() > SUBGROUP_LATTICE_BOUND {
        return Err(Error::BoundExceeded {
            what: "group order",
            size: group.order(),
            bound: SUBGROUP_LATTICE_BOUND,
        });
    }
    let a5 = SimpleType::Alternating(5);
    if let Some(t) = factor_multiset(group)?
        .types()
        .find(|t| !t.is_abelian() && **t != a5)
    {
        return Err(Error::PreconditionViolated(format!(
            "composition factor {t} is nonabelian and not A5"
        )));
    }
    let nonabelian: Vec<SimpleType> = simple_sections(group)?
        .into_iter()
        .filter(|t| !t.is_abelian())
        .collect();
    let pass = nonabelian.iter().all(|t| *t == a5);
    Ok(A5Report {
        nonabelian_sections: nonabelian,
        pass,
    })
}

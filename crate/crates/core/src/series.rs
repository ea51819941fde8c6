//! Composition series and composition-factor multisets of finite groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{
    conjugacy_classes, derived_subgroup, is_prime, is_simple, normal_closure_unchecked,
    prime_divisors, FiniteGroup, Subgroup,
};
use crate::hom::quotient;
use crate::perm::Permutation;
use crate::simple::{label_simple, SimpleType};

/// Largest order for which the full normal-subgroup lattice is computed.
pub const NORMAL_LATTICE_BOUND: u128 = 5_000;

/// Beyond this many stored points (`order * degree`) composition series are
/// found by descent instead of through the lattice.
const LATTICE_POINT_BUDGET: u128 = 1 << 20;

/// Random elements tried when looking for normal subgroups of a perfect group.
const PERFECT_PROBES: usize = 48;

#[derive(Clone, Debug)]
pub struct SeriesStep {
    /// The next term of the series, as a subgroup of the original group.
    pub subgroup: Subgroup,
    /// The simple quotient of the previous term by this one.
    pub factor: SimpleType,
}

/// Multiplicities of simple composition factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactorMultiset {
    counts: BTreeMap<SimpleType, u64>,
}

impl FactorMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_factors<'a>(factors: impl IntoIterator<Item = &'a SimpleType>) -> Self {
        let mut m = Self::new();
        for t in factors {
            m.add(t.clone(), 1);
        }
        m
    }

    pub fn from_steps(steps: &[SeriesStep]) -> Self {
        Self::from_factors(steps.iter().map(|s| &s.factor))
    }

    pub fn add(&mut self, t: SimpleType, count: u64) {
        if count > 0 {
            *self.counts.entry(t).or_default() += count;
        }
    }

    pub fn merge(&mut self, other: &FactorMultiset) {
        for (t, &c) in &other.counts {
            self.add(t.clone(), c);
        }
    }

    pub fn get(&self, t: &SimpleType) -> u64 {
        self.counts.get(t).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SimpleType, u64)> {
        self.counts.iter().map(|(t, &c)| (t, c))
    }

    pub fn types(&self) -> impl Iterator<Item = &SimpleType> {
        self.counts.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of factors counted with multiplicity.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Product of the factor orders, `None` on overflow.
    pub fn order_product(&self) -> Option<u128> {
        self.counts.iter().try_fold(1u128, |acc, (t, &c)| {
            (0..c).try_fold(acc, |a, _| a.checked_mul(t.order()))
        })
    }

    pub fn all_abelian(&self) -> bool {
        self.counts.keys().all(SimpleType::is_abelian)
    }

    pub fn any_abelian(&self) -> bool {
        self.counts.keys().any(SimpleType::is_abelian)
    }
}

impl fmt::Display for FactorMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (t, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}:{c}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for FactorMultiset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            #[serde(rename = "type")]
            ty: &'a SimpleType,
            count: u64,
        }
        let mut seq = serializer.serialize_seq(Some(self.counts.len()))?;
        for (ty, &count) in &self.counts {
            seq.serialize_element(&Entry { ty, count })?;
        }
        seq.end()
    }
}

/// All normal subgroups, sorted by order and then by their sorted element lists.
pub fn normal_subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let order = group.order();
    if order > NORMAL_LATTICE_BOUND {
        return Err(Error::BoundExceeded {
            what: "normal subgroup lattice order",
            size: order,
            bound: NORMAL_LATTICE_BOUND,
        });
    }
    let cache = group.normal_subgroup_cache();
    let list = match cache.get() {
        Some(list) => list,
        None => {
            let computed = compute_normal_subgroups(group)?;
            cache.get_or_init(|| computed)
        }
    };
    Ok(list
        .iter()
        .map(|n| Subgroup::from_group_unchecked(group.clone(), n.clone()))
        .collect())
}

type Bits = Vec<u64>;

fn bits_of(group: &FiniteGroup, sub: &FiniteGroup) -> Result<Bits> {
    let elements = group.elements()?;
    let mut bits = vec![0u64; elements.len().div_ceil(64)];
    for x in sub.elements()?.iter() {
        let i = elements.index_of(x).expect("subgroup element lies in the group");
        bits[i / 64] |= 1 << (i % 64);
    }
    Ok(bits)
}

fn is_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn sorted_indices(bits: &Bits) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        for b in 0..64 {
            if word >> b & 1 == 1 {
                out.push(w * 64 + b);
            }
        }
    }
    out
}

/// Every normal subgroup is a join of normal closures of conjugacy classes, so
/// close the set of class closures under joins.
fn compute_normal_subgroups(group: &FiniteGroup) -> Result<Vec<FiniteGroup>> {
    let elements = group.elements()?;
    let degree = group.degree();
    let trivial = FiniteGroup::trivial(degree).with_bound(group.bound());
    let mut nodes: Vec<(Bits, FiniteGroup)> = vec![(bits_of(group, &trivial)?, trivial)];
    let mut seen: HashMap<Bits, usize> = HashMap::from([(nodes[0].0.clone(), 0)]);
    let mut closures: Vec<(Bits, FiniteGroup)> = Vec::new();
    for class in conjugacy_classes(group)? {
        let rep = elements.get(class[0]);
        if rep.is_identity() {
            continue;
        }
        let n = normal_closure_unchecked(group, std::slice::from_ref(rep)).into_group();
        let bits = bits_of(group, &n)?;
        if !seen.contains_key(&bits) {
            seen.insert(bits.clone(), nodes.len());
            nodes.push((bits.clone(), n.clone()));
            closures.push((bits, n));
        }
    }
    let mut i = 0;
    while i < nodes.len() {
        for (cbits, c) in &closures {
            if is_subset(cbits, &nodes[i].0) {
                continue;
            }
            let mut gens = nodes[i].1.generators().to_vec();
            gens.extend(c.generators().iter().cloned());
            let join = FiniteGroup::generated_by(degree, &gens, group.bound());
            let bits = bits_of(group, &join)?;
            if !seen.contains_key(&bits) {
                seen.insert(bits.clone(), nodes.len());
                nodes.push((bits, join));
            }
        }
        i += 1;
    }
    let mut keyed: Vec<(u128, Vec<usize>, FiniteGroup)> = nodes
        .into_iter()
        .map(|(bits, g)| (g.order(), sorted_indices(&bits), g))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(keyed.into_iter().map(|(_, _, g)| g).collect())
}

/// Proper normal subgroups not contained in any other proper normal subgroup,
/// in the order of `normal_subgroups`.
pub fn maximal_normal_subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let all = normal_subgroups(group)?;
    let order = group.order();
    let proper: Vec<&Subgroup> = all.iter().filter(|n| n.order() < order).collect();
    Ok(proper
        .iter()
        .filter(|n| {
            !proper
                .iter()
                .any(|m| m.order() > n.order() && m.group().contains_group(n.group()))
        })
        .map(|n| (*n).clone())
        .collect())
}

fn use_lattice(group: &FiniteGroup) -> bool {
    let order = group.order();
    order <= NORMAL_LATTICE_BOUND
        && order <= group.bound() as u128
        && order * group.degree() as u128 <= LATTICE_POINT_BUDGET
}

/// Picks a maximal normal subgroup of `group` and labels the simple quotient.
///
/// Small groups choose among all maximal normal subgroups, consuming one
/// mixed-radix digit of `choice`; larger groups descend through the derived
/// subgroup or through normal closures of random elements drawn from `rng`.
fn maximal_normal_step(
    group: &FiniteGroup,
    choice: &mut u64,
    rng: &mut ChaCha8Rng,
) -> Result<(Subgroup, SimpleType)> {
    let order = group.order();
    if is_prime(order) {
        return Ok((Subgroup::trivial(group), SimpleType::Cyclic(order as u64)));
    }
    if group.is_abelian() {
        let candidates = abelian_maximal_subgroups(group);
        let k = candidates.len() as u64;
        let (pick, p) = candidates[(*choice % k) as usize].clone();
        *choice /= k;
        return Ok((pick, SimpleType::Cyclic(p)));
    }
    if use_lattice(group) {
        let candidates = maximal_normal_subgroups(group)?;
        let k = candidates.len() as u64;
        let pick = candidates[(*choice % k) as usize].clone();
        *choice /= k;
        let factor = factor_of(group, &pick)?;
        return Ok((pick, factor));
    }
    let derived = derived_subgroup(group);
    if derived.order() < order {
        return Ok(abelian_step(group, &derived, rng));
    }
    perfect_step(group, choice, rng)
}

/// Maximal subgroups of an abelian group: for each prime `p`, the kernels of
/// the nonzero functionals on `G / G^p`, up to scalars.
fn abelian_maximal_subgroups(group: &FiniteGroup) -> Vec<(Subgroup, u64)> {
    let degree = group.degree();
    let mut out = Vec::new();
    for p in prime_divisors(group.order()) {
        let powers: Vec<Permutation> = group.generators().iter().map(|g| g.pow(p as i128)).collect();
        let mut span = FiniteGroup::generated_by(degree, &powers, group.bound());
        let mut basis: Vec<Permutation> = Vec::new();
        for g in group.generators() {
            if !span.contains(g) {
                basis.push(g.clone());
                let mut gens = span.generators().to_vec();
                gens.push(g.clone());
                span = FiniteGroup::generated_by(degree, &gens, group.bound());
            }
        }
        let r = basis.len() as u32;
        let p64 = p as u64;
        for code in 0..p64.pow(r) {
            let coeffs: Vec<u64> = (0..r).rev().map(|i| code / p64.pow(i) % p64).collect();
            let Some(lead) = coeffs.iter().position(|&c| c != 0) else {
                continue;
            };
            if coeffs[lead] != 1 {
                continue;
            }
            let mut gens = powers.clone();
            for (j, b) in basis.iter().enumerate() {
                if j != lead {
                    gens.push(b.then(&basis[lead].pow(-(coeffs[j] as i128))));
                }
            }
            let sub = FiniteGroup::generated_by(degree, &gens, group.bound());
            out.push((Subgroup::from_group_unchecked(group.clone(), sub), p64));
        }
    }
    out
}

fn factor_of(group: &FiniteGroup, sub: &Subgroup) -> Result<SimpleType> {
    let index = group.order() / sub.order();
    if is_prime(index) {
        return Ok(SimpleType::Cyclic(index as u64));
    }
    let (q, _) = quotient(group, sub)?;
    label_simple(&q)
}

/// A maximal subgroup of prime index containing the derived subgroup.
fn abelian_step(group: &FiniteGroup, derived: &Subgroup, rng: &mut ChaCha8Rng) -> (Subgroup, SimpleType) {
    let primes = prime_divisors(group.order() / derived.order());
    let p = primes[rng.gen_range(0..primes.len())];
    let mut base: Vec<Permutation> = derived.generators().to_vec();
    base.extend(group.generators().iter().map(|g| g.pow(p as i128)));
    let frattini_p = FiniteGroup::generated_by(group.degree(), &base, group.bound());
    // Images of a basis of G / (G' G^p), an elementary abelian p-group.
    let mut span = frattini_p.clone();
    let mut basis: Vec<Permutation> = Vec::new();
    for g in group.generators() {
        if !span.contains(g) {
            basis.push(g.clone());
            let mut gens = span.generators().to_vec();
            gens.push(g.clone());
            span = FiniteGroup::generated_by(group.degree(), &gens, group.bound());
        }
    }
    let drop = rng.gen_range(0..basis.len());
    let mut gens = frattini_p.generators().to_vec();
    gens.extend(basis.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, b)| b.clone()));
    let sub = FiniteGroup::generated_by(group.degree(), &gens, group.bound());
    (Subgroup::from_group_unchecked(group.clone(), sub), SimpleType::Cyclic(p as u64))
}

fn prime_order_powers(x: &Permutation) -> Vec<Permutation> {
    let o = x.order() as u128;
    prime_divisors(o)
        .into_iter()
        .map(|p| x.pow((o / p) as i128))
        .collect()
}

/// Grows a proper normal subgroup greedily from normal closures of probe
/// elements, then refines inside the quotient until it is simple.
fn perfect_step(
    group: &FiniteGroup,
    choice: &mut u64,
    rng: &mut ChaCha8Rng,
) -> Result<(Subgroup, SimpleType)> {
    let order = group.order();
    let mut probes: Vec<Permutation> = Vec::new();
    for g in group.generators() {
        probes.extend(prime_order_powers(g));
    }
    for _ in 0..PERFECT_PROBES {
        let x = group.random_element(rng);
        probes.extend(prime_order_powers(&x));
        probes.push(x);
    }
    probes.shuffle(rng);
    let mut normal = Subgroup::trivial(group);
    for x in &probes {
        if x.is_identity() || normal.contains(x) {
            continue;
        }
        let mut seed = normal.generators().to_vec();
        seed.push(x.clone());
        let candidate = normal_closure_unchecked(group, &seed);
        if candidate.order() < order {
            normal = candidate;
        }
    }
    let (q, hom) = quotient(group, &normal)?;
    if is_simple(&q)? {
        let factor = label_simple(&q)?;
        return Ok((normal, factor));
    }
    let (inner, factor) = maximal_normal_step(&q, choice, rng)?;
    let pulled = hom.preimage(inner.group())?;
    Ok((pulled, factor))
}

/// A composition series `G = G_0 > G_1 > ... > G_r = 1`, listed as the terms
/// `G_1 .. G_r` with their factors. The seed fixes all choices.
pub fn composition_series(group: &FiniteGroup, seed: u64) -> Result<Vec<SeriesStep>> {
    let mut choice = seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = group.clone();
    let mut steps = Vec::new();
    while !current.is_trivial() {
        let (next, factor) = maximal_normal_step(&current, &mut choice, &mut rng)?;
        let next = next.into_group();
        steps.push(SeriesStep {
            subgroup: Subgroup::from_group_unchecked(group.clone(), next.clone()),
            factor,
        });
        current = next;
    }
    Ok(steps)
}

pub fn factor_multiset(group: &FiniteGroup) -> Result<FactorMultiset> {
    Ok(FactorMultiset::from_steps(&composition_series(group, 0)?))
}

/// Multiplicity of `s` among the composition factors.
pub fn n_s(group: &FiniteGroup, s: &SimpleType) -> Result<u64> {
    Ok(factor_multiset(group)?.get(s))
}

/// Whether two series pass through the same subgroups.
pub fn same_chain(a: &[SeriesStep], b: &[SeriesStep]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.subgroup.group().same_elements(y.subgroup.group()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSummary {
    pub seed: u64,
    pub orders: Vec<u128>,
    pub factors: Vec<SimpleType>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JhReport {
    pub order: u128,
    pub factors: FactorMultiset,
    pub chains_found: usize,
    pub chains: Vec<ChainSummary>,
    pub pass: bool,
}

/// Builds series for seeds `0..trials` and checks that their factor multisets agree.
pub fn jh_verify(group: &FiniteGroup, trials: u64) -> Result<JhReport> {
    if trials < 2 {
        return Err(Error::InvalidArgument("jh_verify needs at least 2 trials".into()));
    }
    let runs: Vec<Vec<SeriesStep>> = (0..trials)
        .into_par_iter()
        .map(|seed| composition_series(group, seed))
        .collect::<Result<Vec<_>>>()?;
    let multisets: Vec<FactorMultiset> = runs.iter().map(|r| FactorMultiset::from_steps(r)).collect();
    let pass = multisets.iter().all(|m| *m == multisets[0]);
    let mut distinct: Vec<(u64, &Vec<SeriesStep>)> = Vec::new();
    for (seed, run) in runs.iter().enumerate() {
        if !distinct.iter().any(|(_, d)| same_chain(d, run)) {
            distinct.push((seed as u64, run));
        }
    }
    let chains = distinct
        .iter()
        .map(|(seed, run)| ChainSummary {
            seed: *seed,
            orders: std::iter::once(group.order())
                .chain(run.iter().map(|s| s.subgroup.order()))
                .collect(),
            factors: run.iter().map(|s| s.factor.clone()).collect(),
        })
        .collect::<Vec<_>>();
    Ok(JhReport {
        order: group.order(),
        factors: multisets[0].clone(),
        chains_found: chains.len(),
        chains,
        pass,
    })
}

/// Whether every composition factor is cyclic of prime order.
pub fn is_solvable(group: &FiniteGroup) -> Result<bool> {
    Ok(factor_multiset(group)?.all_abelian())
}

/// Prime orders of the cyclic factors, in series order.
pub fn radical_witness(group: &FiniteGroup, seed: u64) -> Result<Vec<u64>> {
    composition_series(group, seed)?
        .iter()
        .map(|s| match s.factor {
            SimpleType::Cyclic(p) => Ok(p),
            _ => Err(Error::NotSolvable),
        })
        .collect()
}

//! Towers `G_1 <- G_2 <- ... <- G_N` of finite groups with surjective
//! connecting maps, standing for (a finite prefix of) their inverse limit.
//!
//! Map `n` (1-based) is `pi_n : G_{n+1} -> G_n`. Every answer is exact for the
//! stored prefix; statements about the whole inverse limit come only from the
//! optional family annotation, which lists the simple types that keep
//! appearing in kernels forever.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::description::GroupDescription;
use crate::error::{Error, Result};
use crate::group::{intersection, is_prime, is_subnormal, FiniteGroup, Subgroup};
use crate::hom::{quotient, GroupHom};
use crate::perm::Permutation;
use crate::series::{composition_series, factor_multiset, FactorMultiset, SeriesStep};
use crate::simple::{identify, same_type, SimpleType};

/// Built-in infinite families, materialized up to `prefix` levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyDescription {
    /// `C_p <- C_{p^2} <- ...`
    Zp { p: u64, prefix: usize },
    /// `C_{1!} <- C_{2!} <- C_{3!} <- ...`
    Zhat { prefix: usize },
    /// Level `n` is `S_1 x ... x S_n`, the factors cycling through `factors`;
    /// maps forget the last coordinate.
    ProdSimple { factors: Vec<String>, prefix: usize },
    /// The same group at every level with identity maps.
    Constant { group: GroupDescription, prefix: usize },
}

impl FamilyDescription {
    pub fn prefix(&self) -> usize {
        match self {
            FamilyDescription::Zp { prefix, .. }
            | FamilyDescription::Zhat { prefix }
            | FamilyDescription::ProdSimple { prefix, .. }
            | FamilyDescription::Constant { prefix, .. } => *prefix,
        }
    }

    fn with_prefix(&self, n: usize) -> Self {
        let mut d = self.clone();
        match &mut d {
            FamilyDescription::Zp { prefix, .. }
            | FamilyDescription::Zhat { prefix }
            | FamilyDescription::ProdSimple { prefix, .. }
            | FamilyDescription::Constant { prefix, .. } => *prefix = n,
        }
        d
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyDescription::Zp { .. } => "zp",
            FamilyDescription::Zhat { .. } => "zhat",
            FamilyDescription::ProdSimple { .. } => "prod_simple",
            FamilyDescription::Constant { .. } => "constant",
        }
    }
}

/// Simple types occurring in infinitely many kernels of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventualFactors {
    Types(BTreeSet<SimpleType>),
    /// Every cyclic group of prime order.
    AllCyclic,
}

impl EventualFactors {
    pub fn contains(&self, t: &SimpleType) -> bool {
        match self {
            EventualFactors::Types(set) => set.contains(t),
            EventualFactors::AllCyclic => t.is_abelian(),
        }
    }

    pub fn any_abelian(&self) -> bool {
        match self {
            EventualFactors::Types(set) => set.iter().any(SimpleType::is_abelian),
            EventualFactors::AllCyclic => true,
        }
    }

    pub fn any_nonabelian(&self) -> bool {
        match self {
            EventualFactors::Types(set) => set.iter().any(|t| !t.is_abelian()),
            EventualFactors::AllCyclic => false,
        }
    }
}

impl fmt::Display for EventualFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventualFactors::AllCyclic => write!(f, "all C_p"),
            EventualFactors::Types(set) => {
                let names: Vec<String> = set.iter().map(|t| t.to_string()).collect();
                write!(f, "{{{}}}", names.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Family {
    pub description: FamilyDescription,
    pub eventual_kernel_factors: EventualFactors,
}

struct TowerInner {
    levels: Vec<FiniteGroup>,
    maps: Vec<GroupHom>,
    family: Option<Family>,
    multisets: OnceLock<Vec<FactorMultiset>>,
}

#[derive(Clone)]
pub struct Tower {
    inner: Arc<TowerInner>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<u128> = self.inner.levels.iter().map(FiniteGroup::order).collect();
        f.debug_struct("Tower")
            .field("orders", &orders)
            .field("family", &self.inner.family.as_ref().map(|f| f.description.name()))
            .finish()
    }
}

/// Builds a group from a factor name such as `A5`, `PSL2(7)` or `C3`.
pub fn simple_group_by_name(name: &str) -> Result<FiniteGroup> {
    let bad = || Error::Parse(format!("unknown simple group name {name:?}"));
    if let Some(q) = name.strip_prefix("PSL2(").and_then(|r| r.strip_suffix(')')) {
        return FiniteGroup::psl2(q.parse().map_err(|_| bad())?);
    }
    if let Some(n) = name.strip_prefix('A') {
        let n: usize = n.parse().map_err(|_| bad())?;
        if n < 5 {
            return Err(bad());
        }
        return FiniteGroup::alternating(n);
    }
    if let Some(p) = name.strip_prefix('C') {
        let p: usize = p.parse().map_err(|_| bad())?;
        if !is_prime(p as u128) {
            return Err(bad());
        }
        return FiniteGroup::cyclic(p);
    }
    Err(bad())
}

type Parts = (Vec<FiniteGroup>, Vec<Vec<Permutation>>, EventualFactors);

fn family_parts(desc: &FamilyDescription) -> Result<Parts> {
    let prefix = desc.prefix();
    if prefix == 0 {
        return Err(Error::InvalidArgument("a tower needs at least one level".into()));
    }
    let cyclic_chain = |orders: Vec<usize>| -> Result<(Vec<FiniteGroup>, Vec<Vec<Permutation>>)> {
        let levels = orders.iter().map(|&n| FiniteGroup::cyclic(n)).collect::<Result<Vec<_>>>()?;
        let images = levels[..levels.len() - 1]
            .iter()
            .map(|g| g.generators().to_vec())
            .collect();
        Ok((levels, images))
    };
    match desc {
        FamilyDescription::Zp { p, .. } => {
            if !is_prime(*p as u128) {
                return Err(Error::InvalidArgument(format!("zp needs a prime, got {p}")));
            }
            let orders = (1..=prefix as u32)
                .map(|k| (*p as usize).checked_pow(k))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::InvalidArgument("level order overflows".into()))?;
            let (levels, images) = cyclic_chain(orders)?;
            let eventual = EventualFactors::Types(BTreeSet::from([SimpleType::Cyclic(*p)]));
            Ok((levels, images, eventual))
        }
        FamilyDescription::Zhat { .. } => {
            let orders: Vec<usize> = (1..=prefix).scan(1usize, |acc, k| {
                *acc *= k;
                Some(*acc)
            }).collect();
            let (levels, images) = cyclic_chain(orders)?;
            Ok((levels, images, EventualFactors::AllCyclic))
        }
        FamilyDescription::ProdSimple { factors, .. } => {
            if factors.is_empty() {
                return Err(Error::InvalidArgument("prod_simple needs at least one factor".into()));
            }
            let simple = factors
                .iter()
                .map(|n| simple_group_by_name(n))
                .collect::<Result<Vec<_>>>()?;
            let mut types = BTreeSet::new();
            for s in &simple {
                types.insert(identify(s)?);
            }
            let parts: Vec<FiniteGroup> = (0..prefix).map(|i| simple[i % simple.len()].clone()).collect();
            let levels = (1..=prefix)
                .map(|n| FiniteGroup::direct_product(&parts[..n]))
                .collect::<Result<Vec<_>>>()?;
            let images = (1..prefix)
                .map(|n| {
                    let mut imgs = levels[n - 1].generators().to_vec();
                    let extra = parts[n].generators().iter().filter(|g| !g.is_identity()).count();
                    imgs.extend(std::iter::repeat(levels[n - 1].identity()).take(extra));
                    imgs
                })
                .collect();
            Ok((levels, images, EventualFactors::Types(types)))
        }
        FamilyDescription::Constant { group, .. } => {
            let g = group.build()?;
            let levels = vec![g.clone(); prefix];
            let images = vec![g.generators().to_vec(); prefix - 1];
            Ok((levels, images, EventualFactors::Types(BTreeSet::new())))
        }
    }
}

impl Tower {
    /// Checks that every generator assignment is a homomorphism; surjectivity
    /// is checked by [`validate`].
    pub fn from_images(levels: Vec<FiniteGroup>, images: Vec<Vec<Permutation>>) -> Result<Self> {
        Self::assemble(levels, images, None)
    }

    fn assemble(
        levels: Vec<FiniteGroup>,
        images: Vec<Vec<Permutation>>,
        family: Option<Family>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument("a tower needs at least one level".into()));
        }
        if images.len() + 1 != levels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} levels need {} maps, got {}",
                levels.len(),
                levels.len() - 1,
                images.len()
            )));
        }
        let maps = images
            .into_iter()
            .enumerate()
            .map(|(i, imgs)| {
                GroupHom::new(levels[i + 1].clone(), levels[i].clone(), imgs).map_err(|e| {
                    Error::InvalidMap {
                        level: i + 1,
                        reason: e.to_string(),
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Tower {
            inner: Arc::new(TowerInner {
                levels,
                maps,
                family,
                multisets: OnceLock::new(),
            }),
        })
    }

    pub fn from_family(desc: FamilyDescription) -> Result<Self> {
        let (levels, images, eventual) = family_parts(&desc)?;
        Self::assemble(
            levels,
            images,
            Some(Family {
                description: desc,
                eventual_kernel_factors: eventual,
            }),
        )
    }

    pub fn zp(p: u64, prefix: usize) -> Result<Self> {
        Self::from_family(FamilyDescription::Zp { p, prefix })
    }

    pub fn zhat(prefix: usize) -> Result<Self> {
        Self::from_family(FamilyDescription::Zhat { prefix })
    }

    pub fn prod_simple(factors: &[&str], prefix: usize) -> Result<Self> {
        Self::from_family(FamilyDescription::ProdSimple {
            factors: factors.iter().map(|s| s.to_string()).collect(),
            prefix,
        })
    }

    pub fn constant(group: &FiniteGroup, prefix: usize) -> Result<Self> {
        Self::from_family(FamilyDescription::Constant {
            group: GroupDescription::from_group(group),
            prefix,
        })
    }

    /// The same prefix without its family annotation.
    pub fn without_annotation(&self) -> Self {
        Tower {
            inner: Arc::new(TowerInner {
                levels: self.inner.levels.clone(),
                maps: self.inner.maps.clone(),
                family: None,
                multisets: OnceLock::new(),
            }),
        }
    }

    /// The first `n` levels.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot keep {n} of {} levels",
                self.len()
            )));
        }
        let family = self.inner.family.as_ref().map(|f| Family {
            description: f.description.with_prefix(n),
            eventual_kernel_factors: f.eventual_kernel_factors.clone(),
        });
        Ok(Tower {
            inner: Arc::new(TowerInner {
                levels: self.inner.levels[..n].to_vec(),
                maps: self.inner.maps[..n - 1].to_vec(),
                family,
                multisets: OnceLock::new(),
            }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.levels.is_empty()
    }

    /// Level `n`, 1-based.
    pub fn level(&self, n: usize) -> &FiniteGroup {
        &self.inner.levels[n - 1]
    }

    pub fn levels(&self) -> &[FiniteGroup] {
        &self.inner.levels
    }

    /// `pi_n : G_{n+1} -> G_n`, 1-based.
    pub fn map(&self, n: usize) -> &GroupHom {
        &self.inner.maps[n - 1]
    }

    pub fn maps(&self) -> &[GroupHom] {
        &self.inner.maps
    }

    pub fn family(&self) -> Option<&Family> {
        self.inner.family.as_ref()
    }

    /// `ker pi_n`, as a subgroup of `G_{n+1}`.
    pub fn kernel(&self, n: usize) -> &Subgroup {
        self.map(n).kernel()
    }

    /// Factor multisets of every level, computed once.
    pub fn level_multisets(&self) -> Result<&[FactorMultiset]> {
        if let Some(m) = self.inner.multisets.get() {
            return Ok(m);
        }
        let computed = self
            .inner
            .levels
            .par_iter()
            .map(factor_multiset)
            .collect::<Result<Vec<_>>>()?;
        Ok(self.inner.multisets.get_or_init(|| computed))
    }

    /// The realization in `G_N` of a subgroup of level `n`: its full preimage
    /// under `G_N -> G_n`.
    pub fn pull_to_top(&self, n: usize, sub: &FiniteGroup) -> Result<FiniteGroup> {
        let mut current = sub.clone();
        for m in n..self.len() {
            current = self.map(m).preimage(&current)?.into_group();
        }
        Ok(current)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelInfo {
    pub level: usize,
    pub order: u128,
    /// Order of `ker pi_{level-1}`; absent for the first level.
    pub kernel_order: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub levels: Vec<LevelInfo>,
    pub family: Option<String>,
    pub valid: bool,
}

/// Checks surjectivity of every map, the order identity
/// `|G_{n+1}| = |G_n| |ker pi_n|`, and agreement with the family rule.
pub fn validate(tower: &Tower) -> Result<ValidationReport> {
    let mut levels = vec![LevelInfo {
        level: 1,
        order: tower.level(1).order(),
        kernel_order: None,
    }];
    for n in 1..tower.len() {
        let map = tower.map(n);
        if !map.is_surjective() {
            return Err(Error::NotSurjective { level: n });
        }
        let kernel = map.kernel().order();
        let upper = tower.level(n + 1).order();
        if upper != tower.level(n).order() * kernel {
            return Err(Error::InvalidMap {
                level: n,
                reason: format!("|G_{}| != |G_{n}| * |ker|", n + 1),
            });
        }
        levels.push(LevelInfo {
            level: n + 1,
            order: upper,
            kernel_order: Some(kernel),
        });
    }
    if let Some(family) = tower.family() {
        let (expected, images, _) = family_parts(&family.description)?;
        if expected.len() != tower.len() {
            return Err(Error::InvalidMap {
                level: 1,
                reason: "prefix length differs from the family".into(),
            });
        }
        for (i, g) in expected.iter().enumerate() {
            if g.generators() != tower.level(i + 1).generators() {
                return Err(Error::InvalidMap {
                    level: i.max(1),
                    reason: format!("level {} does not follow the family rule", i + 1),
                });
            }
        }
        for (i, imgs) in images.iter().enumerate() {
            if imgs.as_slice() != tower.map(i + 1).generator_images() {
                return Err(Error::InvalidMap {
                    level: i + 1,
                    reason: "map does not follow the family rule".into(),
                });
            }
        }
    }
    Ok(ValidationReport {
        levels,
        family: tower.family().map(|f| f.description.name().to_string()),
        valid: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Exact(u64),
    AtLeast(u64),
    Infinite,
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Exact(k) => write!(f, "Exact({k})"),
            Multiplicity::AtLeast(k) => write!(f, "AtLeast({k})"),
            Multiplicity::Infinite => write!(f, "Infinite"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileEntry {
    #[serde(rename = "type")]
    pub ty: SimpleType,
    pub multiplicity: Multiplicity,
    /// `n_S(G_1), .., n_S(G_N)`.
    pub trace: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorProfile {
    pub levels: usize,
    pub annotated: bool,
    pub entries: Vec<ProfileEntry>,
}

impl FactorProfile {
    pub fn get(&self, t: &SimpleType) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| e.ty == *t)
    }

    pub fn types(&self) -> impl Iterator<Item = &SimpleType> {
        self.entries.iter().map(|e| &e.ty)
    }
}

/// Per-type traces over the levels, with multiplicities for the limit: with a
/// family annotation a type is `Infinite` when it recurs in kernels forever
/// and `Exact` otherwise; without one only the lower bound `AtLeast` is known.
pub fn profile(tower: &Tower) -> Result<FactorProfile> {
    let multisets = tower.level_multisets()?;
    let mut types: BTreeSet<SimpleType> = BTreeSet::new();
    for m in multisets {
        types.extend(m.types().cloned());
    }
    let family = tower.family();
    let entries = types
        .into_iter()
        .map(|ty| {
            let trace: Vec<u64> = multisets.iter().map(|m| m.get(&ty)).collect();
            let last = *trace.last().expect("at least one level");
            let multiplicity = match family {
                Some(f) if f.eventual_kernel_factors.contains(&ty) => Multiplicity::Infinite,
                Some(_) => Multiplicity::Exact(last),
                None => Multiplicity::AtLeast(last),
            };
            ProfileEntry { ty, multiplicity, trace }
        })
        .collect();
    Ok(FactorProfile {
        levels: tower.len(),
        annotated: family.is_some(),
        entries,
    })
}

#[derive(Clone, Debug)]
pub struct Block {
    /// 1-based level whose group contains the block's subgroups.
    pub level: usize,
    pub steps: Vec<SeriesStep>,
}

/// A composition series of the inverse limit, truncated at the last level:
/// block 0 is a series of `G_1`, block `n` a series of `ker pi_n` in `G_{n+1}`.
#[derive(Clone, Debug)]
pub struct InducedSeries {
    pub seed: u64,
    pub blocks: Vec<Block>,
}

impl InducedSeries {
    pub fn factors(&self) -> impl Iterator<Item = &SimpleType> {
        self.blocks.iter().flat_map(|b| b.steps.iter().map(|s| &s.factor))
    }

    pub fn block_lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.steps.len()).collect()
    }
}

pub fn induced_series(tower: &Tower, seed: u64) -> Result<InducedSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..tower.len()).map(|_| rng.next_u64()).collect();
    let blocks = (0..tower.len())
        .into_par_iter()
        .map(|b| {
            let group = if b == 0 {
                tower.level(1).clone()
            } else {
                tower.kernel(b).group().clone()
            };
            let steps = composition_series(&group, seeds[b])?
                .into_iter()
                .map(|s| SeriesStep {
                    subgroup: Subgroup::from_group_unchecked(
                        tower.level(b + 1).clone(),
                        s.subgroup.into_group(),
                    ),
                    factor: s.factor,
                })
                .collect();
            Ok(Block { level: b + 1, steps })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InducedSeries { seed, blocks })
}

/// Factors of blocks `0..=through_block`.
pub fn accumulate(series: &InducedSeries, through_block: usize) -> Result<FactorMultiset> {
    if through_block >= series.blocks.len() {
        return Err(Error::InvalidArgument(format!(
            "block {through_block} out of range ({} blocks)",
            series.blocks.len()
        )));
    }
    let mut m = FactorMultiset::new();
    for block in &series.blocks[..=through_block] {
        m.merge(&FactorMultiset::from_steps(&block.steps));
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct Divergence {
    pub block: usize,
    #[serde(rename = "type")]
    pub ty: SimpleType,
    pub count_a: u64,
    pub count_b: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub seed_a: u64,
    pub seed_b: u64,
    pub blocks: usize,
    pub factors: FactorMultiset,
    pub first_divergence: Option<Divergence>,
    pub pass: bool,
}

/// Compares two induced series block by block.
pub fn match_series(tower: &Tower, seed_a: u64, seed_b: u64) -> Result<MatchReport> {
    if seed_a == seed_b {
        return Err(Error::InvalidArgument("match_series needs two different seeds".into()));
    }
    let a = induced_series(tower, seed_a)?;
    let b = induced_series(tower, seed_b)?;
    let mut first_divergence = None;
    let mut last = FactorMultiset::new();
    for block in 0..a.blocks.len() {
        let ma = accumulate(&a, block)?;
        let mb = accumulate(&b, block)?;
        if ma != mb && first_divergence.is_none() {
            let types: BTreeSet<&SimpleType> = ma.types().chain(mb.types()).collect();
            let ty = types
                .into_iter()
                .find(|t| ma.get(t) != mb.get(t))
                .expect("multisets differ")
                .clone();
            first_divergence = Some(Divergence {
                block,
                count_a: ma.get(&ty),
                count_b: mb.get(&ty),
                ty,
            });
        }
        last = ma;
    }
    Ok(MatchReport {
        seed_a,
        seed_b,
        blocks: a.blocks.len(),
        factors: last,
        pass: first_divergence.is_none(),
        first_divergence,
    })
}

/// A compatible family `H_n <= G_n` with `pi_n(H_{n+1}) = H_n`.
#[derive(Clone, Debug)]
pub struct ClosedSubgroup {
    levels: Vec<Subgroup>,
}

impl ClosedSubgroup {
    pub fn new(tower: &Tower, generators: Vec<Vec<Permutation>>) -> Result<Self> {
        if generators.len() != tower.len() {
            return Err(Error::IncompatibleSubgroup(format!(
                "{} levels given for a tower with {} levels",
                generators.len(),
                tower.len()
            )));
        }
        let levels = generators
            .into_iter()
            .enumerate()
            .map(|(i, gens)| {
                tower.level(i + 1).subgroup(gens).map_err(|e| {
                    Error::IncompatibleSubgroup(format!("level {}: {e}", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for n in 1..tower.len() {
            let image = tower.map(n).image_of(levels[n].group())?;
            if !image.group().same_elements(levels[n - 1].group()) {
                return Err(Error::IncompatibleSubgroup(format!(
                    "the image of level {} is not level {n}",
                    n + 1
                )));
            }
        }
        Ok(ClosedSubgroup { levels })
    }

    /// The family of images of a subgroup of the top level.
    pub fn from_top(tower: &Tower, top: &FiniteGroup) -> Result<Self> {
        let n = tower.len();
        let mut levels = vec![tower
            .level(n)
            .subgroup(top.generators().to_vec())
            .map_err(|e| Error::IncompatibleSubgroup(e.to_string()))?];
        for m in (1..n).rev() {
            let below = tower.map(m).image_of(levels.last().expect("nonempty").group())?;
            levels.push(below);
        }
        levels.reverse();
        Ok(ClosedSubgroup { levels })
    }

    /// `H_n`, 1-based.
    pub fn level(&self, n: usize) -> &Subgroup {
        &self.levels[n - 1]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepOutcome {
    Trivial,
    Matching,
    Mismatch,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectStep {
    pub factor: SimpleType,
    /// `|G_k ∩ H| / |G_{k+1} ∩ H|`.
    pub quotient_order: u128,
    pub outcome: StepOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectReport {
    pub level: usize,
    pub subgroup_order: u128,
    pub steps: Vec<IntersectStep>,
    pub factors: FactorMultiset,
    pub pass: bool,
}

/// Intersects the series, realized in the top level `G_N`, with a subnormal
/// `H_N`, and checks that every step of the intersected chain is trivial or
/// has the same simple type as the corresponding factor of the series.
pub fn intersect_series(
    tower: &Tower,
    series: &InducedSeries,
    h: &ClosedSubgroup,
) -> Result<IntersectReport> {
    let n = tower.len();
    if h.len() != n || series.blocks.len() != n {
        return Err(Error::IncompatibleSubgroup(format!(
            "tower has {n} levels, subgroup {} and series {}",
            h.len(),
            series.blocks.len()
        )));
    }
    let top = tower.level(n);
    let h_top = h.level(n).group();
    if !top.contains_group(h_top) {
        return Err(Error::IncompatibleSubgroup("H_N is not inside G_N".into()));
    }
    if !is_subnormal(top, h_top) {
        return Err(Error::IncompatibleSubgroup("H_N is not subnormal in G_N".into()));
    }
    let mut terms: Vec<FiniteGroup> = vec![top.clone()];
    let mut factors: Vec<&SimpleType> = Vec::new();
    for block in &series.blocks {
        for step in &block.steps {
            terms.push(tower.pull_to_top(block.level, step.subgroup.group())?);
            factors.push(&step.factor);
        }
    }
    let cut = terms
        .iter()
        .map(|t| intersection(t, h_top))
        .collect::<Result<Vec<_>>>()?;
    let mut steps = Vec::with_capacity(factors.len());
    let mut found = FactorMultiset::new();
    for (k, factor) in factors.into_iter().enumerate() {
        let ratio = cut[k].order() / cut[k + 1].order();
        let outcome = if ratio == 1 {
            StepOutcome::Trivial
        } else if ratio != factor.order() {
            StepOutcome::Mismatch
        } else {
            let lower = Subgroup::from_group_unchecked(cut[k].clone(), cut[k + 1].clone());
            let (q, _) = quotient(&cut[k], &lower)?;
            match identify(&q) {
                Ok(label) if label == *factor => {
                    if matches!(label, SimpleType::Other { .. }) {
                        let upper =
                            Subgroup::from_group_unchecked(terms[k].clone(), terms[k + 1].clone());
                        let (full, _) = quotient(&terms[k], &upper)?;
                        if same_type(&q, &full)? {
                            StepOutcome::Matching
                        } else {
                            StepOutcome::Mismatch
                        }
                    } else {
                        StepOutcome::Matching
                    }
                }
                Ok(_) | Err(Error::NotSimple) => StepOutcome::Mismatch,
                Err(e) => return Err(e),
            }
        };
        if outcome == StepOutcome::Matching {
            found.add(factor.clone(), 1);
        }
        steps.push(IntersectStep {
            factor: factor.clone(),
            quotient_order: ratio,
            outcome,
        });
    }
    let pass = steps.iter().all(|s| s.outcome != StepOutcome::Mismatch)
        && found.order_product() == Some(h_top.order());
    Ok(IntersectReport {
        level: n,
        subgroup_order: h_top.order(),
        steps,
        factors: found,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub value: bool,
    /// True when the answer only covers the stored levels.
    pub prefix_relative: bool,
}

/// All composition factors abelian. With a family annotation the answer also
/// accounts for the factors of all later kernels.
pub fn prosolvable(tower: &Tower) -> Result<ClassReport> {
    let prefix = tower.level_multisets()?.iter().all(FactorMultiset::all_abelian);
    Ok(match tower.family() {
        Some(f) => ClassReport {
            value: prefix && !f.eventual_kernel_factors.any_nonabelian(),
            prefix_relative: false,
        },
        None => ClassReport {
            value: prefix,
            prefix_relative: true,
        },
    })
}

/// No composition factor abelian.
pub fn anabelian(tower: &Tower) -> Result<ClassReport> {
    let prefix = !tower.level_multisets()?.iter().any(FactorMultiset::any_abelian);
    Ok(match tower.family() {
        Some(f) => ClassReport {
            value: prefix && !f.eventual_kernel_factors.any_abelian(),
            prefix_relative: false,
        },
        None => ClassReport {
            value: prefix,
            prefix_relative: true,
        },
    })
}

// ----- files -----

#[derive(Deserialize)]
#[serde(untagged)]
enum ImageText {
    One(String),
    Cycles(Vec<String>),
}

impl ImageText {
    fn joined(&self) -> String {
        match self {
            ImageText::One(s) => s.clone(),
            ImageText::Cycles(parts) => parts.concat(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    gen_images: Vec<ImageText>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerFile {
    family: Option<FamilyDescription>,
    annotate: Option<bool>,
    levels: Option<Vec<GroupDescription>>,
    maps: Option<Vec<MapFile>>,
}

/// Parses a tower file: either `{"family": {...}}`, optionally with
/// `"annotate": false`, or explicit `{"levels": [...], "maps": [...]}` where
/// map `n` lists the images in `G_n` of the generators of `G_{n+1}`.
pub fn parse_tower(text: &str) -> Result<Tower> {
    let file: TowerFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match file {
        TowerFile {
            family: Some(desc),
            annotate,
            levels: None,
            maps: None,
        } => {
            let tower = Tower::from_family(desc)?;
            Ok(if annotate == Some(false) {
                tower.without_annotation()
            } else {
                tower
            })
        }
        TowerFile {
            family: None,
            annotate: None,
            levels: Some(levels),
            maps,
        } => {
            let groups = levels.iter().map(GroupDescription::build).collect::<Result<Vec<_>>>()?;
            let maps = maps.unwrap_or_default();
            if maps.len() + 1 != groups.len() {
                return Err(Error::Parse(format!(
                    "{} levels need {} maps, got {}",
                    groups.len(),
                    groups.len().saturating_sub(1),
                    maps.len()
                )));
            }
            let images = maps
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    m.gen_images
                        .iter()
                        .map(|t| Permutation::parse_cycles(&t.joined(), groups[i].degree()))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Tower::from_images(groups, images)
        }
        _ => Err(Error::Parse(
            "a tower file has either \"family\" (and optionally \"annotate\") or \"levels\" and \"maps\""
                .into(),
        )),
    }
}

pub fn load_tower(path: &Path) -> Result<Tower> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_tower(&text)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClosedSubgroupFile {
    levels: Vec<Vec<String>>,
}

/// Parses `{"levels": [["(0 1)", ...], ...]}`, one generator list per level.
pub fn parse_closed_subgroup(tower: &Tower, text: &str) -> Result<ClosedSubgroup> {
    let file: ClosedSubgroupFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.levels.len() != tower.len() {
        return Err(Error::IncompatibleSubgroup(format!(
            "{} levels given for a tower with {} levels",
            file.levels.len(),
            tower.len()
        )));
    }
    let gens = file
        .levels
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let degree = tower.level(i + 1).degree();
            let mut gens = level
                .iter()
                .map(|s| Permutation::parse_cycles(s, degree))
                .collect::<Result<Vec<_>>>()?;
            if gens.is_empty() {
                gens.push(Permutation::identity(degree));
            }
            Ok(gens)
        })
        .collect::<Result<Vec<_>>>()?;
    ClosedSubgroup::new(tower, gens)
}

pub fn load_closed_subgroup(tower: &Tower, path: &Path) -> Result<ClosedSubgroup> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_closed_subgroup(tower, &text)
}

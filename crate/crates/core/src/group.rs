//! Finite permutation groups and subgroups.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on the number of elements materialized by [`FiniteGroup::elements`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 100_000;

/// The full element set of a group, sorted lexicographically by image table.
pub struct ElementSet {
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
}

impl ElementSet {
    fn from_unsorted(mut elements: Vec<Permutation>) -> Self {
        elements.sort_unstable();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        ElementSet { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Permutation] {
        &self.elements
    }
}

struct GroupInner {
    degree: usize,
    generators: Vec<Permutation>,
    bound: usize,
    chain: OnceLock<Chain>,
    elements: OnceLock<Arc<ElementSet>>,
    pub(crate) normal_subgroups: OnceLock<Vec<FiniteGroup>>,
}

/// A permutation group given by generators. The stabilizer chain and the
/// element set are computed on first use and shared between clones.
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<GroupInner>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree())
            .field("generators", &self.inner.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// A group of the given degree generated by `generators`.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        Ok(Self::from_parts(degree, generators, DEFAULT_ENUMERATION_BOUND, None))
    }

    pub(crate) fn from_parts(
        degree: usize,
        mut generators: Vec<Permutation>,
        bound: usize,
        chain: Option<Chain>,
    ) -> Self {
        if generators.is_empty() {
            generators.push(Permutation::identity(degree));
        }
        let cell = OnceLock::new();
        if let Some(c) = chain {
            let _ = cell.set(c);
        }
        FiniteGroup {
            inner: Arc::new(GroupInner {
                degree,
                generators,
                bound,
                chain: cell,
                elements: OnceLock::new(),
                normal_subgroups: OnceLock::new(),
            }),
        }
    }

    /// Group generated by `generators` in the given degree; identity generators
    /// are dropped (the trivial group keeps a single identity generator).
    pub(crate) fn generated_by(degree: usize, generators: &[Permutation], bound: usize) -> Self {
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators.iter().filter(|g| !g.is_identity()) {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        Self::from_parts(degree, gens, bound, None)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_parts(degree.max(1), Vec::new(), DEFAULT_ENUMERATION_BOUND, None)
    }

    /// Same group with a different enumeration bound.
    pub fn with_bound(&self, bound: usize) -> Self {
        Self::from_parts(self.degree(), self.inner.generators.clone(), bound, None)
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.inner.generators
    }

    pub fn bound(&self) -> usize {
        self.inner.bound
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree())
    }

    pub(crate) fn chain(&self) -> &Chain {
        self.inner
            .chain
            .get_or_init(|| Chain::build(self.degree(), &self.inner.generators, &[]))
    }

    pub(crate) fn normal_subgroup_cache(&self) -> &OnceLock<Vec<FiniteGroup>> {
        &self.inner.normal_subgroups
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree() && self.chain().contains(p)
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.generators.iter().all(|g| g.is_identity())
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.then(b) == b.then(a)))
    }

    /// Breadth-first closure of the generators. Fails with `BoundExceeded` when the
    /// group has more elements than the enumeration bound.
    pub fn elements(&self) -> Result<Arc<ElementSet>> {
        if let Some(e) = self.inner.elements.get() {
            return Ok(e.clone());
        }
        let order = self.order();
        if order > self.inner.bound as u128 {
            return Err(Error::BoundExceeded {
                what: "group order",
                size: order,
                bound: self.inner.bound as u128,
            });
        }
        let gens: Vec<&Permutation> = self.generators().iter().filter(|g| !g.is_identity()).collect();
        let id = self.identity();
        let mut seen: std::collections::HashSet<Permutation> = std::collections::HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.then(g);
                if !seen.contains(&y) {
                    if seen.len() >= self.inner.bound {
                        return Err(Error::BoundExceeded {
                            what: "element closure",
                            size: seen.len() as u128 + 1,
                            bound: self.inner.bound as u128,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let set = Arc::new(ElementSet::from_unsorted(seen.into_iter().collect()));
        Ok(self.inner.elements.get_or_init(|| set).clone())
    }

    /// True iff both groups have the same degree and the same elements.
    pub fn same_elements(&self, other: &FiniteGroup) -> bool {
        self.degree() == other.degree()
            && self.order() == other.order()
            && other.generators().iter().all(|g| self.contains(g))
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &FiniteGroup) -> bool {
        self.degree() == other.degree() && other.generators().iter().all(|g| self.contains(g))
    }

    /// A random element: a random walk over the generators.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let gens = self.generators();
        let mut x = self.identity();
        let steps = 20 + 4 * gens.len();
        for _ in 0..steps {
            let g = &gens[rng.gen_range(0..gens.len())];
            x = x.then(g);
        }
        x
    }

    /// The subgroup generated by `gens`; every generator must lie in `self`.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<Subgroup> {
        Subgroup::new(self.clone(), gens)
    }

    // ----- built-in constructors -----

    /// Cyclic group of order `n` in its regular representation.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic group needs n >= 1".into()));
        }
        let images: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        FiniteGroup::new(n, vec![Permutation::from_images(images)?])
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidArgument("symmetric group needs n >= 1".into())),
            1 => Ok(FiniteGroup::trivial(1)),
            2 => FiniteGroup::new(2, vec![Permutation::from_cycles(2, &[vec![0, 1]])?]),
            _ => {
                let long: Vec<u32> = (0..n as u32).collect();
                FiniteGroup::new(
                    n,
                    vec![
                        Permutation::from_cycles(n, &[vec![0, 1]])?,
                        Permutation::from_cycles(n, &[long])?,
                    ],
                )
            }
        }
    }

    pub fn alternating(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidArgument("alternating group needs n >= 1".into())),
            1 | 2 => Ok(FiniteGroup::trivial(n)),
            3 => FiniteGroup::new(3, vec![Permutation::from_cycles(3, &[vec![0, 1, 2]])?]),
            _ => {
                let long: Vec<u32> = if n % 2 == 1 {
                    (0..n as u32).collect()
                } else {
                    (1..n as u32).collect()
                };
                FiniteGroup::new(
                    n,
                    vec![
                        Permutation::from_cycles(n, &[long])?,
                        Permutation::from_cycles(n, &[vec![0, 1, 2]])?,
                    ],
                )
            }
        }
    }

    /// Dihedral group of order `2n`; acts on `n` points for `n >= 3`.
    pub fn dihedral(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidArgument("dihedral group needs n >= 1".into())),
            1 => FiniteGroup::cyclic(2),
            2 => FiniteGroup::new(
                4,
                vec![
                    Permutation::parse_cycles("(0 1)(2 3)", 4)?,
                    Permutation::parse_cycles("(0 2)(1 3)", 4)?,
                ],
            ),
            _ => {
                let rotation: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
                let reflection: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
                FiniteGroup::new(
                    n,
                    vec![
                        Permutation::from_images(rotation)?,
                        Permutation::from_images(reflection)?,
                    ],
                )
            }
        }
    }

    /// `SL(2, q)` for a prime `q <= 13`, acting on the `q^2 - 1` nonzero vectors of
    /// `F_q^2`. Vector `(a, b)` is point `a*q + b - 1`.
    pub fn sl2(q: u32) -> Result<Self> {
        if ![2, 3, 5, 7, 11, 13].contains(&q) {
            return Err(Error::InvalidArgument(format!(
                "sl2 needs a prime q <= 13, got {q}"
            )));
        }
        let point = |a: u32, b: u32| a * q + b - 1;
        let matrix = |m: [[u32; 2]; 2]| {
            let mut images = vec![0u32; (q * q - 1) as usize];
            for a in 0..q {
                for b in 0..q {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let x = (m[0][0] * a + m[0][1] * b) % q;
                    let y = (m[1][0] * a + m[1][1] * b) % q;
                    images[point(a, b) as usize] = point(x, y);
                }
            }
            Permutation::from_images(images)
        };
        FiniteGroup::new(
            (q * q - 1) as usize,
            vec![matrix([[1, 1], [0, 1]])?, matrix([[1, 0], [1, 1]])?],
        )
    }

    /// `PSL(2, q)` for a prime `q`, acting on the projective line: points `0..q`
    /// with `q` standing for infinity, generated by `x -> x + 1` and `x -> -1/x`.
    pub fn psl2(q: u32) -> Result<Self> {
        if !is_prime(q as u128) {
            return Err(Error::InvalidArgument(format!("psl2 needs a prime q, got {q}")));
        }
        let inf = q;
        let inv = |x: u32| (1..q).find(|y| x * y % q == 1).expect("prime field");
        let shift: Vec<u32> = (0..=q).map(|x| if x == inf { inf } else { (x + 1) % q }).collect();
        let flip: Vec<u32> = (0..=q)
            .map(|x| match x {
                x if x == inf => 0,
                0 => inf,
                x => (q - inv(x)) % q,
            })
            .collect();
        FiniteGroup::new(
            (q + 1) as usize,
            vec![Permutation::from_images(shift)?, Permutation::from_images(flip)?],
        )
    }

    /// External direct product; factor `i` acts on its own block of points.
    pub fn direct_product(parts: &[FiniteGroup]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("direct product needs at least one part".into()));
        }
        let degree: usize = parts.iter().map(|p| p.degree()).sum();
        let mut gens = Vec::new();
        let mut offset = 0;
        for part in parts {
            for g in part.generators().iter().filter(|g| !g.is_identity()) {
                gens.push(g.embed(offset, degree));
            }
            offset += part.degree();
        }
        if gens.is_empty() {
            gens.push(Permutation::identity(degree));
        }
        FiniteGroup::new(degree, gens)
    }
}

/// A subgroup of a finite group, carried with its parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: FiniteGroup,
    group: FiniteGroup,
}

impl Subgroup {
    /// Checks that every generator lies in `parent`.
    pub fn new(parent: FiniteGroup, gens: Vec<Permutation>) -> Result<Self> {
        for g in &gens {
            if !parent.contains(g) {
                return Err(Error::NotInGroup(g.to_string()));
            }
        }
        let group = FiniteGroup::generated_by(parent.degree(), &gens, parent.bound());
        Ok(Subgroup { parent, group })
    }

    pub(crate) fn from_group_unchecked(parent: FiniteGroup, group: FiniteGroup) -> Self {
        debug_assert_eq!(parent.degree(), group.degree());
        Subgroup { parent, group }
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            group: FiniteGroup::trivial(parent.degree()).with_bound(parent.bound()),
        }
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            group: parent.clone(),
        }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    /// The subgroup as a group in its own right.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn into_group(self) -> FiniteGroup {
        self.group
    }

    pub fn generators(&self) -> &[Permutation] {
        self.group.generators()
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    pub fn index(&self) -> u128 {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.group.contains(p)
    }

    pub fn elements(&self) -> Result<Arc<ElementSet>> {
        self.group.elements()
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn is_normal(&self) -> bool {
        is_normal(&self.parent, &self.group)
    }

    /// `self <= other` as subgroups of a common parent.
    pub fn is_contained_in(&self, other: &Subgroup) -> bool {
        other.group.contains_group(&self.group)
    }

    /// Re-parents the subgroup into `parent` (which must contain it).
    pub fn within(&self, parent: &FiniteGroup) -> Result<Subgroup> {
        if !parent.contains_group(&self.group) {
            return Err(Error::NotInGroup("subgroup generators".into()));
        }
        Ok(Subgroup {
            parent: parent.clone(),
            group: self.group.clone(),
        })
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_elements(&other.group)
    }
}

impl Eq for Subgroup {}

/// Full element set of the group.
pub fn enumerate(group: &FiniteGroup) -> Result<Arc<ElementSet>> {
    group.elements()
}

/// `sub` is normalized by every generator of `group`.
pub fn is_normal(group: &FiniteGroup, sub: &FiniteGroup) -> bool {
    group.contains_group(sub)
        && sub
            .generators()
            .iter()
            .all(|n| group.generators().iter().all(|h| sub.contains(&n.conjugate_by(h))))
}

/// Smallest normal subgroup of `group` containing `seed`.
pub fn normal_closure(group: &FiniteGroup, seed: &[Permutation]) -> Result<Subgroup> {
    for s in seed {
        if !group.contains(s) {
            return Err(Error::NotInGroup(s.to_string()));
        }
    }
    Ok(normal_closure_unchecked(group, seed))
}

pub(crate) fn normal_closure_unchecked(group: &FiniteGroup, seed: &[Permutation]) -> Subgroup {
    let degree = group.degree();
    let mut chain = Chain::build(degree, &[], &[]);
    let mut gens: Vec<Permutation> = Vec::new();
    for s in seed {
        if !chain.contains(s) {
            chain.add_generator(s);
            gens.push(s.clone());
        }
    }
    let mut i = 0;
    while i < gens.len() {
        let n = gens[i].clone();
        for h in group.generators() {
            let c = n.conjugate_by(h);
            if !chain.contains(&c) {
                chain.add_generator(&c);
                gens.push(c);
            }
        }
        i += 1;
    }
    let sub = FiniteGroup::from_parts(degree, gens, group.bound(), Some(chain));
    Subgroup::from_group_unchecked(group.clone(), sub)
}

/// Whether `sub` is reachable from `group` by a chain of normal subgroups.
/// The iterated normal closures of `sub` stop at `sub` exactly when it is.
pub fn is_subnormal(group: &FiniteGroup, sub: &FiniteGroup) -> bool {
    if !group.contains_group(sub) {
        return false;
    }
    let mut current = group.clone();
    loop {
        let next = normal_closure_unchecked(&current, sub.generators()).into_group();
        if next.order() == current.order() {
            return current.order() == sub.order();
        }
        current = next;
    }
}

/// Normal closure of the commutators of all generator pairs.
pub fn derived_subgroup(group: &FiniteGroup) -> Subgroup {
    let gens = group.generators();
    let mut commutators = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.commutator(b);
            if !c.is_identity() {
                commutators.push(c);
            }
        }
    }
    normal_closure_unchecked(group, &commutators)
}

/// `G = G^(0) > G^(1) > ...` until it stabilizes; the last entry is the perfect core.
pub fn derived_series(group: &FiniteGroup) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(group)];
    loop {
        let last = series.last().expect("nonempty").group().clone();
        let next = derived_subgroup(&last);
        if next.order() == last.order() {
            break;
        }
        series.push(Subgroup::from_group_unchecked(group.clone(), next.into_group()));
    }
    series
}

/// Conjugacy classes as sorted lists of element indices into `group.elements()`.
pub fn conjugacy_classes(group: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    let elements = group.elements()?;
    let n = elements.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![start];
        class_of[start] = id;
        let mut k = 0;
        while k < members.len() {
            let x = elements.get(members[k]).clone();
            for h in group.generators() {
                let y = elements
                    .index_of(&x.conjugate_by(h))
                    .expect("conjugate lies in the group");
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    members.push(y);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok(classes)
}

/// `a ∩ b`, found by enumerating the smaller of the two groups.
pub fn intersection(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            expected: a.degree(),
            found: b.degree(),
        });
    }
    let (small, large) = if a.order() <= b.order() { (a, b) } else { (b, a) };
    if large.contains_group(small) {
        return Ok(small.clone());
    }
    let mut chain = Chain::build(a.degree(), &[], &[]);
    let mut gens = Vec::new();
    for x in small.elements()?.iter() {
        if large.contains(x) && !chain.contains(x) {
            chain.add_generator(x);
            gens.push(x.clone());
        }
    }
    Ok(FiniteGroup::from_parts(a.degree(), gens, a.bound(), Some(chain)))
}

/// Elements commuting with every generator.
pub fn center(group: &FiniteGroup) -> Result<Subgroup> {
    let elements = group.elements()?;
    let gens: Vec<Permutation> = elements
        .iter()
        .filter(|x| group.generators().iter().all(|g| x.then(g) == g.then(x)))
        .cloned()
        .collect();
    group.subgroup(gens)
}

/// Whether the only normal subgroups are the trivial group and the whole group.
pub fn is_simple(group: &FiniteGroup) -> Result<bool> {
    let order = group.order();
    if order == 1 {
        return Err(Error::TrivialGroup);
    }
    if is_prime(order) {
        return Ok(true);
    }
    if derived_subgroup(group).order() != order {
        return Ok(false);
    }
    let elements = group.elements()?;
    for class in conjugacy_classes(group)? {
        let rep = elements.get(class[0]);
        if rep.is_identity() {
            continue;
        }
        if normal_closure_unchecked(group, std::slice::from_ref(rep)).order() != order {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub(crate) fn prime_divisors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

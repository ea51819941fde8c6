//! Stabilizer chains used for order computation, membership testing and
//! canonical coset representatives.
//!
//! Two representations exist. Groups with a single nontrivial generator use
//! [`CyclicChain`], which answers every query by congruence arithmetic on the
//! cycles of the generator and never stores transversals; this keeps regular
//! cyclic groups of large degree cheap. Everything else uses [`Bsgs`], a
//! deterministic Schreier-Sims base and strong generating set.
//!
//! A chain may be built with a base prefix. For a BSGS every prefix point is a
//! base point (in order) so that the stabilizer of the whole prefix is one of
//! the levels; the graph-group constructions in `hom` rely on this.

use num_integer::Integer;

use crate::perm::Permutation;

const NO_POSITION: u32 = u32::MAX;

/// Solves `m = a1 (mod n1)`, `m = a2 (mod n2)`; returns `(a, lcm)` or `None` if inconsistent.
pub(crate) fn crt(a1: i128, n1: i128, a2: i128, n2: i128) -> Option<(i128, i128)> {
    let g = n1.gcd(&n2);
    let diff = a2 - a1;
    if diff % g != 0 {
        return None;
    }
    let m = n2 / g;
    let eg = (n1 / g).extended_gcd(&m);
    let k = ((diff / g) % m * (eg.x % m)).rem_euclid(m);
    let modulus = n1.checked_mul(m)?;
    Some(((a1 + n1 * k).rem_euclid(modulus), modulus))
}

/// Chain for the cyclic group generated by one permutation.
#[derive(Clone, Debug)]
pub(crate) struct CyclicChain {
    generator: Permutation,
    order: u128,
    cycles: Vec<Vec<u32>>,
    cycle_of: Vec<u32>,
    position: Vec<u32>,
    prefix: Vec<u32>,
}

impl CyclicChain {
    fn new(generator: Permutation, prefix: &[u32]) -> Option<Self> {
        let cycles = generator.all_cycles();
        let mut order: u128 = 1;
        for c in &cycles {
            let len = c.len() as u128;
            order = (order / order.gcd(&len)).checked_mul(len)?;
        }
        if order > i128::MAX as u128 / 4 {
            return None;
        }
        let n = generator.degree();
        let mut cycle_of = vec![0u32; n];
        let mut position = vec![0u32; n];
        for (ci, c) in cycles.iter().enumerate() {
            for (k, &p) in c.iter().enumerate() {
                cycle_of[p as usize] = ci as u32;
                position[p as usize] = k as u32;
            }
        }
        Some(CyclicChain {
            generator,
            order,
            cycles,
            cycle_of,
            position,
            prefix: prefix.to_vec(),
        })
    }

    /// Congruence class of exponents `m` with `gen^m` agreeing with `x` on `points`.
    fn solve(&self, x: &Permutation, points: impl Iterator<Item = u32>) -> Option<(i128, i128)> {
        let (mut a, mut d) = (0i128, 1i128);
        for p in points {
            let q = x.apply(p);
            let c = self.cycle_of[p as usize];
            if self.cycle_of[q as usize] != c {
                return None;
            }
            let len = self.cycles[c as usize].len() as i128;
            if len == 1 {
                continue;
            }
            let delta =
                (self.position[q as usize] as i128 - self.position[p as usize] as i128).rem_euclid(len);
            (a, d) = crt(a, d, delta, len)?;
        }
        Some((a, d))
    }

    fn contains(&self, x: &Permutation) -> bool {
        self.solve(x, 0..x.degree() as u32).is_some()
    }

    fn residue_through_prefix(&self, x: &Permutation) -> Option<Permutation> {
        let (a, _) = self.solve(x, self.prefix.iter().copied())?;
        Some(x.then(&self.generator.pow(-a)))
    }

    fn prefix_stabilizer_gens(&self) -> Vec<Permutation> {
        let mut d: u128 = 1;
        for &p in &self.prefix {
            let len = self.cycles[self.cycle_of[p as usize] as usize].len() as u128;
            d = d.lcm(&len);
        }
        if d % self.order == 0 {
            Vec::new()
        } else {
            vec![self.generator.pow(d as i128)]
        }
    }

    /// Lexicographically least element of the right coset `<gen> x`.
    fn canonical_coset_rep(&self, x: &Permutation) -> Permutation {
        let ord = self.order as i128;
        let (mut a, mut d) = (0i128, 1i128);
        for p in 0..x.degree() {
            if d % ord == 0 {
                break;
            }
            let c = &self.cycles[self.cycle_of[p] as usize];
            let len = c.len() as i128;
            if len == 1 {
                continue;
            }
            let g = d.gcd(&len);
            let start = a.rem_euclid(g);
            let pos = self.position[p] as i128;
            let mut best: Option<(u32, i128)> = None;
            let mut r = start;
            while r < len {
                let q = c[((pos + r) % len) as usize];
                let v = x.apply(q);
                if best.map_or(true, |(bv, _)| v < bv) {
                    best = Some((v, r));
                }
                r += g;
            }
            let (_, r) = best.expect("nonempty candidate set");
            (a, d) = crt(a, d, r, len).expect("compatible by construction");
        }
        self.generator.pow(a).then(x)
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    orbit: Vec<u32>,
    transversal: Vec<Permutation>,
    inverse_transversal: Vec<Permutation>,
    position: Vec<u32>,
    gens: Vec<usize>,
    pending: Vec<(u32, u32)>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut position = vec![NO_POSITION; degree];
        position[base as usize] = 0;
        Level {
            base,
            orbit: vec![base],
            transversal: vec![Permutation::identity(degree)],
            inverse_transversal: vec![Permutation::identity(degree)],
            position,
            gens: Vec::new(),
            pending: Vec::new(),
        }
    }

    #[inline]
    fn index_of(&self, point: u32) -> Option<usize> {
        match self.position[point as usize] {
            NO_POSITION => None,
            i => Some(i as usize),
        }
    }
}

/// Deterministic Schreier-Sims base and strong generating set.
#[derive(Clone, Debug)]
pub(crate) struct Bsgs {
    degree: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
    prefix_len: usize,
}

impl Bsgs {
    fn new(degree: usize, prefix: &[u32]) -> Self {
        Bsgs {
            degree,
            strong: Vec::new(),
            levels: prefix.iter().map(|&b| Level::new(b, degree)).collect(),
            prefix_len: prefix.len(),
        }
    }

    /// Sifts `x` through levels `start..end`; returns the level where it got stuck
    /// (or `end`) together with the residue.
    fn strip(&self, mut x: Permutation, start: usize, end: usize) -> (usize, Permutation) {
        for l in start..end {
            let level = &self.levels[l];
            let q = x.apply(level.base);
            if q == level.base {
                continue;
            }
            match level.index_of(q) {
                None => return (l, x),
                Some(i) => x = x.then(&level.inverse_transversal[i]),
            }
        }
        (end, x)
    }

    fn add_generator(&mut self, g: &Permutation) {
        let len = self.levels.len();
        let (j, r) = self.strip(g.clone(), 0, len);
        if j == len && r.is_identity() {
            return;
        }
        self.add_strong(r, j);
        self.saturate();
    }

    fn add_strong(&mut self, r: Permutation, j: usize) {
        if j == self.levels.len() {
            let base = r.first_moved_point().expect("nontrivial residue");
            self.levels.push(Level::new(base, self.degree));
        }
        let idx = self.strong.len();
        self.strong.push(r);
        for level in &mut self.levels[..=j] {
            let gp = level.gens.len() as u32;
            level.gens.push(idx);
            for oi in 0..level.orbit.len() {
                level.pending.push((oi as u32, gp));
            }
        }
    }

    /// Processes every pending (orbit point, generator) pair until all Schreier
    /// generators sift to the identity.
    fn saturate(&mut self) {
        loop {
            let Some(l) = (0..self.levels.len())
                .rev()
                .find(|&l| !self.levels[l].pending.is_empty())
            else {
                break;
            };
            let (oi, gp) = self.levels[l].pending.pop().expect("nonempty");
            let level = &self.levels[l];
            let g = &self.strong[level.gens[gp as usize]];
            let p = level.orbit[oi as usize];
            let q = g.apply(p);
            match level.index_of(q) {
                Some(qi) => {
                    let s = level.transversal[oi as usize]
                        .then(g)
                        .then(&level.inverse_transversal[qi]);
                    if s.is_identity() {
                        continue;
                    }
                    let len = self.levels.len();
                    let (j, r) = self.strip(s, l + 1, len);
                    if j < len || !r.is_identity() {
                        self.add_strong(r, j);
                    }
                }
                None => {
                    let u = level.transversal[oi as usize].then(g);
                    let level = &mut self.levels[l];
                    let new_index = level.orbit.len() as u32;
                    level.position[q as usize] = new_index;
                    level.orbit.push(q);
                    level.inverse_transversal.push(u.inverse());
                    level.transversal.push(u);
                    for gp2 in 0..level.gens.len() {
                        level.pending.push((new_index, gp2 as u32));
                    }
                }
            }
        }
    }

    fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    fn contains(&self, x: &Permutation) -> bool {
        let len = self.levels.len();
        let (j, r) = self.strip(x.clone(), 0, len);
        j == len && r.is_identity()
    }

    fn residue_through_prefix(&self, x: &Permutation) -> Option<Permutation> {
        let (j, r) = self.strip(x.clone(), 0, self.prefix_len);
        (j == self.prefix_len).then_some(r)
    }

    fn prefix_stabilizer_gens(&self) -> Vec<Permutation> {
        self.levels
            .get(self.prefix_len)
            .map(|l| l.gens.iter().map(|&i| self.strong[i].clone()).collect())
            .unwrap_or_default()
    }

    /// Least element of the right coset `N x` under the base-image ordering.
    fn canonical_coset_rep(&self, x: &Permutation) -> Permutation {
        let mut cur = x.clone();
        for level in &self.levels {
            let (best, _) = level
                .orbit
                .iter()
                .enumerate()
                .min_by_key(|(_, &q)| cur.apply(q))
                .expect("orbit is nonempty");
            if best != 0 {
                cur = level.transversal[best].then(&cur);
            }
        }
        cur
    }
}

/// A stabilizer chain of either kind.
#[derive(Clone, Debug)]
pub(crate) enum Chain {
    Cyclic(CyclicChain),
    Bsgs(Bsgs),
}

impl Chain {
    pub(crate) fn build(degree: usize, gens: &[Permutation], prefix: &[u32]) -> Chain {
        let mut distinct: Vec<&Permutation> = Vec::new();
        for g in gens.iter().filter(|g| !g.is_identity()) {
            if !distinct.contains(&g) {
                distinct.push(g);
            }
        }
        if distinct.len() <= 1 {
            let g = distinct
                .first()
                .map(|g| (*g).clone())
                .unwrap_or_else(|| Permutation::identity(degree));
            if let Some(c) = CyclicChain::new(g, prefix) {
                return Chain::Cyclic(c);
            }
        }
        let mut b = Bsgs::new(degree, prefix);
        for g in distinct {
            b.add_generator(g);
        }
        Chain::Bsgs(b)
    }

    pub(crate) fn order(&self) -> u128 {
        match self {
            Chain::Cyclic(c) => c.order,
            Chain::Bsgs(b) => b.order(),
        }
    }

    pub(crate) fn contains(&self, x: &Permutation) -> bool {
        match self {
            Chain::Cyclic(c) => c.contains(x),
            Chain::Bsgs(b) => b.contains(x),
        }
    }

    pub(crate) fn add_generator(&mut self, g: &Permutation) {
        match self {
            Chain::Bsgs(b) => b.add_generator(g),
            Chain::Cyclic(c) => {
                if c.contains(g) {
                    return;
                }
                let mut b = Bsgs::new(g.degree(), &c.prefix);
                b.add_generator(&c.generator);
                b.add_generator(g);
                *self = Chain::Bsgs(b);
            }
        }
    }

    /// Divides `x` by a group element so the result fixes every prefix point;
    /// `None` if no group element agrees with `x` on the prefix.
    pub(crate) fn residue_through_prefix(&self, x: &Permutation) -> Option<Permutation> {
        match self {
            Chain::Cyclic(c) => c.residue_through_prefix(x),
            Chain::Bsgs(b) => b.residue_through_prefix(x),
        }
    }

    /// Generators of the pointwise stabilizer of the prefix.
    pub(crate) fn prefix_stabilizer_gens(&self) -> Vec<Permutation> {
        match self {
            Chain::Cyclic(c) => c.prefix_stabilizer_gens(),
            Chain::Bsgs(b) => b.prefix_stabilizer_gens(),
        }
    }

    /// A representative of the right coset `N x` that depends only on the coset.
    pub(crate) fn canonical_coset_rep(&self, x: &Permutation) -> Permutation {
        match self {
            Chain::Cyclic(c) => c.canonical_coset_rep(x),
            Chain::Bsgs(b) => b.canonical_coset_rep(x),
        }
    }
}

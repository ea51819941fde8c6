//! Brute-force oracles over explicit multiplication tables. Nothing here uses
//! stabilizer chains or the library's lattice code; only the element list.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use jhtower::{FiniteGroup, Permutation};

pub struct Cayley {
    pub elements: Vec<Permutation>,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub identity: usize,
}

pub type Set = BTreeSet<usize>;

impl Cayley {
    pub fn new(group: &FiniteGroup) -> Self {
        let elements: Vec<Permutation> = group.elements().unwrap().iter().cloned().collect();
        let index: HashMap<&Permutation, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mul: Vec<Vec<usize>> = elements
            .iter()
            .map(|x| elements.iter().map(|y| index[&x.then(y)]).collect())
            .collect();
        let inv = elements.iter().map(|x| index[&x.inverse()]).collect();
        let identity = index[&group.identity()];
        Cayley { elements, mul, inv, identity }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self, p: &Permutation) -> usize {
        self.elements.iter().position(|x| x == p).expect("element of the group")
    }

    pub fn set_of(&self, group: &FiniteGroup) -> Set {
        group.elements().unwrap().iter().map(|p| self.index(p)).collect()
    }

    /// Closure under products of the given elements.
    pub fn generate(&self, seed: &Set) -> Set {
        let mut out: Set = BTreeSet::from([self.identity]);
        let mut frontier: Vec<usize> = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in seed {
                let y = self.mul[x][g];
                if out.insert(y) {
                    frontier.push(y);
                }
            }
        }
        out
    }

    pub fn conj(&self, x: usize, h: usize) -> usize {
        self.mul[self.mul[self.inv[h]][x]][h]
    }

    /// A generating set of the subgroup `g`, picked greedily.
    pub fn generators_of(&self, g: &Set) -> Vec<usize> {
        let mut gens: Set = Set::new();
        let mut span = self.generate(&gens);
        for &x in g {
            if !span.contains(&x) {
                gens.insert(x);
                span = self.generate(&gens);
            }
        }
        gens.into_iter().collect()
    }

    /// Smallest normal subgroup of `within` containing `seed`.
    pub fn normal_closure(&self, within: &Set, seed: &Set) -> Set {
        let gens = self.generators_of(within);
        let mut current = self.generate(seed);
        loop {
            let conjugates: Set = current
                .iter()
                .flat_map(|&x| gens.iter().map(move |&h| (x, h)))
                .map(|(x, h)| self.conj(x, h))
                .chain(current.iter().copied())
                .collect();
            let next = self.generate(&conjugates);
            if next == current {
                return current;
            }
            current = next;
        }
    }

    pub fn is_subgroup(&self, s: &Set) -> bool {
        s.contains(&self.identity) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&self.mul[a][b])))
    }

    pub fn is_normal_in(&self, n: &Set, g: &Set) -> bool {
        n.iter().all(|&x| g.iter().all(|&h| n.contains(&self.conj(x, h))))
    }

    /// Every normal subgroup of `g`: joins of normal closures of single
    /// elements, iterated to a fixed point.
    pub fn normal_lattice(&self, g: &Set) -> BTreeSet<Set> {
        let gens = self.generators_of(g);
        let mut seen = Set::new();
        let mut closures: BTreeSet<Set> = BTreeSet::new();
        for &x in g {
            if seen.contains(&x) {
                continue;
            }
            let closure = self.normal_closure(g, &BTreeSet::from([x]));
            // Conjugates of x have the same closure.
            let mut class = vec![x];
            let mut k = 0;
            while k < class.len() {
                for &h in &gens {
                    let y = self.conj(class[k], h);
                    if seen.insert(y) {
                        class.push(y);
                    }
                }
                k += 1;
            }
            seen.insert(x);
            closures.insert(closure);
        }
        let atoms: Vec<Set> = closures.iter().cloned().collect();
        let mut lattice = closures;
        loop {
            let mut added = Vec::new();
            for n in &lattice {
                for a in &atoms {
                    if a.is_subset(n) {
                        continue;
                    }
                    let join: Set = self.generate(&n.union(a).cloned().collect());
                    if !lattice.contains(&join) {
                        added.push(join);
                    }
                }
            }
            if added.is_empty() {
                return lattice;
            }
            lattice.extend(added);
        }
    }

    pub fn commutator_subgroup(&self, g: &Set) -> Set {
        let comms: Set = g
            .iter()
            .flat_map(|&a| g.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.mul[self.mul[self.inv[a]][self.inv[b]]][self.mul[a][b]])
            .collect();
        self.generate(&comms)
    }

    /// Solvability by iterating the derived subgroup.
    pub fn solvable(&self, g: &Set) -> bool {
        let mut current = g.clone();
        loop {
            if current.len() == 1 {
                return true;
            }
            let next = self.commutator_subgroup(&current);
            if next.len() == current.len() {
                return false;
            }
            current = next;
        }
    }

    /// `{ab : a in A, b in B}`.
    pub fn product(&self, a: &Set, b: &Set) -> Set {
        a.iter().flat_map(|&x| b.iter().map(move |&y| self.mul[x][y])).collect()
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul[y][x];
            k += 1;
        }
        k
    }

    /// Composition factors by descent through a largest proper normal
    /// subgroup of the lattice oracle. Nonabelian factors are named by order: the corpus
    /// only has one simple group of each such order.
    pub fn composition_factors(&self, g: &Set) -> BTreeMap<String, u64> {
        let mut out = BTreeMap::new();
        let mut current = g.clone();
        while current.len() > 1 {
            let lattice = self.normal_lattice(&current);
            let maximal = lattice
                .iter()
                .filter(|n| n.len() < current.len())
                .max_by_key(|n| n.len())
                .expect("trivial subgroup is proper")
                .clone();
            let index = current.len() / maximal.len();
            *out.entry(simple_name(index)).or_default() += 1;
            current = maximal;
        }
        out
    }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Name of the simple group of the given order within the corpus range.
pub fn simple_name(order: usize) -> String {
    if is_prime(order) {
        return format!("C{order}");
    }
    match order {
        60 => "A5".into(),
        168 => "PSL2(7)".into(),
        360 => "A6".into(),
        660 => "PSL2(11)".into(),
        _ => panic!("no simple group of order {order} expected"),
    }
}

/// Prime factorization as a factor multiset of `C_n`.
pub fn cyclic_factors(mut n: usize) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    let mut p = 2;
    while n > 1 {
        while n % p == 0 {
            *out.entry(format!("C{p}")).or_default() += 1;
            n /= p;
        }
        p += 1;
    }
    out
}

/// Library factor multiset as a name map.
pub fn named(m: &jhtower::FactorMultiset) -> BTreeMap<String, u64> {
    m.iter().map(|(t, c)| (t.to_string(), c)).collect()
}

/// Random-looking subset of indices from a list of picks.
pub fn pick(len: usize, picks: &[usize]) -> Set {
    picks.iter().map(|p| p % len).collect()
}

//! Labels for finite simple groups.
//!
//! Abelian simple groups are recognized by their prime order. Nonabelian ones
//! are matched against alternating groups and `PSL2(q)` by order and by the
//! element-order histogram; anything else is kept as an opaque `Other` label.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{is_prime, is_simple, FiniteGroup};
use crate::iso::find_isomorphism;

/// Element order -> number of elements of that order.
pub type Fingerprint = BTreeMap<u64, u64>;

/// Groups up to this order are compared by brute-force isomorphism search when
/// their labels cannot tell them apart.
pub const ISOMORPHISM_SEARCH_BOUND: u128 = 2_000;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SimpleType {
    Cyclic(u64),
    Alternating(u32),
    Psl2(u64),
    Other { order: u128, fingerprint: Fingerprint },
}

impl SimpleType {
    pub fn order(&self) -> u128 {
        match self {
            SimpleType::Cyclic(p) => *p as u128,
            SimpleType::Alternating(n) => alternating_order(*n),
            SimpleType::Psl2(q) => psl2_order(*q),
            SimpleType::Other { order, .. } => *order,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, SimpleType::Cyclic(_))
    }

    /// Short hex digest of the fingerprint, used in the `Other` label.
    pub fn fingerprint_hash(fingerprint: &Fingerprint) -> String {
        let mut hasher = Sha256::new();
        for (o, c) in fingerprint {
            hasher.update(format!("{o}:{c};"));
        }
        hex::encode(&hasher.finalize()[..8])
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Cyclic(p) => write!(f, "C{p}"),
            SimpleType::Alternating(n) => write!(f, "A{n}"),
            SimpleType::Psl2(q) => write!(f, "PSL2({q})"),
            SimpleType::Other { order, fingerprint } => {
                write!(f, "Other(order={order},h={})", Self::fingerprint_hash(fingerprint))
            }
        }
    }
}

impl Serialize for SimpleType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn alternating_order(n: u32) -> u128 {
    (1..=n as u128).product::<u128>() / 2
}

fn psl2_order(q: u64) -> u128 {
    let q = q as u128;
    let d = if q % 2 == 1 { 2 } else { 1 };
    q * (q * q - 1) / d
}

/// Element-order histogram of a group.
pub fn fingerprint(group: &FiniteGroup) -> Result<Fingerprint> {
    let elements = group.elements()?;
    Ok(elements
        .as_slice()
        .par_iter()
        .fold(BTreeMap::new, |mut acc: Fingerprint, x| {
            *acc.entry(x.order()).or_default() += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        }))
}

fn partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for k in (1..=n.min(max)).rev() {
        prefix.push(k);
        partitions(n - k, k, prefix, out);
        prefix.pop();
    }
}

/// Element-order histogram of `A_n`, counted over even cycle types.
pub fn alternating_fingerprint(n: u32) -> Fingerprint {
    let mut all = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut all);
    let factorial = |k: u32| (1..=k as u128).product::<u128>();
    let mut fp = Fingerprint::new();
    for parts in all {
        let transpositions: u32 = parts.iter().map(|k| k - 1).sum();
        if transpositions % 2 == 1 {
            continue;
        }
        let mut multiplicity: BTreeMap<u32, u32> = BTreeMap::new();
        for &k in &parts {
            *multiplicity.entry(k).or_default() += 1;
        }
        let centralizer: u128 = multiplicity
            .iter()
            .map(|(&k, &m)| (k as u128).pow(m) * factorial(m))
            .product();
        let order = parts.iter().fold(1u64, |acc, &k| acc.lcm(&(k as u64)));
        *fp.entry(order).or_default() += (factorial(n) / centralizer) as u64;
    }
    fp
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Characteristic of `q` if it is a prime power.
fn prime_power_base(q: u64) -> Option<u64> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    (r == 1).then_some(p)
}

/// Element-order histogram of `PSL2(q)` for a prime power `q >= 4`: the
/// unipotent elements have order `p`, and the split and nonsplit tori are
/// cyclic of orders `(q-1)/d` and `(q+1)/d`.
pub fn psl2_fingerprint(q: u64) -> Fingerprint {
    let p = prime_power_base(q).expect("q must be a prime power");
    let d = if q % 2 == 1 { 2 } else { 1 };
    let mut fp = Fingerprint::new();
    fp.insert(1, 1);
    *fp.entry(p).or_default() += q * q - 1;
    for k in divisors((q - 1) / d).into_iter().filter(|&k| k > 1) {
        *fp.entry(k).or_default() += euler_phi(k) * q * (q + 1) / 2;
    }
    for k in divisors((q + 1) / d).into_iter().filter(|&k| k > 1) {
        *fp.entry(k).or_default() += euler_phi(k) * q * (q - 1) / 2;
    }
    fp
}

/// Label of a group already known to be simple.
pub(crate) fn label_simple(group: &FiniteGroup) -> Result<SimpleType> {
    let order = group.order();
    if is_prime(order) {
        return Ok(SimpleType::Cyclic(order as u64));
    }
    let fp = fingerprint(group)?;
    let mut n = 5u32;
    while alternating_order(n) <= order {
        if alternating_order(n) == order && alternating_fingerprint(n) == fp {
            return Ok(SimpleType::Alternating(n));
        }
        n += 1;
    }
    let mut q = 4u64;
    while psl2_order(q) / 2 <= order {
        if psl2_order(q) == order
            && prime_power_base(q).is_some()
            && psl2_fingerprint(q) == fp
        {
            return Ok(SimpleType::Psl2(q));
        }
        q += 1;
    }
    Ok(SimpleType::Other { order, fingerprint: fp })
}

/// Label of a simple group; fails with `NotSimple` otherwise.
pub fn identify(group: &FiniteGroup) -> Result<SimpleType> {
    match is_simple(group) {
        Ok(true) => label_simple(group),
        Ok(false) | Err(Error::TrivialGroup) => Err(Error::NotSimple),
        Err(e) => Err(e),
    }
}

/// Whether two simple groups are isomorphic.
pub fn same_type(a: &FiniteGroup, b: &FiniteGroup) -> Result<bool> {
    let la = identify(a)?;
    let lb = identify(b)?;
    if la != lb {
        return Ok(false);
    }
    if !matches!(la, SimpleType::Other { .. }) {
        return Ok(true);
    }
    if a.order() > ISOMORPHISM_SEARCH_BOUND {
        return Err(Error::Ambiguous);
    }
    Ok(find_isomorphism(a, b)?.is_some())
}

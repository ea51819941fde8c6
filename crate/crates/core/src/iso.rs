//! Brute-force isomorphism search by backtracking over generator images.

use std::collections::HashMap;

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;
use crate::simple::{fingerprint, ISOMORPHISM_SEARCH_BOUND};

/// Drops generators that lie in the span of the earlier ones.
pub(crate) fn irredundant_generators(group: &FiniteGroup) -> Vec<Permutation> {
    let mut chain = Chain::build(group.degree(), &[], &[]);
    let mut gens = Vec::new();
    for g in group.generators() {
        if !chain.contains(g) {
            chain.add_generator(g);
            gens.push(g.clone());
        }
    }
    gens
}

/// Images of the (irredundant) generators of `a` under an isomorphism onto `b`,
/// together with those generators, or `None` if the groups are not isomorphic.
pub fn find_isomorphism(
    a: &FiniteGroup,
    b: &FiniteGroup,
) -> Result<Option<(Vec<Permutation>, Vec<Permutation>)>> {
    for g in [a, b] {
        if g.order() > ISOMORPHISM_SEARCH_BOUND {
            return Err(Error::BoundExceeded {
                what: "isomorphism search order",
                size: g.order(),
                bound: ISOMORPHISM_SEARCH_BOUND,
            });
        }
    }
    if a.order() != b.order() || fingerprint(a)? != fingerprint(b)? {
        return Ok(None);
    }
    let gens = irredundant_generators(a);
    if gens.is_empty() {
        return Ok(Some((gens, Vec::new())));
    }
    let b_elements = b.elements()?;
    let candidates: Vec<Vec<&Permutation>> = gens
        .iter()
        .map(|g| {
            let o = g.order();
            b_elements.iter().filter(|y| y.order() == o).collect()
        })
        .collect();
    let a_elements = a.elements()?;
    let mut chosen: Vec<Permutation> = Vec::with_capacity(gens.len());
    let found = backtrack(&gens, &candidates, &mut chosen, a_elements.len(), b.degree());
    Ok(found.map(|images| (gens, images)))
}

fn backtrack(
    gens: &[Permutation],
    candidates: &[Vec<&Permutation>],
    chosen: &mut Vec<Permutation>,
    order: usize,
    b_degree: usize,
) -> Option<Vec<Permutation>> {
    let k = chosen.len();
    if k == gens.len() {
        return extends_to_isomorphism(gens, chosen, order, b_degree).then(|| chosen.clone());
    }
    for &y in &candidates[k] {
        let consistent = (0..k).all(|i| {
            gens[i].then(&gens[k]).order() == chosen[i].then(y).order()
                && gens[k].then(&gens[i]).order() == y.then(&chosen[i]).order()
        });
        if !consistent {
            continue;
        }
        chosen.push(y.clone());
        if let Some(found) = backtrack(gens, candidates, chosen, order, b_degree) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// Walks the Cayley graph of the domain, mapping `x * g_i` to `phi(x) * h_i`.
/// The assignment is a homomorphism iff no element receives two images, and an
/// isomorphism iff in addition the images are distinct.
fn extends_to_isomorphism(
    gens: &[Permutation],
    images: &[Permutation],
    order: usize,
    b_degree: usize,
) -> bool {
    let id = Permutation::identity(gens[0].degree());
    let mut map: HashMap<Permutation, Permutation> = HashMap::with_capacity(order);
    map.insert(id.clone(), Permutation::identity(b_degree));
    let mut queue = vec![id];
    let mut k = 0;
    while k < queue.len() {
        let x = queue[k].clone();
        let fx = map[&x].clone();
        for (g, h) in gens.iter().zip(images) {
            let y = x.then(g);
            let fy = fx.then(h);
            match map.get(&y) {
                Some(existing) if *existing != fy => return false,
                Some(_) => {}
                None => {
                    map.insert(y.clone(), fy);
                    queue.push(y);
                }
            }
        }
        k += 1;
    }
    let mut targets: Vec<&Permutation> = map.values().collect();
    targets.sort();
    targets.dedup();
    targets.len() == map.len()
}

//! Homomorphisms given by generator images, kernels, and coset quotients.
//!
//! A generator assignment `g_i -> h_i` is checked through its graph group
//! `D = <(g_i, h_i)>` acting on the disjoint union of both point sets: the
//! assignment extends to a homomorphism exactly when `D` projects injectively
//! onto the domain, i.e. when `|D| = |domain|`. With the codomain points as
//! base prefix, the stabilizer of that prefix is `ker x 1`; with the domain
//! points as prefix, sifting `(x, 1)` leaves `(1, phi(x)^-1)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::group::{is_normal, FiniteGroup, Subgroup};
use crate::perm::Permutation;

struct HomInner {
    domain: FiniteGroup,
    codomain: FiniteGroup,
    images: Vec<Permutation>,
    kernel: OnceLock<Subgroup>,
    eval_chain: OnceLock<Chain>,
    lift_chain: OnceLock<Chain>,
}

/// A homomorphism between finite permutation groups, determined by the images
/// of the domain generators.
#[derive(Clone)]
pub struct GroupHom {
    inner: Arc<HomInner>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHom")
            .field("domain_degree", &self.inner.domain.degree())
            .field("codomain_degree", &self.inner.codomain.degree())
            .field("images", &self.inner.images)
            .finish()
    }
}

impl GroupHom {
    /// Validates that the generator images define a homomorphism.
    pub fn new(domain: FiniteGroup, codomain: FiniteGroup, images: Vec<Permutation>) -> Result<Self> {
        if images.len() != domain.generators().len() {
            return Err(Error::NotHomomorphism(format!(
                "{} generator images given for {} generators",
                images.len(),
                domain.generators().len()
            )));
        }
        for img in &images {
            if img.degree() != codomain.degree() {
                return Err(Error::DegreeMismatch {
                    expected: codomain.degree(),
                    found: img.degree(),
                });
            }
            if !codomain.contains(img) {
                return Err(Error::NotInGroup(img.to_string()));
            }
        }
        let hom = GroupHom::unchecked(domain, codomain, images);
        let graph_order = hom.lift_chain().order();
        if graph_order != hom.inner.domain.order() {
            return Err(Error::NotHomomorphism(format!(
                "graph has order {graph_order}, domain has order {}",
                hom.inner.domain.order()
            )));
        }
        Ok(hom)
    }

    fn unchecked(domain: FiniteGroup, codomain: FiniteGroup, images: Vec<Permutation>) -> Self {
        GroupHom {
            inner: Arc::new(HomInner {
                domain,
                codomain,
                images,
                kernel: OnceLock::new(),
                eval_chain: OnceLock::new(),
                lift_chain: OnceLock::new(),
            }),
        }
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        let hom = GroupHom::unchecked(group.clone(), group.clone(), group.generators().to_vec());
        let _ = hom.inner.kernel.set(Subgroup::trivial(group));
        hom
    }

    pub fn domain(&self) -> &FiniteGroup {
        &self.inner.domain
    }

    pub fn codomain(&self) -> &FiniteGroup {
        &self.inner.codomain
    }

    pub fn generator_images(&self) -> &[Permutation] {
        &self.inner.images
    }

    fn graph_generators(&self) -> Vec<Permutation> {
        self.inner
            .domain
            .generators()
            .iter()
            .zip(&self.inner.images)
            .map(|(g, h)| g.direct_sum(h))
            .collect()
    }

    fn lift_chain(&self) -> &Chain {
        self.inner.lift_chain.get_or_init(|| {
            let dd = self.inner.domain.degree();
            let cd = self.inner.codomain.degree();
            let prefix: Vec<u32> = (dd as u32..(dd + cd) as u32).collect();
            Chain::build(dd + cd, &self.graph_generators(), &prefix)
        })
    }

    fn eval_chain(&self) -> &Chain {
        self.inner.eval_chain.get_or_init(|| {
            let dd = self.inner.domain.degree();
            let cd = self.inner.codomain.degree();
            let prefix: Vec<u32> = (0..dd as u32).collect();
            Chain::build(dd + cd, &self.graph_generators(), &prefix)
        })
    }

    /// Image of a domain element.
    pub fn apply(&self, x: &Permutation) -> Result<Permutation> {
        if !self.inner.domain.contains(x) {
            return Err(Error::NotInGroup(x.to_string()));
        }
        let dd = self.inner.domain.degree();
        let cd = self.inner.codomain.degree();
        let lifted = x.direct_sum(&Permutation::identity(cd));
        let residue = self
            .eval_chain()
            .residue_through_prefix(&lifted)
            .expect("domain elements sift through the domain prefix");
        Ok(residue.restrict(dd, cd).inverse())
    }

    /// Some preimage of `y`, or `None` if `y` is not in the image.
    pub fn lift(&self, y: &Permutation) -> Option<Permutation> {
        if y.degree() != self.inner.codomain.degree() {
            return None;
        }
        let dd = self.inner.domain.degree();
        let lifted = Permutation::identity(dd).direct_sum(y);
        let residue = self.lift_chain().residue_through_prefix(&lifted)?;
        Some(residue.restrict(0, dd).inverse())
    }

    pub fn kernel(&self) -> &Subgroup {
        self.inner.kernel.get_or_init(|| {
            let dd = self.inner.domain.degree();
            let gens: Vec<Permutation> = self
                .lift_chain()
                .prefix_stabilizer_gens()
                .iter()
                .map(|g| g.restrict(0, dd))
                .collect();
            let group = FiniteGroup::generated_by(dd, &gens, self.inner.domain.bound());
            Subgroup::from_group_unchecked(self.inner.domain.clone(), group)
        })
    }

    pub fn image_order(&self) -> u128 {
        self.inner.domain.order() / self.kernel().order()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_order() == self.inner.codomain.order()
    }

    pub fn image(&self) -> Subgroup {
        let group = FiniteGroup::generated_by(
            self.inner.codomain.degree(),
            &self.inner.images,
            self.inner.codomain.bound(),
        );
        Subgroup::from_group_unchecked(self.inner.codomain.clone(), group)
    }

    /// Image of a subgroup of the domain.
    pub fn image_of(&self, sub: &FiniteGroup) -> Result<Subgroup> {
        let gens = sub
            .generators()
            .iter()
            .map(|g| self.apply(g))
            .collect::<Result<Vec<_>>>()?;
        let group = FiniteGroup::generated_by(
            self.inner.codomain.degree(),
            &gens,
            self.inner.codomain.bound(),
        );
        Ok(Subgroup::from_group_unchecked(self.inner.codomain.clone(), group))
    }

    /// Full preimage of a subgroup of the codomain.
    pub fn preimage(&self, sub: &FiniteGroup) -> Result<Subgroup> {
        let mut gens: Vec<Permutation> = self.kernel().generators().to_vec();
        for y in sub.generators() {
            if y.is_identity() {
                continue;
            }
            let x = self
                .lift(y)
                .ok_or_else(|| Error::NotInGroup(format!("{y} is not in the image")))?;
            gens.push(x);
        }
        let group =
            FiniteGroup::generated_by(self.inner.domain.degree(), &gens, self.inner.domain.bound());
        Ok(Subgroup::from_group_unchecked(self.inner.domain.clone(), group))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if !next.inner.domain.same_elements(&self.inner.codomain) {
            return Err(Error::InvalidArgument(
                "composition needs matching codomain and domain".into(),
            ));
        }
        let images = self
            .inner
            .images
            .iter()
            .map(|h| next.apply(h))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupHom::unchecked(
            self.inner.domain.clone(),
            next.inner.codomain.clone(),
            images,
        ))
    }
}

/// Kernel of a homomorphism.
pub fn kernel(hom: &GroupHom) -> Subgroup {
    hom.kernel().clone()
}

/// Quotient by a normal subgroup, realized as the action on right cosets.
///
/// Cosets are labelled in increasing order of their canonical representative,
/// so the result depends only on the group and the subgroup.
pub fn quotient(group: &FiniteGroup, normal: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    let sub = normal.group();
    if !is_normal(group, sub) {
        return Err(Error::NotNormal);
    }
    let index = group.order() / sub.order();
    if index > group.bound() as u128 {
        return Err(Error::BoundExceeded {
            what: "quotient index",
            size: index,
            bound: group.bound() as u128,
        });
    }
    let chain = sub.chain();
    let gens = group.generators();
    let start = chain.canonical_coset_rep(&group.identity());
    let mut reps: Vec<Permutation> = vec![start.clone()];
    let mut label: HashMap<Permutation, usize> = HashMap::from([(start, 0)]);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < reps.len() {
        let mut row = Vec::with_capacity(gens.len());
        for g in gens {
            let y = chain.canonical_coset_rep(&reps[k].then(g));
            let next = match label.get(&y) {
                Some(&i) => i,
                None => {
                    let i = reps.len();
                    label.insert(y.clone(), i);
                    reps.push(y);
                    i
                }
            };
            row.push(next);
        }
        edges.push(row);
        k += 1;
    }
    debug_assert_eq!(reps.len() as u128, index);
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&a, &b| reps[a].cmp(&reps[b]));
    let mut relabel = vec![0u32; reps.len()];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new as u32;
    }
    let images: Vec<Permutation> = (0..gens.len())
        .map(|gi| {
            let mut img = vec![0u32; reps.len()];
            for (old, row) in edges.iter().enumerate() {
                img[relabel[old] as usize] = relabel[row[gi]];
            }
            Permutation::from_images_unchecked(img)
        })
        .collect();
    let q = FiniteGroup::from_parts(reps.len(), images.clone(), group.bound(), None);
    let hom = GroupHom::unchecked(group.clone(), q.clone(), images);
    let _ = hom.inner.kernel.set(normal.clone());
    Ok((q, hom))
}

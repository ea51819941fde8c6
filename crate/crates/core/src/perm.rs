//! Permutations of `{0, .., n-1}`.
//!
//! Products are read left to right: `a * b` applies `a` first, then `b`, so
//! `(a * b).apply(i) == b.apply(a.apply(i))`. Cycle notation is 0-based and
//! `(0 1 2)` sends `0 -> 1 -> 2 -> 0`.

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A bijection of `{0, .., degree-1}`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            let i = img as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "image table {images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let pi = p as usize;
                if pi >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} out of range for degree {degree}"
                    )));
                }
                if touched[pi] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} appears in more than one cycle"
                    )));
                }
                touched[pi] = true;
                images[pi] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// Parses cycle notation such as `"(0 1)(2 3 4)"`; `"()"` and `""` are the identity.
    /// Points inside a cycle may be separated by spaces or commas.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::Parse(format!("expected '(' in cycle string {text:?}")));
            };
            let Some(close) = body.find(')') else {
                return Err(Error::Parse(format!("unclosed cycle in {text:?}")));
            };
            let points = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad point {t:?} in {text:?}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = body[close + 1..].trim_start();
        }
        Permutation::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// Smallest point not fixed, if any.
    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &p)| *i as u32 != p)
            .map(|(i, _)| i as u32)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// `self * other`: apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in product");
        Permutation {
            images: self.images.iter().map(|&p| other.images[p as usize]).collect(),
        }
    }

    /// `other^-1 * self * other`.
    pub fn conjugate_by(&self, other: &Permutation) -> Self {
        let mut images = vec![0u32; self.degree()];
        for (i, &p) in self.images.iter().enumerate() {
            images[other.images[i] as usize] = other.images[p as usize];
        }
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// `self^-1 * other^-1 * self * other`.
    pub fn commutator(&self, other: &Permutation) -> Self {
        self.inverse()
            .then(&other.inverse())
            .then(self)
            .then(other)
    }

    /// Disjoint cycles, including fixed points as 1-cycles, each starting at its least point.
    pub fn all_cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start as u32;
            while !seen[p as usize] {
                seen[p as usize] = true;
                cycle.push(p);
                p = self.images[p as usize];
            }
            out.push(cycle);
        }
        out
    }

    /// Nontrivial cycles only.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        self.all_cycles().into_iter().filter(|c| c.len() > 1).collect()
    }

    /// Element order: the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.all_cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// `self^k` for any integer `k`, computed cycle by cycle.
    pub fn pow(&self, k: i128) -> Self {
        let mut images = vec![0u32; self.degree()];
        for cycle in self.all_cycles() {
            let len = cycle.len() as i128;
            let shift = k.rem_euclid(len) as usize;
            for (i, &p) in cycle.iter().enumerate() {
                images[p as usize] = cycle[(i + shift) % cycle.len()];
            }
        }
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// Moves the permutation onto points `offset..offset+degree` of a larger set.
    pub fn embed(&self, offset: usize, total_degree: usize) -> Self {
        assert!(offset + self.degree() <= total_degree);
        let mut images: Vec<u32> = (0..total_degree as u32).collect();
        for (i, &p) in self.images.iter().enumerate() {
            images[offset + i] = offset as u32 + p;
        }
        Permutation {
            images: images.into_boxed_slice(),
        }
    }

    /// Restriction to `offset..offset+len`, which must be an invariant block.
    pub fn restrict(&self, offset: usize, len: usize) -> Self {
        let images: Vec<u32> = self.images[offset..offset + len]
            .iter()
            .map(|&p| p - offset as u32)
            .collect();
        Permutation::from_images_unchecked(images)
    }

    /// Concatenates two permutations acting on disjoint point blocks.
    pub fn direct_sum(&self, other: &Permutation) -> Self {
        let offset = self.degree() as u32;
        let images: Vec<u32> = self
            .images
            .iter()
            .copied()
            .chain(other.images.iter().map(|&p| p + offset))
            .collect();
        Permutation {
            images: images.into_boxed_slice(),
        }
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn product_order_is_left_to_right() {
        let a = p("(0 1)", 3);
        let b = p("(1 2)", 3);
        // 0 -a-> 1 -b-> 2
        assert_eq!((&a * &b).apply(0), 2);
        assert_eq!(a.then(&b), p("(0 2 1)", 3));
    }

    #[test]
    fn parse_accepts_commas_and_identity() {
        assert_eq!(p("(0,1,2)", 4), p("(0 1 2)", 4));
        assert!(p("()", 4).is_identity());
        assert!(p("", 4).is_identity());
        assert!(Permutation::parse_cycles("(0 1", 3).is_err());
        assert!(Permutation::parse_cycles("(0 5)", 3).is_err());
        assert!(Permutation::parse_cycles("(0 1)(1 2)", 3).is_err());
        assert!(Permutation::parse_cycles("(a b)", 3).is_err());
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_images(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn order_and_powers() {
        let g = p("(0 1 2)(3 4)", 5);
        assert_eq!(g.order(), 6);
        assert!(g.pow(6).is_identity());
        assert_eq!(g.pow(-1), g.inverse());
        assert_eq!(g.pow(2), g.then(&g));
        assert_eq!(g.pow(7), g);
    }

    #[test]
    fn conjugation_and_commutator() {
        let a = p("(0 1 2)", 4);
        let b = p("(2 3)", 4);
        assert_eq!(a.conjugate_by(&b), b.inverse().then(&a).then(&b));
        assert_eq!(
            a.commutator(&b),
            a.inverse().then(&b.inverse()).then(&a).then(&b)
        );
        assert!(a.commutator(&a).is_identity());
    }

    #[test]
    fn display_round_trips() {
        let g = p("(3 4)(0 2 1)", 6);
        assert_eq!(g.to_string(), "(0 2 1)(3 4)");
        assert_eq!(p(&g.to_string(), 6), g);
    }

    #[test]
    fn embed_and_direct_sum() {
        let a = p("(0 1)", 2);
        let b = p("(0 1 2)", 3);
        let s = a.direct_sum(&b);
        assert_eq!(s, p("(0 1)(2 3 4)", 5));
        assert_eq!(b.embed(2, 5), p("(2 3 4)", 5));
        assert_eq!(s.restrict(2, 3), b);
    }
}

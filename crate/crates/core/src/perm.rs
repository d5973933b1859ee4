//! Groups of automorphisms held as explicit permutations.
//!
//! An automorphism is determined by its values on a generating set (the
//! "base"), so elements are keyed by those values. Products are formed on
//! the base only and looked up.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::GroupLike;

const KEY_BITS: usize = 12;
const MAX_BASE: usize = 128 / KEY_BITS;

/// A permutation group of some `G`, with elements sorted lexicographically
/// by image array (so the identity is element 0). `mul(x, y)` is `x ∘ y`.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    base: Vec<usize>,
    elems: Vec<Vec<u32>>,
    index: HashMap<u128, usize>,
    inv: Vec<usize>,
    gens: Vec<usize>,
}

fn check_base(degree: usize, base: &[usize]) -> Result<()> {
    if base.len() > MAX_BASE || degree > 1 << KEY_BITS {
        return Err(Error::InvalidParams(format!(
            "permutation key supports at most {MAX_BASE} base points of degree {}",
            1 << KEY_BITS
        )));
    }
    Ok(())
}

fn key_of(perm: &[u32], base: &[usize]) -> u128 {
    base.iter().fold(0u128, |acc, &b| (acc << KEY_BITS) | perm[b] as u128)
}

fn key_of_product(a: &[u32], b: &[u32], base: &[usize]) -> u128 {
    base.iter()
        .fold(0u128, |acc, &x| (acc << KEY_BITS) | a[b[x] as usize] as u128)
}

/// `a ∘ b` (apply `b` first).
pub fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn invert(a: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len()];
    for (i, &v) in a.iter().enumerate() {
        out[v as usize] = i as u32;
    }
    out
}

pub fn identity(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

impl PermGroup {
    /// Wraps `perms`, verifying that they form a group. Returns
    /// [`Error::ClosureFailure`] with the offending pair (as indices into
    /// the sorted, deduplicated input) if some product leaves the set.
    pub fn from_perms(mut perms: Vec<Vec<u32>>, degree: usize, base: &[usize]) -> Result<Self> {
        check_base(degree, base)?;
        perms.sort_unstable();
        perms.dedup();
        if perms.first() != Some(&identity(degree)) {
            return Err(Error::InvalidGroup("permutation set lacks the identity".into()));
        }
        let mut index = HashMap::with_capacity(perms.len());
        for (i, p) in perms.iter().enumerate() {
            if index.insert(key_of(p, base), i).is_some() {
                return Err(Error::InvalidGroup(
                    "two permutations agree on the base; base does not generate".into(),
                ));
            }
        }
        let mut g = PermGroup {
            degree,
            base: base.to_vec(),
            elems: perms,
            index,
            inv: Vec::new(),
            gens: Vec::new(),
        };
        // Greedy generators; closing each new span checks products.
        let n = g.elems.len();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut members = vec![0usize];
        for cand in 1..n {
            if inside[cand] {
                continue;
            }
            g.gens.push(cand);
            let mut head = 0;
            // Restart the closure from the identity with the enlarged set.
            let mut seen = vec![false; n];
            seen[0] = true;
            members.clear();
            members.push(0);
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &s in &g.gens {
                    let k = key_of_product(&g.elems[x], &g.elems[s], &g.base);
                    let y = *g.index.get(&k).ok_or(Error::ClosureFailure { left: x, right: s })?;
                    if g.elems[y] != compose(&g.elems[x], &g.elems[s]) {
                        return Err(Error::ClosureFailure { left: x, right: s });
                    }
                    if !seen[y] {
                        seen[y] = true;
                        members.push(y);
                    }
                }
            }
            inside = seen;
        }
        g.inv = (0..n)
            .map(|x| g.index[&key_of(&invert(&g.elems[x]), &g.base)])
            .collect();
        Ok(g)
    }

    /// The group generated by `gens`, built by breadth-first closure.
    pub fn generate(gens: &[Vec<u32>], degree: usize, base: &[usize], limit: usize) -> Result<Self> {
        check_base(degree, base)?;
        let mut elems = vec![identity(degree)];
        let mut seen: HashMap<u128, ()> = HashMap::new();
        seen.insert(key_of(&elems[0], base), ());
        let mut head = 0;
        while head < elems.len() {
            for s in gens {
                let y = compose(&elems[head], s);
                if seen.insert(key_of(&y, base), ()).is_none() {
                    if elems.len() >= limit {
                        return Err(Error::OrderTooLarge {
                            order: elems.len() + 1,
                            max: limit,
                        });
                    }
                    elems.push(y);
                }
            }
            head += 1;
        }
        Self::from_perms(elems, degree, base)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perm(&self, i: usize) -> &[u32] {
        &self.elems[i]
    }

    pub fn perms(&self) -> &[Vec<u32>] {
        &self.elems
    }

    pub fn position(&self, perm: &[u32]) -> Option<usize> {
        let i = *self.index.get(&key_of(perm, &self.base))?;
        (self.elems[i] == perm).then_some(i)
    }

    pub fn contains(&self, perm: &[u32]) -> bool {
        self.position(perm).is_some()
    }
}

impl GroupLike for PermGroup {
    fn order(&self) -> usize {
        self.elems.len()
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.index[&key_of_product(&self.elems[x], &self.elems[y], &self.base)]
    }

    fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    fn gens(&self) -> &[usize] {
        &self.gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{fingerprint, FiniteGroup};

    #[test]
    fn units_mod_five() {
        let g = FiniteGroup::cyclic(5).unwrap();
        let mul2: Vec<u32> = (0..5).map(|x| (2 * x % 5) as u32).collect();
        let p = PermGroup::generate(&[mul2], 5, g.gens(), 100).unwrap();
        assert_eq!(p.order(), 4);
        assert_eq!(p.perm(0), identity(5).as_slice());
        let f = fingerprint(&p).unwrap();
        assert_eq!(f.exponent, 4);
    }

    #[test]
    fn closure_failure_is_reported() {
        let mul2: Vec<u32> = (0..5).map(|x| (2 * x % 5) as u32).collect();
        let r = PermGroup::from_perms(vec![identity(5), mul2], 5, &[1]);
        assert!(matches!(r, Err(Error::ClosureFailure { .. })));
    }
}

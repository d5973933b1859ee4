use std::collections::HashMap;

use super::{dedup_keep_order, FiniteGroup, GroupHom, GroupLike};
use crate::error::{Error, Result};

/// A subgroup stored as the sorted list of member ids of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<usize>,
}

impl Subgroup {
    /// Wraps a member list after checking it is a subgroup of `g`.
    pub fn new<G: GroupLike>(g: &G, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        let mut mark = vec![false; g.order()];
        for &m in &members {
            if m >= g.order() {
                return Err(Error::InvalidGroup(format!("member {m} out of range")));
            }
            mark[m] = true;
        }
        if !mark[0] {
            return Err(Error::InvalidGroup("subgroup must contain the identity".into()));
        }
        for &x in &members {
            if !mark[g.inv(x)] {
                return Err(Error::InvalidGroup(format!("not closed under inverse at {x}")));
            }
            for &y in &members {
                if !mark[g.mul(x, y)] {
                    return Err(Error::InvalidGroup(format!("not closed at ({x}, {y})")));
                }
            }
        }
        Ok(Subgroup {
            parent_order: g.order(),
            members,
        })
    }

    pub(crate) fn from_sorted_unchecked(parent_order: usize, members: Vec<usize>) -> Self {
        Subgroup { parent_order, members }
    }

    pub fn whole<G: GroupLike>(g: &G) -> Self {
        Subgroup {
            parent_order: g.order(),
            members: (0..g.order()).collect(),
        }
    }

    pub fn trivial<G: GroupLike>(g: &G) -> Self {
        Subgroup {
            parent_order: g.order(),
            members: vec![0],
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.parent_order];
        for &x in &self.members {
            m[x] = true;
        }
        m
    }

    /// Every conjugate `g s g^-1` by a generator of `g` stays inside.
    pub fn is_normal_in<G: GroupLike>(&self, g: &G) -> bool {
        self.normality_witness(g).is_none()
    }

    fn normality_witness<G: GroupLike>(&self, g: &G) -> Option<(usize, usize)> {
        let mask = self.mask();
        for &t in g.gens() {
            let ti = g.inv(t);
            for &s in &self.members {
                if !mask[g.mul(g.mul(t, s), ti)] {
                    return Some((s, t));
                }
            }
        }
        None
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            parent_order: self.parent_order,
            members: self.members.iter().copied().filter(|&x| other.contains(x)).collect(),
        }
    }
}

/// Closure of `seed` under multiplication, always containing the identity.
/// Returned ids are in discovery order.
pub fn closure<G: GroupLike>(g: &G, seed: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut out = vec![0];
    let mut head = 0;
    while head < out.len() {
        let x = out[head];
        head += 1;
        for &s in seed {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
    }
    out
}

pub fn subgroup_generated<G: GroupLike>(g: &G, seed: &[usize]) -> Subgroup {
    let mut members = closure(g, seed);
    members.sort_unstable();
    Subgroup::from_sorted_unchecked(g.order(), members)
}

/// `[A, B]`: generated by `a^-1 b^-1 a b` for `a` in `a_sub`, `b` in `b_sub`.
pub fn commutator_subgroup_pair<G: GroupLike>(g: &G, a_sub: &Subgroup, b_sub: &Subgroup) -> Subgroup {
    let mut seed = Vec::new();
    let mut seen = vec![false; g.order()];
    for &a in a_sub.members() {
        let ai = g.inv(a);
        for &b in b_sub.members() {
            let c = g.mul(g.mul(ai, g.inv(b)), g.mul(a, b));
            if c != 0 && !seen[c] {
                seen[c] = true;
                seed.push(c);
            }
        }
    }
    subgroup_generated(g, &seed)
}

/// Elements of `inside` commuting with every element of `of`.
pub fn centralizer_in<G: GroupLike>(g: &G, inside: &Subgroup, of: &Subgroup) -> Subgroup {
    let members = inside
        .members()
        .iter()
        .copied()
        .filter(|&k| of.members().iter().all(|&h| g.mul(k, h) == g.mul(h, k)))
        .collect();
    Subgroup::from_sorted_unchecked(g.order(), members)
}

/// Coset group `g / n` with its canonical projection. Fails with
/// [`Error::NotNormal`] when `n` is not normal.
pub fn quotient(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    let (q, proj) = quotient_of(g, n)?;
    let hom = GroupHom::from_images_unchecked(g.order(), q.order(), proj);
    Ok((q, hom))
}

/// Quotient for any [`GroupLike`]; returns the coset group and the
/// projection as an image table.
pub fn quotient_of<G: GroupLike>(g: &G, n: &Subgroup) -> Result<(FiniteGroup, Vec<u32>)> {
    if let Some((element, by)) = n.normality_witness(g) {
        return Err(Error::NotNormal { element, by });
    }
    let mut coset = vec![u32::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset[x] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &m in n.members() {
            coset[g.mul(x, m)] = id;
        }
    }
    let q = reps.len();
    let mut mul = Vec::with_capacity(q * q);
    for &a in &reps {
        for &b in &reps {
            mul.push(coset[g.mul(a, b)]);
        }
    }
    let mut gens: Vec<usize> = g
        .gens()
        .iter()
        .map(|&x| coset[x] as usize)
        .filter(|&c| c != 0)
        .collect();
    dedup_keep_order(&mut gens);
    let qg = FiniteGroup::from_table(q, mul, gens, None)?;
    Ok((qg, coset))
}

/// The subgroup as a standalone group, plus the embedding (new id -> old id).
/// New ids follow the order of `s.members()`, so the identity stays at 0.
pub fn subgroup_as_group<G: GroupLike>(g: &G, s: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
    let members = s.members().to_vec();
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let k = members.len();
    let mut mul = Vec::with_capacity(k * k);
    for &a in &members {
        for &b in &members {
            mul.push(pos[&g.mul(a, b)] as u32);
        }
    }
    let all: Vec<usize> = (1..k).collect();
    let sg = FiniteGroup::from_table(k, mul, all.clone(), None)?;
    let gens = super::greedy_generators(&sg, &all);
    Ok((sg.with_gens(gens)?, members))
}

//! Split extensions `G = H ⋊ K` with the complement written on the right.
//!
//! Element `(h, k)` stands for the product `h·k` and has index
//! `h * |K| + k`. The action is left conjugation, `φ(k)(h) = k h k^-1`, so
//! the product law is `(h1, k1)(h2, k2) = (h1 · φ(k1)(h2), k1 k2)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupDoc, GroupLike, Subgroup, MAX_TABLE_ORDER};

/// A homomorphism `K -> Aut(H)` given by the permutations attached to the
/// generators of `K`, extended to every element of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionHom {
    h_order: usize,
    k_order: usize,
    gen_images: Vec<Vec<u32>>,
    table: Vec<u32>,
}

impl ActionHom {
    /// `gen_images[i]` is the permutation of `H` attached to `k.gens()[i]`.
    pub fn new(h: &FiniteGroup, k: &FiniteGroup, gen_images: Vec<Vec<u32>>) -> Result<Self> {
        let nh = h.order();
        let nk = k.order();
        if gen_images.len() != k.gens().len() {
            return Err(Error::InvalidAction(format!(
                "expected {} generator images, got {}",
                k.gens().len(),
                gen_images.len()
            )));
        }
        for (i, img) in gen_images.iter().enumerate() {
            check_automorphism(h, img).map_err(|m| Error::InvalidAction(format!("image of generator {i}: {m}")))?;
        }
        // Breadth-first over K: act(x s) = act(x) ∘ act(s). Revisiting an
        // element must reproduce the same permutation.
        let mut table = vec![u32::MAX; nk * nh];
        for x in 0..nh {
            table[x] = x as u32;
        }
        let mut queue = vec![0usize];
        let mut head = 0;
        let mut next = vec![0u32; nh];
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (gi, &s) in k.gens().iter().enumerate() {
                let y = k.mul(x, s);
                for v in 0..nh {
                    next[v] = table[x * nh + gen_images[gi][v] as usize];
                }
                let row = &mut table[y * nh..(y + 1) * nh];
                if row[0] == u32::MAX {
                    row.copy_from_slice(&next);
                    queue.push(y);
                } else if row != next.as_slice() {
                    return Err(Error::InvalidAction(format!(
                        "generator images violate a relation of K at element {y}"
                    )));
                }
            }
        }
        Ok(ActionHom {
            h_order: nh,
            k_order: nk,
            gen_images,
            table,
        })
    }

    pub fn trivial(h: &FiniteGroup, k: &FiniteGroup) -> Self {
        let id: Vec<u32> = (0..h.order() as u32).collect();
        Self::new(h, k, vec![id; k.gens().len()]).expect("the trivial action is valid")
    }

    /// Builds the action from a closure giving `φ(s)` for each generator `s`.
    pub fn from_fn<F: Fn(usize, usize) -> usize>(h: &FiniteGroup, k: &FiniteGroup, f: F) -> Result<Self> {
        let imgs = k
            .gens()
            .iter()
            .map(|&s| (0..h.order()).map(|x| f(s, x) as u32).collect())
            .collect();
        Self::new(h, k, imgs)
    }

    #[inline]
    pub fn apply(&self, k: usize, h: usize) -> usize {
        self.table[k * self.h_order + h] as usize
    }

    pub fn gen_images(&self) -> &[Vec<u32>] {
        &self.gen_images
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.k_order).all(|k| (0..self.h_order).all(|h| self.apply(k, h) == h))
    }
}

/// Checks that `img` is a bijective homomorphism of `h`.
pub(crate) fn check_automorphism(h: &FiniteGroup, img: &[u32]) -> std::result::Result<(), String> {
    let n = h.order();
    if img.len() != n {
        return Err(format!("permutation has length {}, expected {n}", img.len()));
    }
    let mut seen = vec![false; n];
    for &v in img {
        if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
            return Err("not a permutation".into());
        }
    }
    for x in 0..n {
        for y in 0..n {
            if img[h.mul(x, y)] as usize != h.mul(img[x] as usize, img[y] as usize) {
                return Err(format!("not multiplicative at ({x}, {y})"));
            }
        }
    }
    Ok(())
}

fn sd_mul(h: &FiniteGroup, nk: usize, k: &FiniteGroup, act: &ActionHom, x: usize, y: usize) -> usize {
    let (h1, k1) = (x / nk, x % nk);
    let (h2, k2) = (y / nk, y % nk);
    h.mul(h1, act.apply(k1, h2)) * nk + k.mul(k1, k2)
}

fn sd_gens(h: &FiniteGroup, k: &FiniteGroup) -> Vec<usize> {
    let nk = k.order();
    let mut gens: Vec<usize> = h.gens().iter().map(|&x| x * nk).collect();
    gens.extend(k.gens().iter().copied());
    gens
}

/// `G = H ⋊ K` as a table group together with its factorization data.
#[derive(Clone, Debug)]
pub struct SemidirectGroup {
    group: FiniteGroup,
    h: FiniteGroup,
    k: FiniteGroup,
    action: ActionHom,
    h_sub: Subgroup,
    k_sub: Subgroup,
}

pub fn build_semidirect(h: FiniteGroup, k: FiniteGroup, action: ActionHom) -> Result<SemidirectGroup> {
    SemidirectGroup::new(h, k, action)
}

impl SemidirectGroup {
    pub fn new(h: FiniteGroup, k: FiniteGroup, action: ActionHom) -> Result<Self> {
        if action.h_order != h.order() || action.k_order != k.order() {
            return Err(Error::InvalidAction("action built for different groups".into()));
        }
        let (nh, nk) = (h.order(), k.order());
        let n = nh * nk;
        if n > MAX_TABLE_ORDER {
            return Err(Error::OrderTooLarge {
                order: n,
                max: MAX_TABLE_ORDER,
            });
        }
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                mul.push(sd_mul(&h, nk, &k, &action, x, y) as u32);
            }
        }
        let labels = (0..n)
            .map(|x| {
                let (a, b) = (h.label(x / nk), k.label(x % nk));
                match (a.as_str(), b.as_str()) {
                    ("1", _) => b,
                    (_, "1") => a,
                    _ => format!("{a}*{b}"),
                }
            })
            .collect();
        let group = FiniteGroup::from_table(n, mul, sd_gens(&h, &k), Some(labels))?;
        let h_sub = Subgroup::from_sorted_unchecked(n, (0..nh).map(|x| x * nk).collect());
        let k_sub = Subgroup::from_sorted_unchecked(n, (0..nk).collect());
        Ok(SemidirectGroup {
            group,
            h,
            k,
            action,
            h_sub,
            k_sub,
        })
    }

    pub fn direct(h: FiniteGroup, k: FiniteGroup) -> Result<Self> {
        let act = ActionHom::trivial(&h, &k);
        Self::new(h, k, act)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn k(&self) -> &FiniteGroup {
        &self.k
    }

    pub fn action(&self) -> &ActionHom {
        &self.action
    }

    pub fn h_sub(&self) -> &Subgroup {
        &self.h_sub
    }

    pub fn k_sub(&self) -> &Subgroup {
        &self.k_sub
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn embed_h(&self, h: usize) -> usize {
        h * self.k.order()
    }

    #[inline]
    pub fn embed_k(&self, k: usize) -> usize {
        k
    }

    /// The unique `(h, k)` with `g = h·k`, as ids in `H` and `K`.
    #[inline]
    pub fn factor(&self, g: usize) -> (usize, usize) {
        (g / self.k.order(), g % self.k.order())
    }

    #[inline]
    pub fn compose(&self, h: usize, k: usize) -> usize {
        h * self.k.order() + k
    }

    /// `k^-1 h k` for `h ∈ Hsub`, `k ∈ Ksub` (ids in `G`).
    pub fn conj_power(&self, h: usize, k: usize) -> usize {
        let g = &self.group;
        g.mul(g.mul(g.inv(k), h), k)
    }

    /// `h^k = k^-1 h k` computed in `H` for `h ∈ H`, `k ∈ K`.
    #[inline]
    pub fn h_conj(&self, h: usize, k: usize) -> usize {
        self.action.apply(self.k.inv(k), h)
    }

    pub fn to_doc(&self) -> SemidirectDoc {
        let phi = self
            .k
            .gens()
            .iter()
            .zip(self.action.gen_images())
            .map(|(g, img)| (g.to_string(), img.clone()))
            .collect();
        SemidirectDoc {
            kind: "semidirect".into(),
            h: self.h.to_doc(),
            k: self.k.to_doc(),
            phi,
        }
    }

    pub fn from_doc(doc: &SemidirectDoc) -> Result<Self> {
        if doc.kind != "semidirect" {
            return Err(Error::Document(format!("unexpected kind {:?}", doc.kind)));
        }
        let h = FiniteGroup::from_doc(&doc.h)?;
        let k = FiniteGroup::from_doc(&doc.k)?;
        let mut imgs = Vec::new();
        for g in k.gens() {
            let img = doc
                .phi
                .get(&g.to_string())
                .ok_or_else(|| Error::Document(format!("missing action for generator {g}")))?;
            imgs.push(img.clone());
        }
        let act = ActionHom::new(&h, &k, imgs)?;
        Self::new(h, k, act)
    }
}

/// JSON description `{"kind": "semidirect", "H": .., "K": .., "phi": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectDoc {
    pub kind: String,
    #[serde(rename = "H")]
    pub h: GroupDoc,
    #[serde(rename = "K")]
    pub k: GroupDoc,
    pub phi: BTreeMap<String, Vec<u32>>,
}

/// `H ⋊ K` without a materialized table, for groups too large to tabulate.
#[derive(Clone, Debug)]
pub struct ImplicitSemidirect {
    h: FiniteGroup,
    k: FiniteGroup,
    action: ActionHom,
    gens: Vec<usize>,
}

impl ImplicitSemidirect {
    pub fn new(h: FiniteGroup, k: FiniteGroup, action: ActionHom) -> Self {
        let gens = sd_gens(&h, &k);
        ImplicitSemidirect { h, k, action, gens }
    }
}

impl GroupLike for ImplicitSemidirect {
    fn order(&self) -> usize {
        self.h.order() * self.k.order()
    }

    #[inline]
    fn mul(&self, x: usize, y: usize) -> usize {
        sd_mul(&self.h, self.k.order(), &self.k, &self.action, x, y)
    }

    fn inv(&self, x: usize) -> usize {
        let nk = self.k.order();
        let (h, k) = (x / nk, x % nk);
        let ki = self.k.inv(k);
        // (h k)^-1 = k^-1 h^-1 = φ(k^-1)(h^-1) k^-1
        self.action.apply(ki, self.h.inv(h)) * nk + ki
    }

    fn gens(&self) -> &[usize] {
        &self.gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fingerprint;

    fn c(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    fn power_action(h: usize, k: usize, e: usize) -> SemidirectGroup {
        let (hg, kg) = (c(h), c(k));
        let act = ActionHom::from_fn(&hg, &kg, |_, x| x * e % h).unwrap();
        SemidirectGroup::new(hg, kg, act).unwrap()
    }

    #[test]
    fn trivial_action_is_direct_product() {
        let g = SemidirectGroup::direct(c(3), c(4)).unwrap();
        let d = FiniteGroup::direct_product(&c(3), &c(4)).unwrap();
        assert_eq!(fingerprint(g.group()).unwrap(), fingerprint(&d).unwrap());
    }

    #[test]
    fn inversion_gives_dihedral_eight() {
        let g = power_action(4, 2, 3);
        let f = fingerprint(g.group()).unwrap();
        assert_eq!((f.order, f.center_order, f.exponent), (8, 2, 4));
    }

    #[test]
    fn modular_27() {
        let g = power_action(9, 3, 4);
        g.group().verify_axioms().unwrap();
        let f = fingerprint(g.group()).unwrap();
        assert_eq!((f.exponent, f.center_order, f.derived_subgroup_order), (9, 3, 3));
        // φ(b)(a) = b a b^-1 = a^4, so a^b = b^-1 a b = a^7.
        let (a, b) = (g.embed_h(1), g.embed_k(1));
        assert_eq!(g.conj_power(a, b), g.embed_h(7));
        assert_eq!(g.h_conj(1, 1), 7);
        assert_eq!(g.conj_power(a, 0), a);
    }

    #[test]
    fn rejects_non_automorphism_and_bad_relation() {
        let (h, k) = (c(4), c(2));
        assert!(ActionHom::new(&h, &k, vec![vec![0, 2, 0, 2]]).is_err());
        // Multiplication by 3 on Z_5 has order 4 and cannot come from Z_2.
        let (h, k) = (c(5), c(2));
        assert!(ActionHom::from_fn(&h, &k, |_, x| x * 3 % 5).is_err());
    }

    #[test]
    fn factorization_is_unique_in_d8() {
        let g = power_action(4, 2, 3);
        let (a, b) = (g.embed_h(1), g.embed_k(1));
        let ab = g.group().mul(a, b);
        let hits: Vec<(usize, usize)> = g
            .h_sub()
            .members()
            .iter()
            .flat_map(|&h| g.k_sub().members().iter().map(move |&k| (h, k)))
            .filter(|&(h, k)| g.group().mul(h, k) == ab)
            .collect();
        assert_eq!(hits, vec![(a, b)]);
        assert_eq!(g.factor(ab), (1, 1));
    }

    #[test]
    fn defining_law_and_doc_round_trip() {
        let g = power_action(9, 3, 4);
        let gg = g.group();
        for &h1 in g.h_sub().members() {
            for &k1 in g.k_sub().members() {
                for &h2 in g.h_sub().members() {
                    let twisted = gg.mul(gg.mul(k1, h2), gg.inv(k1));
                    assert!(g.h_sub().contains(twisted));
                    assert_eq!(gg.mul(gg.mul(h1, k1), h2), gg.mul(gg.mul(h1, twisted), k1));
                }
            }
        }
        let doc = g.to_doc();
        let s = serde_json::to_string(&doc).unwrap();
        assert!(s.contains("\"kind\":\"semidirect\""));
        let back = SemidirectGroup::from_doc(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.group(), g.group());
    }

    #[test]
    fn implicit_matches_table() {
        let g = power_action(9, 3, 4);
        let i = ImplicitSemidirect::new(g.h().clone(), g.k().clone(), g.action().clone());
        for x in 0..27 {
            assert_eq!(i.inv(x), g.group().inv(x));
            for y in 0..27 {
                assert_eq!(i.mul(x, y), g.group().mul(x, y));
            }
        }
    }
}

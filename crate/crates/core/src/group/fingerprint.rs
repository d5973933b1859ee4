use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{closure, lcm, quotient, quotient_of, subgroup_generated, FiniteGroup, GroupLike, Subgroup};
use crate::error::{Error, Result};

/// Isomorphism invariants; equal fingerprints are necessary for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoFingerprint {
    pub order: u64,
    pub abelian_invariants_of_abelianization: Vec<u64>,
    pub exponent: u64,
    pub center_order: u64,
    pub conjugacy_class_count: u64,
    pub element_order_histogram: BTreeMap<u64, u64>,
    pub derived_subgroup_order: u64,
}

/// Primary decomposition of an abelian group as sorted prime powers.
///
/// Splits off a cyclic factor of maximal order and recurses on the quotient.
pub fn abelian_invariants(g: &FiniteGroup) -> Result<Vec<u64>> {
    for &a in g.gens() {
        for &b in g.gens() {
            if g.mul(a, b) != g.mul(b, a) {
                return Err(Error::NotAbelian(a, b));
            }
        }
    }
    let mut cyclic_orders = Vec::new();
    let mut cur = g.clone();
    while cur.order() > 1 {
        let orders = cur.element_orders();
        let (x, &o) = orders
            .iter()
            .enumerate()
            .max_by_key(|&(i, &o)| (o, std::cmp::Reverse(i)))
            .expect("nonempty group");
        cyclic_orders.push(o);
        let (q, _) = quotient(&cur, &subgroup_generated(&cur, &[x]))?;
        cur = q;
    }
    let mut out: Vec<u64> = cyclic_orders.into_iter().flat_map(prime_power_parts).collect();
    out.sort_unstable();
    Ok(out)
}

pub(crate) fn prime_power_parts(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn fingerprint<G: GroupLike>(g: &G) -> Result<IsoFingerprint> {
    let n = g.order();
    let orders = g.element_orders();
    let mut hist = BTreeMap::new();
    let mut exponent = 1;
    for &o in &orders {
        *hist.entry(o).or_insert(0) += 1;
        exponent = lcm(exponent, o);
    }
    let gens = g.gens();
    let center = (0..n)
        .filter(|&x| gens.iter().all(|&s| g.mul(x, s) == g.mul(s, x)))
        .count();
    let derived = derived_subgroup(g);
    let (ab, _) = quotient_of(g, &derived)?;
    Ok(IsoFingerprint {
        order: n as u64,
        abelian_invariants_of_abelianization: abelian_invariants(&ab)?,
        exponent,
        center_order: center as u64,
        conjugacy_class_count: class_count(g) as u64,
        element_order_histogram: hist,
        derived_subgroup_order: derived.order() as u64,
    })
}

fn class_count<G: GroupLike>(g: &G) -> usize {
    let n = g.order();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let gens: Vec<(usize, usize)> = g.gens().iter().map(|&s| (s, g.inv(s))).collect();
    for x in 0..n {
        for &(s, si) in &gens {
            let y = g.mul(g.mul(s, x), si);
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx] = ry;
            }
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

/// Normal closure of the commutators of generator pairs.
pub(crate) fn derived_subgroup<G: GroupLike>(g: &G) -> Subgroup {
    let gens = g.gens();
    let mut seed = Vec::new();
    for &a in gens {
        for &b in gens {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            if c != 0 {
                seed.push(c);
            }
        }
    }
    normal_closure(g, seed)
}

fn normal_closure<G: GroupLike>(g: &G, mut seed: Vec<usize>) -> Subgroup {
    loop {
        let members = closure(g, &seed);
        let mut inside = vec![false; g.order()];
        for &m in &members {
            inside[m] = true;
        }
        let mut grew = false;
        for &s in g.gens() {
            let si = g.inv(s);
            for &m in &seed.clone() {
                let c = g.mul(g.mul(s, m), si);
                if !inside[c] {
                    seed.push(c);
                    inside[c] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            let mut members = members;
            members.sort_unstable();
            return Subgroup::from_sorted_unchecked(g.order(), members);
        }
    }
}

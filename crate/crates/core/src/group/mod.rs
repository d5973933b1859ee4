//! Finite groups given by an explicit multiplication table.
//!
//! Elements are dense indices `0..order` and the identity is always `0`.
//! Everything downstream (subgroups, quotients, homomorphism search,
//! fingerprints) works on these indices, either through a concrete
//! [`FiniteGroup`] or through any type implementing [`GroupLike`].

mod fingerprint;
mod hom;
mod iso;
mod json;
mod subgroup;

pub(crate) use fingerprint::prime_power_parts;
pub use fingerprint::{abelian_invariants, fingerprint, IsoFingerprint};
pub use hom::{enumerate_homs, enumerate_homs_with_budget, GroupHom, HOM_SEARCH_LIMIT};
pub use iso::{is_isomorphic_small, IsoVerdict};
pub use json::{GroupDoc, GROUP_DOC_VERSION};
pub use subgroup::{
    centralizer_in, closure, commutator_subgroup_pair, quotient, quotient_of, subgroup_as_group, subgroup_generated,
    Subgroup,
};

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Largest group that gets a materialized multiplication table.
pub const MAX_TABLE_ORDER: usize = 4096;

/// Minimal interface shared by table groups and implicitly represented
/// groups (automorphism groups, large semidirect models).
pub trait GroupLike: Sync {
    fn order(&self) -> usize;
    fn mul(&self, x: usize, y: usize) -> usize;
    fn inv(&self, x: usize) -> usize;
    fn gens(&self) -> &[usize];

    fn pow(&self, x: usize, mut e: u64) -> usize {
        let mut base = x;
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn element_order(&self, x: usize) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn element_orders(&self) -> Vec<u64> {
        (0..self.order()).map(|x| self.element_order(x)).collect()
    }

    fn is_abelian(&self) -> bool {
        let gens = self.gens();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// A finite group with a full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    gens: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl GroupLike for FiniteGroup {
    fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y] as usize
    }

    #[inline]
    fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    fn gens(&self) -> &[usize] {
        &self.gens
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major table. Checks that `0` is a two-sided
    /// identity, that every row is a permutation with an inverse, and that
    /// `gens` generate everything. Associativity is checked separately by
    /// [`FiniteGroup::verify_axioms`].
    pub fn from_table(order: usize, mul: Vec<u32>, gens: Vec<usize>, labels: Option<Vec<String>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        if order > MAX_TABLE_ORDER {
            return Err(Error::OrderTooLarge {
                order,
                max: MAX_TABLE_ORDER,
            });
        }
        if mul.len() != order * order {
            return Err(Error::InvalidGroup(format!(
                "table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if mul.iter().any(|&v| v as usize >= order) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(Error::InvalidGroup("label count differs from order".into()));
            }
        }
        if let Some(&g) = gens.iter().find(|&&g| g >= order) {
            return Err(Error::InvalidGroup(format!("generator {g} out of range")));
        }
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return Err(Error::InvalidGroup(format!("0 is not a two-sided identity at {x}")));
            }
        }
        let mut inv = vec![u32::MAX; order];
        for x in 0..order {
            let row = &mul[x * order..(x + 1) * order];
            match row.iter().position(|&v| v == 0) {
                Some(y) if mul[y * order + x] == 0 => inv[x] = y as u32,
                _ => return Err(Error::InvalidGroup(format!("element {x} has no two-sided inverse"))),
            }
        }
        let g = FiniteGroup {
            order,
            mul,
            inv,
            gens,
            labels,
        };
        let span = closure(&g, &g.gens);
        if span.len() != order {
            return Err(Error::InvalidGroup(format!(
                "generators span {} of {} elements",
                span.len(),
                order
            )));
        }
        Ok(g)
    }

    /// Builds a group by closing `gens` under `op`, starting from `identity`.
    /// Element `0` is the identity; the remaining indices follow breadth-first
    /// discovery order. Returns the group and the element values by index.
    pub fn from_closure<T, F>(identity: T, gens: &[T], op: F) -> Result<(Self, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head].clone();
            head += 1;
            for g in gens {
                let y = op(&x, g);
                if !index.contains_key(&y) {
                    if elems.len() >= MAX_TABLE_ORDER {
                        return Err(Error::OrderTooLarge {
                            order: elems.len() + 1,
                            max: MAX_TABLE_ORDER,
                        });
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let mut mul = Vec::with_capacity(n * n);
        for x in &elems {
            for y in &elems {
                let z = op(x, y);
                let idx = *index
                    .get(&z)
                    .ok_or_else(|| Error::InvalidGroup("operation is not closed on the generated set".into()))?;
                mul.push(idx as u32);
            }
        }
        let mut gen_ids: Vec<usize> = gens.iter().map(|g| index[g]).filter(|&g| g != 0).collect();
        dedup_keep_order(&mut gen_ids);
        let g = FiniteGroup::from_table(n, mul, gen_ids, None)?;
        Ok((g, elems))
    }

    /// Cyclic group of order `m`, generated by element 1, with labels `a^i`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("cyclic group order must be positive".into()));
        }
        if m > MAX_TABLE_ORDER {
            return Err(Error::OrderTooLarge {
                order: m,
                max: MAX_TABLE_ORDER,
            });
        }
        let mut mul = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                mul.push(((x + y) % m) as u32);
            }
        }
        let gens = if m == 1 { vec![] } else { vec![1] };
        let labels = (0..m)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            })
            .collect();
        FiniteGroup::from_table(m, mul, gens, Some(labels))
    }

    /// Cyclic group of order `m` generated by `sym`, labelled `sym^i`.
    pub fn cyclic_named(m: usize, sym: &str) -> Result<Self> {
        let g = Self::cyclic(m)?;
        let labels = (0..m)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => sym.to_string(),
                _ => format!("{sym}^{i}"),
            })
            .collect();
        g.with_labels(labels)
    }

    /// Direct product; element `(i, j)` has index `i * |B| + j`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        if n > MAX_TABLE_ORDER {
            return Err(Error::OrderTooLarge {
                order: n,
                max: MAX_TABLE_ORDER,
            });
        }
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            let (xa, xb) = (x / nb, x % nb);
            for y in 0..n {
                let (ya, yb) = (y / nb, y % nb);
                mul.push((a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32);
            }
        }
        let mut gens: Vec<usize> = a.gens.iter().map(|&g| g * nb).collect();
        gens.extend(b.gens.iter().copied());
        let labels = (0..n)
            .map(|x| product_label(&a.label(x / nb), &b.label(x % nb)))
            .collect();
        FiniteGroup::from_table(n, mul, gens, Some(labels))
    }

    /// Dihedral group of order `2m`, as `Z_m` extended by an inversion.
    pub fn dihedral(m: usize) -> Result<Self> {
        let n = 2 * m;
        if m == 0 || n > MAX_TABLE_ORDER {
            return Err(Error::InvalidParams(format!("bad dihedral parameter {m}")));
        }
        // (r, s) -> index 2r + s; s=1 acts by inversion.
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            let (r1, s1) = (x / 2, x % 2);
            for y in 0..n {
                let (r2, s2) = (y / 2, y % 2);
                let r = if s1 == 0 { r1 + r2 } else { r1 + m - r2 };
                mul.push((2 * (r % m) + (s1 ^ s2)) as u32);
            }
        }
        let mut gens = vec![1];
        if m > 1 {
            gens.insert(0, 2);
        }
        FiniteGroup::from_table(n, mul, gens, None)
    }

    pub fn table(&self) -> &[u32] {
        &self.mul
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::InvalidGroup("label count differs from order".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => format!("g{x}"),
        }
    }

    /// Exhaustive check of associativity plus identity and inverse laws.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order;
        for x in 0..n {
            if self.mul(x, self.inv(x)) != 0 || self.mul(self.inv(x), x) != 0 {
                return Err(Error::InvalidGroup(format!("bad inverse at {x}")));
            }
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({x}, {y}, {z})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Returns the same group with its element ids permuted by `perm`
    /// (old id `x` becomes `perm[x]`). `perm[0]` must be `0`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order;
        if perm.len() != n || perm[0] != 0 {
            return Err(Error::InvalidParams("relabeling must fix the identity".into()));
        }
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[perm[x] * n + perm[y]] = perm[self.mul(x, y)] as u32;
            }
        }
        let gens = self.gens.iter().map(|&g| perm[g]).collect();
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for x in 0..n {
                out[perm[x]] = l[x].clone();
            }
            out
        });
        FiniteGroup::from_table(n, mul, gens, labels)
    }

    /// Replaces the generating list; the new list must still generate.
    pub fn with_gens(mut self, gens: Vec<usize>) -> Result<Self> {
        if closure(&self, &gens).len() != self.order {
            return Err(Error::InvalidGroup("replacement generators do not generate".into()));
        }
        self.gens = gens;
        Ok(self)
    }
}

fn product_label(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", "1") => "1".into(),
        ("1", _) => b.into(),
        (_, "1") => a.into(),
        _ => format!("{a}*{b}"),
    }
}

pub(crate) fn dedup_keep_order(v: &mut Vec<usize>) {
    let mut seen = std::collections::HashSet::new();
    v.retain(|x| seen.insert(*x));
}

/// Drops generators that are redundant given the others, scanning from the
/// end so earlier generators are kept preferentially.
pub fn reduced_generators<G: GroupLike>(g: &G, gens: &[usize]) -> Vec<usize> {
    let mut cur: Vec<usize> = gens.iter().copied().filter(|&x| x != 0).collect();
    dedup_keep_order(&mut cur);
    let target = closure(g, &cur).len();
    let mut i = cur.len();
    while i > 0 {
        i -= 1;
        let mut trial = cur.clone();
        trial.remove(i);
        if closure(g, &trial).len() == target {
            cur = trial;
        }
    }
    cur
}

/// Picks generators greedily from `candidates`: each candidate outside the
/// span of those already picked is added.
pub fn greedy_generators<G: GroupLike>(g: &G, candidates: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    for &c in candidates {
        if inside[c] {
            continue;
        }
        gens.push(c);
        for x in closure(g, &gens) {
            inside[x] = true;
        }
    }
    gens
}

/// Greatest common divisor.
pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

//! Brute-force automorphism search, used as ground truth.
//!
//! Automorphisms are found by assigning images to a generating sequence and
//! replaying the Cayley graph (see [`crate::search`]). Results are kept as
//! generator-image tuples; full permutations are materialized on demand
//! because `Aut(G)` can be far larger than `G`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{greedy_generators, reduced_generators, FiniteGroup, GroupLike};
use crate::search::{self, GenChain, SearchParams};
use crate::semidirect::SemidirectGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutSearchConfig {
    pub node_budget: u64,
    pub order_prune: bool,
    /// 1 runs sequentially; anything else uses the worker pool.
    pub parallel_width: usize,
}

impl Default for AutSearchConfig {
    fn default() -> Self {
        AutSearchConfig {
            node_budget: 500_000_000,
            order_prune: true,
            parallel_width: 0,
        }
    }
}

impl AutSearchConfig {
    fn validate(&self) -> Result<()> {
        if self.node_budget == 0 {
            return Err(Error::InvalidParams("node budget must be positive".into()));
        }
        Ok(())
    }

    fn params(&self) -> SearchParams {
        SearchParams {
            injective: true,
            budget: self.node_budget,
            parallel: self.parallel_width != 1,
            first_only: false,
        }
    }
}

/// A set of automorphisms of one group, stored as images of a fixed
/// generating sequence and sorted by those tuples.
#[derive(Clone, Debug)]
pub struct AutomorphismSet {
    chain: GenChain,
    images: Vec<Vec<u32>>,
    nodes: u64,
}

impl AutomorphismSet {
    pub fn from_images(chain: GenChain, mut images: Vec<Vec<u32>>) -> Self {
        images.sort_unstable();
        images.dedup();
        AutomorphismSet {
            chain,
            images,
            nodes: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn gens(&self) -> &[usize] {
        self.chain.gens()
    }

    pub fn chain(&self) -> &GenChain {
        &self.chain
    }

    pub fn gen_images(&self, i: usize) -> &[u32] {
        &self.images[i]
    }

    pub fn all_gen_images(&self) -> &[Vec<u32>] {
        &self.images
    }

    /// Search nodes spent producing the set (0 if built directly).
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn perm<G: GroupLike>(&self, g: &G, i: usize) -> Vec<u32> {
        let mut f = vec![0u32; g.order()];
        self.chain.materialize_into(g, &self.images[i], &mut f);
        f
    }

    /// All members as permutations, in lexicographic order of the image arrays.
    pub fn sorted_perms<G: GroupLike>(&self, g: &G) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = (0..self.len()).map(|i| self.perm(g, i)).collect();
        out.sort_unstable();
        out
    }

    /// Position of the automorphism `perm` in this set, if present.
    pub fn index_of(&self, perm: &[u32]) -> Option<usize> {
        let key: Vec<u32> = self.chain.gens().iter().map(|&s| perm[s]).collect();
        self.images.binary_search(&key).ok()
    }
}

fn candidates<G: GroupLike>(g: &G, chain: &GenChain, cfg: &AutSearchConfig) -> Vec<Vec<u32>> {
    if cfg.order_prune {
        search::order_candidates(&g.element_orders(), chain, true)
    } else {
        let all: Vec<u32> = (1..g.order() as u32).collect();
        vec![all; chain.gens().len()]
    }
}

/// Every automorphism of `g`.
pub fn brute_force_aut<G: GroupLike>(g: &G, cfg: &AutSearchConfig) -> Result<AutomorphismSet> {
    cfg.validate()?;
    let chain = GenChain::new(g, &reduced_generators(g, g.gens()));
    let cands = candidates(g, &chain, cfg);
    let out = search::search(&chain, g, &cands, cfg.params(), |imgs, _| Some(imgs.to_vec()))?;
    let mut set = AutomorphismSet::from_images(chain, out.items);
    set.nodes = out.nodes;
    Ok(set)
}

/// `|Aut(g)|` without storing the automorphisms.
pub fn count_aut<G: GroupLike>(g: &G, cfg: &AutSearchConfig) -> Result<u64> {
    cfg.validate()?;
    let chain = GenChain::new(g, &reduced_generators(g, g.gens()));
    let cands = candidates(g, &chain, cfg);
    let out = search::search(&chain, g, &cands, cfg.params(), |_, _| None::<()>)?;
    Ok(out.count)
}

/// How `brute_force_autk` finds its automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutKPath {
    /// Search all of `Aut(G)` and keep those mapping `K` onto `K`.
    Filter,
    /// Put generators of `K` first and only allow images inside `K`.
    Restricted,
}

/// Generating sequence of `G` that starts with generators of `K`.
pub fn k_first_generators(sd: &SemidirectGroup) -> (Vec<usize>, usize) {
    let g = sd.group();
    let kg: Vec<usize> = sd.k().gens().iter().map(|&x| sd.embed_k(x)).collect();
    let kgens = greedy_generators(g, &kg);
    let nk = kgens.len();
    let mut seq = kgens;
    seq.extend(sd.h().gens().iter().map(|&x| sd.embed_h(x)));
    (greedy_generators(g, &seq), nk)
}

/// Automorphisms of `G` mapping `Ksub` onto itself.
pub fn brute_force_autk(sd: &SemidirectGroup, cfg: &AutSearchConfig, path: AutKPath) -> Result<AutomorphismSet> {
    cfg.validate()?;
    let g = sd.group();
    match path {
        AutKPath::Restricted => {
            let (gens, nk) = k_first_generators(sd);
            let chain = GenChain::new(g, &gens);
            let mut cands = candidates(g, &chain, cfg);
            for c in cands.iter_mut().take(nk) {
                c.retain(|&x| sd.k_sub().contains(x as usize));
            }
            let out = search::search(&chain, g, &cands, cfg.params(), |imgs, _| Some(imgs.to_vec()))?;
            let mut set = AutomorphismSet::from_images(chain, out.items);
            set.nodes = out.nodes;
            Ok(set)
        }
        AutKPath::Filter => {
            let chain = GenChain::new(g, &reduced_generators(g, g.gens()));
            let cands = candidates(g, &chain, cfg);
            let kgens: Vec<usize> = sd.k().gens().iter().map(|&x| sd.embed_k(x)).collect();
            let ksub = sd.k_sub();
            let out = search::search(&chain, g, &cands, cfg.params(), |imgs, f| {
                kgens
                    .iter()
                    .all(|&k| ksub.contains(f[k] as usize))
                    .then(|| imgs.to_vec())
            })?;
            let mut set = AutomorphismSet::from_images(chain, out.items);
            set.nodes = out.nodes;
            Ok(set)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutIndex {
    pub aut: u64,
    pub autk: u64,
    pub index: u64,
}

/// `|Aut(G)|`, `|Aut_K(G)|` and the index of the latter.
pub fn aut_index(sd: &SemidirectGroup, cfg: &AutSearchConfig) -> Result<AutIndex> {
    let aut = count_aut(sd.group(), cfg)?;
    let autk = brute_force_autk(sd, cfg, AutKPath::Restricted)?.len() as u64;
    if autk == 0 || aut % autk != 0 {
        return Err(Error::InvalidGroup(format!(
            "|Aut_K| = {autk} does not divide |Aut| = {aut}"
        )));
    }
    Ok(AutIndex {
        aut,
        autk,
        index: aut / autk,
    })
}

/// Exhaustive automorphism test in `O(|G| · gens)`: a bijection with
/// `θ(x s) = θ(x) θ(s)` for every `x` and generator `s` is a homomorphism.
pub fn is_automorphism<G: GroupLike>(g: &G, perm: &[u32]) -> bool {
    let n = g.order();
    if perm.len() != n || perm[0] != 0 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
            return false;
        }
    }
    g.gens().iter().all(|&s| {
        let ts = perm[s] as usize;
        (0..n).all(|x| perm[g.mul(x, s)] as usize == g.mul(perm[x] as usize, ts))
    })
}

/// Distinct inner automorphisms `x ↦ g x g^-1`, sorted.
pub fn inner_automorphisms(g: &FiniteGroup) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (0..g.order())
        .map(|c| {
            let ci = g.inv(c);
            (0..g.order()).map(|x| g.mul(g.mul(c, x), ci) as u32).collect()
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semidirect::ActionHom;

    fn c(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    fn cfg() -> AutSearchConfig {
        AutSearchConfig::default()
    }

    #[test]
    fn small_aut_groups() {
        assert_eq!(brute_force_aut(&c(9), &cfg()).unwrap().len(), 6);
        let v = FiniteGroup::direct_product(&c(2), &c(2)).unwrap();
        assert_eq!(brute_force_aut(&v, &cfg()).unwrap().len(), 6);
        assert_eq!(count_aut(&v, &cfg()).unwrap(), 6);
        let mut no_prune = cfg();
        no_prune.order_prune = false;
        assert_eq!(brute_force_aut(&v, &no_prune).unwrap().len(), 6);
    }

    #[test]
    fn modular_27_index() {
        let (h, k) = (c(9), c(3));
        let act = ActionHom::from_fn(&h, &k, |_, x| x * 7 % 9).unwrap();
        let sd = SemidirectGroup::new(h, k, act).unwrap();
        let idx = aut_index(&sd, &cfg()).unwrap();
        assert_eq!((idx.aut, idx.autk, idx.index), (54, 18, 3));
        let a = brute_force_autk(&sd, &cfg(), AutKPath::Filter).unwrap();
        let b = brute_force_autk(&sd, &cfg(), AutKPath::Restricted).unwrap();
        assert_eq!(a.sorted_perms(sd.group()), b.sorted_perms(sd.group()));
    }

    #[test]
    fn factor_stabilizer_in_z3_squared() {
        let sd = SemidirectGroup::direct(c(3), c(3)).unwrap();
        assert_eq!(count_aut(sd.group(), &cfg()).unwrap(), 48);
        assert_eq!(brute_force_autk(&sd, &cfg(), AutKPath::Filter).unwrap().len(), 12);
    }

    #[test]
    fn results_are_automorphisms_and_contain_inner() {
        let g = FiniteGroup::dihedral(4).unwrap();
        let set = brute_force_aut(&g, &cfg()).unwrap();
        assert_eq!(set.len(), 8);
        let perms = set.sorted_perms(&g);
        assert!(perms.iter().all(|p| is_automorphism(&g, p)));
        for inner in inner_automorphisms(&g) {
            assert!(set.index_of(&inner).is_some());
        }
        assert!(!is_automorphism(&g, &[0, 2, 1, 3, 4, 5, 6, 7]));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let g = FiniteGroup::direct_product(&c(4), &c(4)).unwrap();
        let tight = AutSearchConfig {
            node_budget: 2,
            ..cfg()
        };
        assert!(matches!(
            brute_force_aut(&g, &tight),
            Err(Error::SearchBudgetExceeded { .. })
        ));
    }
}

//! Generator-image backtracking.
//!
//! A [`GenChain`] precomputes, for a source group and an ordered generator
//! list `s_1..s_k`, the breadth-first construction of the subgroup chain
//! `S_j = <s_1..s_j>`. Assigning an image `t_j` to `s_j` then extends a
//! partial map from `S_{j-1}` to `S_j` by replaying "define" steps
//! (`f(x s_g) = f(x) t_g` along a spanning tree) interleaved with "check"
//! steps on the remaining Cayley-graph edges. A full assignment survives iff
//! the generator images extend to a homomorphism; the kernel check on every
//! define step enforces injectivity when requested.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::group::GroupLike;
use crate::par;

#[derive(Clone, Copy, Debug)]
enum Step {
    Define { elem: u32, parent: u32, gen: u32 },
    Check { x: u32, gen: u32, target: u32 },
}

#[derive(Clone, Debug)]
pub struct GenChain {
    gens: Vec<usize>,
    gen_orders: Vec<u64>,
    levels: Vec<Vec<Step>>,
    source_order: usize,
    spans: Vec<usize>,
}

impl GenChain {
    pub fn new<G: GroupLike>(g: &G, gens: &[usize]) -> Self {
        let n = g.order();
        let mut defined = vec![false; n];
        defined[0] = true;
        let mut list = vec![0usize];
        let mut levels = Vec::with_capacity(gens.len());
        let mut spans = Vec::with_capacity(gens.len());
        for j in 0..gens.len() {
            let mut steps = Vec::new();
            let old_len = list.len();
            let mut i = 0;
            while i < list.len() {
                let x = list[i];
                let lo = if i < old_len { j } else { 0 };
                for gi in lo..=j {
                    let y = g.mul(x, gens[gi]);
                    if defined[y] {
                        steps.push(Step::Check {
                            x: x as u32,
                            gen: gi as u32,
                            target: y as u32,
                        });
                    } else {
                        defined[y] = true;
                        list.push(y);
                        steps.push(Step::Define {
                            elem: y as u32,
                            parent: x as u32,
                            gen: gi as u32,
                        });
                    }
                }
                i += 1;
            }
            levels.push(steps);
            spans.push(list.len());
        }
        GenChain {
            gens: gens.to_vec(),
            gen_orders: gens.iter().map(|&s| g.element_order(s)).collect(),
            levels,
            source_order: n,
            spans,
        }
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn gen_orders(&self) -> &[u64] {
        &self.gen_orders
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    /// Size of the subgroup generated by the whole chain.
    pub fn span(&self) -> usize {
        self.spans.last().copied().unwrap_or(1)
    }

    #[inline]
    fn apply_level<T: GroupLike>(&self, j: usize, target: &T, imgs: &[u32], f: &mut [u32], injective: bool) -> bool {
        for step in &self.levels[j] {
            match *step {
                Step::Define { elem, parent, gen } => {
                    let v = target.mul(f[parent as usize] as usize, imgs[gen as usize] as usize);
                    if injective && v == 0 {
                        return false;
                    }
                    f[elem as usize] = v as u32;
                }
                Step::Check { x, gen, target: t } => {
                    let v = target.mul(f[x as usize] as usize, imgs[gen as usize] as usize);
                    if f[t as usize] as usize != v {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Extends generator images to the full map, or `None` if they do not
    /// define a homomorphism. Entries outside the chain's span stay 0.
    pub fn extend<T: GroupLike>(&self, target: &T, imgs: &[u32]) -> Option<Vec<u32>> {
        let mut f = vec![0u32; self.source_order];
        for j in 0..self.levels.len() {
            if !self.apply_level(j, target, imgs, &mut f, false) {
                return None;
            }
        }
        Some(f)
    }

    /// Replays only the spanning-tree steps; assumes `imgs` is known to
    /// extend to a homomorphism.
    pub fn materialize_into<T: GroupLike>(&self, target: &T, imgs: &[u32], f: &mut [u32]) {
        f[0] = 0;
        for level in &self.levels {
            for step in level {
                if let Step::Define { elem, parent, gen } = *step {
                    f[elem as usize] = target.mul(f[parent as usize] as usize, imgs[gen as usize] as usize) as u32;
                }
            }
        }
    }
}

/// Candidate images for each chain generator: elements whose order divides
/// (or, for injective searches, equals) the generator's order.
pub fn order_candidates(target_orders: &[u64], chain: &GenChain, injective: bool) -> Vec<Vec<u32>> {
    chain
        .gen_orders()
        .iter()
        .map(|&o| {
            target_orders
                .iter()
                .enumerate()
                .filter(|&(_, &t)| if injective { t == o } else { o % t == 0 })
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    pub injective: bool,
    pub budget: u64,
    pub parallel: bool,
    pub first_only: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SearchOutcome<R> {
    pub items: Vec<R>,
    pub count: u64,
    pub nodes: u64,
}

struct Shared<'a> {
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    budget: u64,
    first_only: bool,
}

struct Branch<R> {
    items: Vec<R>,
    count: u64,
    local_nodes: u64,
    exceeded: bool,
}

const NODE_FLUSH: u64 = 1 << 12;

impl<R> Branch<R> {
    #[inline]
    fn tick(&mut self, shared: &Shared) -> bool {
        self.local_nodes += 1;
        if self.local_nodes >= NODE_FLUSH {
            let total = shared.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
            self.local_nodes = 0;
            if total > shared.budget {
                self.exceeded = true;
                shared.stop.store(true, Ordering::Relaxed);
            }
        }
        !self.exceeded && !shared.stop.load(Ordering::Relaxed)
    }
}

/// Runs the backtracking search. `leaf` receives the generator images and
/// the full image table of every surviving assignment and returns the item
/// to keep, if any. Items come back in lexicographic order of candidate
/// positions, independent of scheduling.
pub fn search<T, R, F>(
    chain: &GenChain,
    target: &T,
    candidates: &[Vec<u32>],
    params: SearchParams,
    leaf: F,
) -> Result<SearchOutcome<R>>
where
    T: GroupLike,
    R: Send,
    F: Fn(&[u32], &[u32]) -> Option<R> + Sync,
{
    assert_eq!(candidates.len(), chain.levels.len());
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let shared = Shared {
        nodes: &nodes,
        stop: &stop,
        budget: params.budget,
        first_only: params.first_only,
    };
    let k = chain.levels.len();
    if k == 0 {
        let f = vec![0u32; chain.source_order];
        let items: Vec<R> = leaf(&[], &f).into_iter().collect();
        return Ok(SearchOutcome {
            items,
            count: 1,
            nodes: 0,
        });
    }
    let top: Vec<u32> = candidates[0].clone();
    let branches: Vec<Branch<R>> = par::map(&top, params.parallel, |&c| {
        let mut br = Branch {
            items: Vec::new(),
            count: 0,
            local_nodes: 0,
            exceeded: false,
        };
        if shared.stop.load(Ordering::Relaxed) {
            return br;
        }
        let mut imgs = vec![0u32; k];
        let mut f = vec![0u32; chain.source_order];
        if br.tick(&shared) {
            imgs[0] = c;
            if chain.apply_level(0, target, &imgs, &mut f, params.injective) {
                dfs(
                    1, chain, target, candidates, &params, &shared, &leaf, &mut imgs, &mut f, &mut br,
                );
            }
        }
        let total = shared.nodes.fetch_add(br.local_nodes, Ordering::Relaxed) + br.local_nodes;
        br.local_nodes = 0;
        if total > shared.budget {
            br.exceeded = true;
        }
        br
    });
    let total_nodes = nodes.load(Ordering::Relaxed);
    if branches.iter().any(|b| b.exceeded) || total_nodes > params.budget {
        return Err(Error::SearchBudgetExceeded {
            nodes: total_nodes,
            budget: params.budget,
        });
    }
    let mut out = SearchOutcome {
        items: Vec::new(),
        count: 0,
        nodes: total_nodes,
    };
    for b in branches {
        out.count += b.count;
        out.items.extend(b.items);
        if params.first_only && out.count > 0 {
            out.count = 1;
            out.items.truncate(1);
            break;
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs<T, R, F>(
    j: usize,
    chain: &GenChain,
    target: &T,
    candidates: &[Vec<u32>],
    params: &SearchParams,
    shared: &Shared,
    leaf: &F,
    imgs: &mut [u32],
    f: &mut [u32],
    br: &mut Branch<R>,
) where
    T: GroupLike,
    F: Fn(&[u32], &[u32]) -> Option<R>,
{
    if j == chain.levels.len() {
        br.count += 1;
        if let Some(item) = leaf(imgs, f) {
            br.items.push(item);
        }
        if shared.first_only {
            shared.stop.store(true, Ordering::Relaxed);
        }
        return;
    }
    for &c in &candidates[j] {
        if !br.tick(shared) {
            return;
        }
        imgs[j] = c;
        if chain.apply_level(j, target, imgs, f, params.injective) {
            dfs(j + 1, chain, target, candidates, params, shared, leaf, imgs, f, br);
        }
    }
}

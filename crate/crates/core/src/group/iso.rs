use serde::{Deserialize, Serialize};

use super::{fingerprint, reduced_generators, GroupLike};
use crate::error::{Error, Result};
use crate::search::{self, GenChain, SearchParams};

/// Outcome of an isomorphism test. `Unconfirmed` means the fingerprints
/// agree but the explicit search ran out of budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoVerdict {
    Yes,
    No,
    Unconfirmed,
}

/// Per-element invariant used to prune candidate images: (order, size of
/// the centralizer).
fn element_signature<G: GroupLike>(g: &G) -> Vec<(u64, usize)> {
    let orders = g.element_orders();
    let n = g.order();
    (0..n)
        .map(|x| {
            let c = (0..n).filter(|&y| g.mul(x, y) == g.mul(y, x)).count();
            (orders[x], c)
        })
        .collect()
}

/// Decides whether two groups are isomorphic by comparing fingerprints and
/// then searching for an injective generator assignment. A search that
/// exceeds `budget` nodes yields [`IsoVerdict::Unconfirmed`].
pub fn is_isomorphic_small<A: GroupLike, B: GroupLike>(a: &A, b: &B, budget: u64) -> Result<IsoVerdict> {
    if a.order() != b.order() {
        return Ok(IsoVerdict::No);
    }
    if fingerprint(a)? != fingerprint(b)? {
        return Ok(IsoVerdict::No);
    }
    let sa = element_signature(a);
    let sb = element_signature(b);
    let gens = reduced_generators(a, a.gens());
    let chain = GenChain::new(a, &gens);
    let cands: Vec<Vec<u32>> = gens
        .iter()
        .map(|&g| (0..b.order()).filter(|&y| sb[y] == sa[g]).map(|y| y as u32).collect())
        .collect();
    let params = SearchParams {
        injective: true,
        budget,
        parallel: true,
        first_only: true,
    };
    match search::search(&chain, b, &cands, params, |_, _| Some(())) {
        Ok(out) if out.count > 0 => Ok(IsoVerdict::Yes),
        Ok(_) => Ok(IsoVerdict::No),
        Err(Error::SearchBudgetExceeded { .. }) => Ok(IsoVerdict::Unconfirmed),
        Err(e) => Err(e),
    }
}

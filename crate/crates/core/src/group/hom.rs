use super::{reduced_generators, FiniteGroup, GroupLike, Subgroup};
use crate::error::{Error, Result};
use crate::search::{self, GenChain, SearchParams};

/// Largest candidate product `enumerate_homs` will search.
pub const HOM_SEARCH_LIMIT: u64 = 100_000_000;

/// A homomorphism stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    source_order: usize,
    target_order: usize,
    images: Vec<u32>,
}

impl GroupHom {
    pub(crate) fn from_images_unchecked(source_order: usize, target_order: usize, images: Vec<u32>) -> Self {
        GroupHom {
            source_order,
            target_order,
            images,
        }
    }

    /// Checks the homomorphism law exhaustively.
    pub fn from_images<A: GroupLike, B: GroupLike>(a: &A, b: &B, images: Vec<u32>) -> Result<Self> {
        if images.len() != a.order() || images.iter().any(|&v| v as usize >= b.order()) {
            return Err(Error::NotHomomorphism("image table has the wrong shape".into()));
        }
        for x in 0..a.order() {
            for y in 0..a.order() {
                let lhs = images[a.mul(x, y)] as usize;
                let rhs = b.mul(images[x] as usize, images[y] as usize);
                if lhs != rhs {
                    return Err(Error::NotHomomorphism(format!("fails at ({x}, {y})")));
                }
            }
        }
        Ok(Self::from_images_unchecked(a.order(), b.order(), images))
    }

    /// Extends images of `a.gens()` (in order) to a homomorphism.
    pub fn from_generator_images<A: GroupLike, B: GroupLike>(a: &A, b: &B, gen_images: &[usize]) -> Result<Self> {
        if gen_images.len() != a.gens().len() {
            return Err(Error::NotHomomorphism(format!(
                "expected {} generator images, got {}",
                a.gens().len(),
                gen_images.len()
            )));
        }
        if let Some(&v) = gen_images.iter().find(|&&v| v >= b.order()) {
            return Err(Error::NotHomomorphism(format!("image {v} out of range")));
        }
        let chain = GenChain::new(a, a.gens());
        let imgs: Vec<u32> = gen_images.iter().map(|&v| v as u32).collect();
        let images = chain
            .extend(b, &imgs)
            .ok_or_else(|| Error::NotHomomorphism("generator images violate a relation".into()))?;
        Ok(Self::from_images_unchecked(a.order(), b.order(), images))
    }

    pub fn identity(order: usize) -> Self {
        Self::from_images_unchecked(order, order, (0..order as u32).collect())
    }

    pub fn trivial(source_order: usize, target_order: usize) -> Self {
        Self::from_images_unchecked(source_order, target_order, vec![0; source_order])
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn into_images(self) -> Vec<u32> {
        self.images
    }

    pub fn kernel<A: GroupLike>(&self, a: &A) -> Subgroup {
        let members = (0..a.order()).filter(|&x| self.images[x] == 0).collect();
        Subgroup::from_sorted_unchecked(a.order(), members)
    }

    pub fn image_subgroup<B: GroupLike>(&self, b: &B) -> Subgroup {
        let mut members: Vec<usize> = self.images.iter().map(|&v| v as usize).collect();
        members.sort_unstable();
        members.dedup();
        Subgroup::from_sorted_unchecked(b.order(), members)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_order];
        self.images
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target_order];
        for &v in &self.images {
            seen[v as usize] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &GroupHom) -> GroupHom {
        assert_eq!(first.target_order, self.source_order);
        let images = first.images.iter().map(|&v| self.images[v as usize]).collect();
        Self::from_images_unchecked(first.source_order, self.target_order, images)
    }
}

/// All homomorphisms `a -> b`, sorted by their generator-image tuples.
pub fn enumerate_homs(a: &FiniteGroup, b: &FiniteGroup) -> Result<Vec<GroupHom>> {
    enumerate_homs_with_budget(a, b, HOM_SEARCH_LIMIT, false)
}

pub fn enumerate_homs_with_budget<A: GroupLike, B: GroupLike>(
    a: &A,
    b: &B,
    limit: u64,
    parallel: bool,
) -> Result<Vec<GroupHom>> {
    let gens = reduced_generators(a, a.gens());
    let chain = GenChain::new(a, &gens);
    let cands = search::order_candidates(&b.element_orders(), &chain, false);
    let product = cands
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .unwrap_or(u64::MAX);
    if product > limit {
        return Err(Error::SearchBudgetExceeded {
            nodes: product,
            budget: limit,
        });
    }
    let params = SearchParams {
        injective: false,
        budget: u64::MAX,
        parallel,
        first_only: false,
    };
    let out = search::search(&chain, b, &cands, params, |_, f| Some(f.to_vec()))?;
    Ok(out
        .items
        .into_iter()
        .map(|images| GroupHom::from_images_unchecked(a.order(), b.order(), images))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    #[test]
    fn cyclic_hom_counts() {
        assert_eq!(enumerate_homs(&c(3), &c(9)).unwrap().len(), 3);
        let v = FiniteGroup::direct_product(&c(2), &c(2)).unwrap();
        let homs = enumerate_homs(&v, &c(3)).unwrap();
        assert_eq!(homs.len(), 1);
        assert!(homs[0].images().iter().all(|&x| x == 0));
    }

    #[test]
    fn homs_are_sorted_and_valid() {
        let a = FiniteGroup::direct_product(&c(2), &c(4)).unwrap();
        let b = FiniteGroup::dihedral(4).unwrap();
        let homs = enumerate_homs(&a, &b).unwrap();
        for h in &homs {
            GroupHom::from_images(&a, &b, h.images().to_vec()).unwrap();
        }
        let mut sorted = homs.clone();
        sorted.sort_by_key(|h| a.gens().iter().map(|&g| h.image(g)).collect::<Vec<_>>());
        assert_eq!(sorted, homs);
    }

    #[test]
    fn generator_images_must_respect_relations() {
        assert!(GroupHom::from_generator_images(&c(4), &c(6), &[1]).is_err());
        let h = GroupHom::from_generator_images(&c(4), &c(8), &[2]).unwrap();
        assert_eq!(h.image(3), 6);
        assert_eq!(h.kernel(&c(4)).order(), 1);
    }

    #[test]
    fn budget_limit_is_reported() {
        let r = enumerate_homs_with_budget(&c(8), &c(8), 3, false);
        assert!(matches!(r, Err(Error::SearchBudgetExceeded { .. })));
    }
}

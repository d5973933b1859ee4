//! Seeded random semidirect products `H ⋊ Z_k` for probing the
//! decomposition on groups outside the named families.
//!
//! Each instance draws from its own `ChaCha8Rng`, seeded with
//! [`instance_seed`]`(seed, index)`, so any single instance can be
//! regenerated without replaying the ones before it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autk::{self, DecompositionReport};
use crate::error::Result;
use crate::group::{gcd, FiniteGroup, GroupLike};
use crate::oracle::{self, AutSearchConfig};
use crate::par;
use crate::semidirect::{ActionHom, SemidirectDoc, SemidirectGroup};

/// SplitMix64 finalizer applied to `seed + index`.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum HShape {
    /// `Z_{n_1} × ... × Z_{n_j}`.
    Abelian { factors: Vec<u64> },
    /// `Z_m ⋊ Z_n` with `b a b^-1 = a^s`.
    Metacyclic { m: u64, n: u64, s: u64 },
}

impl HShape {
    pub fn order(&self) -> u64 {
        match self {
            HShape::Abelian { factors } => factors.iter().product(),
            HShape::Metacyclic { m, n, .. } => m * n,
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            HShape::Abelian { factors } => {
                let mut g = FiniteGroup::cyclic(1)?;
                for (i, &f) in factors.iter().enumerate() {
                    let sym = match i {
                        0..=3 => ["a", "b", "c", "d"][i].to_string(),
                        _ => format!("x{i}"),
                    };
                    g = FiniteGroup::direct_product(&g, &FiniteGroup::cyclic_named(f as usize, &sym)?)?;
                }
                Ok(g)
            }
            HShape::Metacyclic { m, n, s } => {
                let (a, b) = (
                    FiniteGroup::cyclic_named(*m as usize, "a")?,
                    FiniteGroup::cyclic_named(*n as usize, "b")?,
                );
                let (m, s) = (*m as usize, *s as usize);
                let act = ActionHom::from_fn(&a, &b, |_, x| x * s % m)?;
                Ok(SemidirectGroup::new(a, b, act)?.group().clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzInstance {
    pub index: u64,
    pub seed: u64,
    pub h: HShape,
    pub k_order: u64,
    /// Image of the generator of `K` in `Aut(H)`, as a permutation of `H`.
    pub action: Vec<u32>,
}

impl FuzzInstance {
    pub fn build(&self) -> Result<SemidirectGroup> {
        let h = self.h.build()?;
        let k = FiniteGroup::cyclic_named(self.k_order as usize, "z")?;
        let images = if k.gens().is_empty() {
            vec![]
        } else {
            vec![self.action.clone()]
        };
        let act = ActionHom::new(&h, &k, images)?;
        SemidirectGroup::new(h, k, act)
    }

    pub fn label(&self) -> String {
        let h = match &self.h {
            HShape::Abelian { factors } if factors.is_empty() => "1".to_string(),
            HShape::Abelian { factors } => factors.iter().map(|f| format!("Z{f}")).collect::<Vec<_>>().join("x"),
            HShape::Metacyclic { m, n, s } => format!("Z{m}:Z{n}[{s}]"),
        };
        format!("fuzz#{} ({h}) x| Z{}", self.index, self.k_order)
    }
}

fn draw_h(rng: &mut ChaCha8Rng, budget: u64) -> HShape {
    if budget >= 6 && rng.gen_bool(0.3) {
        // Nonabelian metacyclic Z_m ⋊ Z_n when one fits.
        let mut options = Vec::new();
        for m in 3..=budget {
            for n in 2..=budget / m {
                for s in 2..m {
                    if gcd(s, m) == 1 && (0..n).fold(1, |acc, _| acc * s % m) == 1 {
                        options.push((m, n, s));
                    }
                }
            }
        }
        if let Some(&(m, n, s)) = options.choose(rng) {
            return HShape::Metacyclic { m, n, s };
        }
    }
    let mut factors = Vec::new();
    let mut left = budget;
    let parts = rng.gen_range(1..=3);
    for _ in 0..parts {
        if left < 2 {
            break;
        }
        let f = rng.gen_range(2..=left.min(16));
        factors.push(f);
        left /= f;
    }
    HShape::Abelian { factors }
}

/// Draws instance `index`: `|H| · k ≤ max_order`, and the generator of
/// `K` acts by an automorphism of `H` whose order divides `k`.
pub fn draw_instance(seed: u64, index: u64, max_order: u64, cfg: &AutSearchConfig) -> Result<FuzzInstance> {
    let iseed = instance_seed(seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(iseed);
    let max_order = max_order.max(1);
    let k_order = if max_order >= 2 {
        rng.gen_range(1..=max_order.min(12))
    } else {
        1
    };
    let h = draw_h(&mut rng, max_order / k_order);
    let hg = h.build()?;
    let auts = oracle::brute_force_aut(&hg, cfg)?.sorted_perms(&hg);
    let fits: Vec<&Vec<u32>> = auts
        .iter()
        .filter(|a| {
            let o = perm_order(a);
            k_order % o == 0
        })
        .collect();
    let action = if k_order > 1 && rng.gen_bool(0.85) {
        (*fits.choose(&mut rng).expect("identity always fits")).clone()
    } else {
        (0..hg.order() as u32).collect()
    };
    Ok(FuzzInstance {
        index,
        seed: iseed,
        h,
        k_order,
        action,
    })
}

fn perm_order(p: &[u32]) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut o = 1;
    for i in 0..p.len() {
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j] as usize;
            len += 1;
        }
        if len > 0 {
            o = o / gcd(o, len) * len;
        }
    }
    o
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzResult {
    pub instance: FuzzInstance,
    pub label: String,
    pub order: u64,
    pub report: Option<DecompositionReport>,
    pub error: Option<String>,
}

impl FuzzResult {
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.checks.all())
    }

    pub fn group_doc(&self) -> Option<SemidirectDoc> {
        self.instance.build().ok().map(|sd| sd.to_doc())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub count: u64,
    pub max_order: u64,
    pub passed: u64,
    pub failed: u64,
    pub errors: u64,
    /// Instances where `K` acts nontrivially.
    pub nontrivial_actions: u64,
    pub results: Vec<FuzzResult>,
}

impl FuzzSummary {
    pub fn counterexamples(&self) -> impl Iterator<Item = &FuzzResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

pub fn run_instance(seed: u64, index: u64, max_order: u64, cfg: &AutSearchConfig) -> FuzzResult {
    let inst = match draw_instance(seed, index, max_order, cfg) {
        Ok(i) => i,
        Err(e) => {
            return FuzzResult {
                instance: FuzzInstance {
                    index,
                    seed: instance_seed(seed, index),
                    h: HShape::Abelian { factors: vec![] },
                    k_order: 1,
                    action: vec![0],
                },
                label: format!("fuzz#{index}"),
                order: 0,
                report: None,
                error: Some(e.to_string()),
            }
        }
    };
    let label = inst.label();
    let built = inst.build();
    let (order, outcome) = match built {
        Ok(sd) => (sd.order() as u64, autk::verify_decomposition(&sd, cfg, &label)),
        Err(e) => (0, Err(e)),
    };
    let (report, error) = match outcome {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    FuzzResult {
        instance: inst,
        label,
        order,
        report,
        error,
    }
}

/// Runs `count` instances; results are in index order regardless of the
/// worker count.
pub fn run_fuzz(seed: u64, count: u64, max_order: u64, cfg: &AutSearchConfig) -> FuzzSummary {
    let indices: Vec<u64> = (0..count).collect();
    // Instances run side by side; each one searches sequentially.
    let inner = AutSearchConfig {
        parallel_width: 1,
        ..*cfg
    };
    let results = par::map(&indices, cfg.parallel_width != 1, |&i| {
        run_instance(seed, i, max_order, &inner)
    });
    let passed = results.iter().filter(|r| r.passed()).count() as u64;
    let errors = results.iter().filter(|r| r.error.is_some()).count() as u64;
    let nontrivial_actions = results
        .iter()
        .filter(|r| r.instance.action.iter().enumerate().any(|(i, &v)| i as u32 != v))
        .count() as u64;
    FuzzSummary {
        seed,
        count,
        max_order,
        passed,
        failed: count - passed - errors,
        errors,
        nontrivial_actions,
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_independent_of_width() {
        let seq = AutSearchConfig {
            parallel_width: 1,
            ..Default::default()
        };
        let a = run_fuzz(42, 12, 60, &seq);
        let b = run_fuzz(42, 12, 60, &AutSearchConfig::default());
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.results[5], run_instance(42, 5, 60, &seq));
    }

    #[test]
    fn trivial_groups_pass_vacuously() {
        let s = run_fuzz(7, 5, 1, &AutSearchConfig::default());
        assert_eq!((s.passed, s.failed, s.errors), (5, 0, 0));
        assert!(s.results.iter().all(|r| r.order == 1));
    }

    #[test]
    fn instances_respect_bounds() {
        let cfg = AutSearchConfig::default();
        for i in 0..30 {
            let inst = draw_instance(3, i, 100, &cfg).unwrap();
            let sd = inst.build().unwrap();
            assert!(sd.order() <= 100);
            assert_eq!(sd.order() as u64, inst.h.order() * inst.k_order);
        }
    }

    #[test]
    fn direct_products_pass() {
        let cfg = AutSearchConfig::default();
        let found = (0..200)
            .map(|i| run_instance(11, i, 48, &cfg))
            .filter(|r| r.instance.action.iter().enumerate().all(|(i, &v)| i as u32 == v))
            .take(5)
            .collect::<Vec<_>>();
        assert!(!found.is_empty());
        for r in found {
            assert!(r.passed(), "{}: {:?}", r.label, r.report);
        }
    }
}

//! Exhaustive cross-check of the triple calculus against direct
//! automorphism testing on one group.
//!
//! The candidate space is `A × Γ × Aut(K)` where `A` is `Aut(H)` together
//! with the `α`-parts of every `K`-fixing automorphism, and `Γ` is
//! `Hom(H, K)` together with the `γ`-parts. Random perturbations of valid
//! triples probe maps outside that space.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::autk::{self, AutTriple};
use crate::error::Result;
use crate::group::{enumerate_homs_with_budget, GroupLike};
use crate::oracle::{self, AutKPath, AutSearchConfig};
use crate::par;
use crate::perm;
use crate::semidirect::SemidirectGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub group: String,
    pub order: u64,
    pub autk_order: u64,
    pub candidates: u64,
    /// Candidates passing the conditions (domain checks included).
    pub passing: u64,
    /// Candidates whose synthesized map is an automorphism fixing `K`.
    pub automorphisms: u64,
    pub perturbations: u64,
    pub compositions: u64,
    /// Triples where the two verdicts disagree, rendered for diagnosis.
    pub mismatches: Vec<String>,
    pub composition_failures: u64,
    /// Set when the candidate space exceeded the limit and was not run.
    pub skipped: Option<String>,
}

impl SoundnessReport {
    pub fn passes(&self) -> bool {
        self.skipped.is_none() && self.mismatches.is_empty() && self.composition_failures == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessConfig {
    pub search: AutSearchConfig,
    /// Upper bound on `|A| · |Γ| · |Aut(K)|`.
    pub max_candidates: u64,
    pub perturbations: usize,
    /// Pairs of `K`-fixing automorphisms whose composition is compared.
    pub max_compositions: usize,
}

impl Default for SoundnessConfig {
    fn default() -> Self {
        SoundnessConfig {
            search: AutSearchConfig::default(),
            max_candidates: 5_000_000,
            perturbations: 200,
            max_compositions: 400,
        }
    }
}

fn is_k_fixing_automorphism(sd: &SemidirectGroup, t: &AutTriple) -> bool {
    let theta = autk::synthesize_automorphism(sd, t);
    oracle::is_automorphism(sd.group(), &theta)
}

pub fn check_soundness<R: Rng>(
    sd: &SemidirectGroup,
    name: &str,
    cfg: &SoundnessConfig,
    rng: &mut R,
) -> Result<SoundnessReport> {
    let (nh, nk) = (sd.h().order(), sd.k().order());
    let parallel = cfg.search.parallel_width != 1;
    let autk_set = oracle::brute_force_autk(sd, &cfg.search, AutKPath::Filter)?;
    let oracle_perms = autk_set.sorted_perms(sd.group());
    let oracle_triples = oracle_perms
        .iter()
        .map(|p| autk::triple_from_automorphism(sd, p))
        .collect::<Result<Vec<_>>>()?;

    let mut alphas: BTreeSet<Vec<u32>> = oracle::brute_force_aut(sd.h(), &cfg.search)?
        .sorted_perms(sd.h())
        .into_iter()
        .collect();
    let mut gammas: BTreeSet<Vec<u32>> = enumerate_homs_with_budget(sd.h(), sd.k(), cfg.search.node_budget, parallel)?
        .into_iter()
        .map(|h| h.into_images())
        .collect();
    for t in &oracle_triples {
        alphas.insert(t.alpha.clone());
        gammas.insert(t.gamma.clone());
    }
    let deltas = oracle::brute_force_aut(sd.k(), &cfg.search)?.sorted_perms(sd.k());
    let (alphas, gammas): (Vec<Vec<u32>>, Vec<Vec<u32>>) = (alphas.into_iter().collect(), gammas.into_iter().collect());

    let candidates = (alphas.len() * gammas.len() * deltas.len()) as u64;
    let mut report = SoundnessReport {
        group: name.to_string(),
        order: sd.order() as u64,
        autk_order: oracle_triples.len() as u64,
        candidates,
        passing: 0,
        automorphisms: 0,
        perturbations: 0,
        compositions: 0,
        mismatches: Vec::new(),
        composition_failures: 0,
        skipped: None,
    };
    if candidates > cfg.max_candidates {
        report.skipped = Some(format!(
            "{candidates} candidates exceed the limit {}",
            cfg.max_candidates
        ));
        return Ok(report);
    }

    let per_alpha = par::map(&alphas, parallel, |alpha| {
        let (mut pass, mut auts, mut bad) = (0u64, 0u64, Vec::new());
        for gamma in &gammas {
            for delta in &deltas {
                let t = AutTriple {
                    alpha: alpha.clone(),
                    gamma: gamma.clone(),
                    delta: delta.clone(),
                };
                let (c, a) = (autk::conditions_hold(sd, &t), is_k_fixing_automorphism(sd, &t));
                pass += c as u64;
                auts += a as u64;
                if c != a {
                    bad.push(format!("conditions {c}, automorphism {a}: {}", autk::describe(sd, &t)));
                }
            }
        }
        (pass, auts, bad)
    });
    for (p, a, bad) in per_alpha {
        report.passing += p;
        report.automorphisms += a;
        report.mismatches.extend(bad);
    }
    if report.automorphisms != report.autk_order {
        report.mismatches.push(format!(
            "candidate space holds {} K-fixing automorphisms, oracle has {}",
            report.automorphisms, report.autk_order
        ));
    }

    // Single-point perturbations of valid triples.
    if !oracle_triples.is_empty() && nh > 1 {
        for _ in 0..cfg.perturbations {
            let mut t = oracle_triples[rng.gen_range(0..oracle_triples.len())].clone();
            let x = rng.gen_range(1..nh);
            match rng.gen_range(0..3) {
                0 => t.alpha[x] = rng.gen_range(0..nh) as u32,
                1 => t.gamma[x] = rng.gen_range(0..nk) as u32,
                _ => {
                    let y = rng.gen_range(0..nh);
                    t.alpha.swap(x, y);
                }
            }
            let (c, a) = (autk::conditions_hold(sd, &t), is_k_fixing_automorphism(sd, &t));
            if c != a {
                report.mismatches.push(format!(
                    "perturbed: conditions {c}, automorphism {a}: {}",
                    autk::describe(sd, &t)
                ));
            }
            report.perturbations += 1;
        }
    }

    // Composition law against permutation composition.
    let n = oracle_triples.len();
    let pairs: Vec<(usize, usize)> = if n * n <= cfg.max_compositions {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    } else {
        (0..cfg.max_compositions)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    };
    for (i, j) in pairs {
        let composed = autk::compose_triples(sd, &oracle_triples[i], &oracle_triples[j]);
        let direct = perm::compose(&oracle_perms[i], &oracle_perms[j]);
        if autk::triple_from_automorphism(sd, &direct).ok().as_ref() != Some(&composed) {
            report.composition_failures += 1;
        }
        report.compositions += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::semidirect::ActionHom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn modular_27_is_sound() {
        let h = FiniteGroup::cyclic(9).unwrap();
        let k = FiniteGroup::cyclic(3).unwrap();
        let act = ActionHom::from_fn(&h, &k, |_, x| x * 4 % 9).unwrap();
        let sd = SemidirectGroup::new(h, k, act).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = check_soundness(&sd, "modular-27", &SoundnessConfig::default(), &mut rng).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!((r.autk_order, r.automorphisms, r.passing), (18, 18, 18));
        assert_eq!(r.compositions, 324);
    }

    #[test]
    fn direct_product_with_nonhom_gamma_candidates() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let sd = SemidirectGroup::direct(FiniteGroup::direct_product(&z2, &z2).unwrap(), z2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = check_soundness(&sd, "Z2^3", &SoundnessConfig::default(), &mut rng).unwrap();
        assert!(r.passes(), "{r:?}");
        // Aut(Z2^2) has 6 elements, Hom(Z2^2, Z2) has 4.
        assert_eq!((r.candidates, r.autk_order), (24, 24));
    }

    #[test]
    fn limit_is_reported() {
        let sd = SemidirectGroup::direct(FiniteGroup::cyclic(5).unwrap(), FiniteGroup::cyclic(5).unwrap()).unwrap();
        let cfg = SoundnessConfig {
            max_candidates: 3,
            ..Default::default()
        };
        let r = check_soundness(&sd, "Z5^2", &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(r.skipped.is_some() && !r.passes());
    }
}

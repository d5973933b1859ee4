//! Complement-fixing automorphisms of `G = H ⋊ K` as triples `(α, γ, δ)`.
//!
//! A triple stands for `θ(h k) = α(h) γ(h) δ(k)` with `α: H → H`,
//! `γ: H → K` and `δ ∈ Aut(K)`. Conjugation follows [`crate::semidirect`]:
//! `h^k = k^-1 h k`, and the action is `φ(k)(h) = k h k^-1`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_homs, reduced_generators, subgroup_as_group, GroupLike, Subgroup};
use crate::oracle::{self, AutKPath, AutSearchConfig, AutomorphismSet};
use crate::par;
use crate::perm::{self, PermGroup};
use crate::semidirect::SemidirectGroup;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutTriple {
    pub alpha: Vec<u32>,
    pub gamma: Vec<u32>,
    pub delta: Vec<u32>,
}

impl AutTriple {
    pub fn identity(sd: &SemidirectGroup) -> Self {
        AutTriple {
            alpha: perm::identity(sd.h().order()),
            gamma: vec![0; sd.h().order()],
            delta: perm::identity(sd.k().order()),
        }
    }

    /// `(α, 1, 1)`.
    pub fn from_alpha(sd: &SemidirectGroup, alpha: Vec<u32>) -> Self {
        AutTriple {
            alpha,
            gamma: vec![0; sd.h().order()],
            delta: perm::identity(sd.k().order()),
        }
    }

    /// `(1, γ, 1)`.
    pub fn from_gamma(sd: &SemidirectGroup, gamma: Vec<u32>) -> Self {
        AutTriple {
            alpha: perm::identity(sd.h().order()),
            gamma,
            delta: perm::identity(sd.k().order()),
        }
    }

    /// `(1, 1, δ)`.
    pub fn from_delta(sd: &SemidirectGroup, delta: Vec<u32>) -> Self {
        AutTriple {
            alpha: perm::identity(sd.h().order()),
            gamma: vec![0; sd.h().order()],
            delta,
        }
    }
}

/// Reads `(α, γ, δ)` off an automorphism of `G` that maps `K` onto `K`.
pub fn triple_from_automorphism(sd: &SemidirectGroup, theta: &[u32]) -> Result<AutTriple> {
    if !oracle::is_automorphism(sd.group(), theta) {
        return Err(Error::NotAutomorphism("permutation does not respect the table".into()));
    }
    let (nh, nk) = (sd.h().order(), sd.k().order());
    let mut delta = Vec::with_capacity(nk);
    for k in 0..nk {
        let img = theta[sd.embed_k(k)] as usize;
        if !sd.k_sub().contains(img) {
            return Err(Error::KNotFixed { element: sd.embed_k(k) });
        }
        delta.push(sd.factor(img).1 as u32);
    }
    let mut alpha = Vec::with_capacity(nh);
    let mut gamma = Vec::with_capacity(nh);
    for h in 0..nh {
        let (a, g) = sd.factor(theta[sd.embed_h(h)] as usize);
        alpha.push(a as u32);
        gamma.push(g as u32);
    }
    Ok(AutTriple { alpha, gamma, delta })
}

/// The map `h k ↦ α(h) γ(h) δ(k)` as a permutation of `G` (not checked).
pub fn synthesize_automorphism(sd: &SemidirectGroup, t: &AutTriple) -> Vec<u32> {
    let k = sd.k();
    (0..sd.order())
        .map(|g| {
            let (h, kk) = sd.factor(g);
            let kpart = k.mul(t.gamma[h] as usize, t.delta[kk] as usize);
            sd.compose(t.alpha[h] as usize, kpart) as u32
        })
        .collect()
}

/// `α(h h') = α(h) · γ(h) α(h') γ(h)^-1` for all `h, h'`.
pub fn check_c1(sd: &SemidirectGroup, t: &AutTriple) -> bool {
    let h = sd.h();
    let act = sd.action();
    let n = h.order();
    (0..n).all(|x| {
        let (ax, gx) = (t.alpha[x] as usize, t.gamma[x] as usize);
        (0..n).all(|y| t.alpha[h.mul(x, y)] as usize == h.mul(ax, act.apply(gx, t.alpha[y] as usize)))
    })
}

/// `γ(h^k) = γ(h)^{δ(k)}` for all `h, k`.
pub fn check_c2(sd: &SemidirectGroup, t: &AutTriple) -> bool {
    let k = sd.k();
    (0..sd.h().order()).all(|h| {
        (0..k.order()).all(|kk| {
            let dk = t.delta[kk] as usize;
            let rhs = k.mul(k.mul(k.inv(dk), t.gamma[h] as usize), dk);
            t.gamma[sd.h_conj(h, kk)] as usize == rhs
        })
    })
}

/// `α(h^k) = α(h)^{δ(k)}` for all `h, k`.
pub fn check_c3(sd: &SemidirectGroup, t: &AutTriple) -> bool {
    (0..sd.h().order()).all(|h| {
        (0..sd.k().order())
            .all(|kk| t.alpha[sd.h_conj(h, kk)] as usize == sd.h_conj(t.alpha[h] as usize, t.delta[kk] as usize))
    })
}

/// `(h, k) ↦ (α(h), γ(h) δ(k))` is a bijection of `H × K`.
pub fn check_c4(sd: &SemidirectGroup, t: &AutTriple) -> bool {
    let k = sd.k();
    let mut seen = vec![false; sd.order()];
    for h in 0..sd.h().order() {
        for kk in 0..k.order() {
            let img = sd.compose(t.alpha[h] as usize, k.mul(t.gamma[h] as usize, t.delta[kk] as usize));
            if std::mem::replace(&mut seen[img], true) {
                return false;
            }
        }
    }
    true
}

/// Outcome of the four conditions plus the domain requirements on `γ`
/// (a homomorphism `H → K`) and `δ` (an automorphism of `K`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub gamma_hom: bool,
    pub delta_aut: bool,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
}

impl ConditionReport {
    pub fn passes(&self) -> bool {
        self.gamma_hom && self.delta_aut && self.c1 && self.c2 && self.c3 && self.c4
    }

    pub fn conditions_only(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4
    }
}

fn is_hom_into<A: GroupLike, B: GroupLike>(a: &A, b: &B, f: &[u32]) -> bool {
    f.len() == a.order()
        && f[0] == 0
        && a.gens().iter().all(|&s| {
            let fs = f[s] as usize;
            (0..a.order()).all(|x| f[a.mul(x, s)] as usize == b.mul(f[x] as usize, fs))
        })
}

pub fn check_conditions(sd: &SemidirectGroup, t: &AutTriple) -> ConditionReport {
    let k = sd.k();
    ConditionReport {
        gamma_hom: is_hom_into(sd.h(), k, &t.gamma),
        delta_aut: oracle::is_automorphism(k, &t.delta),
        c1: check_c1(sd, t),
        c2: check_c2(sd, t),
        c3: check_c3(sd, t),
        c4: check_c4(sd, t),
    }
}

/// Same verdict as `check_conditions(sd, t).passes()`, stopping at the
/// first failed condition (cheap checks first).
pub fn conditions_hold(sd: &SemidirectGroup, t: &AutTriple) -> bool {
    check_c4(sd, t)
        && oracle::is_automorphism(sd.k(), &t.delta)
        && is_hom_into(sd.h(), sd.k(), &t.gamma)
        && check_c3(sd, t)
        && check_c2(sd, t)
        && check_c1(sd, t)
}

/// Matrix product: `(α α', h ↦ γ(α'(h)) δ(γ'(h)), δ δ')`, which is the
/// triple of `θ ∘ θ'`.
pub fn compose_triples(sd: &SemidirectGroup, t1: &AutTriple, t2: &AutTriple) -> AutTriple {
    let k = sd.k();
    let alpha = t2.alpha.iter().map(|&x| t1.alpha[x as usize]).collect();
    let gamma = (0..sd.h().order())
        .map(|h| {
            let left = t1.gamma[t2.alpha[h] as usize] as usize;
            let right = t1.delta[t2.gamma[h] as usize] as usize;
            k.mul(left, right) as u32
        })
        .collect();
    let delta = t2.delta.iter().map(|&x| t1.delta[x as usize]).collect();
    AutTriple { alpha, gamma, delta }
}

/// `C_K(H)` as a subgroup of `K`: the kernel of the action.
pub fn centralizer_k(sd: &SemidirectGroup) -> Subgroup {
    let (h, k) = (sd.h(), sd.k());
    let members = (0..k.order())
        .filter(|&kk| (0..h.order()).all(|x| sd.action().apply(kk, x) == x))
        .collect();
    Subgroup::new(k, members).expect("the kernel of an action is a subgroup")
}

/// `α ∘ φ(k) = φ(δ(k)) ∘ α` on generators of `H` for generators `k` of `K`.
/// Both sides are homomorphisms, so this is the compatibility condition on
/// all of `H × K`.
fn compatible(sd: &SemidirectGroup, alpha: &[u32], delta: &[u32]) -> bool {
    let act = sd.action();
    sd.k().gens().iter().all(|&k| {
        let dk = delta[k] as usize;
        sd.h()
            .gens()
            .iter()
            .all(|&h| alpha[act.apply(k, h)] as usize == act.apply(dk, alpha[h] as usize))
    })
}

/// The subgroups `U, V, W, C` (and through them `A, D, E`).
#[derive(Clone, Debug)]
pub struct StructuredSubgroups {
    pub aut_h: AutomorphismSet,
    pub aut_k: AutomorphismSet,
    /// Indices into `aut_h`.
    pub u: Vec<usize>,
    /// Indices into `aut_k`.
    pub v: Vec<usize>,
    /// Pairs of indices into `aut_h` and `aut_k`.
    pub w: Vec<(usize, usize)>,
    /// Shear triples `(1, γ, 1)`, sorted by `γ`.
    pub c: Vec<AutTriple>,
    pub centralizer: Subgroup,
}

pub fn compute_u(sd: &SemidirectGroup, aut_h: &AutomorphismSet, parallel: bool) -> Vec<usize> {
    let id = perm::identity(sd.k().order());
    let keep = par::map_range(aut_h.len(), 4096, parallel, |r| {
        r.filter(|&i| compatible(sd, &aut_h.perm(sd.h(), i), &id))
            .collect::<Vec<_>>()
    });
    keep.into_iter().flatten().collect()
}

pub fn compute_v(sd: &SemidirectGroup, aut_k: &AutomorphismSet, centralizer: &Subgroup) -> Vec<usize> {
    let k = sd.k();
    (0..aut_k.len())
        .filter(|&i| {
            let d = aut_k.perm(k, i);
            (0..k.order()).all(|x| centralizer.contains(k.mul(k.inv(x), d[x] as usize)))
        })
        .collect()
}

pub fn compute_w(
    sd: &SemidirectGroup,
    aut_h: &AutomorphismSet,
    aut_k: &AutomorphismSet,
    parallel: bool,
) -> Vec<(usize, usize)> {
    let deltas: Vec<Vec<u32>> = (0..aut_k.len()).map(|j| aut_k.perm(sd.k(), j)).collect();
    let keep = par::map_range(aut_h.len(), 1024, parallel, |r| {
        let mut out = Vec::new();
        for i in r {
            let a = aut_h.perm(sd.h(), i);
            for (j, d) in deltas.iter().enumerate() {
                if compatible(sd, &a, d) {
                    out.push((i, j));
                }
            }
        }
        out
    });
    keep.into_iter().flatten().collect()
}

/// Shears `(1, γ, 1)` with `γ: H → C_K(H)` a homomorphism and
/// `γ(h^k) = γ(h)^k`.
pub fn compute_c(sd: &SemidirectGroup, centralizer: &Subgroup) -> Result<Vec<AutTriple>> {
    let (h, k) = (sd.h(), sd.k());
    let (cg, emb) = subgroup_as_group(k, centralizer)?;
    let mut out: Vec<AutTriple> = enumerate_homs(h, &cg)?
        .into_iter()
        .map(|hom| {
            hom.images()
                .iter()
                .map(|&x| emb[x as usize] as u32)
                .collect::<Vec<u32>>()
        })
        .filter(|gamma| {
            (0..h.order()).all(|x| {
                (0..k.order()).all(|kk| {
                    let rhs = k.mul(k.mul(k.inv(kk), gamma[x] as usize), kk);
                    gamma[sd.h_conj(x, kk)] as usize == rhs
                })
            })
        })
        .map(|gamma| AutTriple::from_gamma(sd, gamma))
        .collect();
    out.sort_unstable();
    Ok(out)
}

pub fn compute_structured(sd: &SemidirectGroup, cfg: &AutSearchConfig) -> Result<StructuredSubgroups> {
    let parallel = cfg.parallel_width != 1;
    let aut_h = oracle::brute_force_aut(sd.h(), cfg)?;
    let aut_k = oracle::brute_force_aut(sd.k(), cfg)?;
    let centralizer = centralizer_k(sd);
    let u = compute_u(sd, &aut_h, parallel);
    let v = compute_v(sd, &aut_k, &centralizer);
    let w = compute_w(sd, &aut_h, &aut_k, parallel);
    let c = compute_c(sd, &centralizer)?;
    Ok(StructuredSubgroups {
        aut_h,
        aut_k,
        u,
        v,
        w,
        c,
        centralizer,
    })
}

impl StructuredSubgroups {
    pub fn a(&self, sd: &SemidirectGroup) -> Vec<AutTriple> {
        self.u
            .iter()
            .map(|&i| AutTriple::from_alpha(sd, self.aut_h.perm(sd.h(), i)))
            .collect()
    }

    pub fn d(&self, sd: &SemidirectGroup) -> Vec<AutTriple> {
        self.v
            .iter()
            .map(|&j| AutTriple::from_delta(sd, self.aut_k.perm(sd.k(), j)))
            .collect()
    }

    pub fn e_triple(&self, sd: &SemidirectGroup, idx: usize) -> AutTriple {
        let (i, j) = self.w[idx];
        AutTriple {
            alpha: self.aut_h.perm(sd.h(), i),
            gamma: vec![0; sd.h().order()],
            delta: self.aut_k.perm(sd.k(), j),
        }
    }

    pub fn e(&self, sd: &SemidirectGroup) -> Vec<AutTriple> {
        (0..self.w.len()).map(|i| self.e_triple(sd, i)).collect()
    }

    pub fn w_contains(&self, alpha_idx: usize, delta_idx: usize) -> bool {
        self.w.binary_search(&(alpha_idx, delta_idx)).is_ok()
    }
}

/// Every `(α, δ)` with `α ∈ U`, `δ ∈ V` lies in `W`.
pub fn check_uxv_in_w(s: &StructuredSubgroups) -> bool {
    let w: HashSet<(usize, usize)> = s.w.iter().copied().collect();
    s.u.iter().all(|&a| s.v.iter().all(|&d| w.contains(&(a, d))))
}

/// Base of `G` used to key automorphisms.
pub fn automorphism_base(sd: &SemidirectGroup) -> Vec<usize> {
    reduced_generators(sd.group(), sd.group().gens())
}

/// The product set `C E` as permutations of `G`, checked for closure.
pub fn assemble_autk(sd: &SemidirectGroup, s: &StructuredSubgroups, parallel: bool) -> Result<PermGroup> {
    let cs: Vec<Vec<u32>> = s.c.iter().map(|t| synthesize_automorphism(sd, t)).collect();
    let chunks = par::map_range(s.w.len(), 256, parallel, |r| {
        let mut out = Vec::new();
        for i in r {
            let e = synthesize_automorphism(sd, &s.e_triple(sd, i));
            for c in &cs {
                out.push(perm::compose(c, &e));
            }
        }
        out
    });
    let perms: Vec<Vec<u32>> = chunks.into_iter().flatten().collect();
    PermGroup::from_perms(perms, sd.order(), &automorphism_base(sd))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionOrders {
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "E")]
    pub e: u64,
    /// `None` when the product set `C E` is not closed.
    pub autk_structured: Option<u64>,
    pub autk_oracle: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionChecks {
    pub c_normal: bool,
    pub intersection_trivial: bool,
    pub product_order: bool,
    pub equals_oracle: bool,
    pub factorization: bool,
}

impl DecompositionChecks {
    pub fn all(&self) -> bool {
        self.c_normal && self.intersection_trivial && self.product_order && self.equals_oracle && self.factorization
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub family: String,
    pub orders: DecompositionOrders,
    pub checks: DecompositionChecks,
    pub witness: Option<String>,
}

/// Everything computed while verifying one group.
#[derive(Clone, Debug)]
pub struct DecompositionRun {
    pub structured: StructuredSubgroups,
    pub assembled: Option<PermGroup>,
    pub oracle: PermGroup,
    /// Oracle triples whose `γ` is not a homomorphism `H → K`.
    pub gamma_non_hom: usize,
    /// Members of `E` that fail the condition check.
    pub e_failures: usize,
    pub report: DecompositionReport,
}

fn first_witness(w: &mut Option<String>, msg: impl FnOnce() -> String) {
    if w.is_none() {
        *w = Some(msg());
    }
}

pub fn run_decomposition(sd: &SemidirectGroup, cfg: &AutSearchConfig, family: &str) -> Result<DecompositionRun> {
    let parallel = cfg.parallel_width != 1;
    let structured = compute_structured(sd, cfg)?;
    let base = automorphism_base(sd);
    let oracle_set = oracle::brute_force_autk(sd, cfg, AutKPath::Restricted)?;
    let oracle_perms: Vec<Vec<u32>> = (0..oracle_set.len()).map(|i| oracle_set.perm(sd.group(), i)).collect();
    let oracle = PermGroup::from_perms(oracle_perms, sd.order(), &base)?;

    let mut witness = None;
    let assembled = match assemble_autk(sd, &structured, parallel) {
        Ok(g) => Some(g),
        Err(Error::ClosureFailure { left, right }) => {
            first_witness(&mut witness, || {
                format!("C E is not closed: product of members {left} and {right} falls outside")
            });
            None
        }
        Err(e) => return Err(e),
    };

    let e_failures = par::map_range(structured.w.len(), 64, parallel, |r| {
        r.filter(|&i| !check_conditions(sd, &structured.e_triple(sd, i)).passes())
            .count()
    })
    .into_iter()
    .sum();

    let c_perms: Vec<Vec<u32>> = structured.c.iter().map(|t| synthesize_automorphism(sd, t)).collect();
    let c_set: HashSet<&[u32]> = c_perms.iter().map(|p| p.as_slice()).collect();
    let e_perms: Vec<Vec<u32>> = (0..structured.w.len())
        .map(|i| synthesize_automorphism(sd, &structured.e_triple(sd, i)))
        .collect();
    let identity = perm::identity(sd.order());

    let c_normal = match &assembled {
        Some(a) => a.gens().iter().all(|&g| {
            let (gp, gi) = (a.perm(g), perm::invert(a.perm(g)));
            c_perms
                .iter()
                .all(|c| c_set.contains(perm::compose(&perm::compose(gp, c), &gi).as_slice()))
        }),
        None => false,
    };
    if !c_normal {
        first_witness(&mut witness, || "C is not normal in the assembled group".into());
    }
    let meet: Vec<&Vec<u32>> = e_perms.iter().filter(|e| c_set.contains(e.as_slice())).collect();
    let intersection_trivial = meet.len() == 1 && *meet[0] == identity;
    if !intersection_trivial {
        first_witness(&mut witness, || format!("C and E share {} elements", meet.len()));
    }
    let product = (structured.c.len() * structured.w.len()) as u64;
    let product_order = assembled.as_ref().map(|a| a.order() as u64) == Some(product);
    if !product_order {
        first_witness(&mut witness, || format!("|C E| differs from |C|·|E| = {product}"));
    }
    let equals_oracle = assembled.as_ref().map(|a| a.perms() == oracle.perms()).unwrap_or(false);
    if !equals_oracle {
        let missing = oracle
            .perms()
            .iter()
            .position(|p| !assembled.as_ref().is_some_and(|a| a.contains(p)));
        first_witness(&mut witness, || match missing {
            Some(i) => format!(
                "oracle automorphism {} is missing from C E: {:?}",
                i,
                describe(
                    sd,
                    &triple_from_automorphism(sd, oracle.perm(i)).expect("oracle output fixes K")
                )
            ),
            None => "C E contains maps outside the oracle set".into(),
        });
    }

    let mut gamma_non_hom = 0;
    let mut factor_fail: Option<String> = None;
    for (i, theta) in oracle.perms().iter().enumerate() {
        let t = triple_from_automorphism(sd, theta)?;
        if !is_hom_into(sd.h(), sd.k(), &t.gamma) {
            gamma_non_hom += 1;
        }
        if factor_fail.is_some() {
            continue;
        }
        if t.alpha.iter().collect::<HashSet<_>>().len() != sd.h().order() {
            factor_fail = Some(format!("oracle automorphism {i}: α is not a bijection of H"));
            continue;
        }
        let ai = perm::invert(&t.alpha);
        let gamma_c: Vec<u32> = ai.iter().map(|&x| t.gamma[x as usize]).collect();
        let c = synthesize_automorphism(sd, &AutTriple::from_gamma(sd, gamma_c));
        let e = synthesize_automorphism(
            sd,
            &AutTriple {
                alpha: t.alpha.clone(),
                gamma: vec![0; sd.h().order()],
                delta: t.delta.clone(),
            },
        );
        let inside = assembled.as_ref().is_some_and(|a| a.contains(&c) && a.contains(&e));
        if !inside || perm::compose(&c, &e) != *theta {
            factor_fail = Some(format!(
                "oracle automorphism {i} does not split as shear times diagonal inside C E: {}",
                describe(sd, &t)
            ));
        }
    }
    let factorization = factor_fail.is_none();
    if let Some(f) = factor_fail {
        first_witness(&mut witness, || f);
    }

    let report = DecompositionReport {
        family: family.to_string(),
        orders: DecompositionOrders {
            c: structured.c.len() as u64,
            e: structured.w.len() as u64,
            autk_structured: assembled.as_ref().map(|a| a.order() as u64),
            autk_oracle: oracle.order() as u64,
        },
        checks: DecompositionChecks {
            c_normal,
            intersection_trivial,
            product_order,
            equals_oracle,
            factorization,
        },
        witness,
    };
    Ok(DecompositionRun {
        structured,
        assembled,
        oracle,
        gamma_non_hom,
        e_failures,
        report,
    })
}

pub fn verify_decomposition(sd: &SemidirectGroup, cfg: &AutSearchConfig, family: &str) -> Result<DecompositionReport> {
    Ok(run_decomposition(sd, cfg, family)?.report)
}

/// Generator images of a triple, in the labels of `G`.
pub fn describe(sd: &SemidirectGroup, t: &AutTriple) -> String {
    let g = sd.group();
    let h_parts = sd.h().gens().iter().map(|&x| {
        let src = sd.embed_h(x);
        let img = sd.compose(t.alpha[x] as usize, t.gamma[x] as usize);
        format!("{} -> {}", g.label(src), g.label(img))
    });
    let k_parts = sd.k().gens().iter().map(|&x| {
        format!(
            "{} -> {}",
            g.label(sd.embed_k(x)),
            g.label(sd.embed_k(t.delta[x] as usize))
        )
    });
    h_parts.chain(k_parts).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipAgreement {
    pub candidates: u64,
    pub condition_holds: u64,
    pub automorphisms: u64,
    /// The condition holds exactly for the candidates giving automorphisms.
    pub agree: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemarkReport {
    pub alpha: MembershipAgreement,
    pub gamma: MembershipAgreement,
    pub delta: MembershipAgreement,
}

fn tally(items: impl Iterator<Item = (bool, bool)>) -> MembershipAgreement {
    let mut m = MembershipAgreement {
        candidates: 0,
        condition_holds: 0,
        automorphisms: 0,
        agree: true,
    };
    for (cond, auto) in items {
        m.candidates += 1;
        m.condition_holds += cond as u64;
        m.automorphisms += auto as u64;
        m.agree &= cond == auto;
    }
    m
}

/// For single-entry triples `(α,1,1)`, `(1,γ,1)`, `(1,1,δ)` compares the
/// membership criterion for `U`, `C`, `V` with the synthesized map being an
/// automorphism. Candidates are `Aut(H)`, `Hom(H, K)` and `Aut(K)`.
pub fn check_remark_membership(sd: &SemidirectGroup, s: &StructuredSubgroups) -> Result<RemarkReport> {
    let g = sd.group();
    let (h, k) = (sd.h(), sd.k());
    let id_k = perm::identity(k.order());
    let alpha = tally((0..s.aut_h.len()).map(|i| {
        let a = s.aut_h.perm(h, i);
        let cond = compatible(sd, &a, &id_k);
        let auto = oracle::is_automorphism(g, &synthesize_automorphism(sd, &AutTriple::from_alpha(sd, a)));
        (cond, auto)
    }));
    let gamma = tally(enumerate_homs(h, k)?.into_iter().map(|hom| {
        let gm: Vec<u32> = hom.into_images();
        let in_c = gm.iter().all(|&x| s.centralizer.contains(x as usize))
            && (0..h.order()).all(|x| {
                (0..k.order()).all(|kk| gm[sd.h_conj(x, kk)] as usize == k.mul(k.mul(k.inv(kk), gm[x] as usize), kk))
            });
        let auto = oracle::is_automorphism(g, &synthesize_automorphism(sd, &AutTriple::from_gamma(sd, gm)));
        (in_c, auto)
    }));
    let delta = tally((0..s.aut_k.len()).map(|j| {
        let d = s.aut_k.perm(k, j);
        let cond = (0..k.order()).all(|x| s.centralizer.contains(k.mul(k.inv(x), d[x] as usize)));
        let auto = oracle::is_automorphism(g, &synthesize_automorphism(sd, &AutTriple::from_delta(sd, d)));
        (cond, auto)
    }));
    Ok(RemarkReport { alpha, gamma, delta })
}

//! Concrete split metacyclic groups and the ten non-abelian groups of
//! order `p^4` (`p ≥ 5`), each given as `H ⋊ K` with an explicit action,
//! together with the predicted `Aut_K` data and the named generators of `W`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::autk::{self, DecompositionReport, DecompositionRun, StructuredSubgroups};
use crate::error::{Error, Result};
use crate::group::{fingerprint, is_isomorphic_small, FiniteGroup, GroupHom, GroupLike, IsoVerdict};
use crate::oracle::{self, AutSearchConfig};
use crate::perm::{self, PermGroup};
use crate::semidirect::{ActionHom, ImplicitSemidirect, SemidirectGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "metacyclic_odd")]
    MetacyclicOdd,
    #[serde(rename = "metacyclic_2_i")]
    Metacyclic2I,
    #[serde(rename = "metacyclic_2_ii")]
    Metacyclic2II,
    #[serde(rename = "metacyclic_2_iii")]
    Metacyclic2III,
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    G7,
    G8,
    G9,
    G10,
}

impl FamilyKind {
    pub const ORDER_P4: [FamilyKind; 10] = [
        FamilyKind::G1,
        FamilyKind::G2,
        FamilyKind::G3,
        FamilyKind::G4,
        FamilyKind::G5,
        FamilyKind::G6,
        FamilyKind::G7,
        FamilyKind::G8,
        FamilyKind::G9,
        FamilyKind::G10,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::MetacyclicOdd => "metacyclic_odd",
            FamilyKind::Metacyclic2I => "metacyclic_2_i",
            FamilyKind::Metacyclic2II => "metacyclic_2_ii",
            FamilyKind::Metacyclic2III => "metacyclic_2_iii",
            FamilyKind::G1 => "G1",
            FamilyKind::G2 => "G2",
            FamilyKind::G3 => "G3",
            FamilyKind::G4 => "G4",
            FamilyKind::G5 => "G5",
            FamilyKind::G6 => "G6",
            FamilyKind::G7 => "G7",
            FamilyKind::G8 => "G8",
            FamilyKind::G9 => "G9",
            FamilyKind::G10 => "G10",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let all = [
            FamilyKind::MetacyclicOdd,
            FamilyKind::Metacyclic2I,
            FamilyKind::Metacyclic2II,
            FamilyKind::Metacyclic2III,
        ];
        all.into_iter()
            .chain(Self::ORDER_P4)
            .find(|k| k.name().eq_ignore_ascii_case(s))
    }

    pub fn is_metacyclic(&self) -> bool {
        matches!(
            self,
            FamilyKind::MetacyclicOdd
                | FamilyKind::Metacyclic2I
                | FamilyKind::Metacyclic2II
                | FamilyKind::Metacyclic2III
        )
    }

    pub fn has_witnesses(&self) -> bool {
        matches!(
            self,
            FamilyKind::G3 | FamilyKind::G5 | FamilyKind::G6 | FamilyKind::G7 | FamilyKind::G9 | FamilyKind::G10
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(p={}", self.kind.name(), self.p)?;
        for (name, v) in [("m", self.m), ("n", self.n), ("r", self.r)] {
            if let Some(v) = v {
                write!(f, ",{name}={v}")?;
            }
        }
        if let Some(d) = self.d {
            write!(f, ",d={d}")?;
        }
        write!(f, ")")
    }
}

impl FamilySpec {
    pub fn order_p4(kind: FamilyKind, p: u64) -> Self {
        FamilySpec {
            kind,
            p,
            m: None,
            n: None,
            r: None,
            d: None,
        }
    }

    pub fn metacyclic(kind: FamilyKind, p: u64, m: u32, n: u32, r: Option<u32>) -> Self {
        FamilySpec {
            kind,
            p,
            m: Some(m),
            n: Some(n),
            r,
            d: None,
        }
    }

    /// `(m, n, r)` after filling in what the order-`p^4` metacyclic cases fix.
    fn mnr(&self) -> Result<(u32, u32, u32)> {
        match self.kind {
            FamilyKind::G1 => Ok((3, 1, 1)),
            FamilyKind::G2 => Ok((2, 2, 1)),
            FamilyKind::Metacyclic2III => {
                let (m, n) = (need(self.m, "m")?, need(self.n, "n")?);
                Ok((m, n, self.r.unwrap_or(0)))
            }
            _ => Ok((need(self.m, "m")?, need(self.n, "n")?, need(self.r, "r")?)),
        }
    }

    /// G8's `d`, defaulting to the smallest residue other than 0 and 1.
    pub fn d_value(&self) -> u64 {
        self.d.unwrap_or(2)
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !is_prime(p) {
            return bad(format!("p = {p} is not prime"));
        }
        match self.kind {
            FamilyKind::MetacyclicOdd => {
                let (m, n, r) = self.mnr()?;
                if p == 2 {
                    return bad("metacyclic_odd needs an odd prime".into());
                }
                if m < 2 || n < 1 {
                    return bad(format!("need m >= 2 and n >= 1, got m = {m}, n = {n}"));
                }
                if r < 1 || r > (m - 1).min(n) {
                    return bad(format!("need 1 <= r <= min(m-1, n) = {}, got r = {r}", (m - 1).min(n)));
                }
            }
            FamilyKind::Metacyclic2I | FamilyKind::Metacyclic2II => {
                let (m, n, r) = self.mnr()?;
                if p != 2 {
                    return bad("2-group cases need p = 2".into());
                }
                if m < 3 || n < 1 {
                    return bad(format!("need m >= 3 and n >= 1, got m = {m}, n = {n}"));
                }
                if r < 1 || r > (m - 2).min(n) {
                    return bad(format!("need 1 <= r <= min(m-2, n) = {}, got r = {r}", (m - 2).min(n)));
                }
            }
            FamilyKind::Metacyclic2III => {
                let (m, n, _) = self.mnr()?;
                if p != 2 {
                    return bad("2-group cases need p = 2".into());
                }
                if m < 2 || n < 1 {
                    return bad(format!("need m >= 2 and n >= 1, got m = {m}, n = {n}"));
                }
            }
            _ => {
                if p < 5 {
                    return bad(format!("order p^4 families need p >= 5, got {p}"));
                }
                if self.kind == FamilyKind::G8 {
                    let d = self.d_value() % p;
                    if d == 0 || d == 1 {
                        return bad(format!(
                            "G8 needs d not congruent to 0 or 1 mod p, got d = {}",
                            self.d_value()
                        ));
                    }
                }
            }
        }
        let order = self.group_order()?;
        if order > crate::group::MAX_TABLE_ORDER as u64 {
            return Err(Error::OrderTooLarge {
                order: order as usize,
                max: crate::group::MAX_TABLE_ORDER,
            });
        }
        Ok(())
    }

    pub fn group_order(&self) -> Result<u64> {
        if self.kind.is_metacyclic() {
            let (m, n, _) = self.mnr()?;
            Ok(self.p.pow(m + n))
        } else {
            Ok(self.p.pow(4))
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

fn need(v: Option<u32>, name: &str) -> Result<u32> {
    v.ok_or_else(|| Error::InvalidParams(format!("parameter {name} is required")))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` (`gcd(a, m) = 1` assumed).
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i64 % m as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i64) as u64
}

/// Multiplicative order of `a` modulo `m`.
pub fn mult_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
        if k > m {
            return 0;
        }
    }
    k
}

fn euler_phi_prime_power(p: u64, e: u32) -> u64 {
    p.pow(e - 1) * (p - 1)
}

/// Smallest `t` that is a primitive root mod `p` and for which both `t`
/// and `t + p` are primitive roots mod `p^2`.
pub fn primitive_root_t(p: u64) -> u64 {
    let p2 = p * p;
    let full = euler_phi_prime_power(p, 2);
    (2..p)
        .find(|&t| mult_order(t, p) == p - 1 && mult_order(t, p2) == full && mult_order(t + p, p2) == full)
        .expect("some primitive root lifts")
}

/// Smallest generator of the unit group mod `p^e` (odd `p`).
fn unit_generator(p: u64, e: u32) -> u64 {
    let m = p.pow(e);
    let full = euler_phi_prime_power(p, e);
    (2..m)
        .find(|&g| mult_order(g, m) == full)
        .expect("odd prime powers have primitive roots")
}

/// Index of `x_1^{e_1} ... x_k^{e_k}` in a group whose elements are indexed
/// in mixed radix with the given factor orders (direct products of cyclic
/// groups, and `Z_{p^2} ⋊ Z_p` with its `a^i b^j` normal form).
fn word(orders: &[u64], exps: &[i64]) -> usize {
    orders
        .iter()
        .zip(exps)
        .fold(0u64, |acc, (&o, &e)| acc * o + e.rem_euclid(o as i64) as u64) as usize
}

fn cyclic_product(orders: &[(u64, &str)]) -> Result<FiniteGroup> {
    let mut g = FiniteGroup::cyclic_named(orders[0].0 as usize, orders[0].1)?;
    for &(o, s) in &orders[1..] {
        g = FiniteGroup::direct_product(&g, &FiniteGroup::cyclic_named(o as usize, s)?)?;
    }
    Ok(g)
}

/// `Z_{p^2} ⋊ Z_p` with `b a b^-1 = a^{1+p}`; `a^i b^j` has index `i p + j`.
fn nonabelian_p3(p: u64) -> Result<FiniteGroup> {
    let (a, b) = (
        FiniteGroup::cyclic_named((p * p) as usize, "a")?,
        FiniteGroup::cyclic_named(p as usize, "b")?,
    );
    let p2 = (p * p) as usize;
    let act = ActionHom::from_fn(&a, &b, |_, x| x * (1 + p as usize) % p2)?;
    Ok(SemidirectGroup::new(a, b, act)?.group().clone())
}

/// The automorphism of `h` sending `h.gens()[i]` to `images[i]`.
fn aut_from_images(h: &FiniteGroup, images: &[usize]) -> Result<Vec<u32>> {
    let hom = GroupHom::from_generator_images(h, h, images)?;
    if !hom.is_injective() {
        return Err(Error::NotAutomorphism("generator images are not independent".into()));
    }
    Ok(hom.into_images())
}

fn power_map(order: u64, e: u64) -> Vec<u32> {
    (0..order).map(|x| (x * e % order) as u32).collect()
}

/// Builds the group for `spec`.
pub fn build_family(spec: &FamilySpec) -> Result<SemidirectGroup> {
    spec.validate()?;
    let p = spec.p;
    let p2 = p * p;
    let one_action = |h: &FiniteGroup, k: &FiniteGroup, images: &[usize]| -> Result<SemidirectGroup> {
        let perm = aut_from_images(h, images).map_err(|e| Error::InvalidAction(e.to_string()))?;
        let act = ActionHom::new(h, k, vec![perm])?;
        SemidirectGroup::new(h.clone(), k.clone(), act)
    };
    match spec.kind {
        FamilyKind::MetacyclicOdd
        | FamilyKind::Metacyclic2I
        | FamilyKind::Metacyclic2II
        | FamilyKind::Metacyclic2III
        | FamilyKind::G1
        | FamilyKind::G2 => {
            let (m, n, r) = spec.mnr()?;
            let pm = p.pow(m);
            let s = match spec.kind {
                FamilyKind::Metacyclic2II => (pm + p.pow(m - r) - 1) % pm,
                FamilyKind::Metacyclic2III => pm - 1,
                _ => 1 + p.pow(m - r),
            };
            let h = FiniteGroup::cyclic_named(pm as usize, "a")?;
            let k = FiniteGroup::cyclic_named(p.pow(n) as usize, "b")?;
            one_action(&h, &k, &[s as usize])
        }
        FamilyKind::G3 | FamilyKind::G4 => {
            let h = cyclic_product(&[(p2, "a"), (p, "b")])?;
            let k = FiniteGroup::cyclic_named(p as usize, "c")?;
            let o = [p2, p];
            let p = p as i64;
            let imgs = if spec.kind == FamilyKind::G3 {
                [word(&o, &[1, 0]), word(&o, &[p, 1])]
            } else {
                [word(&o, &[1 + p, 0]), word(&o, &[0, 1])]
            };
            one_action(&h, &k, &imgs)
        }
        FamilyKind::G5 => {
            let h = cyclic_product(&[(p, "b"), (p, "c")])?;
            let k = FiniteGroup::cyclic_named(p2 as usize, "a")?;
            let o = [p, p];
            one_action(&h, &k, &[word(&o, &[1, 0]), word(&o, &[-1, 1])])
        }
        FamilyKind::G6 | FamilyKind::G7 | FamilyKind::G8 => {
            let h = nonabelian_p3(p)?;
            let k = FiniteGroup::cyclic_named(p as usize, "c")?;
            let o = [p2, p];
            let pi = p as i64;
            let imgs = match spec.kind {
                FamilyKind::G6 => [word(&o, &[1, 1]), word(&o, &[0, 1])],
                FamilyKind::G7 => [word(&o, &[1 + pi, 1]), word(&o, &[pi, 1])],
                _ => {
                    let d = spec.d_value() as i64;
                    [word(&o, &[1 + d * pi, 1]), word(&o, &[d * pi, 1])]
                }
            };
            one_action(&h, &k, &imgs)
        }
        FamilyKind::G9 | FamilyKind::G10 => {
            let h = cyclic_product(&[(p, "a"), (p, "b"), (p, "c")])?;
            let k = FiniteGroup::cyclic_named(p as usize, "d")?;
            let o = [p, p, p];
            let imgs = if spec.kind == FamilyKind::G9 {
                [word(&o, &[1, 0, 0]), word(&o, &[0, 1, 0]), word(&o, &[1, 0, 1])]
            } else {
                [word(&o, &[1, 0, 0]), word(&o, &[1, 1, 0]), word(&o, &[0, 1, 1])]
            };
            one_action(&h, &k, &imgs)
        }
    }
}

/// A concrete group with the predicted isomorphism type of `Aut_K(G)`.
#[derive(Clone, Debug)]
pub enum ModelGroup {
    Table(FiniteGroup),
    Implicit(ImplicitSemidirect),
}

impl GroupLike for ModelGroup {
    fn order(&self) -> usize {
        match self {
            ModelGroup::Table(g) => g.order(),
            ModelGroup::Implicit(g) => g.order(),
        }
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        match self {
            ModelGroup::Table(g) => g.mul(x, y),
            ModelGroup::Implicit(g) => g.mul(x, y),
        }
    }

    fn inv(&self, x: usize) -> usize {
        match self {
            ModelGroup::Table(g) => g.inv(x),
            ModelGroup::Implicit(g) => g.inv(x),
        }
    }

    fn gens(&self) -> &[usize] {
        match self {
            ModelGroup::Table(g) => g.gens(),
            ModelGroup::Implicit(g) => g.gens(),
        }
    }
}

/// Predicted data for one family instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedResult {
    pub c_abelian_invariants: Vec<u64>,
    pub e_order: u64,
    pub autk_order: u64,
    /// Isomorphism type of `Aut_K(G)` at this prime, e.g. `D_10 x Z_20`.
    pub autk_type: String,
    /// Whether [`build_model`] produces a group for this instance.
    pub has_model: bool,
    pub index_in_aut: Option<u64>,
    pub witnesses: Vec<String>,
    /// Reasons the closed form cannot be trusted for these parameters.
    pub degenerate: Vec<String>,
}

impl ExpectedResult {
    pub fn is_degenerate(&self) -> bool {
        !self.degenerate.is_empty()
    }
}

/// `2^e` with negative exponents treated as the trivial group; records the
/// underflow in `flags`.
fn two_pow(e: i64, what: &str, flags: &mut Vec<String>) -> u64 {
    if e < 0 {
        flags.push(format!("{what} has exponent {e} < 0; treated as trivial"));
        1
    } else {
        1 << e
    }
}

fn cyc(n: u64) -> String {
    format!("Z_{n}")
}

pub fn expected_result(spec: &FamilySpec) -> Result<ExpectedResult> {
    spec.validate()?;
    let p = spec.p;
    let t = if spec.kind.is_metacyclic() {
        0
    } else {
        primitive_root_t(p)
    };
    let mut degenerate = Vec::new();
    let (c, e, ty, index, witnesses): (Vec<u64>, u64, String, Option<u64>, Vec<String>) = match spec.kind {
        FamilyKind::MetacyclicOdd | FamilyKind::G1 | FamilyKind::G2 => {
            let (m, n, r) = spec.mnr()?;
            let cexp = (m - r).min(n);
            let c = p.pow(cexp);
            let a = p.pow(m - 1) * (p - 1);
            let d = p.pow(n - r);
            (
                if c > 1 { vec![c] } else { vec![] },
                a * d,
                format!("{} x| ({} x {})", cyc(c), cyc(a), cyc(d)),
                Some(p.pow(m.min(n))),
                vec![],
            )
        }
        FamilyKind::Metacyclic2I => {
            let (m, n, r) = spec.mnr()?;
            let c = 1u64 << (m - r).min(n);
            let a2 = two_pow(m as i64 - 2, "Z_{2^{m-2}}", &mut degenerate);
            let d2 = two_pow(n as i64 - r as i64 - 1, "Z_{2^{n-r-1}}", &mut degenerate);
            (
                vec![c],
                2 * a2 * 2 * d2,
                format!("{} x| (Z_2 x {} x Z_2 x {})", cyc(c), cyc(a2), cyc(d2)),
                None,
                vec![],
            )
        }
        FamilyKind::Metacyclic2II => {
            let (m, n, r) = spec.mnr()?;
            let a2 = two_pow(m as i64 - 2, "Z_{2^{m-2}}", &mut degenerate);
            let d2 = two_pow(n as i64 - r as i64 - 1, "Z_{2^{n-r-1}}", &mut degenerate);
            (
                vec![2],
                2 * a2 * 2 * d2,
                format!("Z_2 x (Z_2 x {} x Z_2 x {})", cyc(a2), cyc(d2)),
                None,
                vec![],
            )
        }
        FamilyKind::Metacyclic2III => {
            let (m, n, _) = spec.mnr()?;
            degenerate.push("[H,K] is stated with a parameter r that this case does not have".into());
            let a2 = two_pow(m as i64 - 2, "Z_{2^{m-2}}", &mut degenerate);
            let d2 = two_pow(n as i64 - 2, "Z_{2^{n-2}}", &mut degenerate);
            (
                vec![2],
                2 * a2 * 2 * d2,
                format!("Z_2 x (Z_2 x {} x Z_2 x {})", cyc(a2), cyc(d2)),
                None,
                vec![],
            )
        }
        FamilyKind::G3 => {
            let q = p * (p - 1);
            (
                vec![],
                p * q * q,
                format!("({} x {}) x| {}", cyc(p), cyc(q), cyc(q)),
                None,
                vec![
                    format!("x = ((t+p 0; 0 t), delta_1), t = {t}"),
                    "y = ((1 0; 1 1), delta_1)".into(),
                    "z = ((t+p 0; 0 1), delta_t)".into(),
                ],
            )
        }
        FamilyKind::G4 => (
            vec![],
            (p - 1) * p.pow(3) * (p - 1),
            format!("{} x (((Z_{p} x Z_{p}) x| Z_{p}) x| {})", cyc(p - 1), cyc(p - 1)),
            None,
            vec![],
        ),
        FamilyKind::G5 => {
            let q = p * (p - 1);
            (
                vec![p],
                q * q,
                format!("{} x ({} x| {})", cyc(p), cyc(q), cyc(q)),
                None,
                vec![
                    format!("x = ((t 0; 1 t), delta_1), t = {t}"),
                    "y = ((t+p 0; 0 1), delta_t)".into(),
                ],
            )
        }
        FamilyKind::G6 => (
            vec![],
            p * p * p * (p - 1),
            format!("{} x ((Z_{p} x Z_{p}) x| {})", cyc(p), cyc(p - 1)),
            None,
            vec![
                format!("x = ((t+p 0; 0 1), delta_t), t = {t}"),
                "y = ((1 0; 1 1), delta_1)".into(),
                "z = ((1+p 0; 0 1), delta_1)".into(),
            ],
        ),
        FamilyKind::G7 | FamilyKind::G8 => (
            vec![],
            2 * p * p * (p - 1),
            format!("D_{} x {}", 2 * p, cyc(p * (p - 1))),
            None,
            if spec.kind == FamilyKind::G7 {
                vec![
                    "x = ((1 1; 0 1), delta_1)".into(),
                    "y = ((-1 0; 0 1), delta_1)".into(),
                    format!("z = ((t+p 0; 0 1), delta_t), t = {t}"),
                ]
            } else {
                vec![]
            },
        ),
        FamilyKind::G9 => (
            vec![],
            p.pow(3) * (p - 1).pow(3),
            format!(
                "(((Z_{p} x Z_{p}) x| Z_{p}) x {}) x| ({} x {})",
                cyc(p - 1),
                cyc(p - 1),
                cyc(p - 1)
            ),
            None,
            ["u", "v", "w", "x", "y", "z"]
                .iter()
                .map(|s| format!("{s} (t = {t})"))
                .collect(),
        ),
        FamilyKind::G10 => (
            vec![],
            p * p * (p - 1) * (p - 1),
            format!("{} x ((Z_{p} x Z_{p}) x| {})", cyc(p - 1), cyc(p - 1)),
            None,
            vec![
                format!("x = (t I, delta_1), t = {t}"),
                "y = (diag(t^2, t, 1), delta_t)".into(),
                "z = ((1 0 0; 1 1 0; 1 1 1), delta_1)".into(),
            ],
        ),
    };
    let c_order: u64 = c.iter().product();
    Ok(ExpectedResult {
        autk_order: c_order * e,
        c_abelian_invariants: c.into_iter().flat_map(crate::group::prime_power_parts).collect(),
        e_order: e,
        autk_type: ty,
        has_model: !matches!(
            spec.kind,
            FamilyKind::Metacyclic2I | FamilyKind::Metacyclic2II | FamilyKind::Metacyclic2III
        ),
        index_in_aut: index,
        witnesses,
        degenerate,
    })
}

fn implicit(h: FiniteGroup, k: FiniteGroup, act: ActionHom) -> ModelGroup {
    ModelGroup::Implicit(ImplicitSemidirect::new(h, k, act))
}

/// Builds a group of the predicted isomorphism type of `Aut_K(G)`.
/// The 2-group cases have no model.
pub fn build_model(spec: &FamilySpec) -> Result<Option<ModelGroup>> {
    spec.validate()?;
    let p = spec.p;
    let pu = p as usize;
    let q = p * (p - 1);
    let cy = |n: u64| FiniteGroup::cyclic(n as usize);
    let model = match spec.kind {
        FamilyKind::Metacyclic2I | FamilyKind::Metacyclic2II | FamilyKind::Metacyclic2III => return Ok(None),
        FamilyKind::MetacyclicOdd | FamilyKind::G1 | FamilyKind::G2 => {
            // C ⋊ (A × D): the generator of A (a ↦ a^g) acts on shears by
            // γ ↦ γ∘α^-1, i.e. c ↦ c^{g^-1}; δ_1 acts by c ↦ c^{1+p^r}.
            let (m, n, r) = spec.mnr()?;
            let ce = p.pow((m - r).min(n));
            let (ao, d_o) = (p.pow(m - 1) * (p - 1), p.pow(n - r));
            let g = unit_generator(p, m);
            let (ginv, dmul) = (inv_mod(g % ce, ce) as usize, ((1 + p.pow(r)) % ce) as usize);
            let h = cy(ce)?;
            let k = FiniteGroup::direct_product(&cy(ao)?, &cy(d_o)?)?;
            let a_gen = d_o as usize;
            let ceu = ce as usize;
            let act = ActionHom::from_fn(&h, &k, |s, x| if s == a_gen { x * ginv % ceu } else { x * dmul % ceu })?;
            implicit(h, k, act)
        }
        FamilyKind::G3 => {
            // (Z_p(y) × Z_{p(p-1)}(x)) ⋊ Z_{p(p-1)}(z), z y z^-1 = y^{t^-1}.
            let tinv = inv_mod(primitive_root_t(p), p) as usize;
            let h = FiniteGroup::direct_product(&cy(p)?, &cy(q)?)?;
            let k = cy(q)?;
            let qu = q as usize;
            let act = ActionHom::from_fn(&h, &k, |_, x| (x / qu * tinv % pu) * qu + x % qu)?;
            implicit(h, k, act)
        }
        FamilyKind::G4 => ModelGroup::Table(aut_abelian_p2_p(p)?),
        FamilyKind::G5 => {
            // Z_p × (Z_{p(p-1)}(x) ⋊ Z_{p(p-1)}(y)), y x y^-1 = x^λ with
            // λ ≡ 1 mod p-1 and λ ≡ t^-1 mod p.
            let lambda = crt_lambda(p) as usize;
            let h = FiniteGroup::direct_product(&cy(p)?, &cy(q)?)?;
            let k = cy(q)?;
            let qu = q as usize;
            let act = ActionHom::from_fn(&h, &k, |_, x| (x / qu) * qu + (x % qu) * lambda % qu)?;
            implicit(h, k, act)
        }
        FamilyKind::G6 => {
            // (Z_p(y) × Z_p(z)) ⋊ Z_{p(p-1)}(x), x y x^-1 = y^e, e = t^-1.
            let e = inv_mod(primitive_root_t(p), p) as usize;
            let h = FiniteGroup::direct_product(&cy(p)?, &cy(p)?)?;
            let k = cy(q)?;
            let act = ActionHom::from_fn(&h, &k, |_, x| (x / pu * e % pu) * pu + x % pu)?;
            implicit(h, k, act)
        }
        FamilyKind::G7 | FamilyKind::G8 => {
            ModelGroup::Table(FiniteGroup::direct_product(&FiniteGroup::dihedral(pu)?, &cy(q)?)?)
        }
        FamilyKind::G9 => {
            // Heisenberg group on x, y, z (z x z^-1 = x y, y central),
            // extended by u, v, w of order p-1.
            let t = primitive_root_t(p) as usize;
            let tinv = inv_mod(t as u64, p) as usize;
            let xy = FiniteGroup::direct_product(&cy(p)?, &cy(p)?)?;
            let zc = cy(p)?;
            // x^i y^j has index i p + j; z acts by x ↦ x y.
            let heis_act = ActionHom::from_fn(&xy, &zc, |_, v| {
                let (i, j) = (v / pu, v % pu);
                i * pu + (j + i) % pu
            })?;
            let heis = SemidirectGroup::new(xy, zc, heis_act)?;
            let hg = heis.group().clone();
            let k = FiniteGroup::direct_product(&FiniteGroup::direct_product(&cy(p - 1)?, &cy(p - 1)?)?, &cy(p - 1)?)?;
            let p1 = (p - 1) as usize;
            // Exponents (on x, y, z) for the generators u, v, w of K.
            let scal = |s: usize| -> (usize, usize, usize) {
                if s == p1 * p1 {
                    (tinv, 1, t)
                } else if s == p1 {
                    (t, 1, tinv)
                } else {
                    (tinv, tinv, 1)
                }
            };
            let xg = heis.embed_h(pu);
            let yg = heis.embed_h(1);
            let zg = heis.embed_k(1);
            let mut imgs = Vec::new();
            for &s in k.gens() {
                let (ex, ey, ez) = scal(s);
                let images = [hg.pow(xg, ex as u64), hg.pow(yg, ey as u64), hg.pow(zg, ez as u64)];
                imgs.push(aut_from_images_gens(&hg, &[xg, yg, zg], &images)?);
            }
            let act = ActionHom::new(&hg, &k, imgs)?;
            implicit(hg, k, act)
        }
        FamilyKind::G10 => {
            // Z_{p-1} × ((Z_p × Z_p) ⋊ Z_{p-1}) with the Z_{p-1} factor
            // acting by t^-1 and t^-2 on the two Z_p factors.
            let t = primitive_root_t(p);
            let (e1, e2) = (inv_mod(t, p) as usize, inv_mod(t * t % p, p) as usize);
            let h = FiniteGroup::direct_product(&cy(p)?, &cy(p)?)?;
            let k = FiniteGroup::direct_product(&cy(p - 1)?, &cy(p - 1)?)?;
            let p1 = (p - 1) as usize;
            let act = ActionHom::from_fn(&h, &k, |s, x| {
                if s == p1 {
                    x
                } else {
                    (x / pu * e1 % pu) * pu + (x % pu) * e2 % pu
                }
            })?;
            implicit(h, k, act)
        }
    };
    Ok(Some(model))
}

/// Automorphism of `g` sending the listed generators to `images`.
fn aut_from_images_gens(g: &FiniteGroup, gens: &[usize], images: &[usize]) -> Result<Vec<u32>> {
    let h = g.clone().with_gens(gens.to_vec())?;
    aut_from_images(&h, images)
}

/// `λ` with `λ ≡ 1 (mod p-1)` and `λ ≡ t^-1 (mod p)`.
pub fn crt_lambda(p: u64) -> u64 {
    let tinv = inv_mod(primitive_root_t(p), p);
    let q = p * (p - 1);
    (0..q)
        .find(|&l| l % (p - 1) == 1 % (p - 1) && l % p == tinv)
        .expect("CRT solution exists")
}

/// `Aut(Z_{p^2} × Z_p)` built from its parametrization
/// `a ↦ a^i b^j`, `b ↦ a^{pm} b^l` (`p ∤ i`, `l ≠ 0`).
fn aut_abelian_p2_p(p: u64) -> Result<FiniteGroup> {
    let p2 = p * p;
    // (i, j, m, l) composed as maps of exponent vectors.
    type M = (u64, u64, u64, u64);
    let apply = |f: &M, (x, y): (u64, u64)| -> (u64, u64) {
        // f(a^x b^y) = (a^i b^j)^x (a^{pm} b^l)^y
        ((f.0 * x + p * f.2 * y) % p2, (f.1 * x + f.3 * y) % p)
    };
    let compose = |f: &M, g: &M| -> M {
        // f ∘ g
        let (ia, ja) = apply(f, apply(g, (1, 0)));
        let (pm, l) = apply(f, apply(g, (0, 1)));
        (ia, ja, pm / p, l)
    };
    let t = primitive_root_t(p);
    let gens: Vec<M> = vec![(t, 0, 0, 1), (1, 1, 0, 1), (1, 0, 1, 1), (1, 0, 0, t), (1 + p, 0, 0, 1)];
    let (g, _) = FiniteGroup::from_closure((1, 0, 0, 1), &gens, compose)?;
    Ok(g)
}

// ---------------------------------------------------------------------------
// Witness generators of W.

/// How a printed matrix turns into a map and how words multiply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixConvention {
    /// Row `i` lists the exponents of the image of the `i`-th generator;
    /// a written product `xy` applies `x` first.
    RowImages,
    /// Columns are images (layout `(η β; ξ 1)`); `xy` is `x ∘ y`.
    ColumnImages,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct WPair {
    alpha: Vec<u32>,
    delta: Vec<u32>,
}

impl WPair {
    fn then(&self, other: &WPair, conv: MatrixConvention) -> WPair {
        // Product of the written word "self other".
        let (first, second) = match conv {
            MatrixConvention::RowImages => (self, other),
            MatrixConvention::ColumnImages => (other, self),
        };
        WPair {
            alpha: perm::compose(&second.alpha, &first.alpha),
            delta: perm::compose(&second.delta, &first.delta),
        }
    }

    fn inverse(&self) -> WPair {
        WPair {
            alpha: perm::invert(&self.alpha),
            delta: perm::invert(&self.delta),
        }
    }

    fn identity(nh: usize, nk: usize) -> WPair {
        WPair {
            alpha: perm::identity(nh),
            delta: perm::identity(nk),
        }
    }
}

type Word = Vec<(usize, i64)>;

struct Relation {
    text: String,
    lhs: Word,
    rhs: Word,
}

struct WitnessData {
    conv: MatrixConvention,
    names: Vec<String>,
    elems: Vec<std::result::Result<WPair, String>>,
    /// Expected element orders for the first `expected_orders.len()` names.
    expected_orders: Vec<u64>,
    relations: Vec<Relation>,
    /// Symbols whose span is compared with `W`.
    generating: Vec<usize>,
    /// `(text, symbols, order, abelian)` subgroup claims.
    subgroups: Vec<(String, Vec<usize>, u64, bool)>,
    /// `(text, element, symbols)`: element lies in the span of symbols.
    memberships: Vec<(String, usize, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessMember {
    pub name: String,
    pub in_aut_h: bool,
    pub in_w: bool,
    pub order: Option<u64>,
    pub expected_order: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub family: String,
    pub t: u64,
    pub convention: MatrixConvention,
    pub members: Vec<WitnessMember>,
    pub relations: Vec<RelationCheck>,
    pub w_order: u64,
    pub generated_order: Option<u64>,
    pub membership: bool,
    pub relations_hold: bool,
    pub generates: bool,
    /// First failure, if any.
    pub failure: Option<String>,
}

impl WitnessReport {
    pub fn passes(&self) -> bool {
        self.membership && self.relations_hold && self.generates
    }
}

fn witness_data(spec: &FamilySpec, sd: &SemidirectGroup) -> Result<WitnessData> {
    let p = spec.p;
    let pi = p as i64;
    let t = primitive_root_t(p);
    let ti = t as i64;
    let tinv = inv_mod(t, p) as i64;
    let h = sd.h();
    let nk = sd.k().order() as u64;
    let delta = |rho: u64| power_map(nk, rho);
    let sym = |names: &[&str], s: &str| names.iter().position(|n| *n == s).expect("known symbol");
    // Parses words like "zyz^-1" over single-letter symbols; exponents are
    // given separately through `pw`.
    let w = |names: &[&str], s: &str| -> Word {
        let mut out = Vec::new();
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i].to_string();
            i += 1;
            let mut e = 1;
            if i + 2 < chars.len() + 1 && chars.get(i) == Some(&'^') && chars.get(i + 1) == Some(&'-') {
                e = -1;
                i += 3;
            }
            out.push((sym(names, &c), e));
        }
        out
    };
    let rel = |text: &str, lhs: Word, rhs: Word| Relation {
        text: text.to_string(),
        lhs,
        rhs,
    };
    let alpha = |images: &[usize]| aut_from_images(h, images).map_err(|e| e.to_string());
    let pair = |a: std::result::Result<Vec<u32>, String>, rho: u64| {
        a.map(|alpha| WPair {
            alpha,
            delta: delta(rho),
        })
    };
    match spec.kind {
        FamilyKind::G3 => {
            let o = [p * p, p];
            let mat = |i: i64, j: i64, m: i64, l: i64| alpha(&[word(&o, &[i, j]), word(&o, &[pi * m, l])]);
            let n = ["x", "y", "z"];
            let q = pi * (pi - 1);
            Ok(WitnessData {
                conv: MatrixConvention::RowImages,
                names: n.iter().map(|s| s.to_string()).collect(),
                elems: vec![
                    pair(mat(ti + pi, 0, 0, ti), 1),
                    pair(mat(1, 0, 1, 1), 1),
                    pair(mat(ti + pi, 0, 0, 1), t),
                ],
                expected_orders: vec![q as u64, p, q as u64],
                relations: vec![
                    rel("x^{p(p-1)} = 1", vec![(0, q)], vec![]),
                    rel("y^p = 1", vec![(1, pi)], vec![]),
                    rel("z^{p(p-1)} = 1", vec![(2, q)], vec![]),
                    rel("xz = zx", w(&n, "xz"), w(&n, "zx")),
                    rel("xy = yx", w(&n, "xy"), w(&n, "yx")),
                    rel("zyz^{-1} = y^{t^{-1}}", w(&n, "zyz^-1"), vec![(1, tinv)]),
                ],
                generating: vec![0, 1, 2],
                subgroups: vec![],
                memberships: vec![],
            })
        }
        FamilyKind::G5 => {
            let o = [p, p];
            let mat = |i: i64, j: i64, l: i64, m: i64| alpha(&[word(&o, &[i, j]), word(&o, &[l, m])]);
            let n = ["x", "y", "X"];
            let q = pi * (pi - 1);
            let lambda = crt_lambda(p) as i64;
            let s_inv = inv_mod((t + p) % p, p) as i64;
            Ok(WitnessData {
                conv: MatrixConvention::RowImages,
                names: vec!["x".into(), "y".into(), "(t 0; (t+p)^{-1} t)".into()],
                elems: vec![
                    pair(mat(ti, 0, 1, ti), 1),
                    pair(mat(ti + pi, 0, 0, 1), t),
                    pair(mat(ti, 0, s_inv, ti), 1),
                ],
                expected_orders: vec![q as u64, q as u64],
                relations: vec![
                    rel("x^{p(p-1)} = 1", vec![(0, q)], vec![]),
                    rel("y^{p(p-1)} = 1", vec![(1, q)], vec![]),
                    rel("yxy^{-1} = x^λ", w(&n, "yxy^-1"), vec![(0, lambda)]),
                    rel("x^λ = (t 0; (t+p)^{-1} t)", vec![(0, lambda)], vec![(2, 1)]),
                ],
                generating: vec![0, 1],
                subgroups: vec![],
                memberships: vec![],
            })
        }
        FamilyKind::G6 | FamilyKind::G7 => {
            let o = [p * p, p];
            // (η β; ξ 1): a ↦ a^i b^k, b ↦ a^{pj} b.
            let col = |i: i64, j: i64, k: i64| alpha(&[word(&o, &[i, k]), word(&o, &[pi * j, 1])]);
            let q = pi * (pi - 1);
            if spec.kind == FamilyKind::G6 {
                let n = ["x", "y", "z", "E"];
                let e = inv_mod((t + p) % p, p) as i64;
                Ok(WitnessData {
                    conv: MatrixConvention::ColumnImages,
                    names: vec!["x".into(), "y".into(), "z".into(), "(1 0; (t+p)^{-1} 1)".into()],
                    elems: vec![
                        pair(col(ti + pi, 0, 0), t),
                        pair(col(1, 0, 1), 1),
                        pair(col(1 + pi, 0, 0), 1),
                        pair(col(1, 0, e), 1),
                    ],
                    expected_orders: vec![q as u64, p, p],
                    relations: vec![
                        rel("x^{p(p-1)} = 1", vec![(0, q)], vec![]),
                        rel("y^p = 1", vec![(1, pi)], vec![]),
                        rel("z^p = 1", vec![(2, pi)], vec![]),
                        rel("xyx^{-1} = y^e", w(&n, "xyx^-1"), vec![(1, e)]),
                        rel("y^e = (1 0; (t+p)^{-1} 1)", vec![(1, e)], vec![(3, 1)]),
                        rel("xz = zx", w(&n, "xz"), w(&n, "zx")),
                        rel("yz = zy", w(&n, "yz"), w(&n, "zy")),
                    ],
                    generating: vec![0, 1, 2],
                    subgroups: vec![],
                    memberships: vec![],
                })
            } else {
                let n = ["x", "y", "z"];
                Ok(WitnessData {
                    conv: MatrixConvention::ColumnImages,
                    names: n.iter().map(|s| s.to_string()).collect(),
                    elems: vec![
                        pair(col(1, 1, 0), 1),
                        pair(col(-1, 0, 0), 1),
                        pair(col(ti + pi, 0, 0), t),
                    ],
                    expected_orders: vec![p, 2, q as u64],
                    relations: vec![
                        rel("x^p = 1", vec![(0, pi)], vec![]),
                        rel("y^2 = 1", vec![(1, 2)], vec![]),
                        rel("z^{p(p-1)} = 1", vec![(2, q)], vec![]),
                        rel("xy = yx^{-1}", w(&n, "xy"), w(&n, "yx^-1")),
                        rel("zxz^{-1} = x^t", w(&n, "zxz^-1"), vec![(0, ti)]),
                        rel("yz = zy", w(&n, "yz"), w(&n, "zy")),
                    ],
                    generating: vec![0, 1, 2],
                    subgroups: vec![],
                    memberships: vec![],
                })
            }
        }
        FamilyKind::G9 => {
            let o = [p, p, p];
            let mat = |r: [[i64; 3]; 3]| alpha(&[word(&o, &r[0]), word(&o, &r[1]), word(&o, &r[2])]);
            let n = ["u", "v", "w", "x", "y", "z"];
            let p1 = pi - 1;
            let id = |a: i64, b: i64, c: i64| [[a, 0, 0], [0, b, 0], [0, 0, c]];
            Ok(WitnessData {
                conv: MatrixConvention::RowImages,
                names: n.iter().map(|s| s.to_string()).collect(),
                elems: vec![
                    pair(mat(id(ti, 1, ti)), 1),
                    pair(mat(id(1, ti, 1)), 1),
                    pair(mat(id(ti, 1, 1)), t),
                    pair(mat([[1, 0, 0], [1, 1, 0], [0, 0, 1]]), 1),
                    pair(mat([[1, 0, 0], [0, 1, 0], [1, 0, 1]]), 1),
                    pair(mat([[1, 0, 0], [0, 1, 0], [0, 1, 1]]), 1),
                ],
                expected_orders: vec![p - 1, p - 1, p - 1, p, p, p],
                relations: vec![
                    rel("u^{p-1} = 1", vec![(0, p1)], vec![]),
                    rel("v^{p-1} = 1", vec![(1, p1)], vec![]),
                    rel("w^{p-1} = 1", vec![(2, p1)], vec![]),
                    rel("x^p = 1", vec![(3, pi)], vec![]),
                    rel("y^p = 1", vec![(4, pi)], vec![]),
                    rel("z^p = 1", vec![(5, pi)], vec![]),
                    rel("uv = vu", w(&n, "uv"), w(&n, "vu")),
                    rel("uw = wu", w(&n, "uw"), w(&n, "wu")),
                    rel("uy = yu", w(&n, "uy"), w(&n, "yu")),
                    rel("vw = wv", w(&n, "vw"), w(&n, "wv")),
                    rel("vy = yv", w(&n, "vy"), w(&n, "yv")),
                    rel("wz = zw", w(&n, "wz"), w(&n, "zw")),
                    rel("xy = yx", w(&n, "xy"), w(&n, "yx")),
                    rel("yz = zy", w(&n, "yz"), w(&n, "zy")),
                    rel("uxu^{-1} = x^{t^{-1}}", w(&n, "uxu^-1"), vec![(3, tinv)]),
                    rel("uzu^{-1} = z^t", w(&n, "uzu^-1"), vec![(5, ti)]),
                    rel("vxv^{-1} = x^t", w(&n, "vxv^-1"), vec![(3, ti)]),
                    rel("vzv^{-1} = z^{t^{-1}}", w(&n, "vzv^-1"), vec![(5, tinv)]),
                    rel("wxw^{-1} = x^{t^{-1}}", w(&n, "wxw^-1"), vec![(3, tinv)]),
                    rel("wyw^{-1} = y^{t^{-1}}", w(&n, "wyw^-1"), vec![(4, tinv)]),
                    rel("zx = xyz", w(&n, "zx"), w(&n, "xyz")),
                ],
                generating: vec![0, 1, 2, 3, 4, 5],
                subgroups: vec![],
                memberships: vec![],
            })
        }
        FamilyKind::G10 => {
            let o = [p, p, p];
            let mat = |r: [[i64; 3]; 3]| alpha(&[word(&o, &r[0]), word(&o, &r[1]), word(&o, &r[2])]);
            let n = ["x", "y", "z", "M", "N", "U"];
            let t2 = ti * ti % pi;
            let tinv2 = tinv * tinv % pi;
            Ok(WitnessData {
                conv: MatrixConvention::RowImages,
                names: vec![
                    "x".into(),
                    "y".into(),
                    "z".into(),
                    "(1 0 0; 1 1 0; 0 1 1)".into(),
                    "(1 0 0; 0 1 0; 1 0 1)".into(),
                    "z^u".into(),
                ],
                elems: vec![
                    pair(mat([[ti, 0, 0], [0, ti, 0], [0, 0, ti]]), 1),
                    pair(mat([[t2, 0, 0], [0, ti, 0], [0, 0, 1]]), t),
                    pair(mat([[1, 0, 0], [1, 1, 0], [1, 1, 1]]), 1),
                    pair(mat([[1, 0, 0], [1, 1, 0], [0, 1, 1]]), 1),
                    pair(mat([[1, 0, 0], [0, 1, 0], [1, 0, 1]]), 1),
                    pair(mat([[1, 0, 0], [tinv, 1, 0], [tinv2, tinv, 1]]), 1),
                ],
                expected_orders: vec![p - 1, p - 1, p],
                relations: vec![
                    rel("x^{p-1} = 1", vec![(0, pi - 1)], vec![]),
                    rel("y^{p-1} = 1", vec![(1, pi - 1)], vec![]),
                    rel("z^p = 1", vec![(2, pi)], vec![]),
                    rel("xy = yx", w(&n, "xy"), w(&n, "yx")),
                    rel("xz = zx", w(&n, "xz"), w(&n, "zx")),
                    rel("yzy^{-1} = z^u", w(&n, "yzy^-1"), vec![(5, 1)]),
                ],
                generating: vec![0, 1, 3, 4],
                subgroups: vec![("<z> is abelian of order p^2".into(), vec![3, 4], p * p, true)],
                memberships: vec![("z lies in <z>".into(), 2, vec![3, 4])],
            })
        }
        _ => Err(Error::InvalidParams(format!(
            "{} has no named generators of W",
            spec.kind.name()
        ))),
    }
}

fn eval_word(elems: &[WPair], word: &Word, conv: MatrixConvention, nh: usize, nk: usize) -> WPair {
    let mut acc = WPair::identity(nh, nk);
    for &(s, e) in word {
        let base = if e < 0 { elems[s].inverse() } else { elems[s].clone() };
        for _ in 0..e.unsigned_abs() {
            acc = acc.then(&base, conv);
        }
    }
    acc
}

fn pair_order(x: &WPair) -> u64 {
    let mut cur = x.clone();
    let mut k = 1;
    while cur.alpha.iter().enumerate().any(|(i, &v)| i as u32 != v)
        || cur.delta.iter().enumerate().any(|(i, &v)| i as u32 != v)
    {
        cur = WPair {
            alpha: perm::compose(&x.alpha, &cur.alpha),
            delta: perm::compose(&x.delta, &cur.delta),
        };
        k += 1;
    }
    k
}

/// Checks the named generators of `W`: membership, every printed relation,
/// and that they generate `W`.
pub fn check_witnesses(spec: &FamilySpec, sd: &SemidirectGroup, s: &StructuredSubgroups) -> Result<WitnessReport> {
    let data = witness_data(spec, sd)?;
    let (nh, nk) = (sd.h().order(), sd.k().order());
    let mut failure: Option<String> = None;
    let note = |f: &mut Option<String>, msg: String| {
        if f.is_none() {
            *f = Some(msg);
        }
    };
    let mut members = Vec::new();
    let mut elems = Vec::new();
    let mut all_valid = true;
    for (i, (name, e)) in data.names.iter().zip(&data.elems).enumerate() {
        let expected_order = data.expected_orders.get(i).copied();
        match e {
            Ok(pr) => {
                let ia = s.aut_h.index_of(&pr.alpha);
                let id = s.aut_k.index_of(&pr.delta);
                let in_w = matches!((ia, id), (Some(a), Some(d)) if s.w_contains(a, d));
                if !in_w {
                    note(&mut failure, format!("witness {name} lies outside W"));
                }
                let order = pair_order(pr);
                if let Some(eo) = expected_order {
                    if eo != order {
                        note(&mut failure, format!("witness {name} has order {order}, expected {eo}"));
                    }
                }
                members.push(WitnessMember {
                    name: name.clone(),
                    in_aut_h: true,
                    in_w,
                    order: Some(order),
                    expected_order,
                });
                elems.push(pr.clone());
            }
            Err(msg) => {
                all_valid = false;
                note(
                    &mut failure,
                    format!("witness {name} is not an automorphism of H: {msg}"),
                );
                members.push(WitnessMember {
                    name: name.clone(),
                    in_aut_h: false,
                    in_w: false,
                    order: None,
                    expected_order,
                });
                elems.push(WPair::identity(nh, nk));
            }
        }
    }
    let membership = members.iter().all(|m| m.in_w);
    let orders_ok = members
        .iter()
        .all(|m| m.expected_order.is_none() || m.order == m.expected_order);

    let mut relations = Vec::new();
    for r in &data.relations {
        let holds =
            all_valid && eval_word(&elems, &r.lhs, data.conv, nh, nk) == eval_word(&elems, &r.rhs, data.conv, nh, nk);
        if !holds {
            note(&mut failure, format!("relation {} fails", r.text));
        }
        relations.push(RelationCheck {
            relation: r.text.clone(),
            holds,
        });
    }
    // Subgroup claims, checked on G-permutations of the diagonal triples.
    let g_perm = |pr: &WPair| {
        autk::synthesize_automorphism(
            sd,
            &autk::AutTriple {
                alpha: pr.alpha.clone(),
                gamma: vec![0; nh],
                delta: pr.delta.clone(),
            },
        )
    };
    let base = autk::automorphism_base(sd);
    let w_order = s.w.len() as u64;
    let limit = (w_order as usize).max(1) * 2 + 1;
    for (text, syms, order, abelian) in &data.subgroups {
        let gens: Vec<Vec<u32>> = syms.iter().map(|&i| g_perm(&elems[i])).collect();
        let ok = match PermGroup::generate(&gens, sd.order(), &base, limit) {
            Ok(sub) => sub.order() as u64 == *order && (!abelian || sub.is_abelian()),
            Err(_) => false,
        };
        if !ok {
            note(&mut failure, format!("claim fails: {text}"));
        }
        relations.push(RelationCheck {
            relation: text.clone(),
            holds: all_valid && ok,
        });
    }
    for (text, el, syms) in &data.memberships {
        let gens: Vec<Vec<u32>> = syms.iter().map(|&i| g_perm(&elems[i])).collect();
        let ok = PermGroup::generate(&gens, sd.order(), &base, limit)
            .map(|sub| sub.contains(&g_perm(&elems[*el])))
            .unwrap_or(false);
        if !ok {
            note(&mut failure, format!("claim fails: {text}"));
        }
        relations.push(RelationCheck {
            relation: text.clone(),
            holds: all_valid && ok,
        });
    }
    let relations_hold = orders_ok && relations.iter().all(|r| r.holds);

    let gens: Vec<Vec<u32>> = data.generating.iter().map(|&i| g_perm(&elems[i])).collect();
    let generated_order = PermGroup::generate(&gens, sd.order(), &base, limit)
        .ok()
        .map(|g| g.order() as u64);
    let generates = membership && generated_order == Some(w_order);
    if !generates {
        note(
            &mut failure,
            format!(
                "named generators span {} elements, |W| = {w_order}",
                generated_order.map_or("too many".to_string(), |o| o.to_string())
            ),
        );
    }
    Ok(WitnessReport {
        family: spec.label(),
        t: primitive_root_t(spec.p),
        convention: data.conv,
        members,
        relations,
        w_order,
        generated_order,
        membership,
        relations_hold,
        generates,
        failure,
    })
}

// ---------------------------------------------------------------------------
// End-to-end verification.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub search: AutSearchConfig,
    /// Also count all of `Aut(G)` (expensive for the rank-3 families).
    pub count_aut: bool,
    /// Node budget for the explicit isomorphism search.
    pub iso_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            search: AutSearchConfig::default(),
            count_aut: true,
            iso_budget: 50_000_000,
        }
    }
}

/// Comparison of computed values with [`ExpectedResult`]; `None` means the
/// field is not checked (degenerate closed form or no prediction).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedMatch {
    pub autk_structured: Option<bool>,
    pub autk_oracle: Option<bool>,
    pub c_invariants: Option<bool>,
    pub e_order: Option<bool>,
    pub index: Option<bool>,
    pub model_fingerprint: Option<bool>,
}

impl ExpectedMatch {
    pub fn all(&self) -> bool {
        [
            self.autk_structured,
            self.autk_oracle,
            self.c_invariants,
            self.e_order,
            self.index,
            self.model_fingerprint,
        ]
        .iter()
        .all(|v| v.unwrap_or(true))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationOutcome {
    pub spec: FamilySpec,
    pub group_order: u64,
    pub expected: ExpectedResult,
    pub report: DecompositionReport,
    pub c_abelian_invariants: Option<Vec<u64>>,
    pub aut_order: Option<u64>,
    pub index: Option<u64>,
    pub expected_match: ExpectedMatch,
    /// Explicit isomorphism test of the assembled group against the model.
    pub iso_verdict: Option<IsoVerdict>,
    /// Fingerprint of the oracle group against the model.
    pub oracle_matches_model: Option<bool>,
    /// Oracle automorphisms whose `γ` is not a homomorphism.
    pub gamma_non_hom: u64,
    /// Members of `E` failing the condition check.
    pub e_condition_failures: u64,
    pub witnesses: Option<WitnessReport>,
}

impl VerificationOutcome {
    pub fn passed(&self) -> bool {
        self.report.checks.all()
            && self.expected_match.all()
            && self.iso_verdict != Some(IsoVerdict::No)
            && self.witnesses.as_ref().map_or(true, |w| w.passes())
            && self.e_condition_failures == 0
    }
}

/// Builds the group, runs the triple pipeline and the oracle, and compares
/// everything with [`expected_result`].
pub fn verify_family(spec: &FamilySpec, opts: &VerifyOptions) -> Result<VerificationOutcome> {
    let sd = build_family(spec)?;
    let expected = expected_result(spec)?;
    let run = autk::run_decomposition(&sd, &opts.search, &spec.label())?;
    outcome_from_run(spec, &sd, expected, run, opts)
}

/// Builds the outcome from an already computed decomposition.
pub fn outcome_from_run(
    spec: &FamilySpec,
    sd: &SemidirectGroup,
    expected: ExpectedResult,
    run: DecompositionRun,
    opts: &VerifyOptions,
) -> Result<VerificationOutcome> {
    let degenerate = expected.is_degenerate();
    let trusted = |b: bool| if degenerate { None } else { Some(b) };
    let aut_order = if opts.count_aut {
        Some(oracle::count_aut(sd.group(), &opts.search)?)
    } else {
        None
    };
    let oracle_order = run.oracle.order() as u64;
    let index = aut_order.map(|a| a / oracle_order);

    let c_perms: Vec<Vec<u32>> = run
        .structured
        .c
        .iter()
        .map(|t| autk::synthesize_automorphism(sd, t))
        .collect();
    let c_group = PermGroup::from_perms(c_perms, sd.order(), &autk::automorphism_base(sd)).ok();
    let c_inv = match &c_group {
        Some(cg) if cg.is_abelian() => Some(fingerprint(cg)?.abelian_invariants_of_abelianization),
        _ => None,
    };

    let model = build_model(spec)?;
    let model_fp = match &model {
        Some(m) => Some(fingerprint(m)?),
        None => None,
    };
    let assembled_fp = match &run.assembled {
        Some(a) if model_fp.is_some() => Some(fingerprint(a)?),
        _ => None,
    };
    let model_fingerprint = model_fp.as_ref().map(|mf| assembled_fp.as_ref() == Some(mf));
    let oracle_matches_model = match &model_fp {
        Some(mf) => Some(fingerprint(&run.oracle)? == *mf),
        None => None,
    };
    let iso_verdict = match (&run.assembled, &model, model_fingerprint) {
        (Some(a), Some(m), Some(true)) if a.order() <= 4000 => Some(is_isomorphic_small(a, m, opts.iso_budget)?),
        (_, Some(_), Some(false)) => Some(IsoVerdict::No),
        _ => None,
    };

    let structured_order = run.report.orders.autk_structured;
    let expected_match = ExpectedMatch {
        autk_structured: trusted(structured_order == Some(expected.autk_order)),
        autk_oracle: trusted(oracle_order == expected.autk_order),
        c_invariants: trusted(c_inv.as_ref() == Some(&expected.c_abelian_invariants)),
        e_order: trusted(run.structured.w.len() as u64 == expected.e_order),
        index: match (expected.index_in_aut, index) {
            (Some(e), Some(i)) => trusted(e == i),
            _ => None,
        },
        model_fingerprint,
    };
    let witnesses = if spec.kind.has_witnesses() {
        Some(check_witnesses(spec, sd, &run.structured)?)
    } else {
        None
    };
    Ok(VerificationOutcome {
        spec: *spec,
        group_order: sd.order() as u64,
        expected,
        report: run.report,
        c_abelian_invariants: c_inv,
        aut_order,
        index,
        expected_match,
        iso_verdict,
        oracle_matches_model,
        gamma_non_hom: run.gamma_non_hom as u64,
        e_condition_failures: run.e_failures as u64,
        witnesses,
    })
}

/// Header of the CSV table produced by [`table_row`].
pub const TABLE_COLUMNS: [&str; 18] = [
    "schema",
    "family",
    "p",
    "m",
    "n",
    "r",
    "d",
    "order",
    "C",
    "E",
    "autk_structured",
    "autk_oracle",
    "autk_expected",
    "aut",
    "index",
    "match",
    "iso",
    "degenerate",
];

pub const TABLE_SCHEMA: u32 = 1;

pub fn table_row(o: &VerificationOutcome) -> Vec<String> {
    let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
    let opt32 = |v: Option<u32>| v.map_or(String::new(), |x| x.to_string());
    let flag = |b: bool| if b { "yes" } else { "no" }.to_string();
    vec![
        TABLE_SCHEMA.to_string(),
        o.spec.kind.name().to_string(),
        o.spec.p.to_string(),
        opt32(o.spec.m),
        opt32(o.spec.n),
        opt32(o.spec.r),
        if o.spec.kind == FamilyKind::G8 {
            o.spec.d_value().to_string()
        } else {
            String::new()
        },
        o.group_order.to_string(),
        o.report.orders.c.to_string(),
        o.report.orders.e.to_string(),
        opt(o.report.orders.autk_structured),
        o.report.orders.autk_oracle.to_string(),
        o.expected.autk_order.to_string(),
        opt(o.aut_order),
        opt(o.index),
        flag(o.passed()),
        match o.iso_verdict {
            Some(IsoVerdict::Yes) => "yes".into(),
            Some(IsoVerdict::No) => "no".into(),
            Some(IsoVerdict::Unconfirmed) => "unconfirmed".into(),
            None => String::new(),
        },
        flag(o.expected.is_degenerate()),
    ]
}

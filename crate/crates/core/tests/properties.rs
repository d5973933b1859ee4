use autk_core::group::{
    enumerate_homs, fingerprint, gcd, is_isomorphic_small, quotient, FiniteGroup, GroupLike, IsoVerdict,
};
use autk_core::semidirect::{ActionHom, SemidirectGroup};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Shape {
    Cyclic(usize),
    Dihedral(usize),
    Product(usize, usize),
    /// `Z_m ⋊ Z_n`, generator of `Z_n` acting by `x -> s x`.
    Meta(usize, usize, usize),
}

fn build(s: &Shape) -> FiniteGroup {
    match *s {
        Shape::Cyclic(n) => FiniteGroup::cyclic(n).unwrap(),
        Shape::Dihedral(n) => FiniteGroup::dihedral(n).unwrap(),
        Shape::Product(a, b) => {
            FiniteGroup::direct_product(&FiniteGroup::cyclic(a).unwrap(), &FiniteGroup::cyclic(b).unwrap()).unwrap()
        }
        Shape::Meta(m, n, s) => {
            let (h, k) = (FiniteGroup::cyclic(m).unwrap(), FiniteGroup::cyclic(n).unwrap());
            let act = ActionHom::from_fn(&h, &k, |_, x| x * s % m).unwrap();
            SemidirectGroup::new(h, k, act).unwrap().group().clone()
        }
    }
}

fn meta_params() -> impl Strategy<Value = Shape> {
    (3usize..=12, 2usize..=6).prop_flat_map(|(m, n)| {
        let ok: Vec<usize> = (1..m)
            .filter(|&s| gcd(s as u64, m as u64) == 1 && (0..n).fold(1, |acc, _| acc * s % m) == 1)
            .collect();
        proptest::sample::select(ok).prop_map(move |s| Shape::Meta(m, n, s))
    })
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        (1usize..=24).prop_map(Shape::Cyclic),
        (1usize..=12).prop_map(Shape::Dihedral),
        (1usize..=6, 1usize..=6).prop_map(|(a, b)| Shape::Product(a, b)),
        meta_params(),
    ]
}

/// Group together with a relabeling that fixes the identity.
fn shape_and_perm() -> impl Strategy<Value = (Shape, Vec<usize>)> {
    shape().prop_flat_map(|s| {
        let n = build(&s).order();
        let rest: Vec<usize> = (1..n).collect();
        (Just(s), Just(rest).prop_shuffle()).prop_map(|(s, rest)| {
            let mut p = vec![0];
            p.extend(rest);
            (s, p)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tables_are_associative(s in shape()) {
        let g = build(&s);
        g.verify_axioms().unwrap();
        let n = g.order();
        for x in 0..n {
            for y in 0..n {
                for z in (0..n).step_by(1 + n / 7) {
                    prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
            prop_assert_eq!(g.mul(x, g.inv(x)), 0);
        }
    }

    #[test]
    fn fingerprint_survives_relabeling((s, p) in shape_and_perm()) {
        let g = build(&s);
        let r = g.relabel(&p).unwrap();
        r.verify_axioms().unwrap();
        prop_assert_eq!(fingerprint(&g).unwrap(), fingerprint(&r).unwrap());
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric((s, p) in shape_and_perm(), t in shape()) {
        let g = build(&s);
        let r = g.relabel(&p).unwrap();
        prop_assert_eq!(is_isomorphic_small(&g, &r, 5_000_000).unwrap(), IsoVerdict::Yes);
        prop_assert_eq!(is_isomorphic_small(&r, &g, 5_000_000).unwrap(), IsoVerdict::Yes);
        let h = build(&t);
        let ab = is_isomorphic_small(&g, &h, 5_000_000).unwrap();
        let ba = is_isomorphic_small(&h, &g, 5_000_000).unwrap();
        prop_assert_eq!(ab, ba);
        if fingerprint(&g).unwrap() != fingerprint(&h).unwrap() {
            prop_assert_eq!(ab, IsoVerdict::No);
        }
    }

    #[test]
    fn homs_from_cyclic_match_naive_count(a in 1usize..=12, t in shape()) {
        let b = build(&t);
        let homs = enumerate_homs(&FiniteGroup::cyclic(a).unwrap(), &b).unwrap();
        // A hom from Z_a is determined by an element y with y^a = 1.
        let naive = (0..b.order()).filter(|&y| b.pow(y, a as u64) == 0).count();
        prop_assert_eq!(homs.len(), naive);
    }

    #[test]
    fn kernels_and_quotients(s in shape(), t in shape()) {
        let (a, b) = (build(&s), build(&t));
        prop_assume!(a.order() * b.order() <= 600);
        for hom in enumerate_homs(&a, &b).unwrap().iter().take(20) {
            let ker = hom.kernel(&a);
            let img = hom.image_subgroup(&b);
            prop_assert_eq!(ker.order() * img.order(), a.order());
            prop_assert!(ker.is_normal_in(&a));
            let (q, proj) = quotient(&a, &ker).unwrap();
            prop_assert_eq!(q.order(), img.order());
            prop_assert_eq!(proj.kernel(&a), ker.clone());
        }
        // Hom count between cyclic groups is gcd(m, n).
        if let (Shape::Cyclic(m), Shape::Cyclic(n)) = (&s, &t) {
            prop_assert_eq!(enumerate_homs(&a, &b).unwrap().len() as u64, gcd(*m as u64, *n as u64));
        }
    }

    #[test]
    fn group_and_semidirect_json_round_trip(s in meta_params()) {
        let Shape::Meta(m, n, sc) = s else { unreachable!() };
        let (h, k) = (FiniteGroup::cyclic(m).unwrap(), FiniteGroup::cyclic(n).unwrap());
        let act = ActionHom::from_fn(&h, &k, |_, x| x * sc % m).unwrap();
        let sd = SemidirectGroup::new(h, k, act).unwrap();
        let back = SemidirectGroup::from_doc(&sd.to_doc()).unwrap();
        prop_assert_eq!(back.group().table(), sd.group().table());
        let g = sd.group();
        let parsed = FiniteGroup::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(parsed.table(), g.table());
    }
}

use autk_core::families::{
    build_family, expected_result, primitive_root_t, verify_family, FamilyKind, FamilySpec, VerificationOutcome,
    VerifyOptions,
};
use autk_core::group::{fingerprint, is_isomorphic_small, IsoVerdict};

fn quick() -> VerifyOptions {
    VerifyOptions {
        count_aut: false,
        ..Default::default()
    }
}

#[test]
fn order_p4_values_at_five() {
    // (structured |C x| E|, oracle |Aut_K|, stated |Aut_K|)
    let frozen: [(FamilyKind, Option<u64>, u64, u64); 10] = [
        (FamilyKind::G1, Some(100), 500, 500),
        (FamilyKind::G2, Some(500), 500, 500),
        (FamilyKind::G3, Some(400), 2000, 2000),
        (FamilyKind::G4, Some(2000), 10000, 2000),
        (FamilyKind::G5, Some(2000), 2000, 2000),
        (FamilyKind::G6, Some(100), 500, 500),
        (FamilyKind::G7, Some(50), 200, 200),
        (FamilyKind::G8, Some(50), 200, 200),
        (FamilyKind::G9, Some(8000), 40000, 8000),
        (FamilyKind::G10, Some(400), 400, 400),
    ];
    for (kind, structured, oracle, stated) in frozen {
        let o = verify_family(&FamilySpec::order_p4(kind, 5), &quick()).unwrap();
        assert_eq!(o.group_order, 625);
        assert_eq!(o.report.orders.autk_structured, structured, "{kind:?}");
        assert_eq!(o.report.orders.autk_oracle, oracle, "{kind:?}");
        assert_eq!(o.expected.autk_order, stated, "{kind:?}");
        // G5 and G10 also fail on the model type and the witnesses.
        assert_eq!(o.passed(), kind == FamilyKind::G2, "{kind:?}");
        assert_eq!(o.report.checks.equals_oracle, structured == Some(oracle), "{kind:?}");
    }
}

#[test]
fn metacyclic_closed_form_matches_oracle() {
    let mut seen = 0;
    for (p, max_m, max_n) in [(3u64, 4u32, 3u32), (5, 3, 2)] {
        for m in 2..=max_m {
            for n in 1..=max_n {
                for r in 1..=(m - 1).min(n) {
                    let spec = FamilySpec::metacyclic(FamilyKind::MetacyclicOdd, p, m, n, Some(r));
                    if spec.validate().is_err() || spec.group_order().unwrap() > 2187 {
                        continue;
                    }
                    let o = verify_family(&spec, &quick()).unwrap();
                    assert_eq!(o.expected_match.autk_oracle, Some(true), "{spec}");
                    // The decomposition only closes up when m <= n.
                    assert_eq!(o.passed(), m <= n, "{spec}");
                    seen += 1;
                }
            }
        }
    }
    assert!(seen >= 10);
}

#[test]
fn small_metacyclic_frozen_orders() {
    let frozen = [
        ((2, 1, 1), 18, 54),
        ((2, 2, 1), 54, 486),
        ((3, 1, 1), 54, 162),
        ((3, 2, 1), 486, 4374),
    ];
    for ((m, n, r), autk, aut) in frozen {
        let spec = FamilySpec::metacyclic(FamilyKind::MetacyclicOdd, 3, m, n, Some(r));
        let o = verify_family(&spec, &VerifyOptions::default()).unwrap();
        assert_eq!(o.report.orders.autk_oracle, autk, "{spec}");
        assert_eq!(o.aut_order, Some(aut), "{spec}");
        assert_eq!(o.index, Some(aut / autk), "{spec}");
        assert_eq!(o.index, expected_result(&spec).unwrap().index_in_aut, "{spec}");
    }
}

#[test]
fn g1_and_g2_agree_with_the_metacyclic_path() {
    for (kind, (m, n, r)) in [(FamilyKind::G1, (3, 1, 1)), (FamilyKind::G2, (2, 2, 1))] {
        let a = build_family(&FamilySpec::order_p4(kind, 5)).unwrap();
        let b = build_family(&FamilySpec::metacyclic(FamilyKind::MetacyclicOdd, 5, m, n, Some(r))).unwrap();
        assert_eq!(fingerprint(a.group()).unwrap(), fingerprint(b.group()).unwrap());
        assert_eq!(
            is_isomorphic_small(a.group(), b.group(), 50_000_000).unwrap(),
            IsoVerdict::Yes
        );
        let oa = verify_family(&FamilySpec::order_p4(kind, 5), &quick()).unwrap();
        let ob = verify_family(
            &FamilySpec::metacyclic(FamilyKind::MetacyclicOdd, 5, m, n, Some(r)),
            &quick(),
        )
        .unwrap();
        assert_eq!(oa.report.orders, ob.report.orders);
    }
}

#[test]
fn primitive_roots_lift() {
    assert_eq!(primitive_root_t(5), 3);
    assert_eq!(primitive_root_t(7), 3);
    assert_eq!(primitive_root_t(11), 2);
}

#[test]
fn outcomes_round_trip_through_json() {
    let o = verify_family(&FamilySpec::order_p4(FamilyKind::G10, 5), &quick()).unwrap();
    let s = serde_json::to_string(&o).unwrap();
    let back: VerificationOutcome = serde_json::from_str(&s).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
    let spec: FamilySpec = serde_json::from_str(r#"{"kind":"G8","p":7,"d":3}"#).unwrap();
    assert_eq!(
        spec.label(),
        FamilySpec {
            d: Some(3),
            ..FamilySpec::order_p4(FamilyKind::G8, 7)
        }
        .label()
    );
}

//! Acceptance run. Prints one `PASS`/`FAIL` line per criterion, then
//! compares every verdict with the recorded outcome below.
//!
//! Several criteria assert claims that the brute-force oracle refutes.
//! Those print `FAIL` and are listed in `RECORDED`; the process exits
//! nonzero only when a verdict differs from the recorded one (a red
//! criterion turning green is reported too) or when a frozen oracle value
//! changes.

use std::process::ExitCode;
use std::time::Instant;

use autk_core::autk::{self, DecompositionChecks};
use autk_core::families::{
    build_family, build_model, check_witnesses, expected_result, verify_family, FamilyKind, FamilySpec,
    VerificationOutcome, VerifyOptions,
};
use autk_core::fuzz;
use autk_core::group::{fingerprint, FiniteGroup, IsoVerdict};
use autk_core::oracle::{self, AutKPath, AutSearchConfig};
use autk_core::semidirect::{ActionHom, SemidirectGroup};
use autk_core::soundness::{check_soundness, SoundnessConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Verdict each criterion is known to produce.
const RECORDED: [(u8, bool); 8] = [
    (1, false),
    (2, true),
    (3, false),
    (4, false),
    (5, false),
    (6, true),
    (7, false),
    (8, true),
];

/// Oracle `|Aut_K(G_i)|` and `|Aut(G_i)|` at `p = 5`, G1..G10.
const P4_AUTK_ORACLE: [u64; 10] = [500, 500, 2000, 10000, 2000, 500, 200, 200, 40000, 400];
const P4_AUT_ORACLE: [u64; 10] = [2500, 12500, 60000, 250000, 50000, 12500, 5000, 5000, 6_000_000, 50000];
/// `|C| · |E|` from the structured pipeline at `p = 5`.
const P4_AUTK_STRUCTURED: [u64; 10] = [100, 500, 400, 2000, 2000, 100, 50, 50, 8000, 400];
/// Orders of the stated isomorphism types at `p = 5`.
const P4_CLAIMED: [u64; 10] = [500, 500, 2000, 2000, 2000, 500, 200, 200, 8000, 400];

struct Criterion {
    id: u8,
    pass: bool,
    summary: String,
    details: Vec<String>,
    regressions: Vec<String>,
}

fn criterion(id: u8, pass: bool, summary: String, details: Vec<String>) -> Criterion {
    Criterion {
        id,
        pass,
        summary,
        details,
        regressions: Vec::new(),
    }
}

fn checks_line(c: &DecompositionChecks) -> String {
    let failed: Vec<&str> = [
        ("c_normal", c.c_normal),
        ("intersection_trivial", c.intersection_trivial),
        ("product_order", c.product_order),
        ("equals_oracle", c.equals_oracle),
        ("factorization", c.factorization),
    ]
    .iter()
    .filter(|(_, ok)| !ok)
    .map(|(n, _)| *n)
    .collect();
    if failed.is_empty() {
        "all checks pass".into()
    } else {
        format!("failed: {}", failed.join(", "))
    }
}

fn metacyclic_grid() -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for p in [3u64, 5] {
        for m in 2..=7u32 {
            for n in 1..=6u32 {
                if p.pow(m + n) > 2187 {
                    continue;
                }
                for r in 1..=(m - 1).min(n) {
                    out.push(FamilySpec::metacyclic(FamilyKind::MetacyclicOdd, p, m, n, Some(r)));
                }
            }
        }
    }
    out
}

fn metacyclic_formula(s: &FamilySpec) -> u64 {
    let (p, m, n, r) = (s.p, s.m.unwrap(), s.n.unwrap(), s.r.unwrap());
    p.pow((m - r).min(n) + m - 1 + n - r) * (p - 1)
}

fn run(spec: &FamilySpec, count_aut: bool) -> (VerificationOutcome, f64) {
    let t = Instant::now();
    let opts = VerifyOptions {
        count_aut,
        ..Default::default()
    };
    let o = verify_family(spec, &opts).unwrap_or_else(|e| panic!("{spec}: {e}"));
    (o, t.elapsed().as_secs_f64())
}

fn criterion_1(grid: &[(VerificationOutcome, f64)]) -> Criterion {
    let mut details = Vec::new();
    let mut bad = 0;
    let mut regressions = Vec::new();
    for (o, secs) in grid {
        let formula = metacyclic_formula(&o.spec);
        let structured = o.report.orders.autk_structured;
        let ok = structured == Some(formula) && o.report.orders.autk_oracle == formula && *secs < 60.0;
        bad += !ok as usize;
        if o.report.orders.autk_oracle != formula {
            regressions.push(format!(
                "{}: oracle {} differs from the closed form {formula}",
                o.spec, o.report.orders.autk_oracle
            ));
        }
        details.push(format!(
            "{} {}: formula {formula}, structured {:?}, oracle {} ({secs:.1}s)",
            if ok { "ok " } else { "BAD" },
            o.spec,
            structured,
            o.report.orders.autk_oracle
        ));
    }
    let mut c = criterion(
        1,
        bad == 0 && grid.len() >= 8,
        format!(
            "metacyclic closed form: {} configurations, {bad} with structured order off the formula (oracle equals the formula on all)",
            grid.len()
        ),
        details,
    );
    c.regressions = regressions;
    c
}

fn criterion_2(grid: &[(VerificationOutcome, f64)]) -> Criterion {
    let mut details = Vec::new();
    let mut pass = true;
    let mut n = 0;
    for (o, _) in grid.iter().filter(|(o, _)| o.spec.p == 3 && o.group_order <= 243) {
        n += 1;
        let want = 3u64.pow(o.spec.m.unwrap().min(o.spec.n.unwrap()));
        let ok = o.index == Some(want) && o.aut_order.is_some_and(|a| a % o.report.orders.autk_oracle == 0);
        pass &= ok;
        details.push(format!(
            "{} {}: |Aut(G)| {:?} / |Aut_K(G)| {} = {:?}, claimed {want}",
            if ok { "ok " } else { "BAD" },
            o.spec,
            o.aut_order,
            o.report.orders.autk_oracle,
            o.index
        ));
    }
    criterion(
        2,
        pass && n > 0,
        format!("index p^min(m,n) on {n} configurations with p = 3, |G| <= 243"),
        details,
    )
}

fn criterion_3(p4: &[(VerificationOutcome, f64)], restricted: &[u64]) -> Criterion {
    let mut details = Vec::new();
    let mut regressions = Vec::new();
    let mut pass = true;
    for (i, (o, secs)) in p4.iter().enumerate() {
        let s = o.report.orders.autk_structured;
        let oracle = o.report.orders.autk_oracle;
        let ok = s == Some(oracle) && oracle == P4_CLAIMED[i] && o.expected.autk_order == P4_CLAIMED[i];
        pass &= ok;
        details.push(format!(
            "{} {}: claimed {}, structured {:?}, oracle {oracle}, |Aut(G)| {:?} ({secs:.1}s)",
            if ok { "ok " } else { "BAD" },
            o.spec,
            P4_CLAIMED[i],
            s,
            o.aut_order
        ));
        if oracle != P4_AUTK_ORACLE[i] || restricted[i] != oracle {
            regressions.push(format!(
                "{}: oracle {oracle}, restricted search {}, recorded {}",
                o.spec, restricted[i], P4_AUTK_ORACLE[i]
            ));
        }
        if o.aut_order != Some(P4_AUT_ORACLE[i]) {
            regressions.push(format!(
                "{}: |Aut(G)| {:?}, recorded {}",
                o.spec, o.aut_order, P4_AUT_ORACLE[i]
            ));
        }
        if s != Some(P4_AUTK_STRUCTURED[i]) {
            regressions.push(format!(
                "{}: structured {:?}, recorded {}",
                o.spec, s, P4_AUTK_STRUCTURED[i]
            ));
        }
    }
    let total: f64 = p4.iter().map(|(_, s)| s).sum();
    let mut c = criterion(
        3,
        pass && total <= 600.0,
        format!("order p^4 table at p = 5 ({total:.0}s including |Aut(G)|)"),
        details,
    );
    c.regressions = regressions;
    c
}

fn criterion_4(p4: &[(VerificationOutcome, f64)]) -> Criterion {
    let mut details = Vec::new();
    let mut pass = true;
    for (o, _) in p4 {
        let ok = match o.spec.kind {
            FamilyKind::G7 | FamilyKind::G8 => o.iso_verdict == Some(IsoVerdict::Yes),
            _ => o.expected_match.model_fingerprint == Some(true),
        };
        pass &= ok;
        details.push(format!(
            "{} {}: model {}, assembled fingerprint match {:?}, iso {:?}, oracle fingerprint match {:?}",
            if ok { "ok " } else { "BAD" },
            o.spec,
            o.expected.autk_type,
            o.expected_match.model_fingerprint,
            o.iso_verdict,
            o.oracle_matches_model
        ));
    }
    criterion(
        4,
        pass,
        "isomorphism type of the assembled C x| E against the stated model".into(),
        details,
    )
}

fn criterion_5(all: &[&(VerificationOutcome, f64)]) -> Criterion {
    let mut details = Vec::new();
    let mut bad = 0;
    for (o, _) in all {
        let ok = o.report.checks.all();
        bad += !ok as usize;
        if !ok {
            details.push(format!(
                "BAD {}: |C| {}, |E| {}, oracle {}: {}",
                o.spec,
                o.report.orders.c,
                o.report.orders.e,
                o.report.orders.autk_oracle,
                checks_line(&o.report.checks)
            ));
        }
    }
    criterion(
        5,
        bad == 0,
        format!("decomposition checks on {} instances, {bad} failing", all.len()),
        details,
    )
}

fn small_corpus() -> Vec<(String, SemidirectGroup)> {
    let mut out = Vec::new();
    let cy = |n| FiniteGroup::cyclic(n).unwrap();
    let semi = |m: usize, n: usize, s: usize| {
        let (h, k) = (cy(m), cy(n));
        let act = ActionHom::from_fn(&h, &k, |_, x| x * s % m).unwrap();
        SemidirectGroup::new(h, k, act).unwrap()
    };
    out.push(("S3".to_string(), semi(3, 2, 2)));
    out.push(("D8".to_string(), semi(4, 2, 3)));
    out.push(("D10".to_string(), semi(5, 2, 4)));
    out.push(("Z7:Z3".to_string(), semi(7, 3, 2)));
    out.push(("Z4:Z4".to_string(), semi(4, 4, 3)));
    out.push(("Z3xZ3".to_string(), SemidirectGroup::direct(cy(3), cy(3)).unwrap()));
    let v4 = FiniteGroup::direct_product(&cy(2), &cy(2)).unwrap();
    out.push(("Z2^2xZ2".to_string(), SemidirectGroup::direct(v4, cy(2)).unwrap()));
    let mut specs: Vec<FamilySpec> = metacyclic_grid()
        .into_iter()
        .filter(|s| s.group_order().unwrap() <= 200)
        .collect();
    for kind in [
        FamilyKind::Metacyclic2I,
        FamilyKind::Metacyclic2II,
        FamilyKind::Metacyclic2III,
    ] {
        for m in 2..=4 {
            for n in 1..=3 {
                let rs: Vec<Option<u32>> = if kind == FamilyKind::Metacyclic2III {
                    vec![None]
                } else {
                    (1..=3).map(Some).collect()
                };
                for r in rs {
                    specs.push(FamilySpec::metacyclic(kind, 2, m, n, r));
                }
            }
        }
    }
    for s in specs.into_iter().filter(|s| s.validate().is_ok()) {
        out.push((s.label(), build_family(&s).unwrap()));
    }
    out
}

fn criterion_6() -> Criterion {
    let cfg = SoundnessConfig::default();
    let mut groups = small_corpus();
    for i in 0..100 {
        let inst = fuzz::draw_instance(42, i, 100, &cfg.search).unwrap();
        groups.push((inst.label(), inst.build().unwrap()));
    }
    let mut details = Vec::new();
    let (mut pass, mut candidates, mut compositions) = (true, 0u64, 0u64);
    for (i, (name, sd)) in groups.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let r = check_soundness(sd, name, &cfg, &mut rng).unwrap();
        candidates += r.candidates;
        compositions += r.compositions;
        if !r.passes() {
            pass = false;
            details.push(format!(
                "BAD {name}: skipped {:?}, {} mismatches, {} composition failures; first: {:?}",
                r.skipped,
                r.mismatches.len(),
                r.composition_failures,
                r.mismatches.first()
            ));
        }
    }
    criterion(
        6,
        pass,
        format!(
            "conditions iff K-fixing automorphism on {} groups ({candidates} candidate triples), {compositions} compositions checked",
            groups.len()
        ),
        details,
    )
}

fn criterion_7() -> Criterion {
    let mut details = Vec::new();
    let mut pass = true;
    let cfg = AutSearchConfig::default();
    for kind in [
        FamilyKind::G3,
        FamilyKind::G5,
        FamilyKind::G6,
        FamilyKind::G7,
        FamilyKind::G9,
        FamilyKind::G10,
    ] {
        let spec = FamilySpec::order_p4(kind, 5);
        let sd = build_family(&spec).unwrap();
        let s = autk::compute_structured(&sd, &cfg).unwrap();
        let w = check_witnesses(&spec, &sd, &s).unwrap();
        pass &= w.passes();
        let failing: Vec<&str> = w
            .relations
            .iter()
            .filter(|r| !r.holds)
            .map(|r| r.relation.as_str())
            .collect();
        let outside: Vec<&str> = w.members.iter().filter(|m| !m.in_w).map(|m| m.name.as_str()).collect();
        details.push(format!(
            "{} {}: {} relations, outside W {:?}, failing {:?}, span {:?} of |W| {}",
            if w.passes() { "ok " } else { "BAD" },
            spec,
            w.relations.len(),
            outside,
            failing,
            w.generated_order,
            w.w_order
        ));
    }
    criterion(7, pass, "named generators of W at p = 5".into(), details)
}

fn criterion_8() -> Criterion {
    let mut details = Vec::new();
    let mut pass = true;
    let mut flagged = 0;
    let cfg = AutSearchConfig::default();
    for kind in [
        FamilyKind::Metacyclic2I,
        FamilyKind::Metacyclic2II,
        FamilyKind::Metacyclic2III,
    ] {
        for m in 2..=4u32 {
            for n in 1..=3u32 {
                let rs: Vec<Option<u32>> = if kind == FamilyKind::Metacyclic2III {
                    vec![None]
                } else {
                    (1..=3).map(Some).collect()
                };
                for r in rs {
                    let spec = FamilySpec::metacyclic(kind, 2, m, n, r);
                    if spec.validate().is_err() {
                        continue;
                    }
                    let sd = build_family(&spec).unwrap();
                    let oracle = oracle::brute_force_autk(&sd, &cfg, AutKPath::Filter).unwrap().len() as u64;
                    let e = expected_result(&spec).unwrap();
                    let line = if e.is_degenerate() {
                        flagged += 1;
                        format!("flagged {spec}: oracle {oracle}, formula {} not asserted", e.autk_order)
                    } else if kind == FamilyKind::Metacyclic2I {
                        let ok = oracle == e.autk_order;
                        pass &= ok;
                        format!(
                            "{} {spec}: oracle {oracle}, formula {}",
                            if ok { "ok     " } else { "BAD    " },
                            e.autk_order
                        )
                    } else {
                        format!("recorded {spec}: oracle {oracle}, formula {}", e.autk_order)
                    };
                    details.push(line);
                }
            }
        }
    }
    criterion(
        8,
        pass,
        format!(
            "2-group cases m <= 4, n <= 3: non-degenerate case (i) matches, {flagged} degenerate instances flagged"
        ),
        details,
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let grid: Vec<(VerificationOutcome, f64)> = metacyclic_grid()
        .iter()
        .map(|s| run(s, s.p == 3 && s.group_order().unwrap() <= 243))
        .collect();
    let p4: Vec<(VerificationOutcome, f64)> = FamilyKind::ORDER_P4
        .iter()
        .map(|&k| run(&FamilySpec::order_p4(k, 5), true))
        .collect();
    let restricted: Vec<u64> = FamilyKind::ORDER_P4
        .iter()
        .map(|&k| {
            let sd = build_family(&FamilySpec::order_p4(k, 5)).unwrap();
            oracle::brute_force_autk(&sd, &AutSearchConfig::default(), AutKPath::Restricted)
                .unwrap()
                .len() as u64
        })
        .collect();
    // Sanity: every model is buildable and has the stated order.
    for (i, &k) in FamilyKind::ORDER_P4.iter().enumerate() {
        let m = build_model(&FamilySpec::order_p4(k, 5)).unwrap().unwrap();
        assert_eq!(fingerprint(&m).unwrap().order, P4_CLAIMED[i]);
    }

    let all: Vec<&(VerificationOutcome, f64)> = grid.iter().chain(p4.iter()).collect();
    let criteria = vec![
        criterion_1(&grid),
        criterion_2(&grid),
        criterion_3(&p4, &restricted),
        criterion_4(&p4),
        criterion_5(&all),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];

    let mut unexpected = Vec::new();
    for c in &criteria {
        println!(
            "criterion {}: {} | {}",
            c.id,
            if c.pass { "PASS" } else { "FAIL" },
            c.summary
        );
        for d in &c.details {
            println!("    {d}");
        }
        let recorded = RECORDED.iter().find(|(id, _)| *id == c.id).map(|(_, v)| *v);
        if recorded != Some(c.pass) {
            unexpected.push(format!(
                "criterion {} is {} but recorded as {}",
                c.id,
                if c.pass { "PASS" } else { "FAIL" },
                if recorded == Some(true) { "PASS" } else { "FAIL" }
            ));
        }
        unexpected.extend(c.regressions.iter().map(|r| format!("criterion {}: {r}", c.id)));
    }
    let passed = criteria.iter().filter(|c| c.pass).count();
    println!(
        "acceptance: {passed}/{} PASS in {:.0}s",
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if unexpected.is_empty() {
        println!("acceptance: every verdict matches the recorded outcome");
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("UNEXPECTED {u}");
        }
        ExitCode::FAILURE
    }
}

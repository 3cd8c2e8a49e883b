use proptest::prelude::*;

use veech_core::exactfield::{rat, sturm_count, ExtRat, FieldElement, RatPoly};
use veech_core::salem::{
    certify, check_row, conjugate_matrices, golden_row, half_trace_data, irrational_angle_check, is_salem,
    nondiscreteness_witness, reproduce_table, search, SalemError, SalemRejection, SearchBudget, WitnessBudget,
    GOLDEN_ROWS,
};
use veech_core::trigroup::{
    build_group, evaluate_word, FieldMatrix2, GroupPresentation, GroupWord, TriangleFamily, Variant,
};

fn g2(q: u32) -> GroupPresentation {
    build_group(TriangleFamily::two_q_inf(q)).unwrap()
}

fn word(s: &str) -> GroupWord {
    s.parse().unwrap()
}

fn poly(c: &[i64]) -> RatPoly {
    RatPoly::from_i64(c)
}

#[test]
fn half_trace_examples() {
    let g = g2(7);
    let d = half_trace_data(&evaluate_word(&g, &word("t^3.s")));
    assert_eq!(d.poly, poly(&[1, -1, -2, 1]));
    let approx: Vec<f64> = d.roots.iter().map(|r| r.mid_f64()).collect();
    for (a, b) in approx.iter().zip([2.247, 0.5550, -0.8019]) {
        assert!((a - b).abs() < 5e-4, "{a} vs {b}");
    }

    let g11 = g2(11);
    let d = half_trace_data(&evaluate_word(&g11, &word("t^5.s.t^4.s")));
    let expected = RatPoly::from_strings(&["89/32", "-17/16", "-243/8", "-47", "-39/2", "1"]).unwrap();
    assert_eq!(d.poly, expected);

    let minus_id = FieldMatrix2::identity(&g.field).neg();
    let d = half_trace_data(&minus_id);
    assert_eq!(d.poly, poly(&[-1, 1]));
    assert_eq!(d.sign, -1);
}

#[test]
fn is_salem_examples() {
    let g = g2(7);
    let ev = is_salem(&evaluate_word(&g, &word("t^3.s"))).unwrap();
    assert_eq!(ev.degree, 3);
    assert_eq!(ev.trace_minpoly, poly(&[8, -4, -4, 1]));

    let g5 = g2(5);
    let ev = is_salem(&evaluate_word(&g5, &word("t^2.s"))).unwrap();
    assert_eq!(ev.half_trace_minpoly, poly(&[-1, -1, 1]));
    assert!((ev.conjugates[0].mid_f64() - 1.618).abs() < 1e-3);
    assert!((ev.conjugates[1].mid_f64() + 0.618).abs() < 1e-3);

    assert_eq!(is_salem(&g.s.mul(&g.t)).unwrap_err(), SalemRejection::NotHyperbolic);

    let g3 = g2(3);
    for w in g3.enumerate_words(4, 3) {
        let m = evaluate_word(&g3, &w);
        if m.classify() == veech_core::trigroup::Class::Hyperbolic {
            assert_eq!(is_salem(&m).unwrap_err(), SalemRejection::DegreeOne, "{w}");
        }
    }
}

#[test]
fn every_golden_row_reproduces() {
    for row in GOLDEN_ROWS {
        let r = check_row(row);
        assert!(r.poly_matches, "{:?} q={}: got {}", row.variant, row.q, r.minpoly);
        assert!(r.degree_matches, "q={}", row.q);
        assert!(r.conjugates_match(), "q={} {:?}", row.q, r.printed_conjugates);
        assert!(r.salem.is_ok(), "q={} {:?}", row.q, r.salem);
        assert!(r.dominant_matches, "q={}", row.q);
    }
}

#[test]
fn table_examples() {
    let rows = reproduce_table(Variant::TwoQInf, &[15]).unwrap();
    assert_eq!(rows[0].minpoly, poly(&[1, 1, -4, -4, 1]));
    let rows = reproduce_table(Variant::QInfInf, &[7, 9]).unwrap();
    assert_eq!(rows[0].minpoly, poly(&[-1, -4, -3, 1]));
    assert!((rows[0].dominant - 4.049).abs() < 5e-4);
    assert_eq!(rows[1].minpoly, poly(&[1, 0, -3, 1]));
    assert!((rows[1].dominant - 2.879).abs() < 5e-4);
    assert_eq!(
        reproduce_table(Variant::TwoQInf, &[8]).unwrap_err(),
        SalemError::NotTabled { q: 8 }
    );
}

#[test]
fn golden_conjugates_round_to_printed_digits() {
    let mut exact = 0;
    let mut total = 0;
    for row in GOLDEN_ROWS {
        for c in check_row(row).printed_conjugates {
            total += 1;
            exact += usize::from(c.rounds_exactly);
        }
    }
    // every printed digit string is within tolerance; the vast majority round exactly
    assert!(exact * 10 >= total * 9, "{exact}/{total}");
}

#[test]
fn conjugate_matrix_examples() {
    let g = g2(7);
    let m = evaluate_word(&g, &word("t^3.s"));
    let conj = conjugate_matrices(&m, 64);
    assert_eq!(conj.len(), 3);
    let id = m.embed_f64(1);
    for i in 0..2 {
        for j in 0..2 {
            assert!((conj[0][i][j] - id[i][j]).abs() < 1e-12);
        }
    }
    let ev = is_salem(&m).unwrap();
    let one = rat(1);
    for c in &ev.conjugates[1..] {
        assert!(c.hi < one && c.lo > -&one);
    }
    for c in &conj[1..] {
        assert!((c[0][0] + c[1][1]).abs() < 2.0);
    }

    let st = g.s.mul(&g.t);
    for c in conjugate_matrices(&st, 64) {
        assert!(((c[0][0] + c[1][1]).abs() - 2.0).abs() < 1e-12);
    }
}

#[test]
fn angle_checks() {
    let g = g2(7);
    let cert = certify(&g, &word("t^3.s")).unwrap();
    let report = irrational_angle_check(&cert, 20, 1e-9);
    assert!(!report.relation_found);
    assert!(report.min_residual > 1e-9);
    assert_eq!(report.angles.len(), 2);

    let g5 = g2(5);
    let cert = certify(&g5, &word("t^2.s")).unwrap();
    let report = irrational_angle_check(&cert, 50, 1e-9);
    assert!(!report.relation_found);
    assert_eq!(report.angles.len(), 1);
}

#[test]
fn angle_scan_matches_brute_force() {
    // independent nested-loop scan for the degree-3 certificate
    let g = g2(7);
    let cert = certify(&g, &word("t^3.s")).unwrap();
    let report = irrational_angle_check(&cert, 12, 1e-9);
    let a: Vec<f64> = cert.conjugates()[1..].iter().map(|c| c.mid_f64().acos()).collect();
    let tau = 2.0 * std::f64::consts::PI;
    let mut best = f64::INFINITY;
    for n1 in -12i64..=12 {
        for n2 in -12i64..=12 {
            if n1 == 0 && n2 == 0 {
                continue;
            }
            let x = n1 as f64 * a[0] + n2 as f64 * a[1];
            let r = x - tau * (x / tau).round();
            best = best.min(r.abs());
        }
    }
    assert!((best - report.min_residual).abs() < 1e-12);
}

#[test]
fn witness_examples() {
    let g = g2(5);
    let budget = WitnessBudget { max_blocks: 8, max_abs_exp: 4, max_words: 200_000 };
    let w = nondiscreteness_witness(&g, 2, 0.5, budget).expect("witness within budget");
    assert!(w.distance < 0.5);
    let m = evaluate_word(&g, &w.word);
    assert!(!m.is_central());
    // regression pin
    assert_eq!(w.word.to_string(), "t.s.t^3.s.t^3.s.t^3.s");

    let w = nondiscreteness_witness(&g, 2, 3.0, budget).unwrap();
    assert_eq!(w.word.num_blocks(), 1);

    let zero = WitnessBudget { max_blocks: 8, max_abs_exp: 4, max_words: 0 };
    assert!(nondiscreteness_witness(&g, 2, 0.5, zero).is_none());
}

#[test]
fn search_examples() {
    let budget = SearchBudget { max_blocks: 2, max_abs_exp: 6, max_words: 1_000_000 };
    let report = search(TriangleFamily::two_q_inf(7), budget);
    assert!(report.found.iter().any(|c| *c.half_trace_minpoly() == poly(&[1, -1, -2, 1])));
    assert!(report.scanned <= budget.max_words);
    for c in &report.found {
        let m = evaluate_word(&g2(7), &c.word);
        assert!(is_salem(&m).is_ok());
    }
}

#[test]
fn search_finds_degree_six_row_13() {
    let budget = SearchBudget { max_blocks: 6, max_abs_exp: 8, max_words: 10_000_000 };
    let report = search(TriangleFamily::two_q_inf(13), budget);
    let target = golden_row(Variant::TwoQInf, 13).unwrap().poly();
    assert!(report.found.iter().any(|c| *c.half_trace_minpoly() == target));
}

#[test]
fn search_is_deterministic() {
    let budget = SearchBudget { max_blocks: 4, max_abs_exp: 5, max_words: 50_000 };
    let a = search(TriangleFamily::q_inf_inf(8), budget);
    let b = search(TriangleFamily::q_inf_inf(8), budget);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn search_respects_word_cap() {
    let budget = SearchBudget { max_blocks: 6, max_abs_exp: 12, max_words: 1000 };
    let report = search(TriangleFamily::q_inf_inf(11), budget);
    assert_eq!(report.scanned, 1000);
}

#[test]
fn prefilter_never_discards_a_salem_word() {
    // exact classification of every word in a small space agrees with the screened search
    let family = TriangleFamily::q_inf_inf(7);
    let g = build_group(family).unwrap();
    let budget = SearchBudget { max_blocks: 4, max_abs_exp: 3, max_words: u64::MAX };
    let report = search(family, budget);
    let mut polys = std::collections::BTreeSet::new();
    for w in g.enumerate_words(4, 3) {
        if let Ok(c) = certify(&g, &w) {
            polys.insert(c.half_trace_minpoly().to_string());
        }
    }
    let found: std::collections::BTreeSet<String> =
        report.found.iter().map(|c| c.half_trace_minpoly().to_string()).collect();
    assert_eq!(found, polys);
}

fn arb_word() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((1i64..=6, 1i64..=6), 1..=3)
        .prop_map(|v| word(&v.iter().map(|(a, b)| format!("t^{a}.s^{b}")).collect::<Vec<_>>().join(".")))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn certificate_invariants(w in arb_word(), q in prop::sample::select(vec![7u32, 8, 9, 10])) {
        let g = build_group(TriangleFamily::q_inf_inf(q)).unwrap();
        let m = evaluate_word(&g, &w);
        if let Ok(ev) = is_salem(&m) {
            let p = &ev.half_trace_minpoly;
            prop_assert_eq!(sturm_count(p, &ExtRat::from(1), &ExtRat::PosInf), 1);
            prop_assert_eq!(sturm_count(p, &ExtRat::NegInf, &ExtRat::from(-1)), 0);
            prop_assert!(p.sign_at(&rat(1)) != 0 && p.sign_at(&rat(-1)) != 0);
            prop_assert!(ev.trace_minpoly.is_integral());
            // eigenvalue polynomial z² − 2x₀z + 1: large root > 1 exactly when x₀ > 1
            prop_assert!(ev.conjugates[0].lo > rat(1));
            for c in &ev.conjugates[1..] {
                prop_assert!(c.hi < rat(1) && c.lo > rat(-1));
            }
        }
    }

    #[test]
    fn sign_normalization_preserves_moduli(w in arb_word(), q in prop::sample::select(vec![7u32, 9, 11])) {
        let g = build_group(TriangleFamily::two_q_inf(q)).unwrap();
        let m = evaluate_word(&g, &w);
        let d = half_trace_data(&m);
        let x0 = m.trace().scale(&veech_core::exactfield::ratio(1, 2));
        let raw = veech_core::exactfield::isolate_real_roots(&x0.minpoly(), 64);
        let mut a: Vec<f64> = raw.iter().map(|r| r.mid_f64().abs()).collect();
        let mut b: Vec<f64> = d.roots.iter().map(|r| r.mid_f64().abs()).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12 * x.max(1.0));
        }
        let top = d.roots[0].mid_f64();
        prop_assert!(d.roots.iter().all(|r| r.mid_f64().abs() <= top + 1e-12));
    }
}

#[test]
fn half_trace_of_rational_element() {
    let g = g2(7);
    let x = FieldElement::from_int(&g.field, 3);
    let d = veech_core::salem::half_trace_data_of(&x);
    assert_eq!(d.poly, poly(&[-3, 1]));
}

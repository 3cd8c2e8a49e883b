use proptest::prelude::*;

use veech_core::exactfield::FieldElement;
use veech_core::trigroup::{
    build_group, evaluate_word, evaluate_word_f64, exponent_range, Class, FieldMatrix2, Gen, GroupPresentation,
    GroupWord, TriangleFamily, TriGroupError, Variant,
};

fn g2(q: u32) -> GroupPresentation {
    build_group(TriangleFamily::two_q_inf(q)).unwrap()
}

fn ginf(q: u32) -> GroupPresentation {
    build_group(TriangleFamily::q_inf_inf(q)).unwrap()
}

fn word(s: &str) -> GroupWord {
    s.parse().unwrap()
}

fn int(g: &GroupPresentation, n: i64) -> FieldElement {
    FieldElement::from_int(&g.field, n)
}

#[test]
fn two_q_inf_relations() {
    let g = g2(7);
    let minus_id = FieldMatrix2::identity(&g.field).neg();
    assert_eq!(g.s.pow(2), minus_id);
    let st = g.s.mul(&g.t);
    assert_eq!(st.trace(), int(&g, -2));
    assert_eq!(st.classify(), Class::Parabolic);
    assert_eq!(g.t.pow(7), minus_id);
    // s·t = −[[1, λ], [0, 1]]
    let lambda = FieldElement::generator(&g.field);
    assert_eq!(st, FieldMatrix2::new(int(&g, 1), lambda, int(&g, 0), int(&g, 1)).neg());
}

#[test]
fn q_inf_inf_relations() {
    let g = ginf(7);
    let tr = g.s.trace();
    assert!((tr.approx(1) - 2.0 * (std::f64::consts::PI / 7.0).cos()).abs() < 1e-14);
    assert_eq!(g.s.mul(&g.t).trace(), int(&g, -2));
    assert_eq!(g.t.classify(), Class::Parabolic);
    assert!(g.s.pow(7).is_central());
}

#[test]
fn small_q_is_rejected() {
    assert_eq!(build_group(TriangleFamily::two_q_inf(2)).unwrap_err(), TriGroupError::SmallQ(2));
}

#[test]
fn evaluation_examples() {
    let g = g2(7);
    let half = |w: &str| evaluate_word(&g, &word(w)).trace().approx(1).abs() / 2.0;
    assert!((half("t^3.s") - 2.247).abs() < 5e-4);
    let g9 = g2(9);
    assert!((evaluate_word(&g9, &word("t^4.s")).trace().approx(1).abs() / 2.0 - 2.879).abs() < 5e-4);
    assert!(evaluate_word(&g, &GroupWord::identity()).is_identity());
    let ga = ginf(7);
    assert!((evaluate_word(&ga, &word("t.s^3")).trace().approx(1).abs() / 2.0 - 4.049).abs() < 5e-4);
}

#[test]
fn classification_examples() {
    let g = g2(7);
    assert_eq!(g.s.classify(), Class::Elliptic);
    assert_eq!(g.s.mul(&g.t).classify(), Class::Parabolic);
    assert_eq!(evaluate_word(&g, &word("t^3.s")).classify(), Class::Hyperbolic);
    assert_eq!(g.s.pow(2).classify(), Class::Central);
}

#[test]
fn enumeration_q5_pairs() {
    let g = g2(5);
    let words: Vec<String> = g.enumerate_words(2, 4).map(|w| w.to_string()).collect();
    assert_eq!(words, vec!["t.s", "t^2.s", "t^3.s", "t^4.s"]);
}

#[test]
#[should_panic]
fn enumeration_rejects_zero_blocks() {
    let _ = g2(5).enumerate_words(0, 4);
}

#[test]
fn enumeration_count_matches_brute_force() {
    for (g, blocks, exp) in [(g2(7), 4, 6), (ginf(5), 4, 3), (g2(5), 6, 4)] {
        let t = exponent_range(g.order_t, exp);
        let s = exponent_range(g.order_s, exp);
        let expected = veech_oracles::brute_force_word_classes(blocks, &t, &s);
        assert_eq!(g.enumerate_words(blocks, exp).count(), expected);
    }
}

#[test]
fn enumerated_words_are_rotation_distinct() {
    let g = ginf(5);
    let mut seen = std::collections::HashSet::new();
    for w in g.enumerate_words(6, 3) {
        let n = w.num_blocks();
        let key = (0..n / 2)
            .map(|r| w.rotate(2 * r).to_string())
            .min()
            .unwrap();
        assert!(seen.insert(key), "duplicate class for {w}");
    }
}

#[test]
fn word_syntax_round_trip() {
    for s in ["t^3.s", "t.s^2.t.s^3", "t^-1.s^5", "1"] {
        assert_eq!(word(s).to_string(), s);
    }
    assert_eq!(word("t^{3}.s^{1}").to_string(), "t^3.s");
    for bad in ["t.t", "x", "t^0", "t^", "s^a"] {
        assert!(bad.parse::<GroupWord>().is_err(), "{bad}");
    }
}

#[test]
fn float_evaluation_matches_oracle() {
    let g = ginf(9);
    let w = word("t.s^2.t^-3.s^5");
    let (s, t) = g.generators_f64(1);
    let blocks: Vec<(char, i64)> = w.blocks().iter().map(|&(g, e)| (g.symbol(), e)).collect();
    let oracle = veech_oracles::float_word_trace(&blocks, s, t);
    let m = evaluate_word_f64(&g, &w, 1);
    assert!((m[0][0] + m[1][1] - oracle).abs() < 1e-9 * oracle.abs().max(1.0));
    assert!((evaluate_word(&g, &w).trace().approx(1) - oracle).abs() < 1e-9 * oracle.abs().max(1.0));
}

fn arb_word(max_blocks: usize, max_exp: i64) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((any::<bool>(), (1..=max_exp).prop_flat_map(|e| prop_oneof![Just(e), Just(-e)])), 0..=max_blocks)
        .prop_map(|v| GroupWord::new(v.into_iter().map(|(s, e)| (if s { Gen::S } else { Gen::T }, e))))
}

fn groups() -> Vec<GroupPresentation> {
    let mut out = Vec::new();
    for q in [5, 7, 8, 9] {
        out.push(g2(q));
        out.push(ginf(q));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn determinant_is_one(w in arb_word(8, 6), gi in 0usize..8) {
        let g = &groups()[gi];
        prop_assert!(evaluate_word(g, &w).det().is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn word_times_inverse_is_identity(w in arb_word(8, 6), gi in 0usize..8) {
        let g = &groups()[gi];
        prop_assert!(evaluate_word(g, &w.concat(&w.inverse())).is_identity());
    }

    #[test]
    fn trace_rotation_and_inversion(w in arb_word(8, 6), gi in 0usize..8, r in 0usize..8) {
        let g = &groups()[gi];
        let tr = evaluate_word(g, &w).trace();
        let k = if w.num_blocks() == 0 { 0 } else { r % w.num_blocks() };
        prop_assert_eq!(evaluate_word(g, &w.rotate(k)).trace(), tr.clone());
        let inv_tr = evaluate_word(g, &w.inverse()).trace();
        prop_assert!(inv_tr == tr || inv_tr == -&tr);
    }

    #[test]
    fn hecke_entries_in_order(w in arb_word(8, 8), q in prop::sample::select(vec![5u32, 7, 8, 9, 11])) {
        let g = g2(q);
        prop_assert!(evaluate_word(&g, &w).is_integral());
    }

    #[test]
    fn canonical_words_evaluate_projectively_equal(w in arb_word(6, 20), gi in 0usize..8) {
        let g = &groups()[gi];
        let m = evaluate_word(g, &w);
        let c = evaluate_word(g, &g.canonical(&w));
        prop_assert!(m == c || m == c.neg());
    }
}

#[test]
fn family_parsing() {
    assert_eq!("2qinf".parse::<Variant>().unwrap(), Variant::TwoQInf);
    assert_eq!("qinfinf".parse::<Variant>().unwrap(), Variant::QInfInf);
    assert!("hexagon".parse::<Variant>().is_err());
    assert_eq!(TriangleFamily::two_q_inf(7).to_string(), "Δ(2,7,∞)");
}

use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;

use veech_core::conjdyn::*;
use veech_core::exactfield::{rat, FieldElement};
use veech_core::trigroup::{build_group, mat_apply, mat_mul, op_norm, FieldMatrix2, Mat2, TriangleFamily};

fn hecke(q: u32) -> HeckeCoding {
    HeckeCoding::new(TriangleFamily::two_q_inf(q)).unwrap()
}

fn mobius(m: &FieldMatrix2, x: &FieldElement) -> FieldElement {
    &(&(&m.a * x) + &m.b) * &(&(&m.c * x) + &m.d).inv()
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

fn unit_block() -> WVector {
    WVector::new(vec![[0.6, 0.8]])
}

/// A fixed q=5 construction: constant target 1, 40 bits from seed 11.
fn pinned_construction() -> (HeckeCoding, DirectionConstruction) {
    let coding = hecke(5);
    let dict = CodingDictionary::new(coding.clone(), DictionaryConfig::default()).unwrap();
    let bits = random_bits(&mut ChaCha8Rng::seed_from_u64(11), 40);
    let run = tracking_run(&dict, &unit_block(), &Targets::Constant(1.0), &bits, None).unwrap();
    let c = cantor_direction(&coding, &run).unwrap();
    (coding, c)
}

#[test]
fn coding_step_examples() {
    let s = coding_step(0.4, 1.0).unwrap();
    assert_eq!(s.r, -2);
    assert_eq!(s.x_next, -0.5);
    assert_eq!(coding_step(0.0, 1.0), Err(ConjDynError::Terminated));

    let coding = hecke(3);
    let q = s.matrix(&coding);
    assert_eq!(q, coding.digit_matrix(-2));
    let x = FieldElement::from_rational(coding.field(), rat(2) / rat(5));
    let (r, xn) = coding_step_exact(&coding, &x).unwrap();
    assert_eq!(r, -2);
    assert_eq!(xn, FieldElement::from_rational(coding.field(), rat(-1) / rat(2)));
    assert_eq!(mobius(&q, &xn), x);
    assert_eq!(coding_step_exact(&coding, &FieldElement::from_int(coding.field(), 0)), Err(ConjDynError::Terminated));
}

#[test]
fn hyperbolic_fixed_point_codes_periodically() {
    let coding = hecke(5);
    let lam = coding.lambda_dd();
    // x = Q_2 Q_{-3} x  ⇔  c x² + (d − a) x − b = 0 for the product [[a,b],[c,d]]
    let q = |r: f64| [[0.0, -1.0], [1.0, r * lam.hi()]];
    let m: Mat2 = mat_mul(&q(2.0), &q(-3.0));
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let disc = ((d - a) * (d - a) + 4.0 * b * c).sqrt();
    let roots = [(a - d + disc) / (2.0 * c), (a - d - disc) / (2.0 * c)];
    let x = roots.into_iter().find(|x| x.abs() < lam.hi() / 2.0).unwrap();
    // polish in double-double with Newton on the quadratic
    let mut xd = TwoFloat::from(x);
    let ld = |r: i64| lam * (r as f64);
    for _ in 0..4 {
        let m00 = -TwoFloat::from(1.0);
        let m01 = -ld(-3);
        let m10 = ld(2);
        let m11 = ld(2) * ld(-3) - 1.0;
        let f = m10 * xd * xd + (m11 - m00) * xd - m01;
        let fp = m10 * xd * 2.0 + (m11 - m00);
        xd -= f / fp;
    }
    let t = coding_trajectory(&coding, xd, 12, false);
    assert_eq!(t.digits, [2, -3].repeat(6));
}

#[test]
fn exact_coding_reconstructs_rational_points() {
    let coding = hecke(5);
    let f = coding.field();
    let half_lam = coding.lambda_at(0) / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 100 {
        let den: i64 = rng.gen_range(2..10_000);
        let num: i64 = rng.gen_range(-den..den);
        if num == 0 || (num as f64 / den as f64).abs() >= half_lam {
            continue;
        }
        let x0 = FieldElement::from_rational(f, rat(num) / rat(den));
        let mut x = x0.clone();
        let mut prod = FieldMatrix2::identity(f);
        let mut steps = 0;
        while steps < 50 {
            match coding_step_exact(&coding, &x) {
                Ok((r, xn)) => {
                    prod = prod.mul(&coding.digit_matrix(r));
                    x = xn;
                    steps += 1;
                }
                Err(ConjDynError::Terminated) => break,
                Err(e) => panic!("{e}"),
            }
        }
        assert!(prod.is_integral());
        if steps == 50 {
            let lo = coding.lambda().scale(&(rat(-1) / rat(2)));
            assert!((&x - &lo).sign() >= 0 && (&(&x + &lo)).sign() < 0);
        }
        assert_eq!(mobius(&prod, &x), x0);
        checked += 1;
    }
}

#[test]
fn exact_shadow_matches_float_products() {
    let cps: Vec<usize> = (1..=10).map(|i| i * 1000).collect();
    for q in [3, 5, 7] {
        let coding = hecke(q);
        let x0 = TwoFloat::from(0.1234567) * coding.lambda_dd();
        let rep = exact_shadow(&coding, x0, 10_000, &cps);
        assert_eq!(rep.steps, 10_000);
        assert!(rep.integral, "q={q}");
        assert!(rep.within_tolerance, "q={q}: {:?}", rep.deviations);
    }
}

#[test]
fn lyapunov_identity_and_conjugates() {
    let fam = TriangleFamily::two_q_inf(5);
    let id = lyapunov_ratio(fam, 1, 500, 10, 3).unwrap();
    assert!((id.mean - 1.0).abs() < 1e-12);

    let a = lyapunov_ratio(fam, 2, 2000, 20, 9).unwrap();
    let b = lyapunov_ratio(fam, 2, 2000, 20, 9).unwrap();
    assert_eq!(a.samples, b.samples);
    assert!(a.mean > 0.02 && a.mean < 0.98, "{}", a.mean);

    for sigma in [2, 3] {
        let e = lyapunov_ratio(TriangleFamily::two_q_inf(7), sigma, 2000, 20, 9).unwrap();
        assert!(e.mean > 0.02 && e.mean < 0.98, "σ={sigma}: {}", e.mean);
    }
    assert_eq!(lyapunov_ratio(fam, 9, 10, 1, 0).unwrap_err(), ConjDynError::BadSigma(9));
}

#[test]
fn lyapunov_profile_is_per_step() {
    let (sigmas, rows) = lyapunov_profile(TriangleFamily::two_q_inf(7), 50, 4, 1).unwrap();
    assert_eq!(sigmas, vec![1, 2, 3]);
    assert_eq!(rows.len(), 50);
    assert!(rows[49][0] > rows[0][0]);
}

#[test]
fn growth_family_is_unbounded() {
    let coc = EmbeddedCocycle::new(build_group(TriangleFamily::two_q_inf(5)).unwrap()).unwrap();
    let g = growth_family(&coc, 50);
    assert!((g.min_norms[0] - 1.0).abs() < 1e-12);
    assert!(g.nondecreasing);
    // (st)^σ is parabolic with off-diagonal entry λ^σ ≈ −0.618, so the norm grows like 0.618·k
    assert!((g.min_norms[50] / 50.0 - 0.618).abs() < 0.05, "{}", g.min_norms[50]);

    let coc7 = EmbeddedCocycle::new(build_group(TriangleFamily::two_q_inf(7)).unwrap()).unwrap();
    let g7 = growth_family(&coc7, 100);
    assert_eq!(coc7.num_blocks(), 2);
    assert!(g7.nondecreasing && g7.slope > 0.0);
    assert!(g7.min_norms[100] > 10.0 * g7.min_norms[1]);
}

#[test]
fn lemma_words_contract_and_expand() {
    let g = build_group(TriangleFamily::two_q_inf(5)).unwrap();
    let salem = salem_word_for(&g).unwrap();
    let coc = EmbeddedCocycle::new(g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let v = WVector::random_unit(coc.num_blocks(), &mut rng);
        let c = contraction_word(&coc, &salem, &v, 1.0, LemmaBudget::default()).unwrap();
        let e = expansion_word(&coc, &salem, &v, 1.0, LemmaBudget::default()).unwrap();
        let ratio = |w: &LemmaWord| v.apply(&coc.block_matrices(&w.word)).norm() / v.norm();
        assert!(ratio(&c) < (-1.0f64).exp());
        assert!(ratio(&e) > 1.0f64.exp());
        assert!((ratio(&c).ln() - c.log_ratio).abs() < 1e-9);
    }

    // a block along the most contracted direction of (st)^k needs no Salem iterations
    let st = coc.block_matrices(&"s.t".parse().unwrap())[0];
    let mut h = st;
    for _ in 0..9 {
        h = mat_mul(&h, &st);
    }
    let hth = mat_mul(&veech_core::trigroup::mat_transpose(&h), &h);
    let th = 0.5 * (2.0 * hth[0][1]).atan2(hth[0][0] - hth[1][1]) + std::f64::consts::FRAC_PI_2;
    let v = WVector::new(vec![[th.cos(), th.sin()]]);
    assert!(op_norm(&h) > 1.0 && WVector::new(vec![mat_apply(&h, v.blocks[0])]).norm() < 0.5);
    let c = contraction_word(&coc, &salem, &v, 1.0, LemmaBudget::default()).unwrap();
    assert_eq!(c.n, 0);
    assert!(c.k <= 10);

    let zero = WVector::new(vec![[0.0, 0.0]]);
    assert_eq!(
        contraction_word(&coc, &salem, &zero, 1.0, LemmaBudget::default()).unwrap_err(),
        ConjDynError::ZeroVector
    );
    let tiny = LemmaBudget { n_max: 0, k_max: 1 };
    assert!(matches!(
        expansion_word(&coc, &salem, &unit_block(), 50.0, tiny),
        Err(ConjDynError::BudgetExhausted { .. })
    ));
}

#[test]
fn tracking_constant_targets() {
    let dict = CodingDictionary::new(hecke(5), DictionaryConfig::default()).unwrap();
    assert_eq!(dict.words.len(), 340);
    assert_eq!(dict.longest, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..8 {
        let v = WVector::random_unit(1, &mut rng).scaled(rng.gen_range(0.1..10.0));
        let bits = random_bits(&mut rng, 40);
        let run = tracking_run(&dict, &v, &Targets::Constant(1.0), &bits, None).unwrap();
        assert_eq!(run.checkpoints.len(), 40);
        assert!(run.bound_holds(), "{:?} > {}", run.errors, run.bound);
        assert!(run.gaps_bounded());
        assert!(run.digits.iter().all(|&r| dict.coding.is_full_branch(r)));
        assert_eq!(run.words.iter().map(Vec::len).sum::<usize>(), run.digits.len());
    }
}

#[test]
fn tracking_moving_targets() {
    // margins of 1/2 and ln 2 need words of length 5
    let dict = CodingDictionary::new(hecke(5), DictionaryConfig { max_len: 5, digit_span: 2 }).unwrap();
    let bits = random_bits(&mut ChaCha8Rng::seed_from_u64(4), 40);
    let v = unit_block();

    let geo = tracking_run(&dict, &v, &Targets::Geometric { a0: 1.0, rate: 0.5 }, &bits, None).unwrap();
    assert!((geo.target_step - 0.5).abs() < 1e-12);
    assert!(geo.general_bound_holds());
    let sq: Vec<f64> = geo.norms.iter().scan(0.0, |s, n| Some(*s + n * n)).collect();
    // square-summable: the tail after step 20 adds almost nothing
    assert!(sq[39] - sq[19] < 1e-3 * sq[39], "{sq:?}");

    let harm = tracking_run(&dict, &v, &Targets::Harmonic { a0: 1.0 }, &bits, None).unwrap();
    assert!(harm.general_bound_holds());
    let s: Vec<f64> = harm.norms.iter().scan(0.0, |s, n| Some(*s + n)).collect();
    // not summable: each doubling of the depth adds a comparable amount
    assert!(s[39] - s[19] > 0.2 * (s[19] - s[9]), "{s:?}");

    let empty = tracking_run(&dict, &v, &Targets::Constant(1.0), &[], None).unwrap();
    assert!(empty.checkpoints.is_empty() && empty.digits.is_empty());
    assert_eq!(cantor_direction(&dict.coding, &empty).unwrap_err(), ConjDynError::Empty);
}

#[test]
fn targets_parse() {
    assert_eq!("constant:1.5".parse::<Targets>().unwrap(), Targets::Constant(1.5));
    assert_eq!("geometric:1:0.5".parse::<Targets>().unwrap(), Targets::Geometric { a0: 1.0, rate: 0.5 });
    assert_eq!("harmonic:2".parse::<Targets>().unwrap(), Targets::Harmonic { a0: 2.0 });
    assert!("linear:1".parse::<Targets>().is_err());
    assert!("geometric:1".parse::<Targets>().is_err());
}

#[test]
fn cantor_directions_nest_and_recode() {
    let (coding, c) = pinned_construction();
    assert!(c.nested);
    assert!(c.log2_widths.windows(2).all(|w| w[1] < w[0]));
    let x: f64 = c.x_star.parse().unwrap();
    assert!((x - c.x_star_f64).abs() < 1e-15);
    for [lo, hi] in &c.intervals {
        let (lo, hi): (f64, f64) = (lo.parse().unwrap(), hi.parse().unwrap());
        assert!(lo <= x && x <= hi);
    }
    let rep = recode_consistency(&coding, &c, 200);
    assert!(rep.consistent, "mismatch prefix {}", rep.mismatch_prefix);
    assert_eq!(rep.compared, c.digits.len().min(200));
}

#[test]
fn first_bit_separates_directions() {
    let coding = hecke(5);
    let dict = CodingDictionary::new(coding.clone(), DictionaryConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tail = random_bits(&mut rng, 20);
    let build = |first: bool| {
        let mut bits = vec![first];
        bits.extend(&tail);
        let run = tracking_run(&dict, &unit_block(), &Targets::Constant(1.0), &bits, None).unwrap();
        cantor_direction(&coding, &run).unwrap()
    };
    let (a, b) = (build(false), build(true));
    assert_eq!(a.words[0][..a.words[0].len() - 1], b.words[0][..b.words[0].len() - 1]);
    let iv = |c: &DirectionConstruction| -> (BigRational, BigRational) {
        let p = |s: &str| -> BigRational {
            let (i, f) = s.split_once('.').unwrap();
            let neg = i.starts_with('-');
            let digits: num_bigint::BigInt = format!("{}{}", i.trim_start_matches('-'), f).parse().unwrap();
            let v = BigRational::new(digits, num_bigint::BigInt::from(10).pow(f.len() as u32));
            if neg {
                -v
            } else {
                v
            }
        };
        (p(&c.intervals[0][0]), p(&c.intervals[0][1]))
    };
    let (ia, ib) = (iv(&a), iv(&b));
    assert!(ia.1 < ib.0 || ib.1 < ia.0, "{ia:?} {ib:?}");
}

#[test]
fn eigenvalue_candidates() {
    let (coding, c) = pinned_construction();
    let f = coding.field();
    let v = LatticeVector::from_ints(f, &[1, 0], &[0, 0]);
    let e = eigenvalue_candidate(&coding, &v, &c).unwrap();
    assert!(e.spread < 1e-12);
    assert_eq!(e.calibration.len(), CALIBRATION_SCALES);
    assert!((e.calibration[0] - 1e-2).abs() < 1e-15 && (e.calibration[999] - 1e2).abs() < 1e-12);
    assert!(!e.trivial);
    assert!((e.nu - PINNED_NU).abs() < 1e-12, "ν = {:.17}", e.nu);

    let w = LatticeVector::from_ints(f, &[2, -1], &[1, 3]);
    let e1 = eigenvalue_candidate(&coding, &w, &c).unwrap();
    let e3 = eigenvalue_candidate(&coding, &w.scale_int(3), &c).unwrap();
    assert!((e3.nu - 3.0 * e1.nu).abs() < 1e-12 * e1.nu.abs().max(1.0));
    assert!((e3.eta - 3.0 * e1.eta).abs() < 1e-12 * e1.eta.abs().max(1.0));

    let zero = LatticeVector::from_ints(f, &[0, 0], &[0, 0]);
    assert_eq!(eigenvalue_candidate(&coding, &zero, &c).unwrap_err(), ConjDynError::ZeroVector);

    let s = split_along(e.e_s, c.x_star_f64);
    assert!(s.trivial && (s.eta - 1.0).abs() < 1e-15);
}

const PINNED_NU: f64 = -0.32689866378413829;

#[test]
fn box_counting_calibration() {
    let cantor = veech_oracles::middle_thirds_points(12);
    let bc = box_counting_auto(&fixed_from_f64(&cantor, 60), 60);
    assert!((bc.slope - 2f64.ln() / 3f64.ln()).abs() < 0.05, "{}", bc.slope);

    let scales: Vec<f64> = (1..=8).map(|j| 2f64.powi(-j)).collect();
    assert_eq!(box_counting_dimension(&[0.3; 50], &scales), 0.0);
    let grid: Vec<f64> = (0..4096).map(|i| i as f64 / 4096.0).collect();
    assert!((box_counting_dimension(&grid, &scales) - 1.0).abs() < 0.01);
}

#[test]
fn field_ratio_examples() {
    let coding = hecke(5);
    let f = coding.field();
    let two = field_ratio_check(2.0 * 0.731, 0.731, f, 3, 1e-12).unwrap();
    assert_eq!(two, FieldElement::from_int(f, 2));
    let lam = coding.lambda_at(0);
    let th = field_ratio_check(lam * 1.37, 1.37, f, 3, 1e-12).unwrap();
    assert_eq!(th, coding.lambda());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let (a, b): (f64, f64) = (rng.gen(), rng.gen());
        assert!(field_ratio_check(a, b + 0.5, f, 10, 1e-9).is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn coding_step_lands_in_base_interval(u in -0.5f64..0.5, q in 3u32..12) {
        let lam = 2.0 * (std::f64::consts::PI / q as f64).cos();
        let x = u * lam;
        prop_assume!(x != 0.0);
        let s = coding_step(x, lam).unwrap();
        prop_assert!(s.x_next >= -lam / 2.0 && s.x_next < lam / 2.0);
        // x = Q_r·x′ = −1/(x′ + rλ)
        let back = -1.0 / (s.x_next + s.r as f64 * lam);
        prop_assert!((back - x).abs() <= 1e-12 * x.abs());
    }

    #[test]
    fn wvector_norm_is_homogeneous(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0, m in 0.1f64..10.0) {
        let v = WVector::new(vec![[a, b], [c, d]]);
        prop_assert!((v.scaled(m).norm() - m * v.norm()).abs() <= 1e-12 * m * v.norm().max(1.0));
        prop_assert!(v.norm() >= a.hypot(b) && v.norm() >= c.hypot(d));
    }
}

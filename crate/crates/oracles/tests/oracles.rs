use num_bigint::BigInt;
use num_rational::BigRational;
use veech_oracles::*;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

fn rats(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
}

fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

#[test]
fn cyclotomic_degrees_are_euler_phi() {
    for n in 1..=40u64 {
        assert_eq!(cyclotomic_mobius(n).len() as u64 - 1, euler_phi(n), "n={n}");
    }
}

#[test]
fn two_cos_minpolys_of_small_orders() {
    assert_eq!(two_cos_minpoly_numeric(5), vec![-1, 1, 1]);
    assert_eq!(two_cos_minpoly_numeric(7), vec![-1, -2, 1, 1]);
    assert_eq!(two_cos_minpoly_numeric(8), vec![-2, 0, 1]);
    for n in 3..=40u64 {
        assert_eq!(two_cos_minpoly_numeric(n).len() as u64 - 1, euler_phi(n) / 2, "n={n}");
    }
}

#[test]
fn resultant_of_linear_factors() {
    // Res(x − 2, x² − 3) = 2² − 3
    assert_eq!(resultant(&ints(&[-2, 1]), &ints(&[-3, 0, 1])), BigInt::from(1));
    assert_eq!(resultant(&ints(&[-1, 0, 1]), &ints(&[-1, 1])), BigInt::from(0));
}

#[test]
fn charpoly_of_sqrt2() {
    // a = x in Q[x]/(x² − 2) has charpoly x² − 2
    assert_eq!(charpoly_by_resultant(&ints(&[-2, 0, 1]), &rats(&[0, 1])), rats(&[-2, 0, 1]));
}

#[test]
fn squarefree_removes_repeats() {
    // (x − 1)²(x + 2) → (x − 1)(x + 2)
    assert_eq!(squarefree(&rats(&[2, -3, 0, 1])), rats(&[-2, 1, 1]));
}

#[test]
fn vca_counts_known_roots() {
    assert_eq!(real_root_count_vca(&ints(&[-2, 0, 1])), 2);
    assert_eq!(real_root_count_vca(&ints(&[1, 0, 1])), 0);
    assert_eq!(real_root_count_vca(&ints(&[-1, -2, 1, 1])), 3);
    assert_eq!(real_root_count_vca(&ints(&[0, -1, 0, 1])), 3);
}

#[test]
fn bareiss_matches_cofactor_expansion() {
    let m = vec![ints(&[2, -1, 0]), ints(&[-1, 2, -1]), ints(&[0, -1, 2])];
    assert_eq!(bareiss_det(m), BigInt::from(4));
}

#[test]
fn middle_thirds_points_lie_in_the_set() {
    let pts = middle_thirds_points(6);
    assert_eq!(pts.len(), 64);
    for x in pts {
        let mut k = (x * 729.0).round() as u64;
        assert!((k as f64 - x * 729.0).abs() < 1e-9, "{x}");
        for _ in 0..6 {
            assert_ne!(k % 3, 1, "{x}");
            k /= 3;
        }
    }
}

#[test]
fn primitive_vectors_small_radius() {
    let v = primitive_vectors_within(1.5);
    assert_eq!(v.len(), 8);
    assert!(!v.contains(&(2, 0)));
}

#[test]
fn float_trace_of_hecke_generators() {
    let s = [[0.0, -1.0], [1.0, 0.0]];
    let t = [[1.0, 1.0], [0.0, 1.0]];
    assert!((float_word_trace(&[('t', 3), ('s', 1)], s, t) - 3.0).abs() < 1e-12);
}

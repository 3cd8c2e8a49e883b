use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{rat, RatPoly};

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// The N-th cyclotomic polynomial, by exact division of x^N - 1 by the
/// cyclotomic factors of its proper divisors.
pub fn cyclotomic_poly(n: u32) -> RatPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut p = RatPoly::monomial(BigRational::one(), n as usize);
    p = &p - &RatPoly::one();
    for d in divisors(n) {
        if d < n {
            let (q, r) = p.div_rem(&cyclotomic_poly(d));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p
}

/// Minimal polynomial of 2cos(2π/N) over Q.
///
/// Φ_N is palindromic of degree 2m, so z^{-m}·Φ_N(z) is a polynomial in
/// z + 1/z; z^k + z^{-k} is rewritten through D_0 = 2, D_1 = x,
/// D_{k+1} = x·D_k - D_{k-1}.
pub fn two_cos_minpoly(n: u32) -> RatPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    match n {
        1 => return RatPoly::from_i64(&[-2, 1]),
        2 => return RatPoly::from_i64(&[2, 1]),
        _ => {}
    }
    let phi = cyclotomic_poly(n);
    let deg = phi.degree().expect("nonzero");
    let m = deg / 2;
    let mut d_prev = RatPoly::constant(rat(2));
    let mut d_cur = RatPoly::x();
    let mut psi = RatPoly::constant(phi.coeff(m));
    for k in 1..=m {
        let a = phi.coeff(m + k);
        if !a.is_zero() {
            psi = &psi + &d_cur.scale(&a);
        }
        let next = &(&RatPoly::x() * &d_cur) - &d_prev;
        d_prev = d_cur;
        d_cur = next;
    }
    debug_assert!(psi.is_monic());
    psi
}

//! Reference algorithms used to cross-check the main library.
//!
//! Everything here is written independently of `veech-core` and favours
//! obviousness over speed.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn int_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division by a monic integer polynomial; panics if not exact.
pub fn int_div_exact(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    assert!(b[db].is_one());
    let da = a.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = rem[k + db].clone();
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= &c * y;
        }
        q[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    trim(q)
}

pub fn mobius(n: u64) -> i32 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Φ_N = Π_{d | N} (x^d − 1)^{μ(N/d)}.
pub fn cyclotomic_mobius(n: u64) -> IntPoly {
    let mut num: IntPoly = vec![BigInt::one()];
    let mut den: IntPoly = vec![BigInt::one()];
    for d in (1..=n).filter(|d| n % d == 0) {
        // x^d - 1, written as monic-negated -(1 - x^d) so it stays monic
        let mut f = vec![BigInt::zero(); d as usize + 1];
        f[0] = BigInt::from(-1);
        f[d as usize] = BigInt::one();
        match mobius(n / d) {
            1 => num = int_mul(&num, &f),
            -1 => den = int_mul(&den, &f),
            _ => {}
        }
    }
    int_div_exact(&num, &den)
}

/// Minimal polynomial of 2cos(2π/N) from its conjugates 2cos(2πk/N), gcd(k,N)=1,
/// multiplied out in floating point and rounded. Valid while coefficients stay well inside 2^50.
pub fn two_cos_minpoly_numeric(n: u64) -> Vec<i64> {
    if n <= 2 {
        return if n == 1 { vec![-2, 1] } else { vec![2, 1] };
    }
    let mut p = vec![1.0f64];
    for k in 1..n {
        if 2 * k < n && gcd(k, n) == 1 {
            let r = 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos();
            let mut next = vec![0.0; p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            p = next;
        }
    }
    p.iter().map(|c| c.round() as i64).collect()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Sylvester-matrix resultant of two integer polynomials (ascending coefficients).
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in f.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in g.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    bareiss_det(rows)
}

/// Characteristic polynomial Res_y(m(y), x − a(y)) of the element with
/// power-basis coefficients `a` in Q[y]/(m), by evaluating at integer x
/// and interpolating. Rational coefficients of `a` are cleared first.
pub fn charpoly_by_resultant(m: &[BigInt], a: &[BigRational]) -> Vec<BigRational> {
    let d = m.len() - 1;
    let den = a
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let a_int: Vec<BigInt> = a
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    // Res_y(m, X - A(y)) with X = den*x; take samples in X then rescale.
    let xs: Vec<BigInt> = (0..=d as i64).map(BigInt::from).collect();
    let mut ys = Vec::with_capacity(d + 1);
    for x in &xs {
        let mut g: Vec<BigInt> = a_int.iter().map(|c| -c).collect();
        g.resize(d.max(1), BigInt::zero());
        g[0] += x;
        let g = trim(g);
        let r = if g.len() <= 1 {
            // constant polynomial c: Res(m, c) = c^deg(m)
            let c = g.first().cloned().unwrap_or_else(BigInt::zero);
            num_traits::pow(c, d)
        } else {
            resultant(m, &g)
        };
        // Res is taken with m first; sign convention (-1)^{deg m · deg g} absorbed by monic normalisation
        ys.push(BigRational::from_integer(r));
    }
    let p = lagrange(&xs, &ys);
    // p(X) is the characteristic polynomial in X = den·x, up to sign.
    let scale = BigRational::from_integer(den);
    let mut out = Vec::with_capacity(p.len());
    let mut pow = BigRational::one();
    for c in p {
        out.push(c * &pow);
        pow *= &scale;
    }
    let lc = out.last().cloned().unwrap();
    out.into_iter().map(|c| c / &lc).collect()
}

fn lagrange(xs: &[BigInt], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let xj = BigRational::from_integer(xs[j].clone());
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer(&xs[i] - &xs[j]);
        }
        let f = &ys[i] / denom;
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &f;
        }
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

fn rat_poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let c = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - 1 - db;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Monic gcd over Q.
pub fn rat_poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rat_poly_rem(&x, &y);
        x = y;
        y = r;
    }
    let lc = x.last().cloned().unwrap();
    x.into_iter().map(|c| c / &lc).collect()
}

/// Squarefree part of a monic rational polynomial.
pub fn squarefree(p: &[BigRational]) -> Vec<BigRational> {
    let dp: Vec<BigRational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect();
    if dp.is_empty() {
        return p.to_vec();
    }
    let g = rat_poly_gcd(p, &dp);
    // exact division p / g
    let mut rem = p.to_vec();
    let dg = g.len() - 1;
    let mut q = vec![BigRational::zero(); rem.len() - dg];
    for k in (0..q.len()).rev() {
        let c = rem[k + dg].clone() / g.last().unwrap();
        for (j, y) in g.iter().enumerate() {
            rem[k + j] -= &c * y;
        }
        q[k] = c;
    }
    let lc = q.last().cloned().unwrap();
    q.into_iter().map(|c| c / &lc).collect()
}

/// Number of sign variations in a coefficient sequence, zeros skipped.
fn variations(p: &[BigInt]) -> usize {
    let mut last = 0;
    let mut count = 0;
    for c in p {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn taylor_shift_one(p: &[BigInt]) -> IntPoly {
    // p(x + 1) via repeated synthetic division
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = a[j + 1].clone();
            a[j] += t;
        }
    }
    a
}

/// Roots in (0, 1] of a squarefree integer polynomial, by Descartes' rule on
/// Möbius-transformed pieces (Vincent–Collins–Akritas bisection).
fn roots_in_unit(p: &[BigInt], depth: u32) -> usize {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return 0;
    }
    let mut count = 0;
    // root exactly at 1?
    let at_one: BigInt = p.iter().sum();
    if at_one.is_zero() {
        count += 1;
    }
    count + roots_open_unit(&p, depth)
}

/// Roots in the open interval (0, 1).
fn roots_open_unit(p: &[BigInt], depth: u32) -> usize {
    assert!(depth < 400, "root separation too small for the oracle");
    // q(x) = (1+x)^n p(1/(1+x)) counts roots of p in (0,1) by Descartes
    let mut rev: IntPoly = p.iter().rev().cloned().collect();
    rev = taylor_shift_one(&rev);
    let v = variations(&rev);
    if v <= 1 {
        return v;
    }
    let n = p.len() - 1;
    // left half: p(x/2)·2^n on (0,1)
    let left: IntPoly = p
        .iter()
        .enumerate()
        .map(|(k, c)| c << (n - k))
        .collect();
    // right half: p((x+1)/2)·2^n on (0,1)
    let right = taylor_shift_one(&left);
    let mid_root = usize::from(right[0].is_zero());
    let right_nz: IntPoly = if right[0].is_zero() {
        // divide out the root at the midpoint
        right[1..].to_vec()
    } else {
        right
    };
    roots_open_unit(&left, depth + 1) + mid_root + roots_open_unit(&right_nz, depth + 1)
}

/// Count of distinct real roots of a squarefree integer polynomial.
pub fn real_root_count_vca(p: &[BigInt]) -> usize {
    let p = trim(p.to_vec());
    let n = p.len() - 1;
    if n == 0 {
        return 0;
    }
    // bound B = 1 + max|a_i / a_n|, rounded up to a power of two
    let lc = p[n].abs();
    let mut b = BigInt::one();
    for c in &p[..n] {
        let r = c.abs() / &lc + BigInt::one();
        while b <= r {
            b <<= 1;
        }
    }
    while b < BigInt::from(2) {
        b <<= 1;
    }
    // positive roots: scale x -> B x onto (0, 1]
    let scaled = |sign: i32| -> IntPoly {
        let mut pow = BigInt::one();
        let mut out = Vec::with_capacity(p.len());
        for (k, c) in p.iter().enumerate() {
            let s = if sign < 0 && k % 2 == 1 { -c } else { c.clone() };
            out.push(s * &pow);
            pow *= &b;
        }
        out
    };
    let zero_root = usize::from(p[0].is_zero());
    let strip = |q: IntPoly| if q[0].is_zero() { q[1..].to_vec() } else { q };
    zero_root + roots_in_unit(&strip(scaled(1)), 0) + roots_in_unit(&strip(scaled(-1)), 0)
}

/// Distinct rotation classes of alternating block words with an even number of
/// blocks up to `max_blocks`, counted by listing every word and hashing its
/// lexicographically smallest rotation. `t_exps` / `s_exps` are the allowed exponents.
pub fn brute_force_word_classes(max_blocks: usize, t_exps: &[i64], s_exps: &[i64]) -> usize {
    let mut seen: HashSet<Vec<(char, i64)>> = HashSet::new();
    let mut blocks = 2;
    while blocks <= max_blocks {
        let pairs = blocks / 2;
        let mut idx = vec![0usize; blocks];
        loop {
            let word: Vec<(char, i64)> = (0..blocks)
                .map(|i| {
                    if i % 2 == 0 {
                        ('t', t_exps[idx[i]])
                    } else {
                        ('s', s_exps[idx[i]])
                    }
                })
                .collect();
            let mut best: Option<Vec<(char, i64)>> = None;
            for r in 0..pairs {
                let mut rot = word[2 * r..].to_vec();
                rot.extend_from_slice(&word[..2 * r]);
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
            seen.insert(best.unwrap());
            // odometer
            let mut i = 0;
            loop {
                if i == blocks {
                    break;
                }
                let limit = if i % 2 == 0 { t_exps.len() } else { s_exps.len() };
                idx[i] += 1;
                if idx[i] < limit {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == blocks {
                break;
            }
        }
        blocks += 2;
    }
    seen.len()
}

/// Points of the middle-thirds Cantor set: left endpoints of the 2^depth level-`depth` intervals.
pub fn middle_thirds_points(depth: u32) -> Vec<f64> {
    let mut pts = vec![0.0f64];
    let mut scale = 1.0;
    for _ in 0..depth {
        scale /= 3.0;
        let mut next = Vec::with_capacity(pts.len() * 2);
        for p in &pts {
            next.push(*p);
            next.push(p + 2.0 * scale);
        }
        pts = next;
    }
    pts
}

/// Plain 2×2 float product trace for a word given as (generator, exponent) with
/// s, t supplied numerically.
pub fn float_word_trace(word: &[(char, i64)], s: [[f64; 2]; 2], t: [[f64; 2]; 2]) -> f64 {
    let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
        [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ]
    };
    let inv = |a: [[f64; 2]; 2]| [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]];
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    for &(g, e) in word {
        let base = if g == 's' { s } else { t };
        let base = if e < 0 { inv(base) } else { base };
        for _ in 0..e.unsigned_abs() {
            m = mul(m, base);
        }
    }
    m[0][0] + m[1][1]
}

/// Primitive integer vectors (p, q), gcd(|p|, |q|) = 1, with p² + q² ≤ r².
pub fn primitive_vectors_within(r: f64) -> Vec<(i64, i64)> {
    let k = r.floor() as i64;
    let mut out = Vec::new();
    for p in -k..=k {
        for q in -k..=k {
            if (p != 0 || q != 0) && ((p * p + q * q) as f64) <= r * r && gcd(p.unsigned_abs(), q.unsigned_abs()) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// |first Fourier coefficient| of the indicator of an interval of length w on a circle of length l.
pub fn strip_fourier_modulus(w: f64, l: f64) -> f64 {
    (std::f64::consts::PI * w / l).sin().abs() / std::f64::consts::PI
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> IntPoly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn mobius_cyclotomic() {
        assert_eq!(cyclotomic_mobius(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_mobius(1), ints(&[-1, 1]));
    }

    #[test]
    fn vca_counts() {
        assert_eq!(real_root_count_vca(&ints(&[-2, 0, 1])), 2);
        assert_eq!(real_root_count_vca(&ints(&[1, 0, 1])), 0);
        assert_eq!(real_root_count_vca(&ints(&[0, -1, 0, 1])), 3);
        assert_eq!(real_root_count_vca(&ints(&[1, -1, -2, 1])), 3);
        // (2x-1)(x-1): roots at 1/2 (a bisection midpoint) and 1
        assert_eq!(real_root_count_vca(&ints(&[1, -3, 2])), 2);
    }

    #[test]
    fn resultant_charpoly() {
        // Q(sqrt 2): a = 1 + y has charpoly x^2 - 2x - 1
        let m = ints(&[-2, 0, 1]);
        let a = vec![BigRational::one(), BigRational::one()];
        let cp = charpoly_by_resultant(&m, &a);
        let expect: Vec<BigRational> = [-1, -2, 1].iter().map(|&c| BigRational::from_integer(c.into())).collect();
        assert_eq!(cp, expect);
    }

    #[test]
    fn word_classes_small() {
        assert_eq!(brute_force_word_classes(2, &[1, 2, 3, 4], &[1]), 4);
    }
}

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::poly::{rat, rat_to_f64, ExtRat, RatPoly};

/// Closed rational interval used for certified evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn point(x: BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / rat(2)
    }

    pub fn mid_f64(&self) -> f64 {
        rat_to_f64(&self.mid())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// +1 / -1 if the interval is strictly on one side of zero.
    pub fn strict_sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn add_scalar(&self, c: &BigRational) -> RatInterval {
        RatInterval::new(&self.lo + c, &self.hi + c)
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        RatInterval::new(lo, hi)
    }

    /// Evaluates `p` over the interval by interval Horner.
    pub fn eval_poly(&self, coeffs: &[BigRational]) -> RatInterval {
        let mut acc = RatInterval::point(BigRational::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add_scalar(c);
        }
        acc
    }
}

impl Serialize for RatInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&rat_string(&self.lo))?;
        seq.serialize_element(&rat_string(&self.hi))?;
        seq.end()
    }
}

pub fn rat_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// An interval (lo, hi] containing exactly one root of `poly`.
///
/// When the root is known exactly, `exact` is set and lo = hi = root.
#[derive(Clone, Debug)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact: bool,
    poly: Arc<RatPoly>,
    signs: Arc<SignPoly>,
}

/// Positive integer multiple of a rational polynomial, for fast sign evaluation.
#[derive(Clone, Debug)]
pub(crate) struct SignPoly {
    coeffs: Vec<BigInt>,
}

impl SignPoly {
    pub(crate) fn new(p: &RatPoly) -> Self {
        SignPoly { coeffs: p.clear_denominators() }
    }

    /// Sign of p(n/d), computed as the sign of Σ c_i n^i d^(deg-i).
    pub(crate) fn sign_at(&self, x: &BigRational) -> i8 {
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // homogenised Horner: acc_i = acc_{i+1}·n + c_i·d^(deg-i)
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &dpow;
            dpow *= d;
        }
        if acc.is_zero() {
            0
        } else if acc.is_positive() {
            1
        } else {
            -1
        }
    }

    fn sign_at_ext(&self, x: &ExtRat) -> i8 {
        match x {
            ExtRat::Finite(v) => self.sign_at(v),
            ExtRat::PosInf => self.coeffs.last().map_or(0, |c| c.signum().to_i8()),
            ExtRat::NegInf => {
                let s = self.coeffs.last().map_or(0, |c| c.signum().to_i8());
                if self.coeffs.len() % 2 == 0 {
                    -s
                } else {
                    s
                }
            }
        }
    }
}

trait ToI8 {
    fn to_i8(&self) -> i8;
}

impl ToI8 for BigInt {
    fn to_i8(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl PartialEq for IsolatingInterval {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi && self.exact == other.exact
    }
}

impl Serialize for IsolatingInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.as_interval().serialize(serializer)
    }
}

impl IsolatingInterval {
    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn as_interval(&self) -> RatInterval {
        RatInterval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        rat_to_f64(&((&self.lo + &self.hi) / rat(2)))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        if self.exact {
            x == &self.hi
        } else {
            &self.lo < x && x <= &self.hi
        }
    }

    /// Whether some point of [lo, hi] lies within `tol` of `x`.
    pub fn within(&self, x: &BigRational, tol: &BigRational) -> bool {
        &(&self.lo - tol) <= x && x <= &(&self.hi + tol)
    }

    /// Bisects until the width is at most 2^-bits.
    pub fn refine(&mut self, bits: u32) {
        if self.exact {
            return;
        }
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        let mut s_lo = self.signs.sign_at(&self.lo);
        while self.width() > target {
            let mid = (&self.lo + &self.hi) / rat(2);
            let s_mid = self.signs.sign_at(&mid);
            if s_mid == 0 {
                self.lo = mid.clone();
                self.hi = mid;
                self.exact = true;
                return;
            }
            let in_lower = if s_lo != 0 {
                s_lo != s_mid
            } else {
                sturm_count(&self.poly, &ExtRat::Finite(self.lo.clone()), &ExtRat::Finite(mid.clone())) == 1
            };
            if in_lower {
                self.hi = mid;
            } else {
                self.lo = mid;
                s_lo = s_mid;
            }
        }
    }

    pub fn refined(&self, bits: u32) -> Self {
        let mut out = self.clone();
        out.refine(bits);
        out
    }
}

fn sign_changes(seq: &[SignPoly], x: &ExtRat) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = p.sign_at_ext(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of `p` in (a, b]. Non-squarefree input is reduced first.
pub fn sturm_count(p: &RatPoly, a: &ExtRat, b: &ExtRat) -> usize {
    let sq = p.squarefree_part();
    sturm_count_with(&sturm_signs(&sq), a, b)
}

pub(crate) fn sturm_signs(sq: &RatPoly) -> Vec<SignPoly> {
    sq.sturm_sequence().iter().map(SignPoly::new).collect()
}

pub(crate) fn sturm_count_with(seq: &[SignPoly], a: &ExtRat, b: &ExtRat) -> usize {
    let va = sign_changes(seq, a);
    let vb = sign_changes(seq, b);
    va.saturating_sub(vb)
}

/// Power of two strictly larger than the modulus of every root (Cauchy bound).
pub fn root_bound(p: &RatPoly) -> BigRational {
    let lc = p.leading().abs();
    let mut m = BigRational::zero();
    for c in &p.coeffs()[..p.coeffs().len().saturating_sub(1)] {
        let r = c.abs() / &lc;
        if r > m {
            m = r;
        }
    }
    let bound = m + BigRational::one();
    let mut pow = BigRational::one();
    while pow <= bound {
        pow *= rat(2);
    }
    pow
}

/// Isolates all distinct real roots of `p`, sorted by descending value, each of width at most 2^-bits.
pub fn isolate_real_roots(p: &RatPoly, bits: u32) -> Vec<IsolatingInterval> {
    let sq = Arc::new(p.squarefree_part());
    if sq.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let seq = sturm_signs(&sq);
    let signs = Arc::new(SignPoly::new(&sq));
    let b = root_bound(&sq);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let c = sturm_count_with(&seq, &ExtRat::Finite(lo.clone()), &ExtRat::Finite(hi.clone()));
        match c {
            0 => {}
            1 => out.push(IsolatingInterval {
                lo,
                hi,
                exact: false,
                poly: sq.clone(),
                signs: signs.clone(),
            }),
            _ => {
                let mid = (&lo + &hi) / rat(2);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    for iv in &mut out {
        if iv.signs.sign_at(&iv.hi) == 0 {
            iv.lo = iv.hi.clone();
            iv.exact = true;
        }
        iv.refine(bits);
    }
    out.sort_by(|a, b| b.hi.cmp(&a.hi));
    out
}

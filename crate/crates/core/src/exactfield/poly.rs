use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactFieldError;

/// Dense univariate polynomial over Q, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

/// A point of the extended rational line, used as a Sturm endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtRat {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl From<BigRational> for ExtRat {
    fn from(value: BigRational) -> Self {
        ExtRat::Finite(value)
    }
}

impl From<i64> for ExtRat {
    fn from(value: i64) -> Self {
        ExtRat::Finite(rat(value))
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn sign_of(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `x - c`
    pub fn linear_root(c: BigRational) -> Self {
        Self::new(vec![-c, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i8 {
        sign_of(&self.eval(x))
    }

    pub fn sign_at_ext(&self, x: &ExtRat) -> i8 {
        match x {
            ExtRat::Finite(v) => self.sign_at(v),
            ExtRat::PosInf => sign_of(&self.leading()),
            ExtRat::NegInf => {
                let s = sign_of(&self.leading());
                if self.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Substitutes x -> c·x.
    pub fn scale_variable(&self, c: &BigRational) -> Self {
        let mut pow = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        Self::new(out)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|a| a / &lc).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * rat(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (RatPoly::zero(), RatPoly::zero());
        };
        if nd < dd {
            return (RatPoly::zero(), self.clone());
        }
        let lc = divisor.leading();
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub fn rem(&self, divisor: &RatPoly) -> RatPoly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m` by extended Euclid; `None` when they share a factor.
    pub fn inverse_mod(&self, m: &RatPoly) -> Option<RatPoly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (RatPoly::zero(), RatPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = r0.leading();
        Some(s0.scale(&(BigRational::one() / c)).rem(m))
    }

    pub fn squarefree_part(&self) -> RatPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Sturm chain of a squarefree polynomial, each member scaled by a positive constant.
    pub fn sturm_sequence(&self) -> Vec<RatPoly> {
        let mut seq = vec![normalize_positive(self), normalize_positive(&self.derivative())];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(normalize_positive(&-r));
        }
        seq
    }

    /// All coefficients integral.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// Multiplies by the least positive integer that clears all denominators.
    pub fn clear_denominators(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self, ExactFieldError> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

fn normalize_positive(p: &RatPoly) -> RatPoly {
    if p.is_zero() {
        return p.clone();
    }
    p.scale(&(BigRational::one() / p.leading().abs()))
}

pub fn parse_rational(s: &str) -> Result<BigRational, ExactFieldError> {
    let bad = || ExactFieldError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
    }
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Fallback for huge numerators/denominators: shift to a representable range.
        let nb = x.numer().bits() as i64;
        let db = x.denom().bits() as i64;
        let shift = nb - db;
        let scaled = if shift > 0 {
            x / BigRational::from_integer(BigInt::one() << shift as usize)
        } else {
            x * BigRational::from_integer(BigInt::one() << (-shift) as usize)
        };
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RatPoly {
    /// Human form, highest degree first: `x^3 - 2x^2 - x + 1`, `x^5 - 39/2x^4 ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match k {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coef}")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        RatPoly::from_strings(&items).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let a = RatPoly::from_i64(&[3, 0, -2, 5, 1]);
        let b = RatPoly::new(vec![ratio(1, 2), rat(-1), rat(3)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = RatPoly::from_i64(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree_part(), RatPoly::from_i64(&[-2, 1, 1]));
        assert_eq!(p.gcd(&p.derivative()), RatPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn inverse_mod_minpoly() {
        let m = RatPoly::from_i64(&[-1, -2, 1, 1]);
        let a = RatPoly::from_i64(&[1, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!((&a * &inv).rem(&m), RatPoly::one());
    }

    #[test]
    fn display_matches_table_style() {
        let p = RatPoly::new(vec![ratio(89, 32), ratio(-17, 16), ratio(-243, 8), rat(-47), ratio(-39, 2), rat(1)]);
        assert_eq!(p.to_string(), "x^5 - 39/2x^4 - 47x^3 - 243/8x^2 - 17/16x + 89/32");
        assert_eq!(RatPoly::from_i64(&[1, -1, -2, 1]).to_string(), "x^3 - 2x^2 - x + 1");
    }

    #[test]
    fn json_round_trip() {
        let p = RatPoly::new(vec![ratio(-3, 4), rat(0), rat(2)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["-3/4","0/1","2/1"]"#);
        assert_eq!(serde_json::from_str::<RatPoly>(&s).unwrap(), p);
    }

    #[test]
    fn sign_at_agrees_with_eval() {
        let p = RatPoly::from_i64(&[1, -1, -2, 1]);
        for (n, d) in [(1, 3), (-7, 4), (9, 4), (5, 9), (0, 1)] {
            let x = ratio(n, d);
            assert_eq!(p.sign_at(&x), sign_of(&p.eval(&x)));
        }
    }
}

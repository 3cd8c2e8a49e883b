use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use super::cyclotomic::{euler_phi, two_cos_minpoly};
use super::poly::{rat_to_f64, sign_of, RatPoly};
use super::roots::{isolate_real_roots, IsolatingInterval, RatInterval};
use super::ExactFieldError;

/// Q(θ) with θ = 2cos(2π/N), together with its real embeddings.
pub struct RealAlgebraicField {
    n: u32,
    minpoly: RatPoly,
    degree: usize,
    /// θ^{d+j} expressed in the power basis, for j = 0..d-1.
    reduction: Vec<Vec<BigRational>>,
    roots_f64: Vec<f64>,
    roots_dd: Vec<TwoFloat>,
    embeddings: RwLock<Vec<IsolatingInterval>>,
    /// Best fixed-point root approximations so far, (precision, θ_σ·2^precision).
    fixed_roots: Mutex<Vec<(u32, BigInt)>>,
}

pub type FieldRef = Arc<RealAlgebraicField>;

impl fmt::Debug for RealAlgebraicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(2cos(2pi/{})) [{}]", self.n, self.minpoly)
    }
}

fn cache() -> &'static Mutex<HashMap<u32, FieldRef>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, FieldRef>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Builds (or fetches the shared copy of) the field of index N ≥ 3.
pub fn field_create(n: u32) -> FieldRef {
    assert!(n >= 3, "field index must be at least 3");
    if let Some(f) = cache().lock().unwrap().get(&n) {
        return f.clone();
    }
    let field = Arc::new(RealAlgebraicField::build(n));
    cache().lock().unwrap().entry(n).or_insert(field).clone()
}

pub(crate) fn dd_from_rational(x: &BigRational) -> TwoFloat {
    let hi = rat_to_f64(x);
    let rest = x - BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
    TwoFloat::new_add(hi, rat_to_f64(&rest))
}

impl RealAlgebraicField {
    fn build(n: u32) -> Self {
        let minpoly = two_cos_minpoly(n);
        let degree = minpoly.degree().unwrap();
        assert_eq!(degree as u32, (euler_phi(n) / 2).max(1));
        let roots = isolate_real_roots(&minpoly, 128);
        assert_eq!(roots.len(), degree, "field must be totally real");
        let theta = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
        assert!(
            (roots[0].mid_f64() - theta).abs() < 1e-9,
            "identity embedding must be the largest root"
        );

        let mut reduction = Vec::with_capacity(degree);
        let mut cur: Vec<BigRational> = (0..degree).map(|k| -minpoly.coeff(k)).collect();
        for _ in 0..degree {
            reduction.push(cur.clone());
            // multiply by θ
            let top = cur[degree - 1].clone();
            let mut next = vec![BigRational::zero(); degree];
            for k in 1..degree {
                next[k] = cur[k - 1].clone();
            }
            for k in 0..degree {
                next[k] += &top * &reduction[0][k];
            }
            cur = next;
        }

        let roots_f64 = roots.iter().map(|r| r.mid_f64()).collect();
        let roots_dd = roots
            .iter()
            .map(|r| dd_from_rational(&((&r.lo + &r.hi) / BigRational::from_integer(2.into()))))
            .collect();
        RealAlgebraicField {
            n,
            minpoly,
            degree,
            reduction,
            roots_f64,
            roots_dd,
            embeddings: RwLock::new(roots),
            fixed_roots: Mutex::new(vec![(0, BigInt::zero()); degree]),
        }
    }

    pub fn index(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minpoly(&self) -> &RatPoly {
        &self.minpoly
    }

    /// Isolating interval of the σ-th embedding (1-based; 1 is the identity).
    pub fn embedding(&self, sigma: usize) -> IsolatingInterval {
        self.embeddings.read().unwrap()[sigma - 1].clone()
    }

    pub fn embeddings(&self) -> Vec<IsolatingInterval> {
        self.embeddings.read().unwrap().clone()
    }

    /// σ-th conjugate of θ as an interval of width at most 2^-bits.
    pub fn root_interval(&self, sigma: usize, bits: u32) -> RatInterval {
        {
            let roots = self.embeddings.read().unwrap();
            let r = &roots[sigma - 1];
            if r.exact || r.width() <= pow2_neg(bits) {
                return r.as_interval();
            }
        }
        let mut roots = self.embeddings.write().unwrap();
        roots[sigma - 1].refine(bits);
        roots[sigma - 1].as_interval()
    }

    /// θ_σ·2^p to within a few units, by fixed-point Newton iteration started from the
    /// isolating interval; the result is confirmed by an exact sign change of the minimal polynomial.
    pub fn root_fixed(&self, sigma: usize, p: u32) -> BigInt {
        {
            let cache = self.fixed_roots.lock().unwrap();
            let (cp, x) = &cache[sigma - 1];
            if *cp >= p {
                return x >> (cp - p) as usize;
            }
        }
        const GUARD: u32 = 16;
        let target = p + GUARD;
        let coeffs = self.minpoly.clear_denominators();
        let iv = self.embedding(sigma);
        let two_pow = |k: u32| BigInt::one() << k as usize;
        let mut prec = 96u32.min(target);
        let mid = (&iv.lo + &iv.hi) / BigRational::from_integer(2.into());
        let mut x = (mid * BigRational::from_integer(two_pow(prec))).floor().to_integer();
        loop {
            let (mut f, mut fp) = (BigInt::zero(), BigInt::zero());
            for c in coeffs.iter().rev() {
                fp = ((&fp * &x) >> prec as usize) + &f;
                f = ((&f * &x) >> prec as usize) + (c << prec as usize);
            }
            if !fp.is_zero() {
                x -= (f << prec as usize) / fp;
            }
            if prec >= target {
                break;
            }
            let np = (2 * prec).min(target);
            x <<= (np - prec) as usize;
            prec = np;
        }
        let slack = two_pow(8);
        let lo = BigRational::new_raw(&x - &slack, two_pow(prec));
        let hi = BigRational::new_raw(&x + &slack, two_pow(prec));
        let signs = super::roots::SignPoly::new(&self.minpoly);
        let ok = lo >= iv.lo && hi <= iv.hi && signs.sign_at(&lo) * signs.sign_at(&hi) < 0;
        let x = if ok {
            x
        } else {
            let r = self.root_interval(sigma, target);
            (r.mid() * BigRational::from_integer(two_pow(prec))).floor().to_integer()
        };
        let out = x >> GUARD as usize;
        let mut cache = self.fixed_roots.lock().unwrap();
        if cache[sigma - 1].0 < p {
            cache[sigma - 1] = (p, out.clone());
        }
        out
    }

    pub fn root_f64(&self, sigma: usize) -> f64 {
        self.roots_f64[sigma - 1]
    }

    pub fn root_dd(&self, sigma: usize) -> TwoFloat {
        self.roots_dd[sigma - 1]
    }

    pub fn roots_f64(&self) -> &[f64] {
        &self.roots_f64
    }
}

impl Serialize for RealAlgebraicField {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("RealAlgebraicField", 3)?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("minpoly", &self.minpoly)?;
        st.serialize_field("embeddings", &self.embeddings())?;
        st.end()
    }
}

pub(crate) fn pow2_neg(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// Exact element of a field, in the power basis of θ.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldRef,
    coeffs: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", RatPoly::new(self.coeffs.clone()).to_string().replace('x', "θ"))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RatPoly::new(self.coeffs.clone()).serialize(serializer)
    }
}

impl FieldElement {
    pub fn from_coeffs(field: &FieldRef, coeffs: Vec<BigRational>) -> Self {
        assert!(coeffs.len() <= field.degree, "too many coefficients");
        let mut coeffs = coeffs;
        coeffs.resize(field.degree, BigRational::zero());
        FieldElement { field: field.clone(), coeffs }
    }

    /// Reduces an arbitrary polynomial in θ into the field.
    pub fn from_poly(field: &FieldRef, p: &RatPoly) -> Self {
        let mut c: Vec<BigRational> = p.rem(&field.minpoly).coeffs().to_vec();
        c.resize(field.degree, BigRational::zero());
        FieldElement { field: field.clone(), coeffs: c }
    }

    pub fn from_rational(field: &FieldRef, r: BigRational) -> Self {
        Self::from_coeffs(field, vec![r])
    }

    pub fn from_int(field: &FieldRef, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn zero(field: &FieldRef) -> Self {
        Self::from_coeffs(field, Vec::new())
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::from_int(field, 1)
    }

    /// θ itself.
    pub fn generator(field: &FieldRef) -> Self {
        Self::from_poly(field, &RatPoly::x())
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// All power-basis coefficients are integers (membership in Z[θ]).
    pub fn is_integral_coeffs(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| rmul(a, c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(c.into()))
    }

    /// Multiplication by θ (a shift followed by one reduction step).
    pub fn mul_generator(&self) -> Self {
        let d = self.field.degree;
        let mut c = vec![BigRational::zero(); d + 1];
        c[1..].clone_from_slice(&self.coeffs);
        reduce(&self.field, &mut c);
        FieldElement { field: self.field.clone(), coeffs: c }
    }

    pub fn try_inv(&self) -> Result<Self, ExactFieldError> {
        if self.is_zero() {
            return Err(ExactFieldError::DivisionByZero);
        }
        let inv = self
            .to_poly()
            .inverse_mod(&self.field.minpoly)
            .ok_or(ExactFieldError::DivisionByZero)?;
        Ok(Self::from_poly(&self.field, &inv))
    }

    pub fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Image under the σ-th embedding as an interval of width at most 2^-bits.
    pub fn embed(&self, sigma: usize, bits: u32) -> RatInterval {
        if let Some(r) = self.as_rational() {
            return RatInterval::point(r);
        }
        let target = pow2_neg(bits);
        let mut extra = 8 + self.coeff_bits();
        loop {
            let root = self.field.root_interval(sigma, bits + extra);
            let v = root.eval_poly(&self.coeffs);
            if v.width() <= target {
                return v;
            }
            extra += 32;
        }
    }

    fn coeff_bits(&self) -> u32 {
        let d = self.field.degree as u32;
        let max = self
            .coeffs
            .iter()
            .map(|c| c.numer().bits().saturating_sub(c.denom().bits()))
            .max()
            .unwrap_or(0) as u32;
        max + 2 * d + 2
    }

    /// σ-th image divided by 2^exp2, as a double; suited to elements far outside the f64 range.
    /// Precision is raised until the result is relatively accurate.
    pub fn approx_scaled(&self, sigma: usize, exp2: i64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let cb = self.coeff_bits() as i64;
        // rounding of θ_σ costs up to about 2^cb units of 2^-p
        let need = (cb + 72) as u64;
        let mut p = (cb - exp2 + 80).max(64) as u32;
        loop {
            let t = self.field.root_fixed(sigma, p);
            let mut acc = BigInt::zero();
            for c in self.coeffs.iter().rev() {
                let term = (c.numer() << p as usize) / c.denom();
                acc = ((acc * &t) >> p as usize) + term;
            }
            let bits = acc.bits();
            if bits >= need {
                // value = acc · 2^-p
                let shift = bits as i64 - 64;
                let m = num_traits::ToPrimitive::to_f64(&(acc >> shift as usize)).unwrap_or(0.0);
                return m * 2f64.powf((shift - p as i64 - exp2) as f64);
            }
            p += (need - bits) as u32 + 32;
        }
    }

    /// ⌊σ(x)·2^p⌉ to within one unit.
    pub fn fixed(&self, sigma: usize, p: u32) -> BigInt {
        let extra = self.coeff_bits() + 16;
        let w = p + extra;
        let t = self.field.root_fixed(sigma, w);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            let term = (c.numer() << w as usize) / c.denom();
            acc = ((acc * &t) >> w as usize) + term;
        }
        acc >> extra as usize
    }

    /// Floating approximation under the σ-th embedding (double precision).
    pub fn approx(&self, sigma: usize) -> f64 {
        self.approx_dd(sigma).hi()
    }

    /// Double-double approximation under the σ-th embedding.
    pub fn approx_dd(&self, sigma: usize) -> TwoFloat {
        let x = self.field.root_dd(sigma);
        let mut acc = TwoFloat::from(0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + dd_from_rational(c);
        }
        acc
    }

    /// Exact sign under the σ-th embedding.
    pub fn sign_at(&self, sigma: usize) -> i8 {
        if let Some(r) = self.as_rational() {
            return sign_of(&r);
        }
        let mut bits = 64;
        loop {
            if let Some(s) = self.embed(sigma, bits).strict_sign() {
                return s;
            }
            bits *= 2;
            assert!(bits < 1 << 16, "nonzero element with unresolvable sign");
        }
    }

    /// Exact sign in the identity embedding.
    pub fn sign(&self) -> i8 {
        self.sign_at(1)
    }

    pub fn abs_identity(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact comparison of the σ-th image with a rational.
    pub fn cmp_rational(&self, sigma: usize, r: &BigRational) -> std::cmp::Ordering {
        let diff = self - &Self::from_rational(&self.field, r.clone());
        diff.sign_at(sigma).cmp(&0)
    }

    pub fn minpoly(&self) -> RatPoly {
        super::minpoly::element_minpoly(self)
    }

    /// Largest absolute value of a coefficient numerator/denominator, in bits.
    pub fn height_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

// Integer fast paths: Ratio arithmetic always reduces by a gcd, which is slow
// for the large integral coefficients of long matrix products.
fn radd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() + b.numer())
    } else {
        a + b
    }
}

fn rsub(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() - b.numer())
    } else {
        a - b
    }
}

fn rmul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

/// Folds degrees d..2d-1 back into the power basis.
fn reduce(field: &RealAlgebraicField, c: &mut Vec<BigRational>) {
    let d = field.degree;
    if c.len() > d {
        let extra: Vec<BigRational> = c.drain(d..).collect();
        for (j, a) in extra.into_iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let row = &field.reduction[j];
            for k in 0..d {
                c[k] = radd(&c[k], &rmul(&a, &row[k]));
            }
        }
    }
    c.resize(d, BigRational::zero());
}

fn same_field(a: &FieldElement, b: &FieldElement) {
    debug_assert_eq!(a.field.n, b.field.n, "elements of different fields");
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        same_field(self, rhs);
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| radd(a, b)).collect(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        same_field(self, rhs);
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| rsub(a, b)).collect(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        same_field(self, rhs);
        let d = self.field.degree;
        let mut c = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = radd(&c[i + j], &rmul(a, b));
                }
            }
        }
        reduce(&self.field, &mut c);
        FieldElement { field: self.field.clone(), coeffs: c }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::poly::rat;

    #[test]
    fn field_roots_n14() {
        let f = field_create(14);
        assert_eq!(f.degree(), 3);
        let r = f.roots_f64();
        assert!((r[0] - 1.801_937_735_8).abs() < 1e-9);
        assert!((r[1] - 0.445_041_867_9).abs() < 1e-9);
        assert!((r[2] + 1.246_979_603_7).abs() < 1e-9);
    }

    #[test]
    fn small_fields() {
        let f = field_create(3);
        assert_eq!(f.degree(), 1);
        assert!((f.root_f64(1) + 1.0).abs() < 1e-15);
        let f10 = field_create(10);
        assert_eq!(f10.degree(), 2);
        assert!((f10.root_f64(1) - 1.618_033_988_75).abs() < 1e-10);
        assert!((f10.root_f64(2) + 0.618_033_988_75).abs() < 1e-10);
    }

    #[test]
    fn inverse_and_zero() {
        let f = field_create(14);
        let t = FieldElement::generator(&f);
        assert!((&t * &t.inv()).is_one());
        assert!(matches!(
            FieldElement::zero(&f).try_inv(),
            Err(ExactFieldError::DivisionByZero)
        ));
        assert!((&t + &(-&t)).is_zero());
    }

    #[test]
    fn embed_identity_and_rationals() {
        let f = field_create(28);
        let t = FieldElement::generator(&f);
        let x = &(&t * &t) - &FieldElement::from_int(&f, 2);
        assert!((x.approx(1) - 1.801_937_735_8).abs() < 1e-9);
        // third conjugate of 2cos(π/14) is 2cos(5π/14), whose double angle is 2cos(5π/7)
        let iv = x.embed(3, 60);
        assert!((iv.mid_f64() + 1.246_979_603_7).abs() < 1e-9);
        let one = FieldElement::one(&f);
        for s in 1..=f.degree() {
            assert_eq!(one.embed(s, 10), RatInterval::point(rat(1)));
        }
    }

    #[test]
    fn sign_is_exact() {
        let f = field_create(10);
        let phi = FieldElement::generator(&f);
        // φ² - φ - 1 = 0 exactly, so φ² - φ - 1 + tiny rational has the sign of the rational.
        let tiny = BigRational::new(1.into(), BigInt::one() << 300usize);
        let e = &(&(&phi * &phi) - &phi) - &FieldElement::one(&f);
        assert!(e.is_zero());
        let e2 = &e + &FieldElement::from_rational(&f, -tiny);
        assert_eq!(e2.sign(), -1);
        assert_eq!(phi.sign_at(2), -1);
    }
}

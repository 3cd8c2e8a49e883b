use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactfield::FieldElement;
use crate::trigroup::{mat_mul, op_norm, FieldMatrix2, Mat2, TriangleFamily};

use super::coding::{coding_step_exact, HeckeCoding};
use super::cocycle::LatticeVector;
use super::tracking::TrackingRun;
use super::ConjDynError;

/// Size of the log-spaced scale grid reported with every eigenvalue candidate.
pub const CALIBRATION_SCALES: usize = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct DirectionConstruction {
    pub family: TriangleFamily,
    pub bits: Vec<bool>,
    pub words: Vec<Vec<i64>>,
    pub digits: Vec<i64>,
    pub checkpoints: Vec<usize>,
    /// A_{m_k}([−λ/2, λ/2]) as decimal strings, one pair per checkpoint.
    pub intervals: Vec<[String; 2]>,
    /// log₂ of the widths of those intervals.
    pub log2_widths: Vec<f64>,
    pub nested: bool,
    /// A_N(0) in decimal, accurate to the final interval width.
    pub x_star: String,
    pub x_star_f64: f64,
    /// x* · 2^fixed_bits, floored.
    #[serde(skip)]
    pub x_fixed: BigInt,
    pub fixed_bits: u32,
    /// A_N, the exact product of the emitted digits.
    #[serde(skip)]
    pub product: FieldMatrix2,
    /// Longest dictionary word including its branch digit.
    pub longest_word: usize,
}

/// Decimal expansion of x truncated toward zero after `digits` places.
pub(crate) fn decimal(x: &BigRational, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scaled = (a * BigRational::from_integer(BigInt::from(10u32).pow(digits as u32))).floor().to_integer();
    let s = scaled.to_string();
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int, frac) = s.split_at(s.len() - digits);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int);
    if digits > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// m·Q_r
fn push_digit(m: &FieldMatrix2, r: i64) -> FieldMatrix2 {
    let b = m.b.mul_generator().scale_int(r);
    let d = m.d.mul_generator().scale_int(r);
    FieldMatrix2::new(m.b.clone(), &b - &m.a, m.d.clone(), &d - &m.c)
}

/// Nested cylinders A_{m_k}([−λ/2, λ/2]) of a tracking run and their limit point.
///
/// Every emitted digit has |r| ≥ r_min, and Q_r maps the closed base interval into itself for
/// such r (checked exactly for ±r_min when the dictionary is built; larger |r| land closer to 0),
/// so nestedness reduces to the digit check plus strictly decreasing widths.
pub fn cantor_direction(coding: &HeckeCoding, run: &TrackingRun) -> Result<DirectionConstruction, ConjDynError> {
    if run.digits.is_empty() {
        return Err(ConjDynError::Empty);
    }
    let f = coding.field();
    let lam = coding.lambda_at(0);
    let mut a = FieldMatrix2::identity(f);
    let mut float_log2 = 0.0f64;
    let mut fa: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let mut nested = run.digits.iter().all(|&r| coding.is_full_branch(r));
    let mut exact_cps = Vec::new();
    let mut log2_widths: Vec<f64> = Vec::new();
    let mut next_cp = run.checkpoints.iter().peekable();
    for (i, &r) in run.digits.iter().enumerate() {
        a = push_digit(&a, r);
        fa = mat_mul(&fa, &coding.digit_block(r, 0));
        let n = op_norm(&fa);
        fa = fa.map(|row| row.map(|e| e / n));
        float_log2 += n.log2();
        if next_cp.peek() == Some(&&(i + 1)) {
            next_cp.next();
            // |A(λ/2) − A(−λ/2)| = λ / |(cλ/2 + d)(d − cλ/2)| for det A = 1
            let (c, d) = (fa[1][0], fa[1][1]);
            let lw = lam.log2() - ((c * lam / 2.0 + d) * (d - c * lam / 2.0)).abs().log2() - 2.0 * float_log2;
            if let Some(&prev) = log2_widths.last() {
                nested &= lw < prev;
            }
            log2_widths.push(lw);
            exact_cps.push(a.clone());
        }
    }
    // the final width is about ‖A_N‖^{-2}
    let fixed_bits = 64 + (2.0 * float_log2).ceil() as u32;
    let work = fixed_bits + float_log2.ceil() as u32 + 64;
    let one = BigInt::one() << work as usize;
    let h = FieldElement::generator(f).fixed(1, work - 1);
    let fixed = |m: &FieldMatrix2| m.entries().map(|e| e.fixed(1, work));
    let image = |m: &[BigInt; 4], x: &BigInt| -> BigRational {
        let num = &m[0] * x + &m[1] * &one;
        let den = &m[2] * x + &m[3] * &one;
        if den.is_negative() {
            BigRational::new_raw(-num, -den)
        } else {
            BigRational::new_raw(num, den)
        }
    };
    let intervals = exact_cps
        .iter()
        .zip(&log2_widths)
        .map(|(m, &lw)| {
            let e = fixed(m);
            let (e1, e2) = (image(&e, &-&h), image(&e, &h));
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            let digits = ((-lw).max(0.0) * std::f64::consts::LOG10_2).ceil() as usize + 6;
            [decimal(&lo, digits), decimal(&hi, digits)]
        })
        .collect();
    let e = fixed(&a);
    let xr = image(&e, &BigInt::zero());
    let dec_digits = (fixed_bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    let x_fixed = (&xr * BigRational::from_integer(BigInt::one() << fixed_bits as usize)).floor().to_integer();
    Ok(DirectionConstruction {
        family: coding.family,
        bits: run.bits.clone(),
        words: run.words.clone(),
        digits: run.digits.clone(),
        checkpoints: run.checkpoints.clone(),
        intervals,
        log2_widths,
        nested,
        x_star: decimal(&xr, dec_digits),
        x_star_f64: crate::exactfield::rat_to_f64(&xr),
        x_fixed,
        fixed_bits,
        product: a,
        longest_word: run.longest_word,
    })
}

impl DirectionConstruction {
    /// x̂ = A_N(0) exactly.
    pub fn x_hat(&self) -> FieldElement {
        &self.product.b * &self.product.d.inv()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecodeReport {
    pub recoded: Vec<i64>,
    pub compared: usize,
    /// Smallest s such that recoded and emitted digits agree from position s on.
    pub mismatch_prefix: usize,
    pub consistent: bool,
}

/// Re-codes x* exactly for up to `n_digits` digits and compares with the emitted string.
pub fn recode_consistency(coding: &HeckeCoding, c: &DirectionConstruction, n_digits: usize) -> RecodeReport {
    let n = n_digits.min(c.digits.len());
    let mut x = c.x_hat();
    let mut recoded = Vec::with_capacity(n);
    for _ in 0..n {
        match coding_step_exact(coding, &x) {
            Ok((r, xn)) => {
                recoded.push(r);
                x = xn;
            }
            Err(_) => break,
        }
    }
    let mut mismatch_prefix = 0;
    for i in 0..n {
        if recoded.get(i) != Some(&c.digits[i]) {
            mismatch_prefix = i + 1;
        }
    }
    RecodeReport {
        compared: n,
        consistent: mismatch_prefix <= c.longest_word,
        mismatch_prefix,
        recoded,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenCandidate {
    /// Coordinate of v^id along the expanding direction e_u.
    pub nu: f64,
    /// Coordinate along the contracting direction e_s.
    pub eta: f64,
    pub e_u: [f64; 2],
    pub e_s: [f64; 2],
    /// ν vanishes to working precision.
    pub trivial: bool,
    /// Change of the numerical expanding direction between the last two checkpoints.
    pub spread: f64,
    /// 10^-2 … 10^2, log-spaced.
    pub calibration: Vec<f64>,
}

/// Leading left singular vector, oriented to have a nonnegative second coordinate.
fn top_left_singular(m: &Mat2) -> [f64; 2] {
    let s = mat_mul(m, &crate::trigroup::mat_transpose(m));
    let th = 0.5 * (2.0 * s[0][1]).atan2(s[0][0] - s[1][1]);
    let v = [th.cos(), th.sin()];
    if v[1] < 0.0 || (v[1] == 0.0 && v[0] < 0.0) {
        [-v[0], -v[1]]
    } else {
        v
    }
}

pub fn calibration_grid() -> Vec<f64> {
    (0..CALIBRATION_SCALES)
        .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / (CALIBRATION_SCALES - 1) as f64))
        .collect()
}

/// Coordinates (ν, η) of the identity block of `v` in the basis (e_u, e_s) of the construction.
pub fn eigenvalue_candidate(
    coding: &HeckeCoding,
    v: &LatticeVector,
    c: &DirectionConstruction,
) -> Result<EigenCandidate, ConjDynError> {
    if v.is_zero() {
        return Err(ConjDynError::ZeroVector);
    }
    let mut fa: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let mut dirs = Vec::new();
    let mut cps = c.checkpoints.iter().peekable();
    for (i, &r) in c.digits.iter().enumerate() {
        fa = mat_mul(&fa, &coding.digit_block(r, 0));
        let n = op_norm(&fa);
        fa = fa.map(|row| row.map(|e| e / n));
        if cps.peek() == Some(&&(i + 1)) {
            cps.next();
            dirs.push(top_left_singular(&fa));
        }
    }
    let last = *dirs.last().ok_or(ConjDynError::Empty)?;
    let spread = if dirs.len() >= 2 {
        let p = dirs[dirs.len() - 2];
        (p[0] - last[0]).hypot(p[1] - last[1])
    } else {
        f64::INFINITY
    };
    if spread > 1e-12 {
        return Err(ConjDynError::NoConvergence(spread));
    }
    let mut cand = split_along(v.at(1), c.x_star_f64);
    cand.spread = spread.max((cand.e_u[0] - last[0]).hypot(cand.e_u[1] - last[1]));
    Ok(cand)
}

/// Coordinates of w in the basis e_u = (x*, 1)/‖·‖, e_s = (1, −x*)/‖·‖.
pub fn split_along(w: [f64; 2], x_star: f64) -> EigenCandidate {
    let h = x_star.hypot(1.0);
    let e_u = [x_star / h, 1.0 / h];
    let e_s = [1.0 / h, -x_star / h];
    let nu = w[0] * e_u[0] + w[1] * e_u[1];
    let eta = w[0] * e_s[0] + w[1] * e_s[1];
    EigenCandidate {
        nu,
        eta,
        e_u,
        e_s,
        trivial: nu.abs() <= 1e-12 * w[0].hypot(w[1]),
        spread: 0.0,
        calibration: calibration_grid(),
    }
}

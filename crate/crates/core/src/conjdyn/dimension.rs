use std::collections::HashSet;

use num_bigint::BigInt;
use serde::Serialize;

use crate::exactfield::{rat, FieldElement, FieldRef};

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Least-squares slope of ln N(ε) against ln(1/ε), N counting occupied boxes ⌊x/ε⌋.
pub fn box_counting_dimension(points: &[f64], scales: &[f64]) -> f64 {
    assert!(scales.len() >= 2, "need at least two scales");
    let (xs, ys): (Vec<f64>, Vec<f64>) = scales
        .iter()
        .map(|&eps| {
            let boxes: HashSet<i128> = points.iter().map(|&x| (x / eps).floor() as i128).collect();
            ((1.0 / eps).ln(), (boxes.len() as f64).ln())
        })
        .unzip();
    ls_slope(&xs, &ys)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxCount {
    pub slope: f64,
    /// Dyadic exponents j (ε = 2^-j) used in the fit.
    pub exponents: Vec<u32>,
    pub counts: Vec<usize>,
}

/// Box counts of fixed-point points (value · 2^bits) at ε = 2^-j.
pub fn box_counting_fixed(points: &[BigInt], bits: u32, exponents: &[u32]) -> BoxCount {
    let min = points.iter().min().cloned().unwrap_or_default();
    let shifted: Vec<BigInt> = points.iter().map(|p| p - &min).collect();
    let counts: Vec<usize> = exponents
        .iter()
        .map(|&j| {
            let sh = bits.saturating_sub(j) as usize;
            shifted.iter().map(|p| p >> sh).collect::<HashSet<BigInt>>().len()
        })
        .collect();
    let xs: Vec<f64> = exponents.iter().map(|&j| j as f64 * std::f64::consts::LN_2).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    BoxCount {
        slope: if xs.len() >= 2 { ls_slope(&xs, &ys) } else { 0.0 },
        exponents: exponents.to_vec(),
        counts,
    }
}

/// Fits over the dyadic scales at which a finite sample resolves the set:
/// at least 4 boxes and at most a quarter of the distinct points.
pub fn box_counting_auto(points: &[BigInt], bits: u32) -> BoxCount {
    let all: Vec<u32> = (0..=bits).collect();
    let full = box_counting_fixed(points, bits, &all);
    let distinct = *full.counts.last().unwrap_or(&0);
    let pick = |lo: usize, hi: usize| -> Vec<u32> {
        all.iter().zip(&full.counts).filter(|(_, &c)| c >= lo && c <= hi).map(|(&j, _)| j).collect()
    };
    let mut exps = pick(4, distinct / 4);
    if exps.len() < 2 {
        exps = pick(2, distinct / 2);
    }
    box_counting_fixed(points, bits, &exps)
}

/// Fixed-point images of float points, for use with [`box_counting_auto`].
pub fn fixed_from_f64(points: &[f64], bits: u32) -> Vec<BigInt> {
    points
        .iter()
        .map(|&x| {
            let r = num_rational::BigRational::from_float(x).expect("finite point");
            (r * num_rational::BigRational::from_integer(BigInt::from(1) << bits as usize)).floor().to_integer()
        })
        .collect()
}

/// Searches c = (Σ aᵢθ^i)/b with max(|aᵢ|, b) ≤ H and |ν₁/ν₂ − c| < tol, smallest height first.
pub fn field_ratio_check(nu1: f64, nu2: f64, field: &FieldRef, height: i64, tol: f64) -> Option<FieldElement> {
    assert!(nu2 != 0.0);
    let ratio = nu1 / nu2;
    let d = field.degree();
    let theta = field.root_f64(1);
    let powers: Vec<f64> = (0..d).map(|i| theta.powi(i as i32)).collect();
    for h in 0..=height {
        for b in 1..=h.max(1) {
            let mut a = vec![-h; d];
            loop {
                let top = a.iter().map(|x| x.abs()).max().unwrap_or(0).max(b);
                if top == h {
                    let val: f64 = a.iter().zip(&powers).map(|(&ai, p)| ai as f64 * p).sum::<f64>() / b as f64;
                    if (val - ratio).abs() < tol {
                        let coeffs = a.iter().map(|&ai| rat(ai) / rat(b)).collect();
                        return Some(FieldElement::from_coeffs(field, coeffs));
                    }
                }
                let mut i = 0;
                while i < d {
                    a[i] += 1;
                    if a[i] <= h {
                        break;
                    }
                    a[i] = -h;
                    i += 1;
                }
                if i == d {
                    break;
                }
            }
        }
    }
    None
}

use std::f64::consts::PI;

use serde::Serialize;

use crate::trigroup::{
    evaluate_word_f64, frobenius, mat_identity, FieldMatrix2, Gen, GroupPresentation, GroupWord, Mat2,
};

use super::certificate::SalemCertificate;

/// M^σ for every embedding σ of the model field, entries accurate to 2^-bits.
pub fn conjugate_matrices(m: &FieldMatrix2, bits: u32) -> Vec<Mat2> {
    let d = m.field().degree();
    (1..=d)
        .map(|sigma| {
            let e = |x: &crate::exactfield::FieldElement| x.embed(sigma, bits).mid_f64();
            [[e(&m.a), e(&m.b)], [e(&m.c), e(&m.d)]]
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AngleReport {
    pub angles: Vec<f64>,
    pub bound: i64,
    /// Smallest distance from Σ nᵢαᵢ to 2πZ over nonzero n with max|nᵢ| ≤ bound.
    pub min_residual: f64,
    pub best_relation: Vec<i64>,
    /// A residual below tolerance: impossible for a genuine certificate, so a red flag.
    pub relation_found: bool,
}

fn dist_to_2pi_z(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    r.min(2.0 * PI - r)
}

/// Exhaustive scan for small integer relations among the elliptic rotation angles.
pub fn irrational_angle_check(cert: &SalemCertificate, bound: i64, tol: f64) -> AngleReport {
    assert!(bound >= 1);
    let angles: Vec<f64> = cert.conjugates()[1..]
        .iter()
        .map(|iv| iv.mid_f64().clamp(-1.0, 1.0).acos())
        .collect();
    let k = angles.len();
    let mut best = f64::INFINITY;
    let mut best_n = vec![0; k];
    let mut n = vec![-bound; k];
    loop {
        // only vectors whose first nonzero entry is positive; n and -n give the same residual
        if let Some(first) = n.iter().find(|&&c| c != 0) {
            if *first > 0 {
                let sum: f64 = n.iter().zip(&angles).map(|(&c, a)| c as f64 * a).sum();
                let r = dist_to_2pi_z(sum);
                if r < best {
                    best = r;
                    best_n.clone_from(&n);
                }
            }
        }
        let mut i = 0;
        while i < k {
            n[i] += 1;
            if n[i] <= bound {
                break;
            }
            n[i] = -bound;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    AngleReport {
        angles,
        bound,
        min_residual: best,
        best_relation: best_n,
        relation_found: best < tol,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessBudget {
    pub max_blocks: usize,
    pub max_abs_exp: u32,
    pub max_words: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub word: GroupWord,
    pub sigma: usize,
    /// min(‖M^σ − I‖, ‖M^σ + I‖), Frobenius norm.
    pub distance: f64,
}

/// First enumerated word M ≠ ±I whose σ-conjugate lies within ε of ±I.
pub fn nondiscreteness_witness(
    g: &GroupPresentation,
    sigma: usize,
    eps: f64,
    budget: WitnessBudget,
) -> Option<Witness> {
    assert!(eps > 0.0);
    let singles = crate::trigroup::exponent_range(g.order_t, budget.max_abs_exp)
        .into_iter()
        .map(|e| GroupWord::single(Gen::T, e))
        .chain(
            crate::trigroup::exponent_range(g.order_s, budget.max_abs_exp)
                .into_iter()
                .map(|e| GroupWord::single(Gen::S, e)),
        );
    let words = singles.chain(g.enumerate_words(budget.max_blocks.max(1), budget.max_abs_exp));
    let id = mat_identity();
    for w in words.take(budget.max_words as usize) {
        let m = evaluate_word_f64(g, &w, sigma);
        let minus = |a: &Mat2, sgn: f64| -> f64 {
            frobenius(&[
                [a[0][0] - sgn * id[0][0], a[0][1]],
                [a[1][0], a[1][1] - sgn * id[1][1]],
            ])
        };
        let distance = minus(&m, 1.0).min(minus(&m, -1.0));
        if distance < eps && !crate::trigroup::evaluate_word(g, &w).is_central() {
            return Some(Witness { word: w, sigma, distance });
        }
    }
    None
}

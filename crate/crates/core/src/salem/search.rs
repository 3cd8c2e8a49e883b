use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactfield::RatPoly;
use crate::trigroup::{
    build_group, frobenius, mat_identity, mat_mul, GroupPresentation, GroupWord, Mat2, TriangleFamily,
    WordEnumerator,
};

use super::certificate::{certify, SalemCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_blocks: usize,
    pub max_abs_exp: u32,
    pub max_words: u64,
}

impl SearchBudget {
    /// The budget at which the negative results for q = 17 / q = 16 are asserted.
    pub const REFERENCE: SearchBudget = SearchBudget {
        max_blocks: 6,
        max_abs_exp: 12,
        max_words: 10_000_000,
    };
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub family: TriangleFamily,
    pub budget: SearchBudget,
    pub found: Vec<SalemCertificate>,
    pub scanned: u64,
    /// Words that passed the floating-point screen and were decided exactly.
    pub exact_checks: u64,
    /// Wall time; kept out of the JSON so that reports are byte-reproducible.
    #[serde(skip)]
    pub elapsed: f64,
}

/// Per-embedding float tables of the exponent blocks used by the enumerator.
struct FloatTables {
    /// [σ][i] = t^{t_exps[i]} under σ
    t: Vec<Vec<Mat2>>,
    s: Vec<Vec<Mat2>>,
    t_norm: Vec<Vec<f64>>,
    s_norm: Vec<Vec<f64>>,
}

impl FloatTables {
    fn new(g: &GroupPresentation, en: &WordEnumerator) -> Self {
        let d = g.field.degree();
        let build = |gen, exps: &[i64]| -> Vec<Vec<Mat2>> {
            (1..=d)
                .map(|sigma| {
                    exps.iter()
                        .map(|&e| g.power(gen, e).embed_f64(sigma))
                        .collect()
                })
                .collect()
        };
        let t = build(crate::trigroup::Gen::T, en.t_exponents());
        let s = build(crate::trigroup::Gen::S, en.s_exponents());
        let norms = |tab: &Vec<Vec<Mat2>>| -> Vec<Vec<f64>> {
            tab.iter().map(|row| row.iter().map(|m| 1.0 + frobenius(m)).collect()).collect()
        };
        FloatTables {
            t_norm: norms(&t),
            s_norm: norms(&s),
            t,
            s,
        }
    }

    /// Half-trace and an error bound under embedding index `k` (0-based).
    fn half_trace(&self, k: usize, idx: &[usize], ns: usize) -> (f64, f64) {
        let mut m = mat_identity();
        let mut growth = 1.0;
        for &p in idx {
            let (ti, si) = (p / ns, p % ns);
            m = mat_mul(&m, &self.t[k][ti]);
            m = mat_mul(&m, &self.s[k][si]);
            growth *= self.t_norm[k][ti] * self.s_norm[k][si];
        }
        let x = 0.5 * (m[0][0] + m[1][1]);
        (x, 1e-12 * growth * idx.len() as f64)
    }
}

/// Conservative screen: false only if the word provably cannot be Salem.
fn may_be_salem(tables: &FloatTables, idx: &[usize], ns: usize, d: usize) -> bool {
    let (x0, e0) = tables.half_trace(0, idx, ns);
    if x0.abs() + e0 < 1.0 {
        return false;
    }
    for k in 1..d {
        let (x, e) = tables.half_trace(k, idx, ns);
        if x.abs() - e > 1.0 && (x - x0).abs() > e + e0 {
            return false;
        }
    }
    true
}

/// Streams words through the screen and exact certification, deduplicating by half-trace polynomial.
pub fn search(family: TriangleFamily, budget: SearchBudget) -> SearchReport {
    let start = Instant::now();
    let g = build_group(family).expect("valid family");
    let mut en = WordEnumerator::new(&g, budget.max_blocks.max(1), budget.max_abs_exp);
    let tables = FloatTables::new(&g, &en);
    let ns = en.s_exponents().len();
    let d = g.field.degree();

    let mut scanned = 0u64;
    let mut exact_checks = 0u64;
    let mut found = Vec::new();
    let mut seen: HashSet<RatPoly> = HashSet::new();
    const CHUNK: usize = 1 << 15;
    loop {
        let mut chunk: Vec<Vec<usize>> = Vec::with_capacity(CHUNK);
        while chunk.len() < CHUNK && scanned < budget.max_words {
            match en.next_indices() {
                Some(idx) => {
                    chunk.push(idx.to_vec());
                    scanned += 1;
                }
                None => break,
            }
        }
        if chunk.is_empty() {
            break;
        }
        let survivors: Vec<GroupWord> = chunk
            .par_iter()
            .filter(|idx| may_be_salem(&tables, idx, ns, d))
            .map(|idx| en.word_of(idx))
            .collect();
        exact_checks += survivors.len() as u64;
        let certs: Vec<Option<SalemCertificate>> =
            survivors.par_iter().map(|w| certify(&g, w).ok()).collect();
        for cert in certs.into_iter().flatten() {
            if seen.insert(cert.half_trace_minpoly().clone()) {
                found.push(cert);
            }
        }
        if scanned >= budget.max_words {
            break;
        }
    }
    SearchReport {
        family,
        budget,
        found,
        scanned,
        exact_checks,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

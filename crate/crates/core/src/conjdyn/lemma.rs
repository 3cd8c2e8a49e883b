use serde::{Deserialize, Serialize};

use crate::salem::{golden_row, search, SearchBudget};
use crate::trigroup::{mat_apply, op_norm, GroupPresentation, GroupWord, Mat2};

use super::cocycle::{EmbeddedCocycle, WVector};
use super::ConjDynError;

/// The tabled Salem word when there is one, otherwise the first word found by a small search.
pub fn salem_word_for(g: &GroupPresentation) -> Result<GroupWord, ConjDynError> {
    if let Some(row) = golden_row(g.family.variant, g.family.q) {
        return Ok(row.word());
    }
    let budget = SearchBudget { max_blocks: 4, max_abs_exp: 6, max_words: 200_000 };
    search(g.family, budget)
        .found
        .first()
        .map(|c| c.word.clone())
        .ok_or_else(|| ConjDynError::NoSalem(g.family.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub word: GroupWord,
    /// min over non-identity embeddings of ‖(word^k)^σ‖ for k = 0..=k_max.
    pub min_norms: Vec<f64>,
    pub nondecreasing: bool,
    /// Least-squares c in min_norm(k) ≈ c·k over k ≥ 1.
    pub slope: f64,
}

/// The parabolic family g_k = (s·t)^k, with its growth checked numerically up to k_max.
pub fn growth_family(coc: &EmbeddedCocycle, k_max: u32) -> GrowthReport {
    let word: GroupWord = "s.t".parse().unwrap();
    let base = coc.block_matrices(&word);
    let mut cur: Vec<Mat2> = vec![[[1.0, 0.0], [0.0, 1.0]]; base.len()];
    let mut min_norms = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        if k > 0 {
            cur = cur.iter().zip(&base).map(|(a, b)| crate::trigroup::mat_mul(a, b)).collect();
        }
        min_norms.push(cur.iter().map(op_norm).fold(f64::INFINITY, f64::min));
    }
    let nondecreasing = min_norms.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let (num, den) = min_norms
        .iter()
        .enumerate()
        .skip(1)
        .fold((0.0, 0.0), |(n, d), (k, &m)| (n + k as f64 * m, d + (k * k) as f64));
    let slope = num / den;
    assert!(slope > 0.0, "degenerate growth of the parabolic family");
    GrowthReport { word, min_norms, nondecreasing, slope }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaBudget {
    pub n_max: u32,
    pub k_max: u32,
}

impl Default for LemmaBudget {
    fn default() -> Self {
        LemmaBudget { n_max: 500, k_max: 50 }
    }
}

/// A word g_k·g^n: n applications of the Salem element followed by k of the growth element.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaWord {
    pub n: u32,
    pub k: u32,
    pub word: GroupWord,
    /// ln(‖A·v‖ / ‖v‖)
    pub log_ratio: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Contract,
    Expand,
}

fn lemma_search(
    coc: &EmbeddedCocycle,
    salem: &GroupWord,
    v: &WVector,
    c0: f64,
    budget: LemmaBudget,
    goal: Goal,
) -> Result<LemmaWord, ConjDynError> {
    if v.is_zero() {
        return Err(ConjDynError::ZeroVector);
    }
    assert_eq!(v.blocks.len(), coc.num_blocks());
    let g = coc.block_matrices(salem);
    let growth: GroupWord = "s.t".parse().unwrap();
    let h = coc.block_matrices(&growth);
    let v_norm = v.norm();
    let mut best = match goal {
        Goal::Contract => f64::INFINITY,
        Goal::Expand => f64::NEG_INFINITY,
    };
    let mut u = v.blocks.clone();
    for n in 0..=budget.n_max {
        if n > 0 {
            u = u.iter().zip(&g).map(|(&b, m)| mat_apply(m, b)).collect();
        }
        let mut w = u.clone();
        for k in 1..=budget.k_max {
            w = w.iter().zip(&h).map(|(&b, m)| mat_apply(m, b)).collect();
            let ratio = (WVector::new(w.clone()).norm() / v_norm).ln();
            let hit = match goal {
                Goal::Contract => {
                    best = best.min(ratio);
                    ratio < -c0
                }
                Goal::Expand => {
                    best = best.max(ratio);
                    ratio > c0
                }
            };
            if hit {
                return Ok(LemmaWord {
                    n,
                    k,
                    word: growth.pow(k).concat(&salem.pow(n)),
                    log_ratio: ratio,
                });
            }
        }
    }
    Err(ConjDynError::BudgetExhausted { n_max: budget.n_max, k_max: budget.k_max, best_log_ratio: best })
}

/// Smallest n, then smallest k, with ‖(st)^k g^n · v‖ < e^{−C₀}‖v‖.
pub fn contraction_word(
    coc: &EmbeddedCocycle,
    salem: &GroupWord,
    v: &WVector,
    c0: f64,
    budget: LemmaBudget,
) -> Result<LemmaWord, ConjDynError> {
    lemma_search(coc, salem, v, c0, budget, Goal::Contract)
}

/// Smallest n, then smallest k, with ‖(st)^k g^n · v‖ > e^{C₀}‖v‖.
pub fn expansion_word(
    coc: &EmbeddedCocycle,
    salem: &GroupWord,
    v: &WVector,
    c0: f64,
    budget: LemmaBudget,
) -> Result<LemmaWord, ConjDynError> {
    lemma_search(coc, salem, v, c0, budget, Goal::Expand)
}

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exactfield::{rat, FieldElement};
use crate::trigroup::{mat_mul, Mat2};

use super::coding::HeckeCoding;
use super::cocycle::{block_op_norm, WVector};
use super::ConjDynError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DictionaryConfig {
    /// Longest word, not counting the branch digit.
    pub max_len: usize,
    /// Digits r with r_min ≤ |r| < r_min + digit_span.
    pub digit_span: i64,
}

impl Default for DictionaryConfig {
    fn default() -> Self {
        DictionaryConfig { max_len: 4, digit_span: 2 }
    }
}

/// A digit word with its cocycle action on W⁰.
#[derive(Clone, Debug, Serialize)]
pub struct DictWord {
    pub digits: Vec<i64>,
    /// Per non-identity block, the time-ordered product of transposed digit matrices.
    #[serde(skip)]
    pub blocks: Vec<Mat2>,
    /// ln‖Q_{r1}···Q_{rm}‖ in the identity embedding.
    pub id_log_norm: f64,
}

impl DictWord {
    fn new(coding: &HeckeCoding, digits: Vec<i64>) -> Self {
        let nb = coding.sigmas.len();
        let mut mats = vec![[[1.0, 0.0], [0.0, 1.0]]; nb];
        for &r in &digits {
            for (k, m) in mats.iter_mut().enumerate() {
                *m = mat_mul(&coding.cocycle_block(r, k), m);
            }
        }
        DictWord {
            id_log_norm: crate::trigroup::op_norm(&mats[0]).ln(),
            blocks: mats[1..].to_vec(),
            digits,
        }
    }

    /// Action of this word followed by `then`.
    fn followed_by(&self, then: &DictWord) -> Vec<Mat2> {
        self.blocks.iter().zip(&then.blocks).map(|(a, b)| mat_mul(b, a)).collect()
    }
}

/// The finite word set F together with the two branch words.
#[derive(Clone, Debug)]
pub struct CodingDictionary {
    pub coding: HeckeCoding,
    pub config: DictionaryConfig,
    /// Sorted by identity log-norm, so the first admissible word is the shortest in the Möbius sense.
    pub words: Vec<DictWord>,
    pub branches: [DictWord; 2],
    /// max over words w and branches l of ln‖A^{wl}‖ (= ln‖(A^{wl})^{-1}‖ in SL(2)).
    pub c1: f64,
    /// Longest word including its branch digit.
    pub longest: usize,
}

/// Image of the base interval under Q_r, as exact (lo, hi).
fn cylinder(coding: &HeckeCoding, r: i64) -> (FieldElement, FieldElement) {
    let lam = coding.lambda();
    let f = coding.field();
    let half = FieldElement::from_rational(f, rat(1) / rat(2));
    let image = |c: &FieldElement| -(&(&lam * &(c + &FieldElement::from_int(f, r)))).inv();
    let a = image(&half);
    let b = image(&-&half);
    if (&a - &b).sign() < 0 {
        (a, b)
    } else {
        (b, a)
    }
}

/// Checks exactly that the branch cylinders have disjoint closures inside [−λ/2, λ/2].
pub(crate) fn check_branches(coding: &HeckeCoding, r1: i64, r2: i64) -> Result<(), ConjDynError> {
    let lam = coding.lambda();
    let half_lam = lam.scale(&(rat(1) / rat(2)));
    let (a1, b1) = cylinder(coding, r1);
    let (a2, b2) = cylinder(coding, r2);
    let inside = |lo: &FieldElement, hi: &FieldElement| (lo + &half_lam).sign() >= 0 && (&half_lam - hi).sign() >= 0;
    let disjoint = (&a2 - &b1).sign() > 0 || (&a1 - &b2).sign() > 0;
    if inside(&a1, &b1) && inside(&a2, &b2) && disjoint {
        Ok(())
    } else {
        Err(ConjDynError::BadBranches(format!("{r1}, {r2}")))
    }
}

impl CodingDictionary {
    pub fn new(coding: HeckeCoding, config: DictionaryConfig) -> Result<Self, ConjDynError> {
        if coding.num_blocks() == 0 {
            return Err(ConjDynError::Arithmetic);
        }
        let r0 = coding.r_min;
        check_branches(&coding, r0, -r0)?;
        let mut alphabet = Vec::new();
        for a in r0..r0 + config.digit_span {
            alphabet.push(a);
            alphabet.push(-a);
        }
        let mut words = Vec::new();
        let mut layer: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..config.max_len {
            layer = layer
                .iter()
                .flat_map(|w| {
                    alphabet.iter().map(move |&a| {
                        let mut n = w.clone();
                        n.push(a);
                        n
                    })
                })
                .collect();
            words.extend(layer.iter().map(|d| DictWord::new(&coding, d.clone())));
        }
        words.sort_by(|a, b| a.id_log_norm.total_cmp(&b.id_log_norm).then_with(|| a.digits.cmp(&b.digits)));
        let branches = [DictWord::new(&coding, vec![r0]), DictWord::new(&coding, vec![-r0])];
        let c1 = words
            .iter()
            .flat_map(|w| branches.iter().map(move |l| block_op_norm(&w.followed_by(l)).ln()))
            .fold(0.0, f64::max);
        Ok(CodingDictionary {
            longest: config.max_len + 1,
            coding,
            config,
            words,
            branches,
            c1,
        })
    }

    fn ratios(&self, w: &DictWord, v: &WVector) -> [f64; 2] {
        let n = v.norm();
        [0, 1].map(|i| v.apply(&w.followed_by(&self.branches[i])).norm() / n)
    }

    /// First word with max over branches of ‖A^{wl}v‖ < e^{−margin}‖v‖.
    pub fn contraction(&self, v: &WVector, margin: f64) -> Option<&DictWord> {
        let bound = (-margin).exp();
        self.words.iter().find(|w| {
            let r = self.ratios(w, v);
            r[0].max(r[1]) < bound
        })
    }

    /// First word with min over branches of ‖A^{wl}v‖ > e^{margin}‖v‖.
    pub fn expansion(&self, v: &WVector, margin: f64) -> Option<&DictWord> {
        let bound = margin.exp();
        self.words.iter().find(|w| {
            let r = self.ratios(w, v);
            r[0].min(r[1]) > bound
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Targets {
    Constant(f64),
    /// a_k = a0·e^{−rate·k}
    Geometric { a0: f64, rate: f64 },
    /// a_k = a0/(k+1)
    Harmonic { a0: f64 },
    Explicit(Vec<f64>),
}

impl Targets {
    pub fn value(&self, k: usize) -> f64 {
        match self {
            Targets::Constant(a) => *a,
            Targets::Geometric { a0, rate } => a0 * (-rate * k as f64).exp(),
            Targets::Harmonic { a0 } => a0 / (k + 1) as f64,
            Targets::Explicit(v) => v[k.min(v.len() - 1)],
        }
    }

    /// sup over k < len of |ln a_k − ln a_{k+1}|.
    pub fn step_bound(&self, len: usize) -> f64 {
        (0..len)
            .map(|k| (self.value(k).ln() - self.value(k + 1).ln()).abs())
            .fold(0.0, f64::max)
    }
}

impl FromStr for Targets {
    type Err = String;

    /// `constant:A`, `geometric:A:RATE`, `harmonic:A`
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<f64, String> {
            parts
                .get(i)
                .ok_or_else(|| format!("missing field in {s:?}"))?
                .parse::<f64>()
                .map_err(|e| format!("{s:?}: {e}"))
        };
        match parts[0] {
            "constant" => Ok(Targets::Constant(num(1)?)),
            "geometric" => Ok(Targets::Geometric { a0: num(1)?, rate: num(2)? }),
            "harmonic" => Ok(Targets::Harmonic { a0: num(1)? }),
            _ => Err(format!("unknown target family {s:?}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrackingRun {
    pub v: WVector,
    pub bits: Vec<bool>,
    /// a_0, …, a_K
    pub targets: Vec<f64>,
    /// Contraction/expansion margin actually used.
    pub c0: f64,
    /// sup |ln a_k − ln a_{k+1}| over the run.
    pub target_step: f64,
    pub c1: f64,
    /// Per step: the chosen dictionary word followed by its branch digit.
    pub words: Vec<Vec<i64>>,
    pub digits: Vec<i64>,
    /// m_1, …, m_K
    pub checkpoints: Vec<usize>,
    /// ‖A_{m_k}·v‖ for k = 1..K
    pub norms: Vec<f64>,
    /// e_k = |ln‖A_{m_k}·v‖ − ln a_k| for k = 1..K
    pub errors: Vec<f64>,
    pub initial_error: f64,
    /// |ln‖v‖ − ln a_0| + C₁
    pub bound: f64,
    pub longest_word: usize,
}

impl TrackingRun {
    pub fn bound_holds(&self) -> bool {
        self.errors.iter().all(|&e| e <= self.bound)
    }

    /// With moving targets the induction only gives the bound up to one target step.
    pub fn general_bound_holds(&self) -> bool {
        self.errors.iter().all(|&e| e <= self.bound + self.target_step)
    }

    pub fn gaps_bounded(&self) -> bool {
        let mut prev = 0;
        self.checkpoints.iter().all(|&m| {
            let ok = m > prev && m - prev <= self.longest_word;
            prev = m;
            ok
        })
    }
}

/// Steers ‖A_{m_k}·v‖ along the targets: contract when above a_k, expand otherwise, then
/// append the branch digit selected by t_k.
pub fn tracking_run(
    dict: &CodingDictionary,
    v: &WVector,
    targets: &Targets,
    bits: &[bool],
    margin: Option<f64>,
) -> Result<TrackingRun, ConjDynError> {
    if v.is_zero() {
        return Err(ConjDynError::ZeroVector);
    }
    let steps = bits.len();
    let target_step = targets.step_bound(steps);
    let c0 = margin.unwrap_or_else(|| target_step.max(0.05));
    let a: Vec<f64> = (0..=steps).map(|k| targets.value(k)).collect();
    let initial_error = (v.norm().ln() - a[0].ln()).abs();
    let mut cur = v.clone();
    let mut words = Vec::with_capacity(steps);
    let mut digits = Vec::new();
    let mut checkpoints = Vec::with_capacity(steps);
    let mut norms = Vec::with_capacity(steps);
    let mut errors = Vec::with_capacity(steps);
    for (k, &bit) in bits.iter().enumerate() {
        let w = if cur.norm() > a[k] { dict.contraction(&cur, c0) } else { dict.expansion(&cur, c0) }
            .ok_or(ConjDynError::DictionaryExhausted { margin: c0 })?;
        let l = &dict.branches[bit as usize];
        cur = cur.apply(&w.followed_by(l));
        let mut full = w.digits.clone();
        full.extend(&l.digits);
        digits.extend(&full);
        words.push(full);
        checkpoints.push(digits.len());
        let n = cur.norm();
        norms.push(n);
        errors.push((n.ln() - a[k + 1].ln()).abs());
    }
    Ok(TrackingRun {
        v: v.clone(),
        bits: bits.to_vec(),
        targets: a,
        c0,
        target_step,
        c1: dict.c1,
        words,
        digits,
        checkpoints,
        norms,
        errors,
        initial_error,
        bound: initial_error + dict.c1,
        longest_word: dict.longest,
    })
}

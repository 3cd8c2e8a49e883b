//! Dynamics of the Galois-conjugate cocycle over the Hecke boundary expansion.

mod coding;
mod cocycle;
mod dimension;
mod direction;
mod lemma;
mod lyapunov;
mod tracking;

pub use coding::{
    coding_step, coding_step_dd, coding_step_exact, coding_trajectory, exact_shadow, CodingStep, CodingTrajectory,
    HeckeCoding, ShadowReport,
};
pub use cocycle::{trace_field_sigmas, EmbeddedCocycle, LatticeVector, WVector};
pub use dimension::{
    box_counting_auto, box_counting_dimension, box_counting_fixed, field_ratio_check, fixed_from_f64, BoxCount,
};
pub use direction::{
    calibration_grid, cantor_direction, eigenvalue_candidate, recode_consistency, split_along, DirectionConstruction, EigenCandidate,
    RecodeReport, CALIBRATION_SCALES,
};
pub use lemma::{
    contraction_word, expansion_word, growth_family, salem_word_for, GrowthReport, LemmaBudget, LemmaWord,
};
pub use lyapunov::{lyapunov_ratio, lyapunov_profile, LyapunovEstimate};
pub use tracking::{tracking_run, CodingDictionary, DictWord, DictionaryConfig, Targets, TrackingRun};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ConjDynError {
    #[error("x = 0: the direction has a vertical saddle connection")]
    Terminated,
    #[error("field of degree 1: no conjugate blocks")]
    Arithmetic,
    #[error("embedding index {0} is not a non-identity trace-field embedding")]
    BadSigma(usize),
    #[error("no word within budget n ≤ {n_max}, k ≤ {k_max} (best log-ratio {best_log_ratio:.4})")]
    BudgetExhausted { n_max: u32, k_max: u32, best_log_ratio: f64 },
    #[error("no dictionary word achieves margin {margin} for the current vector")]
    DictionaryExhausted { margin: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("branch images {0} are not disjoint inside the base interval")]
    BadBranches(String),
    #[error("singular directions did not stabilise (spread {0:e})")]
    NoConvergence(f64),
    #[error("empty construction")]
    Empty,
    #[error("no Salem element known for {0}")]
    NoSalem(String),
}

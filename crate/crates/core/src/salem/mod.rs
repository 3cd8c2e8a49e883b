//! Salem certification of triangle-group elements, budgeted search and the reference tables.

mod certificate;
mod conjugates;
mod search;
mod table;

pub use certificate::{
    certify, half_trace_data, half_trace_data_of, is_salem, reflect, salem_from_half_trace, HalfTraceData,
    SalemCertificate, SalemChecks, SalemEvidence, SalemRejection,
};
pub use conjugates::{
    conjugate_matrices, irrational_angle_check, nondiscreteness_witness, AngleReport, Witness, WitnessBudget,
};
pub use search::{search, SearchBudget, SearchReport};
pub use table::{
    check_row, format_sig4, golden_row, golden_rows, render_text, reproduce_table, ConjugateMatch, GoldenRow,
    TableRow, GOLDEN_ROWS,
};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SalemError {
    #[error("row q={q}: expected {expected}, computed {got}")]
    RowMismatch { q: u32, expected: String, got: String },
    #[error("q={q} is not a tabled row")]
    NotTabled { q: u32 },
}

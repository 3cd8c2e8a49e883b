//! Exact arithmetic in the real cyclotomic fields Q(2cos(2π/N)).

mod cyclotomic;
mod field;
mod minpoly;
mod poly;
mod roots;

pub use cyclotomic::{cyclotomic_poly, divisors, euler_phi, two_cos_minpoly};
pub use field::{field_create, FieldElement, FieldRef, RealAlgebraicField};
pub use minpoly::element_minpoly;
pub use poly::{parse_rational, rat, rat_to_f64, ratio, ExtRat, RatPoly};
pub use roots::{isolate_real_roots, rat_string, root_bound, sturm_count, IsolatingInterval, RatInterval};


pub use num_bigint::BigInt;
pub use num_rational::BigRational;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExactFieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// True iff every coefficient of `p` is an integer.
pub fn is_integral(p: &RatPoly) -> bool {
    p.is_integral()
}

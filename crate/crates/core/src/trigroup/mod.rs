//! Matrix models of the triangle groups Δ(2,q,∞) and Δ(q,∞,∞).

mod enumerate;
mod matrix;
mod word;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exactfield::{field_create, rat, FieldElement, FieldRef};

pub use enumerate::{exponent_range, WordEnumerator};
pub use matrix::{frobenius, mat_apply, mat_identity, mat_inv, mat_mul, mat_transpose, op_norm, Class, FieldMatrix2, Mat2};
pub use word::{Gen, GroupWord};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TriGroupError {
    #[error("malformed word {0:?}")]
    WordSyntax(String),
    #[error("unknown triangle family {0:?} (expected 2qinf or qinfinf)")]
    Family(String),
    #[error("q must be at least 3, got {0}")]
    SmallQ(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Δ(2,q,∞), the Hecke group.
    TwoQInf,
    /// Δ(q,∞,∞).
    QInfInf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriangleFamily {
    pub variant: Variant,
    pub q: u32,
}

impl TriangleFamily {
    pub fn two_q_inf(q: u32) -> Self {
        TriangleFamily { variant: Variant::TwoQInf, q }
    }

    pub fn q_inf_inf(q: u32) -> Self {
        TriangleFamily { variant: Variant::QInfInf, q }
    }

    pub fn short_name(&self) -> &'static str {
        match self.variant {
            Variant::TwoQInf => "2qinf",
            Variant::QInfInf => "qinfinf",
        }
    }

    /// Index N of the field Q(2cos(2π/N)) carrying the matrix model.
    pub fn field_index(&self) -> u32 {
        match self.variant {
            Variant::TwoQInf => 2 * self.q,
            Variant::QInfInf => 4 * self.q,
        }
    }
}

impl fmt::Display for TriangleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Variant::TwoQInf => write!(f, "Δ(2,{},∞)", self.q),
            Variant::QInfInf => write!(f, "Δ({},∞,∞)", self.q),
        }
    }
}

impl FromStr for Variant {
    type Err = TriGroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "2qinf" | "twoqinf" | "hecke" => Ok(Variant::TwoQInf),
            "qinfinf" => Ok(Variant::QInfInf),
            _ => Err(TriGroupError::Family(s.to_string())),
        }
    }
}

/// Generators s, t of a triangle group as exact matrices.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub family: TriangleFamily,
    pub field: FieldRef,
    pub s: FieldMatrix2,
    pub t: FieldMatrix2,
    /// Projective orders; `None` for parabolic generators.
    pub order_s: Option<u32>,
    pub order_t: Option<u32>,
    s_inv: FieldMatrix2,
    t_inv: FieldMatrix2,
}

pub fn build_group(family: TriangleFamily) -> Result<GroupPresentation, TriGroupError> {
    let q = family.q;
    if q < 3 {
        return Err(TriGroupError::SmallQ(q));
    }
    let field = field_create(family.field_index());
    let int = |n: i64| FieldElement::from_int(&field, n);
    let theta = FieldElement::generator(&field);
    let (s, t, order_s, order_t) = match family.variant {
        Variant::TwoQInf => {
            let s = FieldMatrix2::new(int(0), int(-1), int(1), int(0));
            let t = FieldMatrix2::new(int(0), int(-1), int(1), theta.clone());
            (s, t, Some(2), Some(q))
        }
        Variant::QInfInf => {
            // p_k = 2cos(kπ/(2q)) by the Chebyshev recurrence
            let mut p = vec![int(2), theta.clone()];
            for k in 1..q as usize {
                let next = &(&theta * &p[k]) - &p[k - 1];
                p.push(next);
            }
            let half = rat(1) / rat(2);
            let c = p[2].scale(&half);
            let sin = p[q as usize - 2].scale(&half);
            let mu = (&(&int(1) + &c) * &sin.inv()).scale_int(-2);
            let s = FieldMatrix2::new(c.clone(), -&sin, sin.clone(), c);
            let t = FieldMatrix2::new(int(1), mu, int(0), int(1));
            (s, t, Some(q), None)
        }
    };
    let g = GroupPresentation {
        family,
        s_inv: s.inverse(),
        t_inv: t.inverse(),
        field,
        s,
        t,
        order_s,
        order_t,
    };
    g.check_relations();
    Ok(g)
}

impl GroupPresentation {
    fn check_relations(&self) {
        let st = self.s.mul(&self.t);
        assert!(self.s.det().is_one() && self.t.det().is_one());
        let two = FieldElement::from_int(&self.field, 2);
        let st_tr = st.trace();
        assert!(st_tr == two || st_tr == -&two, "s·t must be parabolic");
        assert!(!st.is_central());
        match self.family.variant {
            Variant::TwoQInf => {
                assert!(self.s.pow(2) == FieldMatrix2::identity(&self.field).neg());
                assert!(self.t.pow(self.family.q as u64).is_central());
            }
            Variant::QInfInf => {
                assert!(self.s.pow(self.family.q as u64).is_central());
                for k in 1..self.family.q as u64 {
                    assert!(!self.s.pow(k).is_central(), "s must have exact projective order q");
                }
                assert!(self.t.trace() == two && !self.t.is_identity());
            }
        }
    }

    pub fn order(&self, g: Gen) -> Option<u32> {
        match g {
            Gen::S => self.order_s,
            Gen::T => self.order_t,
        }
    }

    pub fn generator(&self, g: Gen) -> &FieldMatrix2 {
        match g {
            Gen::S => &self.s,
            Gen::T => &self.t,
        }
    }

    /// g^e exactly; finite-order generators use e mod 2·order, which is exact since g^{2·order} = I.
    pub fn power(&self, g: Gen, e: i64) -> FieldMatrix2 {
        let e = match self.order(g) {
            Some(o) => e.rem_euclid(2 * o as i64),
            None => e,
        };
        let (base, n) = if e >= 0 {
            (self.generator(g), e as u64)
        } else {
            (
                match g {
                    Gen::S => &self.s_inv,
                    Gen::T => &self.t_inv,
                },
                e.unsigned_abs(),
            )
        };
        base.pow(n)
    }

    pub fn canonical(&self, w: &GroupWord) -> GroupWord {
        w.canonical(self.order_s, self.order_t)
    }

    /// Numerical generator matrices under the σ-th embedding.
    pub fn generators_f64(&self, sigma: usize) -> (Mat2, Mat2) {
        (self.s.embed_f64(sigma), self.t.embed_f64(sigma))
    }

    pub fn enumerate_words(&self, max_blocks: usize, max_abs_exp: u32) -> WordEnumerator {
        WordEnumerator::new(self, max_blocks, max_abs_exp)
    }
}

/// Ordered exact product of the word's blocks, leftmost block as left factor.
pub fn evaluate_word(g: &GroupPresentation, w: &GroupWord) -> FieldMatrix2 {
    w.blocks()
        .iter()
        .fold(FieldMatrix2::identity(&g.field), |acc, &(gen, e)| acc.mul(&g.power(gen, e)))
}

/// Floating-point evaluation under one embedding.
pub fn evaluate_word_f64(g: &GroupPresentation, w: &GroupWord, sigma: usize) -> Mat2 {
    let (s, t) = g.generators_f64(sigma);
    let mut m = mat_identity();
    for &(gen, e) in w.blocks() {
        let base = if gen == Gen::S { s } else { t };
        let base = if e < 0 { mat_inv(&base) } else { base };
        for _ in 0..e.unsigned_abs() {
            m = mat_mul(&m, &base);
        }
    }
    m
}

pub fn classify(m: &FieldMatrix2) -> Class {
    m.classify()
}

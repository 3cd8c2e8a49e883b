use std::fmt;

use serde::Serialize;

use crate::exactfield::{rat, FieldElement, FieldRef};

/// Conjugacy type of an SL(2) element, read off from trace² in the identity embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Class {
    Central,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// 2×2 matrix over a real cyclotomic field, rows (a b; c d).
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldMatrix2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

pub type Mat2 = [[f64; 2]; 2];

impl fmt::Debug for FieldMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{:?}, {:?}], [{:?}, {:?}]]", self.a, self.b, self.c, self.d)
    }
}

impl FieldMatrix2 {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        let m = FieldMatrix2 { a, b, c, d };
        debug_assert!(m.det().is_one(), "matrix must be unimodular");
        m
    }

    pub fn identity(field: &FieldRef) -> Self {
        FieldMatrix2 {
            a: FieldElement::one(field),
            b: FieldElement::zero(field),
            c: FieldElement::zero(field),
            d: FieldElement::one(field),
        }
    }

    pub fn field(&self) -> &FieldRef {
        self.a.field()
    }

    pub fn det(&self) -> FieldElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> FieldElement {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &FieldMatrix2) -> FieldMatrix2 {
        FieldMatrix2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    /// Inverse of a unimodular matrix (the adjugate).
    pub fn inverse(&self) -> FieldMatrix2 {
        FieldMatrix2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> FieldMatrix2 {
        FieldMatrix2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn transpose(&self) -> FieldMatrix2 {
        FieldMatrix2 {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn pow(&self, e: u64) -> FieldMatrix2 {
        let mut result = FieldMatrix2::identity(self.field());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_central(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && {
            let r = self.a.as_rational();
            r == Some(rat(1)) || r == Some(rat(-1))
        }
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// All entries have integer power-basis coefficients.
    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|e| e.is_integral_coeffs())
    }

    /// Entrywise image under the σ-th embedding.
    pub fn embed_f64(&self, sigma: usize) -> Mat2 {
        [
            [self.a.approx(sigma), self.b.approx(sigma)],
            [self.c.approx(sigma), self.d.approx(sigma)],
        ]
    }

    pub fn classify(&self) -> Class {
        let tr = self.trace();
        let disc = &(&tr * &tr) - &FieldElement::from_int(self.field(), 4);
        match disc.sign() {
            -1 => Class::Elliptic,
            1 => Class::Hyperbolic,
            _ => {
                if self.is_central() {
                    Class::Central
                } else {
                    Class::Parabolic
                }
            }
        }
    }
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub fn mat_inv(a: &Mat2) -> Mat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub fn mat_identity() -> Mat2 {
    [[1.0, 0.0], [0.0, 1.0]]
}

pub fn mat_transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn mat_apply(a: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

/// Operator (spectral) norm of a 2×2 real matrix.
pub fn op_norm(a: &Mat2) -> f64 {
    let fro2 = a[0][0].powi(2) + a[0][1].powi(2) + a[1][0].powi(2) + a[1][1].powi(2);
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0);
    ((fro2 + disc.sqrt()) / 2.0).sqrt()
}

pub fn frobenius(a: &Mat2) -> f64 {
    (a[0][0].powi(2) + a[0][1].powi(2) + a[1][0].powi(2) + a[1][1].powi(2)).sqrt()
}

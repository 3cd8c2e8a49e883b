use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exactfield::{FieldElement, FieldRef};
use crate::trigroup::{evaluate_word_f64, mat_apply, op_norm, GroupPresentation, GroupWord, Mat2};

use super::ConjDynError;

/// Embeddings of the field that are distinct on the trace field, identity first.
///
/// For N ≡ 0 mod 4 the traces lie in the subfield fixed by θ ↦ −θ, so only the
/// embeddings with positive θ are kept; roots are stored in decreasing order.
pub fn trace_field_sigmas(field: &FieldRef) -> Vec<usize> {
    let d = field.degree();
    if field.index() % 4 == 0 {
        (1..=d).filter(|&s| field.root_f64(s) > 0.0).collect()
    } else {
        (1..=d).collect()
    }
}

/// A group together with its trace-field embeddings and float conjugate matrices.
#[derive(Clone, Debug)]
pub struct EmbeddedCocycle {
    pub group: GroupPresentation,
    /// Field embedding indices; `sigmas[0] == 1`.
    pub sigmas: Vec<usize>,
}

impl EmbeddedCocycle {
    pub fn new(group: GroupPresentation) -> Result<Self, ConjDynError> {
        let sigmas = trace_field_sigmas(&group.field);
        if sigmas.len() < 2 {
            return Err(ConjDynError::Arithmetic);
        }
        Ok(EmbeddedCocycle { group, sigmas })
    }

    pub fn num_blocks(&self) -> usize {
        self.sigmas.len() - 1
    }

    /// M^σ for each non-identity embedding.
    pub fn block_matrices(&self, w: &GroupWord) -> Vec<Mat2> {
        self.sigmas[1..].iter().map(|&s| evaluate_word_f64(&self.group, w, s)).collect()
    }

    pub fn identity_matrix(&self, w: &GroupWord) -> Mat2 {
        evaluate_word_f64(&self.group, w, 1)
    }

    /// Position of a field embedding among the non-identity blocks.
    pub fn block_of(&self, sigma: usize) -> Result<usize, ConjDynError> {
        self.sigmas[1..]
            .iter()
            .position(|&s| s == sigma)
            .ok_or(ConjDynError::BadSigma(sigma))
    }
}

/// A vector of W⁰ = ⊕_{σ≠id} V^σ, with an optional identity component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WVector {
    pub blocks: Vec<[f64; 2]>,
    pub identity: Option<[f64; 2]>,
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

impl WVector {
    pub fn new(blocks: Vec<[f64; 2]>) -> Self {
        WVector { blocks, identity: None }
    }

    /// Maximum of the Euclidean block norms.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(|&b| norm2(b)).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b[0] == 0.0 && b[1] == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        WVector {
            blocks: self.blocks.iter().map(|b| [c * b[0], c * b[1]]).collect(),
            identity: self.identity.map(|b| [c * b[0], c * b[1]]),
        }
    }

    /// Applies one matrix per block; the identity component is left alone.
    pub fn apply(&self, mats: &[Mat2]) -> Self {
        assert_eq!(mats.len(), self.blocks.len());
        WVector {
            blocks: self.blocks.iter().zip(mats).map(|(&b, m)| mat_apply(m, b)).collect(),
            identity: self.identity,
        }
    }

    /// Rescaled so that the norm is one, keeping block proportions.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scaled(1.0 / n)
        }
    }

    /// Uniform block angles, block magnitudes uniform in (0, 1], then normalised.
    pub fn random_unit<R: Rng>(num_blocks: usize, rng: &mut R) -> Self {
        let blocks = (0..num_blocks)
            .map(|_| {
                let a = rng.gen::<f64>() * std::f64::consts::TAU;
                let r = 1.0 - rng.gen::<f64>();
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        WVector::new(blocks).normalized()
    }
}

/// Operator norm with respect to the max-of-blocks norm.
pub fn block_op_norm(mats: &[Mat2]) -> f64 {
    mats.iter().map(op_norm).fold(0.0, f64::max)
}

/// An element of Z[λ]², the model of the integral lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    pub u: [FieldElement; 2],
}

impl LatticeVector {
    pub fn new(u1: FieldElement, u2: FieldElement) -> Self {
        assert!(
            u1.is_integral_coeffs() && u2.is_integral_coeffs(),
            "lattice vectors have integer power-basis coordinates"
        );
        LatticeVector { u: [u1, u2] }
    }

    /// Power-basis integer coordinates of both components.
    pub fn from_ints(field: &FieldRef, u1: &[i64], u2: &[i64]) -> Self {
        let mk = |c: &[i64]| {
            FieldElement::from_coeffs(field, c.iter().map(|&x| crate::exactfield::rat(x)).collect())
        };
        LatticeVector::new(mk(u1), mk(u2))
    }

    pub fn scale_int(&self, m: i64) -> Self {
        LatticeVector { u: [self.u[0].scale_int(m), self.u[1].scale_int(m)] }
    }

    pub fn at(&self, sigma: usize) -> [f64; 2] {
        [self.u[0].approx(sigma), self.u[1].approx(sigma)]
    }

    /// Per-embedding images: identity component plus the W⁰ blocks.
    pub fn realize(&self, sigmas: &[usize]) -> WVector {
        WVector {
            blocks: sigmas[1..].iter().map(|&s| self.at(s)).collect(),
            identity: Some(self.at(sigmas[0])),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.u[0].is_zero() && self.u[1].is_zero()
    }
}

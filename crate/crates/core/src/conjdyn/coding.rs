use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::exactfield::{rat, FieldElement, FieldRef};
use crate::trigroup::{build_group, mat_transpose, op_norm, FieldMatrix2, GroupPresentation, Mat2, TriangleFamily, Variant};

use super::cocycle::trace_field_sigmas;
use super::ConjDynError;

/// Nearest-λ-multiple boundary expansion for a Hecke group Δ(2,q,∞).
///
/// A direction x ∈ [−λ/2, λ/2) is coded by r = ⌊−1/(xλ) + 1/2⌋ and x′ = −1/x − rλ,
/// so that x = Q_r·x′ with Q_r = [[0,−1],[1,rλ]] = s·T^r, T: z ↦ z + λ.
#[derive(Clone, Debug)]
pub struct HeckeCoding {
    /// The family the caller asked about; Δ(q,∞,∞) is coded inside Δ(2,2q,∞).
    pub family: TriangleFamily,
    pub hecke: GroupPresentation,
    /// Trace-field embeddings of the Hecke field, identity first.
    pub sigmas: Vec<usize>,
    /// Smallest |r| whose cylinder closure lies inside the base interval.
    pub r_min: i64,
    lambdas: Vec<f64>,
    lambda_dd: TwoFloat,
    lambda_inv: FieldElement,
}

impl HeckeCoding {
    pub fn new(family: TriangleFamily) -> Result<Self, ConjDynError> {
        let q = match family.variant {
            Variant::TwoQInf => family.q,
            Variant::QInfInf => 2 * family.q,
        };
        let hecke = build_group(TriangleFamily::two_q_inf(q)).map_err(|_| ConjDynError::Arithmetic)?;
        let field = hecke.field.clone();
        let sigmas = trace_field_sigmas(&field);
        let lambda = FieldElement::generator(&field);
        let lambda2 = &lambda * &lambda;
        // (2r − 1)λ² ≥ 4
        let r_min = (1..)
            .find(|&r: &i64| (&lambda2.scale_int(2 * r - 1) - &FieldElement::from_int(&field, 4)).sign() >= 0)
            .unwrap();
        Ok(HeckeCoding {
            family,
            lambdas: sigmas.iter().map(|&s| field.root_f64(s)).collect(),
            lambda_dd: field.root_dd(1),
            lambda_inv: lambda.inv(),
            hecke,
            sigmas,
            r_min,
        })
    }

    pub fn field(&self) -> &FieldRef {
        &self.hecke.field
    }

    pub fn lambda(&self) -> FieldElement {
        FieldElement::generator(self.field())
    }

    /// λ under the k-th trace-field embedding (k = 0 is the identity).
    pub fn lambda_at(&self, k: usize) -> f64 {
        self.lambdas[k]
    }

    pub fn lambda_dd(&self) -> TwoFloat {
        self.lambda_dd
    }

    pub fn num_blocks(&self) -> usize {
        self.sigmas.len() - 1
    }

    pub fn digit_matrix(&self, r: i64) -> FieldMatrix2 {
        let f = self.field();
        let int = |n| FieldElement::from_int(f, n);
        FieldMatrix2::new(int(0), int(-1), int(1), self.lambda().scale_int(r))
    }

    /// Q_r under the k-th trace-field embedding.
    pub fn digit_block(&self, r: i64, k: usize) -> Mat2 {
        [[0.0, -1.0], [1.0, r as f64 * self.lambdas[k]]]
    }

    /// The cocycle acts on the conjugate planes by transposes taken in time order.
    pub fn cocycle_block(&self, r: i64, k: usize) -> Mat2 {
        mat_transpose(&self.digit_block(r, k))
    }

    pub fn is_full_branch(&self, r: i64) -> bool {
        r.abs() >= self.r_min
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodingStep {
    pub r: i64,
    pub x_next: f64,
}

impl CodingStep {
    pub fn matrix(&self, coding: &HeckeCoding) -> FieldMatrix2 {
        coding.digit_matrix(self.r)
    }
}

/// One step of the expansion in double precision.
pub fn coding_step(x: f64, lambda: f64) -> Result<CodingStep, ConjDynError> {
    if x == 0.0 {
        return Err(ConjDynError::Terminated);
    }
    let y = -1.0 / x;
    let mut r = (y / lambda + 0.5).floor();
    let mut x_next = y - r * lambda;
    if x_next >= lambda / 2.0 {
        r += 1.0;
        x_next -= lambda;
    } else if x_next < -lambda / 2.0 {
        r -= 1.0;
        x_next += lambda;
    }
    Ok(CodingStep { r: r as i64, x_next })
}

/// One step in double-double precision; digits beyond 2^52 are treated as termination.
pub fn coding_step_dd(x: TwoFloat, lambda: TwoFloat) -> Result<(i64, TwoFloat), ConjDynError> {
    if x.hi() == 0.0 {
        return Err(ConjDynError::Terminated);
    }
    let y = -x.recip();
    let rf = (y / lambda + 0.5).floor();
    if rf.hi().abs() > 4.5e15 {
        return Err(ConjDynError::Terminated);
    }
    let mut r = rf.hi() as i64 + rf.lo() as i64;
    let mut x_next = y - lambda * (r as f64);
    let half = lambda / 2.0;
    if x_next >= half {
        r += 1;
        x_next -= lambda;
    } else if x_next < -half {
        r -= 1;
        x_next += lambda;
    }
    Ok((r, x_next))
}

fn floor_exact(z: &FieldElement) -> i64 {
    let iv = z.embed(1, 40);
    let lo = iv.lo.floor().to_integer();
    let hi = iv.hi.floor().to_integer();
    let k = if lo == hi {
        hi
    } else if z.cmp_rational(1, &BigRational::from_integer(hi.clone())).is_lt() {
        hi - 1
    } else {
        hi
    };
    k.to_i64().expect("digit fits in i64")
}

/// One step in exact arithmetic: (r, x′) with x = Q_r·x′.
pub fn coding_step_exact(coding: &HeckeCoding, x: &FieldElement) -> Result<(i64, FieldElement), ConjDynError> {
    if x.is_zero() {
        return Err(ConjDynError::Terminated);
    }
    let y = -x.inv();
    let z = &(&y * &coding.lambda_inv) + &FieldElement::from_rational(coding.field(), rat(1) / rat(2));
    let r = floor_exact(&z);
    Ok((r, &y - &coding.lambda().scale_int(r)))
}

#[derive(Clone, Debug, Serialize)]
pub struct CodingTrajectory {
    pub x0: f64,
    pub digits: Vec<i64>,
    pub terminated: bool,
    /// ln‖A_n^σ‖ after every step, one entry per trace-field embedding; empty unless recorded.
    pub log_norms: Vec<Vec<f64>>,
    pub final_log_norms: Vec<f64>,
}

/// Float partial products A_n = Q_{r1}···Q_{rn}, one per embedding, with log-scale bookkeeping.
#[derive(Clone, Debug)]
pub(crate) struct ScaledProducts {
    pub mats: Vec<Mat2>,
    /// A_n^σ = mats[σ] · 2^exps[σ]
    pub exps: Vec<i64>,
}

impl ScaledProducts {
    pub fn new(blocks: usize) -> Self {
        ScaledProducts { mats: vec![[[1.0, 0.0], [0.0, 1.0]]; blocks], exps: vec![0; blocks] }
    }

    /// A ← A·Q_r, using [[a,b],[c,d]]·Q_r = [[b, −a + rλb], [d, −c + rλd]].
    pub fn push(&mut self, coding: &HeckeCoding, r: i64) {
        for (k, m) in self.mats.iter_mut().enumerate() {
            let rl = r as f64 * coding.lambda_at(k);
            *m = [[m[0][1], -m[0][0] + rl * m[0][1]], [m[1][1], -m[1][0] + rl * m[1][1]]];
            let n = op_norm(m);
            if n > 1e150 {
                for row in m.iter_mut() {
                    for e in row.iter_mut() {
                        *e *= 2f64.powi(-500);
                    }
                }
                self.exps[k] += 500;
            }
        }
    }

    pub fn log_norms(&self) -> Vec<f64> {
        self.mats
            .iter()
            .zip(&self.exps)
            .map(|(m, &e)| op_norm(m).ln() + e as f64 * std::f64::consts::LN_2)
            .collect()
    }
}

/// Codes x₀ for up to `n` steps in double-double precision, tracking ln‖A_n^σ‖.
pub fn coding_trajectory(coding: &HeckeCoding, x0: TwoFloat, n: usize, record: bool) -> CodingTrajectory {
    let mut prods = ScaledProducts::new(coding.sigmas.len());
    let mut digits = Vec::with_capacity(n);
    let mut log_norms = Vec::new();
    let mut x = x0;
    let mut terminated = false;
    for _ in 0..n {
        match coding_step_dd(x, coding.lambda_dd) {
            Ok((r, xn)) => {
                digits.push(r);
                prods.push(coding, r);
                x = xn;
                if record {
                    log_norms.push(prods.log_norms());
                }
            }
            Err(_) => {
                terminated = true;
                break;
            }
        }
    }
    CodingTrajectory {
        x0: x0.hi(),
        digits,
        terminated,
        log_norms,
        final_log_norms: prods.log_norms(),
    }
}

/// Worst entrywise deviation between exact and float partial products.
#[derive(Clone, Debug, Serialize)]
pub struct ShadowReport {
    pub steps: usize,
    /// Per checkpoint: (n, max over embeddings and entries of |exact − float| / ‖A_n^σ‖).
    pub deviations: Vec<(usize, f64)>,
    /// Every checkpoint deviation is at most n·2^-40.
    pub within_tolerance: bool,
    pub integral: bool,
}

/// Runs the float products next to exact Z[λ] products and compares them at the checkpoints.
pub fn exact_shadow(coding: &HeckeCoding, x0: TwoFloat, n: usize, checkpoints: &[usize]) -> ShadowReport {
    let traj = coding_trajectory(coding, x0, n, false);
    let mut prods = ScaledProducts::new(coding.sigmas.len());
    let f = coding.field();
    let mut exact = FieldMatrix2::identity(f);
    let mut deviations = Vec::new();
    let mut integral = true;
    for (i, &r) in traj.digits.iter().enumerate() {
        prods.push(coding, r);
        let b = exact.b.mul_generator().scale_int(r);
        let d = exact.d.mul_generator().scale_int(r);
        exact = FieldMatrix2::new(exact.b.clone(), &b - &exact.a, exact.d.clone(), &d - &exact.c);
        let step = i + 1;
        if checkpoints.contains(&step) {
            integral &= exact.is_integral();
            let mut worst = 0.0f64;
            for (k, &sigma) in coding.sigmas.iter().enumerate() {
                let m = &prods.mats[k];
                let scale = op_norm(m);
                let ex = exact.entries().map(|e| e.approx_scaled(sigma, prods.exps[k]));
                let fl = [m[0][0], m[0][1], m[1][0], m[1][1]];
                for j in 0..4 {
                    worst = worst.max((ex[j] - fl[j]).abs() / scale);
                }
            }
            deviations.push((step, worst));
        }
    }
    let within_tolerance = deviations.iter().all(|&(s, d)| d <= s as f64 * 2f64.powi(-40));
    ShadowReport { steps: traj.digits.len(), deviations, within_tolerance, integral }
}

use std::f64::consts::PI;

use serde::Serialize;

use crate::trigroup::{build_group, mat_inv, mat_mul, Mat2, TriangleFamily};

use super::cylinder::cylinder_decomposition;
use super::surface::build_surface;
use super::FlowError;

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct Normalization {
    pub n: u32,
    /// Rotation generator of the polygon surface.
    pub rotation: Mat2,
    /// Horizontal shear [[1, τ], [0, 1]] acting on the side-parallel cylinders.
    pub shear: Mat2,
    pub twist: f64,
    /// Model elliptic and parabolic.
    pub elliptic: Mat2,
    pub parabolic: Mat2,
    pub conjugator: Mat2,
    /// Exponents (±1) applied to the rotation and the shear.
    pub pairing: (i32, i32),
    pub residual_rotation: f64,
    pub residual_shear: f64,
}

fn rot(phi: f64) -> Mat2 {
    let (s, c) = phi.sin_cos();
    [[c, -s], [s, c]]
}

fn pow_pm(m: &Mat2, e: i32) -> Mat2 {
    if e < 0 {
        mat_inv(m)
    } else {
        *m
    }
}

/// Fixed point in the upper half plane of an elliptic element.
fn elliptic_fixed(m: &Mat2) -> (f64, f64) {
    let (a, c, d) = (m[0][0], m[1][0], m[1][1]);
    let disc = 4.0 - (a + d) * (a + d);
    let (re, im) = ((a - d) / (2.0 * c), disc.max(0.0).sqrt() / (2.0 * c.abs()));
    (re, im)
}

/// distance to the nearer of ±target
fn residual(m: &Mat2, target: &Mat2) -> f64 {
    let mut plus = 0.0f64;
    let mut minus = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            plus += (m[i][j] - target[i][j]).powi(2);
            minus += (m[i][j] + target[i][j]).powi(2);
        }
    }
    plus.min(minus).sqrt()
}

/// Conjugates the polygon's rotation and horizontal shear into the triangle-group model:
/// Δ(2,n,∞) for odd n, Δ(n/2,∞,∞) for even n, and the modular group as a diagnostic for n = 4.
pub fn normalize_to_standard_group(n: u32) -> Result<Normalization, FlowError> {
    if n < 4 || n == 6 {
        return Err(FlowError::Unsupported(n));
    }
    let s = build_surface(n)?;
    let dec = cylinder_decomposition(&s, 0.0)?;
    let twist = dec.commensurability.twist.ok_or(FlowError::NotPeriodic(0.0))?;
    let (rotation, elliptic, parabolic) = if n == 4 {
        (rot(PI / 2.0), [[0.0, -1.0], [1.0, 0.0]], [[1.0, 1.0], [0.0, 1.0]])
    } else if n % 2 == 1 {
        let g = build_group(TriangleFamily::two_q_inf(n)).map_err(|_| FlowError::Unsupported(n))?;
        let (_, t) = g.generators_f64(1);
        let lambda = t[1][1];
        (rot(PI / n as f64), t, [[1.0, lambda], [0.0, 1.0]])
    } else {
        let g = build_group(TriangleFamily::q_inf_inf(n / 2)).map_err(|_| FlowError::Unsupported(n))?;
        let (e, t) = g.generators_f64(1);
        (rot(2.0 * PI / n as f64), e, t)
    };
    let shear = [[1.0, twist], [0.0, 1.0]];
    let target_shift = parabolic[0][1];
    let mut best: Option<Normalization> = None;
    for er in [1, -1] {
        for ep in [1, -1] {
            let r = pow_pm(&rotation, er);
            let p = pow_pm(&shear, ep);
            // N = [[a, b], [0, 1/a]] sends z ↦ a²z + ab
            let a2 = target_shift / p[0][1];
            if a2 <= 0.0 {
                continue;
            }
            let a = a2.sqrt();
            let (zr, _) = elliptic_fixed(&r);
            let (ze, _) = elliptic_fixed(&elliptic);
            let b = (ze - a2 * zr) / a;
            let nm = [[a, b], [0.0, 1.0 / a]];
            let ni = mat_inv(&nm);
            let res_r = residual(&mat_mul(&mat_mul(&nm, &r), &ni), &elliptic);
            let res_p = residual(&mat_mul(&mat_mul(&nm, &p), &ni), &parabolic);
            let cand = Normalization {
                n,
                rotation,
                shear,
                twist,
                elliptic,
                parabolic,
                conjugator: nm,
                pairing: (er, ep),
                residual_rotation: res_r,
                residual_shear: res_p,
            };
            let score = res_r.max(res_p);
            if best.as_ref().map_or(true, |b| score < b.residual_rotation.max(b.residual_shear)) {
                best = Some(cand);
            }
        }
    }
    let best = best.ok_or(FlowError::Residual { tol: TOL, best: f64::INFINITY })?;
    let worst = best.residual_rotation.max(best.residual_shear);
    if worst > TOL {
        return Err(FlowError::Residual { tol: TOL, best: worst });
    }
    Ok(best)
}

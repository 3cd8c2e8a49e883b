use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::flow::{flow_orbit, Termination};
use super::surface::PolygonSurface;
use super::FlowError;

const MAX_RESAMPLES: usize = 64;

/// Axis-aligned rectangle in the coordinates of one polygon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rect {
    pub polygon: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

/// f = constant + Σ weight·1_rect
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Observable {
    pub constant: f64,
    pub rects: Vec<(f64, Rect)>,
}

impl Observable {
    pub fn constant(c: f64) -> Self {
        Observable { constant: c, rects: Vec::new() }
    }

    pub fn indicator(r: Rect) -> Self {
        Observable { constant: 0.0, rects: vec![(1.0, r)] }
    }

    /// Subtracts the mean so that the observable integrates to zero over the surface.
    pub fn centred(mut self, s: &PolygonSurface) -> Self {
        let mass: f64 = self.rects.iter().map(|(w, r)| w * clipped_area(s, r)).sum();
        self.constant -= mass / s.area();
        self
    }

    pub fn eval(&self, polygon: usize, z: [f64; 2]) -> f64 {
        self.constant
            + self
                .rects
                .iter()
                .filter(|(_, r)| r.polygon == polygon && r.x0 <= z[0] && z[0] < r.x1 && r.y0 <= z[1] && z[1] < r.y1)
                .map(|(w, _)| w)
                .sum::<f64>()
    }
}

/// Area of a rectangle inside its polygon, by midpoint quadrature on a fine grid.
fn clipped_area(s: &PolygonSurface, r: &Rect) -> f64 {
    let k = 400;
    let (dx, dy) = ((r.x1 - r.x0) / k as f64, (r.y1 - r.y0) / k as f64);
    let mut hits = 0usize;
    for i in 0..k {
        for j in 0..k {
            let z = [r.x0 + (i as f64 + 0.5) * dx, r.y0 + (j as f64 + 0.5) * dy];
            if s.contains(r.polygon, z) {
                hits += 1;
            }
        }
    }
    hits as f64 * dx * dy
}

/// `const:c` or `rect:p,x0,x1,y0,y1[,w]`, joined by `+`.
impl FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut obs = Observable::constant(0.0);
        for term in s.split('+').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some(c) = term.strip_prefix("const:") {
                obs.constant += c.parse::<f64>().map_err(|e| format!("{term}: {e}"))?;
            } else if let Some(body) = term.strip_prefix("rect:") {
                let v: Vec<&str> = body.split(',').collect();
                if v.len() != 5 && v.len() != 6 {
                    return Err(format!("{term}: expected p,x0,x1,y0,y1[,w]"));
                }
                let p = v[0].parse::<usize>().map_err(|e| format!("{term}: {e}"))?;
                let f: Vec<f64> = v[1..].iter().map(|x| x.parse::<f64>()).collect::<Result<_, _>>().map_err(|e| format!("{term}: {e}"))?;
                let w = f.get(4).copied().unwrap_or(1.0);
                obs.rects.push((w, Rect { polygon: p, x0: f[0], x1: f[1], y0: f[2], y1: f[3] }));
            } else {
                return Err(format!("unknown observable term {term:?}"));
            }
        }
        Ok(obs)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub nu: f64,
    pub t: f64,
    /// Mean over samples of |(1/T)∫₀^T e^{−2πiνt} f(φ_t x) dt|.
    pub magnitude: f64,
    pub std_error: f64,
    pub samples: usize,
    pub resampled: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylSweep {
    pub nu: f64,
    pub t: f64,
    /// (scale, magnitude at scale·ν)
    pub rows: Vec<(f64, f64)>,
    pub best_scale: f64,
    pub best_magnitude: f64,
    pub resampled: usize,
}

/// Times along one orbit spent in each rectangle, with the rectangle weight.
struct OrbitProfile {
    pieces: Vec<(f64, f64, f64)>,
}

/// ∫_{a}^{b} e^{−2πiνt} dt
fn exp_integral(nu: f64, a: f64, b: f64) -> (f64, f64) {
    if nu == 0.0 {
        return (b - a, 0.0);
    }
    let w = 2.0 * PI * nu;
    // (e^{−iwb} − e^{−iwa}) / (−iw)
    let (sb, cb) = (w * b).sin_cos();
    let (sa, ca) = (w * a).sin_cos();
    let (re, im) = (cb - ca, -(sb - sa));
    (-im / w, re / w)
}

impl OrbitProfile {
    fn magnitude(&self, obs: &Observable, nu: f64, t: f64) -> f64 {
        let (mut re, mut im) = exp_integral(nu, 0.0, t);
        re *= obs.constant;
        im *= obs.constant;
        for &(a, b, w) in &self.pieces {
            let (r, i) = exp_integral(nu, a, b);
            re += w * r;
            im += w * i;
        }
        re.hypot(im) / t
    }
}

fn random_point(s: &PolygonSurface, rng: &mut ChaCha8Rng) -> (usize, [f64; 2]) {
    loop {
        let p = rng.gen_range(0..s.num_polygons());
        let z = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if s.contains(p, z) {
            return (p, z);
        }
    }
}

/// Flows a random start for time T and records the rectangle visits; singularity hits are redrawn.
fn sample_profile(s: &PolygonSurface, theta: f64, obs: &Observable, t: f64, seed: u64, i: u64) -> Result<(OrbitProfile, usize), FlowError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    let (sn, cs) = theta.sin_cos();
    for redraw in 0..MAX_RESAMPLES {
        let (p, z) = random_point(s, &mut rng);
        let orbit = flow_orbit(s, theta, p, z, t)?;
        if let Termination::SingularityHit { .. } = orbit.termination {
            continue;
        }
        let mut pieces = Vec::new();
        for seg in &orbit.segments {
            for &(w, r) in &obs.rects {
                if r.polygon != seg.polygon {
                    continue;
                }
                // times in [t0, t1] at which the segment is inside the rectangle
                let (mut lo, mut hi) = (seg.t0, seg.t1);
                for (start, v, a, b) in [(seg.from[0], cs, r.x0, r.x1), (seg.from[1], sn, r.y0, r.y1)] {
                    if v.abs() < 1e-300 {
                        if start < a || start >= b {
                            hi = lo;
                        }
                        continue;
                    }
                    let (ta, tb) = ((a - start) / v + seg.t0, (b - start) / v + seg.t0);
                    lo = lo.max(ta.min(tb));
                    hi = hi.min(ta.max(tb));
                }
                if hi > lo {
                    pieces.push((lo, hi, w));
                }
            }
        }
        return Ok((OrbitProfile { pieces }, redraw));
    }
    Err(FlowError::BadStart(MAX_RESAMPLES))
}

fn profiles(s: &PolygonSurface, theta: f64, obs: &Observable, t: f64, n_samples: usize, seed: u64) -> Result<(Vec<OrbitProfile>, usize), FlowError> {
    let res: Vec<(OrbitProfile, usize)> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| sample_profile(s, theta, obs, t, seed, i))
        .collect::<Result<_, _>>()?;
    let resampled = res.iter().map(|r| r.1).sum();
    Ok((res.into_iter().map(|r| r.0).collect(), resampled))
}

/// Sample mean of the normalised Weyl integral of f along the flow in direction θ.
pub fn weyl_average(
    s: &PolygonSurface,
    theta: f64,
    nu: f64,
    obs: &Observable,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<WeylReport, FlowError> {
    let (profs, resampled) = profiles(s, theta, obs, t, n_samples.max(1), seed)?;
    let mags: Vec<f64> = profs.iter().map(|p| p.magnitude(obs, nu, t)).collect();
    let k = mags.len() as f64;
    let mean = mags.iter().sum::<f64>() / k;
    let var = if mags.len() > 1 { mags.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
    Ok(WeylReport { nu, t, magnitude: mean, std_error: (var / k).sqrt(), samples: mags.len(), resampled })
}

/// weyl_average at scale·ν for every scale, sharing the sampled orbits.
#[allow(clippy::too_many_arguments)]
pub fn weyl_sweep(
    s: &PolygonSurface,
    theta: f64,
    nu: f64,
    scales: &[f64],
    obs: &Observable,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<WeylSweep, FlowError> {
    let (profs, resampled) = profiles(s, theta, obs, t, n_samples.max(1), seed)?;
    let rows: Vec<(f64, f64)> = scales
        .par_iter()
        .map(|&c| (c, profs.iter().map(|p| p.magnitude(obs, c * nu, t)).sum::<f64>() / profs.len() as f64))
        .collect();
    let (best_scale, best_magnitude) = rows.iter().copied().fold((f64::NAN, -1.0), |b, r| if r.1 > b.1 { r } else { b });
    Ok(WeylSweep { nu, t, rows, best_scale, best_magnitude, resampled })
}

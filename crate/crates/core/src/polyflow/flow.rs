use serde::Serialize;

use super::surface::PolygonSurface;
use super::{add, norm, sub, FlowError};

/// Corner hits closer than this are treated as hitting the cone point.
pub(crate) const CORNER_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowState {
    pub polygon: usize,
    pub position: [f64; 2],
    pub direction: [f64; 2],
}

/// A straight piece of orbit inside one polygon, over times [t0, t1].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Segment {
    pub polygon: usize,
    pub from: [f64; 2],
    pub to: [f64; 2],
    pub t0: f64,
    pub t1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Termination {
    TimeOut,
    SingularityHit { time: f64, polygon: usize, vertex: usize, cone_point: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSegment {
    pub start: FlowState,
    pub end: FlowState,
    pub segments: Vec<Segment>,
    pub crossings: usize,
    /// Sum of the gluing translations applied at side crossings.
    pub translation_sum: [f64; 2],
    pub termination: Termination,
}

impl OrbitSegment {
    pub fn duration(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.t1)
    }
}

/// Exit of the ray z + t·u from polygon p, skipping the edge it entered by.
/// Returns (t, edge, Some(vertex) when the exit point is a corner).
pub(crate) fn exit(s: &PolygonSurface, p: usize, z: [f64; 2], u: [f64; 2], skip: Option<usize>) -> (f64, usize, Option<usize>) {
    let v = &s.polygons[p];
    let m = v.len();
    let mut best = (f64::INFINITY, usize::MAX);
    for e in 0..m {
        if Some(e) == skip {
            continue;
        }
        let (a, b) = (v[e], v[(e + 1) % m]);
        let d = sub(b, a);
        let nrm = [d[1], -d[0]];
        let un = u[0] * nrm[0] + u[1] * nrm[1];
        if un <= 1e-15 * norm(d) {
            continue;
        }
        let t = (sub(a, z)[0] * nrm[0] + sub(a, z)[1] * nrm[1]) / un;
        if t < best.0 {
            best = (t, e);
        }
    }
    let (t, e) = best;
    assert!(e != usize::MAX, "ray does not leave polygon {p}");
    let w = [z[0] + t * u[0], z[1] + t * u[1]];
    let corner = [e, (e + 1) % m].into_iter().find(|&k| norm(sub(w, v[k])) < CORNER_TOL);
    (t.max(0.0), e, corner)
}

/// Straight-line flow z + t·e^{iθ} for t ∈ [0, T], resolving side crossings by the gluings.
pub fn flow_orbit(s: &PolygonSurface, theta: f64, polygon: usize, start: [f64; 2], t_max: f64) -> Result<OrbitSegment, FlowError> {
    if polygon >= s.num_polygons() || !s.contains(polygon, start) {
        return Err(FlowError::BadStart(polygon));
    }
    assert!(t_max > 0.0);
    let u = [theta.cos(), theta.sin()];
    let start_state = FlowState { polygon, position: start, direction: u };
    let mut segments = Vec::new();
    let (mut p, mut z, mut t, mut skip) = (polygon, start, 0.0f64, None);
    let mut translation_sum = [0.0, 0.0];
    let mut crossings = 0;
    loop {
        let (dt, e, corner) = exit(s, p, z, u, skip);
        if t + dt >= t_max {
            let to = [z[0] + (t_max - t) * u[0], z[1] + (t_max - t) * u[1]];
            segments.push(Segment { polygon: p, from: z, to, t0: t, t1: t_max });
            return Ok(OrbitSegment {
                start: start_state,
                end: FlowState { polygon: p, position: to, direction: u },
                segments,
                crossings,
                translation_sum,
                termination: Termination::TimeOut,
            });
        }
        let w = [z[0] + dt * u[0], z[1] + dt * u[1]];
        segments.push(Segment { polygon: p, from: z, to: w, t0: t, t1: t + dt });
        t += dt;
        if let Some(k) = corner {
            return Ok(OrbitSegment {
                start: start_state,
                end: FlowState { polygon: p, position: w, direction: u },
                segments,
                crossings,
                translation_sum,
                termination: Termination::SingularityHit { time: t, polygon: p, vertex: k, cone_point: s.corner_class[p][k] },
            });
        }
        let tau = s.gluing_translation(p, e);
        translation_sum = add(translation_sum, tau);
        let (q, f) = s.pairing[p][e];
        p = q;
        z = add(w, tau);
        skip = Some(f);
        crossings += 1;
    }
}

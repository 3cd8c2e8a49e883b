use serde::Serialize;

use super::surface::PolygonSurface;
use super::{add, cross, norm, sub};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SaddleConnection {
    pub holonomy: [f64; 2],
    pub length: f64,
    /// Cone-point ids of the two ends.
    pub start: usize,
    pub end: usize,
}

const WEDGE_TOL: f64 = 1e-11;

fn strictly_between(a: [f64; 2], u: [f64; 2], b: [f64; 2]) -> bool {
    let s = norm(u);
    cross(a, u) > WEDGE_TOL * norm(a) * s && cross(u, b) > WEDGE_TOL * s * norm(b)
}

fn dist_to_segment(p: [f64; 2], q: [f64; 2]) -> f64 {
    let d = sub(q, p);
    let t = (-(p[0] * d[0] + p[1] * d[1]) / (d[0] * d[0] + d[1] * d[1])).clamp(0.0, 1.0);
    norm([p[0] + t * d[0], p[1] + t * d[1]])
}

struct Frame {
    polygon: usize,
    offset: [f64; 2],
    entry: usize,
    lo: [f64; 2],
    hi: [f64; 2],
}

/// Every oriented saddle connection with |holonomy| ≤ L, found by unfolding the polygons
/// along each cone of directions leaving each corner. Outgoing directions at a cone point
/// are split into half-open corner sectors, so each connection is found once per end.
pub fn saddle_connections(s: &PolygonSurface, l_max: f64) -> Vec<SaddleConnection> {
    let mut out = Vec::new();
    for p in 0..s.num_polygons() {
        let v = &s.polygons[p];
        let m = v.len();
        for i in 0..m {
            let start = s.corner_class[p][i];
            let w: Vec<[f64; 2]> = v.iter().map(|&x| sub(x, v[i])).collect();
            let lo = w[(i + 1) % m];
            let record = |u: [f64; 2], k: usize, q: usize, out: &mut Vec<SaddleConnection>| {
                let l = norm(u);
                if l <= l_max {
                    out.push(SaddleConnection { holonomy: u, length: l, start, end: s.corner_class[q][k] });
                }
            };
            record(lo, (i + 1) % m, p, &mut out);
            for k in 0..m {
                if k != i && k != (i + 1) % m && k != (i + m - 1) % m {
                    record(w[k], k, p, &mut out);
                }
            }
            let mut stack: Vec<Frame> = Vec::new();
            for e in 0..m {
                if e == i || e == (i + m - 1) % m {
                    continue;
                }
                let (a, b) = (w[e], w[(e + 1) % m]);
                if dist_to_segment(a, b) <= l_max {
                    push_across(s, p, e, a, b, a, b, &mut stack);
                }
            }
            while let Some(f) = stack.pop() {
                let pv = &s.polygons[f.polygon];
                let pm = pv.len();
                let u: Vec<[f64; 2]> = pv.iter().map(|&x| add(x, f.offset)).collect();
                for k in 0..pm {
                    if k == f.entry || k == (f.entry + 1) % pm {
                        continue;
                    }
                    if strictly_between(f.lo, u[k], f.hi) {
                        record(u[k], k, f.polygon, &mut out);
                    }
                }
                for e in 0..pm {
                    if e == f.entry {
                        continue;
                    }
                    let (a, b) = (u[e], u[(e + 1) % pm]);
                    if cross(a, b) <= 0.0 {
                        continue;
                    }
                    let lo = if cross(f.lo, a) > 0.0 { a } else { f.lo };
                    let hi = if cross(b, f.hi) > 0.0 { b } else { f.hi };
                    if cross(lo, hi) <= WEDGE_TOL * norm(lo) * norm(hi) || dist_to_segment(a, b) > l_max {
                        continue;
                    }
                    push_across(s, f.polygon, e, a, b, lo, hi, &mut stack);
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.holonomy[1].atan2(a.holonomy[0]).total_cmp(&b.holonomy[1].atan2(b.holonomy[0])))
    });
    out
}

/// Places the polygon glued to edge e (unfolded endpoints a → b) and queues it with wedge (lo, hi).
#[allow(clippy::too_many_arguments)]
fn push_across(
    s: &PolygonSurface,
    p: usize,
    e: usize,
    a: [f64; 2],
    _b: [f64; 2],
    lo: [f64; 2],
    hi: [f64; 2],
    stack: &mut Vec<Frame>,
) {
    let (q, f) = s.pairing[p][e];
    let qv = &s.polygons[q];
    // the far edge's end vertex is glued to this edge's start
    let offset = sub(a, qv[(f + 1) % qv.len()]);
    stack.push(Frame { polygon: q, offset, entry: f, lo, hi });
}

pub fn systole(s: &PolygonSurface) -> f64 {
    let mut l = 2.0 * s.side_length();
    loop {
        if let Some(c) = saddle_connections(s, l).first() {
            return c.length;
        }
        l *= 2.0;
    }
}

/// Distinct directions (angles in [0, π)) of saddle connections, shortest connection first.
pub fn periodic_directions(s: &PolygonSurface, l_max: f64, count: usize) -> Vec<f64> {
    let mut dirs: Vec<f64> = Vec::new();
    for c in saddle_connections(s, l_max) {
        let a = c.holonomy[1].atan2(c.holonomy[0]).rem_euclid(std::f64::consts::PI);
        let close = |d: &f64| {
            let x = (d - a).abs();
            x.min(std::f64::consts::PI - x) < 1e-9
        };
        if !dirs.iter().any(close) {
            dirs.push(a);
            if dirs.len() == count {
                break;
            }
        }
    }
    dirs
}

/// κ_min = min |ζ ∧ ζ′| over non-parallel saddle connections of length ≤ L.
pub fn no_small_triangle_check(s: &PolygonSurface, l_max: f64) -> f64 {
    let mut hol: Vec<[f64; 2]> = Vec::new();
    for c in saddle_connections(s, l_max) {
        if !hol.iter().any(|h| norm(sub(*h, c.holonomy)) < 1e-9) {
            hol.push(c.holonomy);
        }
    }
    let mut best = f64::INFINITY;
    for (i, a) in hol.iter().enumerate() {
        for b in &hol[i + 1..] {
            let w = cross(*a, *b).abs();
            if w > 1e-9 * norm(*a) * norm(*b) {
                best = best.min(w);
            }
        }
    }
    assert!(best > 0.0);
    best
}

use serde::Serialize;

use super::cylinder::HorizontalFrame;
use super::surface::PolygonSurface;
use super::{norm, rotate, sub, FlowError};

const PIECE_TOL: f64 = 1e-12;
const MAX_PIECES: usize = 200_000;
const KEANE_DEPTH: usize = 1000;
const KEANE_TOL: f64 = 1e-9;

/// A segment inside (or on the boundary of) one polygon.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Transversal {
    pub polygon: usize,
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl Transversal {
    /// The segment through the polygon's centre orthogonal to the flow, spanning `frac` of the inradius each way.
    pub fn centred(s: &PolygonSurface, polygon: usize, angle: f64, frac: f64) -> Self {
        let r = (std::f64::consts::PI / s.n as f64).cos() * frac;
        let u = rotate([0.0, r], angle);
        Transversal { polygon, a: [-u[0], -u[1]], b: u }
    }

    pub fn length(&self) -> f64 {
        norm(sub(self.b, self.a))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IETData {
    /// Interval lengths in transversal order.
    pub lengths: Vec<f64>,
    /// permutation[i] = position of interval i after the return.
    pub permutation: Vec<usize>,
    /// Arrival minus departure coordinate of each interval.
    pub translations: Vec<f64>,
    pub return_times: Vec<f64>,
    pub total: f64,
    /// The permutation is reducible, or some discontinuity reaches a discontinuity within the Keane depth.
    pub degenerate: bool,
    pub keane_depth: usize,
}

impl IETData {
    /// Applies the map to a transversal coordinate.
    pub fn apply(&self, x: f64) -> f64 {
        let mut left = 0.0;
        for (l, t) in self.lengths.iter().zip(&self.translations) {
            if x < left + l {
                return x + t;
            }
            left += l;
        }
        x + self.translations.last().copied().unwrap_or(0.0)
    }

    pub fn discontinuities(&self) -> Vec<f64> {
        self.lengths
            .iter()
            .scan(0.0, |acc, l| {
                *acc += l;
                Some(*acc)
            })
            .take(self.lengths.len().saturating_sub(1))
            .collect()
    }

    /// Some proper prefix {0..k} of intervals is mapped onto itself.
    pub fn reducible(&self) -> bool {
        let d = self.permutation.len();
        d < 2 || (1..d).any(|k| self.permutation[..k].iter().all(|&p| p < k))
    }

    /// True if no discontinuity returns onto a discontinuity (or itself) within `depth` iterates.
    pub fn keane_holds(&self, depth: usize, tol: f64) -> bool {
        let d = self.discontinuities();
        for &x0 in &d {
            let mut x = x0;
            for _ in 0..depth {
                x = self.apply(x);
                if d.iter().any(|&y| (x - y).abs() <= tol) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    polygon: usize,
    y0: f64,
    y1: f64,
    /// original height = y − shift
    shift: f64,
    /// time spent so far at the bottom and top of the piece
    t0: f64,
    t1: f64,
}

/// First-return map of the directional flow to a transversal, by pushing height intervals
/// through the polygons until every piece is back on the transversal.
pub fn first_return_iet(s: &PolygonSurface, angle: f64, tr: &Transversal) -> Result<IETData, FlowError> {
    if tr.polygon >= s.num_polygons() {
        return Err(FlowError::BadTransversal);
    }
    let fr = HorizontalFrame::new(s, angle);
    let (ta, tb) = (rotate(tr.a, -angle), rotate(tr.b, -angle));
    if (tb[1] - ta[1]).abs() < 1e-9 * tr.length().max(1e-300) || tr.length() < 1e-12 {
        return Err(FlowError::BadTransversal);
    }
    let (lo, hi) = (ta[1].min(tb[1]), ta[1].max(tb[1]));
    let x_tr = |y: f64| ta[0] + (tb[0] - ta[0]) * (y - ta[1]) / (tb[1] - ta[1]);
    // transversal coordinate of a height, from a to b
    let coord = |y: f64| (y - ta[1]) / (tb[1] - ta[1]) * tr.length();
    let p0 = tr.polygon;
    let mut returned: Vec<(f64, f64, f64, f64, f64)> = Vec::new();
    let mut stack: Vec<(Piece, bool)> = vec![(Piece { polygon: p0, y0: lo, y1: hi, shift: 0.0, t0: 0.0, t1: 0.0 }, true)];
    let mut pushed = 0usize;
    while let Some((pc, departing)) = stack.pop() {
        pushed += 1;
        if pushed > MAX_PIECES {
            return Err(FlowError::NonRecurrent(MAX_PIECES));
        }
        let q = pc.polygon;
        // portion that hits the transversal
        let mut rest: Vec<(f64, f64)> = vec![(pc.y0, pc.y1)];
        if q == p0 && !departing {
            let (a, b) = (pc.y0.max(lo), pc.y1.min(hi));
            if b - a > PIECE_TOL {
                let t_at = |y: f64| {
                    let f = if pc.y1 > pc.y0 { (y - pc.y0) / (pc.y1 - pc.y0) } else { 0.0 };
                    pc.t0 + (pc.t1 - pc.t0) * f + (x_tr(y) - left_x(&fr, q, y))
                };
                returned.push((coord(a - pc.shift), coord(b - pc.shift), coord(a), coord(b), 0.5 * (t_at(a) + t_at(b))));
                rest = vec![(pc.y0, a), (b, pc.y1)];
            }
        }
        for (y0, y1) in rest {
            if y1 - y0 <= PIECE_TOL {
                continue;
            }
            for (r, &(p, _)) in fr.right.iter().enumerate() {
                if p != q {
                    continue;
                }
                let (a, b) = (y0.max(fr.range[r].0), y1.min(fr.range[r].1));
                if b - a <= PIECE_TOL {
                    continue;
                }
                let start_x = |y: f64| if departing { x_tr(y) } else { left_x(&fr, q, y) };
                let t_base = |y: f64| {
                    let f = if pc.y1 > pc.y0 { (y - pc.y0) / (pc.y1 - pc.y0) } else { 0.0 };
                    pc.t0 + (pc.t1 - pc.t0) * f
                };
                let e = fr.right[r].1;
                let ta_ = t_base(a) + fr.x_on(q, e, a) - start_x(a);
                let tb_ = t_base(b) + fr.x_on(q, e, b) - start_x(b);
                let sh = fr.shift[r];
                stack.push((
                    Piece { polygon: fr.target[r], y0: a + sh, y1: b + sh, shift: pc.shift + sh, t0: ta_, t1: tb_ },
                    false,
                ));
            }
        }
    }
    // departure order, with contiguous pieces of equal translation merged
    returned.sort_by(|a, b| a.0.min(a.1).total_cmp(&b.0.min(b.1)));
    let mut ivs: Vec<(f64, f64, f64, f64)> = Vec::new(); // (start, end, translation, time)
    for (d0, d1, a0, _, t) in returned {
        let (start, end) = (d0.min(d1), d0.max(d1));
        let trans = a0 - d0;
        if let Some(last) = ivs.last_mut() {
            if (last.1 - start).abs() <= KEANE_TOL && (last.2 - trans).abs() <= KEANE_TOL {
                last.1 = end;
                continue;
            }
        }
        ivs.push((start, end, trans, t));
    }
    let lengths: Vec<f64> = ivs.iter().map(|v| v.1 - v.0).collect();
    let translations: Vec<f64> = ivs.iter().map(|v| v.2).collect();
    let mut order: Vec<usize> = (0..ivs.len()).collect();
    order.sort_by(|&i, &j| (ivs[i].0 + ivs[i].2).total_cmp(&(ivs[j].0 + ivs[j].2)));
    let mut permutation = vec![0; ivs.len()];
    for (pos, &i) in order.iter().enumerate() {
        permutation[i] = pos;
    }
    let mut data = IETData {
        total: lengths.iter().sum(),
        lengths,
        permutation,
        translations,
        return_times: ivs.iter().map(|v| v.3).collect(),
        degenerate: false,
        keane_depth: KEANE_DEPTH,
    };
    data.degenerate = data.reducible() || !data.keane_holds(KEANE_DEPTH, KEANE_TOL);
    Ok(data)
}

/// x-coordinate of the left boundary of polygon q at height y.
fn left_x(fr: &HorizontalFrame, q: usize, y: f64) -> f64 {
    let v = &fr.polys[q];
    let m = v.len();
    for e in 0..m {
        let (a, b) = (v[e], v[(e + 1) % m]);
        if a[1] - b[1] > 1e-12 && b[1] - 1e-12 <= y && y <= a[1] + 1e-12 {
            return a[0] + (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]);
        }
    }
    v.iter().filter(|p| (p[1] - y).abs() < 1e-9).map(|p| p[0]).fold(f64::INFINITY, f64::min)
}

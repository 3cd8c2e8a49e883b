use serde::Serialize;

use super::surface::PolygonSurface;
use super::{rotate, FlowError};

/// Heights closer than this are the same leaf.
const LEAF_TOL: f64 = 1e-9;
const MAX_BREAKPOINTS: usize = 50_000;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Cylinder {
    /// Circumference (length of a closed orbit).
    pub width: f64,
    pub height: f64,
    /// μ = w/h
    pub modulus: f64,
    pub area: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Commensurability {
    /// μ_i/μ_0 as reduced fractions.
    pub ratios: Vec<(i64, i64)>,
    pub max_error: f64,
    pub max_denominator: i64,
    pub commensurable: bool,
    /// Smallest t > 0 with t/μ_i ∈ Z for all i: the primitive shear [[1,t],[0,1]].
    pub twist: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CylinderDecomposition {
    pub angle: f64,
    pub cylinders: Vec<Cylinder>,
    pub total_area: f64,
    pub surface_area: f64,
    pub commensurability: Commensurability,
}

/// Surface rotated by −θ so that the flow is horizontal, with the right-hand chains of the
/// polygons indexed. A horizontal leaf leaves polygon p through a right edge and re-enters
/// the glued polygon at height y + shift.
pub(crate) struct HorizontalFrame<'a> {
    pub s: &'a PolygonSurface,
    pub polys: Vec<Vec<[f64; 2]>>,
    /// (polygon, edge) of every edge with dy > 0.
    pub right: Vec<(usize, usize)>,
    pub range: Vec<(f64, f64)>,
    pub shift: Vec<f64>,
    pub target: Vec<usize>,
}

impl<'a> HorizontalFrame<'a> {
    pub fn new(s: &'a PolygonSurface, angle: f64) -> Self {
        let polys: Vec<Vec<[f64; 2]>> = s.polygons.iter().map(|p| p.iter().map(|&v| rotate(v, -angle)).collect()).collect();
        let mut right = Vec::new();
        let mut range = Vec::new();
        let mut shift = Vec::new();
        let mut target = Vec::new();
        for (p, v) in polys.iter().enumerate() {
            let m = v.len();
            for e in 0..m {
                let (a, b) = (v[e], v[(e + 1) % m]);
                if b[1] - a[1] > 1e-12 {
                    right.push((p, e));
                    range.push((a[1], b[1]));
                    shift.push(rotate(s.gluing_translation(p, e), -angle)[1]);
                    target.push(s.pairing[p][e].0);
                }
            }
        }
        HorizontalFrame { s, polys, right, range, shift, target }
    }

    pub fn x_on(&self, p: usize, e: usize, y: f64) -> f64 {
        let v = &self.polys[p];
        let (a, b) = (v[e], v[(e + 1) % v.len()]);
        a[0] + (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1])
    }

    /// Index into `right` of the right edge of polygon p at height y (interior heights).
    pub fn right_at(&self, p: usize, y: f64) -> Option<usize> {
        (0..self.right.len()).find(|&r| self.right[r].0 == p && self.range[r].0 <= y && y <= self.range[r].1)
    }

    /// Horizontal distance travelled in the polygon entered through right edge r, at entry height y.
    pub fn travel(&self, r: usize, y: f64) -> Option<(f64, usize)> {
        let (p, e) = self.right[r];
        let (q, f) = self.s.pairing[p][e];
        let y2 = y + self.shift[r];
        let next = self.right_at(q, y2)?;
        Some((self.x_on(q, self.right[next].1, y2) - self.x_on(q, f, y2), next))
    }
}

/// Sorted breakpoint list with a "lies on a leaf through a cone point of positive order" tag.
#[derive(Clone, Debug, Default)]
struct Breaks {
    ys: Vec<f64>,
    singular: Vec<bool>,
}

impl Breaks {
    /// Returns true if something changed.
    fn insert(&mut self, y: f64, singular: bool) -> bool {
        let i = self.ys.partition_point(|&x| x < y - LEAF_TOL);
        if i < self.ys.len() && (self.ys[i] - y).abs() <= LEAF_TOL {
            let changed = singular && !self.singular[i];
            self.singular[i] |= singular;
            return changed;
        }
        self.ys.insert(i, y);
        self.singular.insert(i, singular);
        true
    }
}

/// Cylinders of a periodic direction, found by refining the right edges until the
/// horizontal return map permutes the pieces.
pub fn cylinder_decomposition(s: &PolygonSurface, angle: f64) -> Result<CylinderDecomposition, FlowError> {
    let fr = HorizontalFrame::new(s, angle);
    let nr = fr.right.len();
    let mut br: Vec<Breaks> = vec![Breaks::default(); nr];
    for r in 0..nr {
        let (p, e) = fr.right[r];
        let m = fr.polys[p].len();
        br[r].insert(fr.range[r].0, s.is_singular(s.corner_class[p][e]));
        br[r].insert(fr.range[r].1, s.is_singular(s.corner_class[p][(e + 1) % m]));
        let q = fr.target[r];
        for (k, v) in fr.polys[q].iter().enumerate() {
            let y = v[1] - fr.shift[r];
            if y > fr.range[r].0 + LEAF_TOL && y < fr.range[r].1 - LEAF_TOL {
                br[r].insert(y, s.is_singular(s.corner_class[q][k]));
            }
        }
    }
    loop {
        let mut changed = false;
        for r in 0..nr {
            let q = fr.target[r];
            let (lo, hi) = (fr.range[r].0 + fr.shift[r], fr.range[r].1 + fr.shift[r]);
            for f in 0..nr {
                if fr.right[f].0 != q || fr.range[f].1 < lo - LEAF_TOL || fr.range[f].0 > hi + LEAF_TOL {
                    continue;
                }
                // push forward
                for i in 0..br[r].ys.len() {
                    let y = br[r].ys[i] + fr.shift[r];
                    if y >= fr.range[f].0 - LEAF_TOL && y <= fr.range[f].1 + LEAF_TOL {
                        let tag = br[r].singular[i];
                        changed |= br[f].insert(y.clamp(fr.range[f].0, fr.range[f].1), tag);
                    }
                }
                // pull back
                for i in 0..br[f].ys.len() {
                    let y = br[f].ys[i];
                    if y >= lo - LEAF_TOL && y <= hi + LEAF_TOL {
                        let tag = br[f].singular[i];
                        changed |= br[r].insert((y - fr.shift[r]).clamp(fr.range[r].0, fr.range[r].1), tag);
                    }
                }
            }
        }
        if br.iter().map(|b| b.ys.len()).sum::<usize>() > MAX_BREAKPOINTS {
            return Err(FlowError::NotPeriodic(angle));
        }
        if !changed {
            break;
        }
    }
    // pieces and the permutation they undergo
    let mut start = vec![0usize; nr + 1];
    for r in 0..nr {
        start[r + 1] = start[r] + br[r].ys.len() - 1;
    }
    let np = start[nr];
    let mut next = vec![usize::MAX; np];
    let mut travel = vec![0.0; np];
    let mut height = vec![0.0; np];
    for r in 0..nr {
        for k in 0..br[r].ys.len() - 1 {
            let id = start[r] + k;
            let (a, b) = (br[r].ys[k], br[r].ys[k + 1]);
            height[id] = b - a;
            let mid = 0.5 * (a + b);
            let (dx, f) = fr.travel(r, mid).ok_or(FlowError::NotPeriodic(angle))?;
            let y2 = mid + fr.shift[r];
            let j = br[f].ys.partition_point(|&x| x <= y2) - 1;
            let (c, d) = (br[f].ys[j], br[f].ys[j + 1]);
            if (c - (a + fr.shift[r])).abs() > 10.0 * LEAF_TOL || (d - (b + fr.shift[r])).abs() > 10.0 * LEAF_TOL {
                return Err(FlowError::NotPeriodic(angle));
            }
            next[id] = start[f] + j;
            travel[id] = dx;
        }
    }
    let mut cycle_of = vec![usize::MAX; np];
    let mut cycles: Vec<(f64, f64)> = Vec::new();
    for i in 0..np {
        if cycle_of[i] != usize::MAX {
            continue;
        }
        let c = cycles.len();
        let (mut j, mut w) = (i, 0.0);
        loop {
            if cycle_of[j] == c {
                break;
            }
            if cycle_of[j] != usize::MAX {
                return Err(FlowError::NotPeriodic(angle));
            }
            cycle_of[j] = c;
            w += travel[j];
            j = next[j];
        }
        if j != i {
            return Err(FlowError::NotPeriodic(angle));
        }
        cycles.push((w, height[i]));
    }
    // stack cycles separated only by leaves through marked points
    let mut parent: Vec<usize> = (0..cycles.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            i = parent[i];
        }
        i
    }
    for p in 0..s.num_polygons() {
        let mut chain: Vec<usize> = (0..nr).filter(|&r| fr.right[r].0 == p).collect();
        chain.sort_by(|&a, &b| fr.range[a].0.total_cmp(&fr.range[b].0));
        // consecutive pieces along the chain, with the tag of the leaf between them
        let mut prev: Option<usize> = None;
        for &r in &chain {
            for k in 0..br[r].ys.len() - 1 {
                let id = start[r] + k;
                let below = if k > 0 {
                    Some((id - 1, br[r].singular[k]))
                } else {
                    prev.map(|pr| (start[pr + 1] - 1, br[r].singular[0] || *br[pr].singular.last().unwrap()))
                };
                if let Some((pid, false)) = below {
                    let (a, b) = (root(&mut parent, cycle_of[pid]), root(&mut parent, cycle_of[id]));
                    parent[a] = b;
                }
            }
            prev = Some(r);
        }
    }
    let mut groups: Vec<(usize, f64, f64)> = Vec::new();
    for c in 0..cycles.len() {
        let r = root(&mut parent, c);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.2 += cycles[c].1,
            None => groups.push((r, cycles[c].0, cycles[c].1)),
        }
    }
    let mut cylinders: Vec<Cylinder> = groups
        .into_iter()
        .map(|(_, w, h)| Cylinder { width: w, height: h, modulus: w / h, area: w * h })
        .collect();
    cylinders.sort_by(|a, b| a.modulus.total_cmp(&b.modulus).then(a.width.total_cmp(&b.width)));
    let total_area = cylinders.iter().map(|c| c.area).sum();
    let moduli: Vec<f64> = cylinders.iter().map(|c| c.modulus).collect();
    Ok(CylinderDecomposition {
        angle,
        commensurability: commensurability(&moduli, 1e-9, 1_000_000),
        cylinders,
        total_area,
        surface_area: s.area(),
    })
}

/// Best rational approximation p/q with q ≤ max_den, by continued-fraction convergents.
fn rational_approx(x: f64, tol: f64, max_den: i64) -> Option<(i64, i64)> {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        let (h2, k2) = (a as i64 * h1 + h0, a as i64 * k1 + k0);
        if k2 > max_den {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol * x.abs().max(1.0) {
            return Some((h1, k1));
        }
        let frac = y - a;
        if frac == 0.0 {
            return None;
        }
        y = 1.0 / frac;
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Pairwise commensurability of moduli via rational reconstruction of μ_i/μ_0.
pub fn commensurability(moduli: &[f64], tol: f64, max_den: i64) -> Commensurability {
    let Some(&m0) = moduli.first() else {
        return Commensurability { ratios: vec![], max_error: 0.0, max_denominator: 1, commensurable: true, twist: None };
    };
    let mut ratios = Vec::new();
    let mut max_error: f64 = 0.0;
    let mut ok = true;
    for &m in moduli {
        let x = m / m0;
        match rational_approx(x, tol, max_den) {
            Some((p, q)) => {
                max_error = max_error.max((x - p as f64 / q as f64).abs());
                ratios.push((p, q));
            }
            None => {
                ok = false;
                ratios.push((0, 0));
            }
        }
    }
    let lcm = ratios.iter().try_fold(1i64, |acc, &(p, _)| (acc / gcd(acc, p)).checked_mul(p));
    let twist = if ok { lcm.map(|l| m0 * l as f64) } else { None };
    let max_denominator = ratios.iter().map(|r| r.1).max().unwrap_or(1);
    Commensurability { ratios, max_error, max_denominator, commensurable: ok, twist }
}

use std::f64::consts::PI;
use std::str::FromStr;

use serde::Serialize;

use super::{cross, sub, FlowError};

/// S_n: the regular n-gon with opposite sides glued (n even), or P_n ∪ −P_n with
/// corresponding sides glued (n odd). Unit circumradius, side 0 horizontal at the bottom.
#[derive(Clone, Debug)]
pub struct PolygonSurface {
    pub n: u32,
    /// Vertex lists, counter-clockwise; edge e runs from vertex e to vertex e+1.
    pub polygons: Vec<Vec<[f64; 2]>>,
    /// pairing[p][e] = (p′, e′): edge e of polygon p is glued to edge e′ of polygon p′.
    pub pairing: Vec<Vec<(usize, usize)>>,
    /// Cone-point id of every corner.
    pub corner_class: Vec<Vec<usize>>,
    /// Order κ of each cone point (cone angle 2π(κ+1)).
    pub orders: Vec<u32>,
    pub genus: u32,
    /// Orders of all cone points, descending; zeros are marked points.
    pub stratum: Vec<u32>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn build_surface(n: u32) -> Result<PolygonSurface, FlowError> {
    if n < 3 {
        return Err(FlowError::SmallN(n));
    }
    let m = n as usize;
    let base: Vec<[f64; 2]> = (0..m)
        .map(|k| {
            let a = -PI / 2.0 - PI / n as f64 + 2.0 * PI * k as f64 / n as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    let (polygons, pairing): (Vec<Vec<[f64; 2]>>, Vec<Vec<(usize, usize)>>) = if n % 2 == 0 {
        (vec![base], vec![(0..m).map(|e| (0, (e + m / 2) % m)).collect()])
    } else {
        let neg = base.iter().map(|v| [-v[0], -v[1]]).collect();
        (vec![base, neg], vec![(0..m).map(|e| (1, e)).collect(), (0..m).map(|e| (0, e)).collect()])
    };
    // corner (p, e) ~ corner (p′, e′+1) across the glued edge
    let np = polygons.len();
    let mut parent: Vec<usize> = (0..np * m).collect();
    for p in 0..np {
        for e in 0..m {
            let (q, f) = pairing[p][e];
            for (a, b) in [(p * m + e, q * m + (f + 1) % m), (p * m + (e + 1) % m, q * m + f)] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut corner_class = vec![vec![0; m]; np];
    for p in 0..np {
        for e in 0..m {
            let r = find(&mut parent, p * m + e);
            let id = roots.iter().position(|&x| x == r).unwrap_or_else(|| {
                roots.push(r);
                roots.len() - 1
            });
            corner_class[p][e] = id;
        }
    }
    // a class of k corners has angle k(n−2)π/n = 2π(κ+1)
    let mut orders = Vec::with_capacity(roots.len());
    for id in 0..roots.len() {
        let k = corner_class.iter().flatten().filter(|&&c| c == id).count() as u32;
        let num = k * (n - 2);
        assert_eq!(num % (2 * n), 0, "cone angle is not a multiple of 2π");
        orders.push(num / (2 * n) - 1);
    }
    let total: u32 = orders.iter().sum();
    assert_eq!(total % 2, 0);
    let genus = (total + 2) / 2;
    let mut stratum = orders.clone();
    stratum.sort_unstable_by(|a, b| b.cmp(a));
    Ok(PolygonSurface { n, polygons, pairing, corner_class, orders, genus, stratum })
}

impl PolygonSurface {
    pub fn num_polygons(&self) -> usize {
        self.polygons.len()
    }

    pub fn edge(&self, p: usize, e: usize) -> ([f64; 2], [f64; 2]) {
        let v = &self.polygons[p];
        (v[e], v[(e + 1) % v.len()])
    }

    pub fn edge_vector(&self, p: usize, e: usize) -> [f64; 2] {
        let (a, b) = self.edge(p, e);
        sub(b, a)
    }

    /// Translation carrying edge e of polygon p onto its partner.
    pub fn gluing_translation(&self, p: usize, e: usize) -> [f64; 2] {
        let (q, f) = self.pairing[p][e];
        let (_, b) = self.edge(p, e);
        let (c, _) = self.edge(q, f);
        sub(c, b)
    }

    pub fn side_length(&self) -> f64 {
        2.0 * (PI / self.n as f64).sin()
    }

    pub fn polygon_area(&self) -> f64 {
        0.5 * self.n as f64 * (2.0 * PI / self.n as f64).sin()
    }

    pub fn area(&self) -> f64 {
        self.polygon_area() * self.num_polygons() as f64
    }

    /// Largest distance between two vertices of one polygon.
    pub fn diameter(&self) -> f64 {
        let v = &self.polygons[0];
        v.iter().flat_map(|a| v.iter().map(move |b| super::norm(sub(*a, *b)))).fold(0.0, f64::max)
    }

    pub fn contains(&self, p: usize, z: [f64; 2]) -> bool {
        let v = &self.polygons[p];
        (0..v.len()).all(|e| cross(sub(v[(e + 1) % v.len()], v[e]), sub(z, v[e])) > 0.0)
    }

    pub fn is_singular(&self, class: usize) -> bool {
        self.orders[class] > 0
    }

    pub fn to_json(&self) -> SurfaceJson {
        let dec = |x: f64| format!("{x:.17e}");
        SurfaceJson {
            n: self.n,
            genus: self.genus,
            stratum: self.stratum.clone(),
            polygons: self.polygons.iter().map(|p| p.iter().map(|v| [dec(v[0]), dec(v[1])]).collect()).collect(),
            pairing: self.pairing.clone(),
            corner_class: self.corner_class.clone(),
            orders: self.orders.clone(),
        }
    }
}

/// The surface schema written by the CLI; coordinates as decimal strings.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceJson {
    pub n: u32,
    pub genus: u32,
    pub stratum: Vec<u32>,
    pub polygons: Vec<Vec<[String; 2]>>,
    pub pairing: Vec<Vec<(usize, usize)>>,
    pub corner_class: Vec<Vec<usize>>,
    pub orders: Vec<u32>,
}

/// A flow direction: `angle:θ` (radians), `side:k` (edge k of polygon 0), `vec:x,y`, or a bare angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Direction {
    Angle(f64),
    Side(usize),
    Vector([f64; 2]),
}

impl Direction {
    pub fn angle(&self, s: &PolygonSurface) -> f64 {
        match *self {
            Direction::Angle(a) => a,
            Direction::Side(k) => {
                let v = s.edge_vector(0, k % s.n as usize);
                v[1].atan2(v[0])
            }
            Direction::Vector(v) => v[1].atan2(v[0]),
        }
    }

    pub fn unit(&self, s: &PolygonSurface) -> [f64; 2] {
        let a = self.angle(s);
        [a.cos(), a.sin()]
    }
}

impl FromStr for Direction {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self, FlowError> {
        let bad = || FlowError::BadDirection(s.to_string());
        if let Some(k) = s.strip_prefix("side:") {
            return k.parse().map(Direction::Side).map_err(|_| bad());
        }
        if let Some(v) = s.strip_prefix("vec:") {
            let (x, y) = v.split_once(',').ok_or_else(bad)?;
            let x: f64 = x.trim().parse().map_err(|_| bad())?;
            let y: f64 = y.trim().parse().map_err(|_| bad())?;
            if x == 0.0 && y == 0.0 {
                return Err(bad());
            }
            return Ok(Direction::Vector([x, y]));
        }
        let a = s.strip_prefix("angle:").unwrap_or(s);
        a.parse().map(Direction::Angle).map_err(|_| bad())
    }
}

use std::path::Path;

use anyhow::Context;
use clap::Subcommand;
use serde_json::json;
use veech_core::conjdyn::calibration_grid;
use veech_core::polyflow::{
    build_surface, cylinder_decomposition, first_return_iet, flow_orbit, normalize_to_standard_group, saddle_connections,
    systole, weyl_sweep, Direction, Observable, PolygonSurface, Transversal,
};

use crate::output::{f, Format, Output};
use crate::pipeline::surface_angle;
use crate::{usage, Global};

const DEFAULT_OBSERVABLE: &str = "rect:0,-0.2,0.2,-0.2,0.2";

#[derive(Subcommand, Debug)]
pub enum FlowCmd {
    /// Straight-line orbit to time T or to a cone point.
    Orbit {
        #[arg(long)]
        n: u32,
        /// angle:θ, side:k, vec:x,y or a bare angle in radians
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[arg(long, default_value_t = 0)]
        polygon: usize,
        #[arg(long, default_value = "0.1234,0.0567", allow_hyphen_values = true)]
        start: String,
        #[arg(long = "T", default_value_t = 100.0)]
        t: f64,
    },
    /// Saddle connections of length at most L.
    Saddles {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4.0)]
        lmax: f64,
    },
    /// Cylinder decomposition of a periodic direction.
    Cylinders {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
    },
    /// First-return interval exchange on a transversal.
    Iet {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        /// p:x0,y0,x1,y1; defaults to the centred segment orthogonal to the flow.
        #[arg(long, allow_hyphen_values = true)]
        transversal: Option<String>,
    },
    /// Normalised Weyl integrals at scale·ν.
    Weyl {
        #[arg(long)]
        n: u32,
        /// Omitted when --nu names a construction file: its direction is used.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
        /// A frequency, or a JSON file written by `dyn construct` (ν and its calibration scales).
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        /// Sweep a decimal ν over the default calibration grid.
        #[arg(long)]
        calibrate: bool,
        #[arg(long = "T", default_value_t = 1e5)]
        t: f64,
        #[arg(long, default_value_t = 32)]
        samples: usize,
        /// const:c and rect:p,x0,x1,y0,y1[,w] terms joined by +
        #[arg(long, default_value = DEFAULT_OBSERVABLE, allow_hyphen_values = true)]
        observable: String,
    },
    /// Conjugates the rotation and the horizontal shear into the triangle-group model.
    Normalize {
        #[arg(long)]
        n: u32,
    },
}

fn surface(n: u32) -> anyhow::Result<PolygonSurface> {
    build_surface(n).map_err(|e| usage(e.to_string()))
}

fn angle(s: &PolygonSurface, d: &str) -> anyhow::Result<f64> {
    let d: Direction = d.parse().map_err(|e: veech_core::polyflow::FlowError| usage(e.to_string()))?;
    Ok(d.angle(s))
}

fn floats(s: &str, k: usize, what: &str) -> anyhow::Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("{what}: {e}")))?;
    if v.len() != k {
        return Err(usage(format!("{what}: expected {k} numbers")));
    }
    Ok(v)
}

pub fn run(cmd: &FlowCmd, g: &Global) -> anyhow::Result<Output> {
    match cmd {
        FlowCmd::Orbit { n, direction, polygon, start, t } => {
            let s = surface(*n)?;
            let th = angle(&s, direction)?;
            let z = floats(start, 2, "--start")?;
            if *polygon >= s.num_polygons() || *t <= 0.0 {
                return Err(usage("polygon out of range or T ≤ 0"));
            }
            let o = flow_orbit(&s, th, *polygon, [z[0], z[1]], *t).map_err(|e| usage(e.to_string()))?;
            let rows = o
                .segments
                .iter()
                .map(|g| vec![g.polygon.to_string(), f(g.t0), f(g.t1), f(g.from[0]), f(g.from[1]), f(g.to[0]), f(g.to[1])])
                .collect();
            Ok(Output::json(&o, json!({ "n": n, "angle": th, "polygon": polygon, "start": z, "T": t }))?
                .with_csv(&["polygon", "t0", "t1", "x0", "y0", "x1", "y1"], rows))
        }
        FlowCmd::Saddles { n, lmax } => {
            let s = surface(*n)?;
            if *lmax <= 0.0 {
                return Err(usage("lmax must be positive"));
            }
            let sc = saddle_connections(&s, *lmax);
            let rows = sc
                .iter()
                .map(|c| vec![f(c.holonomy[0]), f(c.holonomy[1]), f(c.length), c.start.to_string(), c.end.to_string()])
                .collect();
            Ok(Output::json(&json!({ "systole": systole(&s), "count": sc.len(), "connections": sc }), json!({ "n": n, "lmax": lmax }))?
                .with_csv(&["hx", "hy", "length", "start", "end"], rows))
        }
        FlowCmd::Cylinders { n, direction } => {
            let s = surface(*n)?;
            let th = angle(&s, direction)?;
            let d = cylinder_decomposition(&s, th)?;
            let rows = d.cylinders.iter().map(|c| vec![f(c.width), f(c.height), f(c.modulus), f(c.area)]).collect();
            let mut out = Output::json(&d, json!({ "n": n, "direction": direction }))?.with_csv(&["width", "height", "modulus", "area"], rows);
            out.json["surface"] = serde_json::to_value(s.to_json())?;
            Ok(out)
        }
        FlowCmd::Iet { n, direction, transversal } => {
            let s = surface(*n)?;
            let th = angle(&s, direction)?;
            let tr = match transversal {
                None => Transversal::centred(&s, 0, th, 0.5),
                Some(t) => {
                    let (p, rest) = t.split_once(':').ok_or_else(|| usage("--transversal: expected p:x0,y0,x1,y1"))?;
                    let p: usize = p.parse().map_err(|_| usage("--transversal: bad polygon"))?;
                    let v = floats(rest, 4, "--transversal")?;
                    Transversal { polygon: p, a: [v[0], v[1]], b: [v[2], v[3]] }
                }
            };
            let iet = first_return_iet(&s, th, &tr)?;
            let rows = (0..iet.lengths.len())
                .map(|i| vec![i.to_string(), f(iet.lengths[i]), iet.permutation[i].to_string(), f(iet.translations[i]), f(iet.return_times[i])])
                .collect();
            Ok(Output::json(&json!({ "transversal": tr, "iet": iet }), json!({ "n": n, "direction": direction }))?
                .with_csv(&["interval", "length", "image_position", "translation", "return_time"], rows))
        }
        FlowCmd::Weyl { n, direction, nu, calibrate, t, samples, observable } => {
            let s = surface(*n)?;
            let obs: Observable = observable.parse().map_err(|e: String| usage(e))?;
            if *t <= 0.0 || *samples == 0 {
                return Err(usage("T and samples must be positive"));
            }
            let (nu0, scales, x_star) = match nu.parse::<f64>() {
                Ok(v) => (v, if *calibrate { calibration_grid() } else { vec![1.0] }, None),
                Err(_) => read_candidate(Path::new(nu))?,
            };
            let th = match (direction, x_star) {
                (Some(d), _) => angle(&s, d)?,
                (None, Some(x)) => surface_angle(&normalize_to_standard_group(*n)?, x),
                (None, None) => return Err(usage("--direction is required with a decimal --nu")),
            };
            let sw = weyl_sweep(&s, th, nu0, &scales, &obs, *t, *samples, g.seed)?;
            let rows = sw.rows.iter().map(|(c, m)| vec![f(*c), f(*m), f(*t)]).collect();
            Ok(Output::json(&sw, json!({ "n": n, "angle": th, "nu": nu0, "T": t, "samples": samples, "observable": observable }))?
                .with_csv(&["scale", "magnitude", "T"], rows)
                .default_format(Format::Csv))
        }
        FlowCmd::Normalize { n } => {
            let nm = normalize_to_standard_group(*n)?;
            Ok(Output::json(&nm, json!({ "n": n }))?)
        }
    }
}

/// ν, the calibration scales and x* from `dyn construct` output.
fn read_candidate(path: &Path) -> anyhow::Result<(f64, Vec<f64>, Option<f64>)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("--nu: {} is neither a number nor a readable file", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let cand = &v["eigen_candidate"];
    let nu = cand["nu"].as_f64().ok_or_else(|| usage("construction file has no eigen_candidate.nu"))?;
    let scales: Vec<f64> = cand["calibration"].as_array().map(|a| a.iter().filter_map(|x| x.as_f64()).collect()).unwrap_or_default();
    let x = v["construction"]["x_star_f64"].as_f64();
    Ok((nu, if scales.is_empty() { calibration_grid() } else { scales }, x))
}

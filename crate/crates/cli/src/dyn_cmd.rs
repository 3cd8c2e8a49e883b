use anyhow::anyhow;
use clap::Subcommand;
use serde_json::json;
use veech_core::conjdyn::{
    box_counting_auto, cantor_direction, contraction_word, eigenvalue_candidate, expansion_word, field_ratio_check,
    fixed_from_f64, lyapunov_profile, lyapunov_ratio, recode_consistency, salem_word_for, tracking_run, EmbeddedCocycle, HeckeCoding, LatticeVector,
    LemmaBudget, Targets, WVector,
};
use veech_core::trigroup::build_group;

use crate::output::{f, Format, Output};
use crate::pipeline::{box_dimension, constructions, default_dictionary, draw};
use crate::{usage, FamilyArg, Global};

#[derive(Subcommand, Debug)]
pub enum DynCmd {
    /// Ratio of a conjugate Lyapunov exponent to the identity one.
    Lyapunov {
        #[arg(long, value_enum, default_value = "2qinf")]
        family: FamilyArg,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        sigma: usize,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Shortest contracting (or with --expand, expanding) word for a conjugate vector.
    Contract {
        #[arg(long, value_enum, default_value = "2qinf")]
        family: FamilyArg,
        #[arg(long)]
        q: u32,
        /// Blocks as `x,y;x,y;…`; random (from --seed) when omitted.
        #[arg(long)]
        vector: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
        #[arg(long, default_value_t = 500)]
        n_max: u32,
        #[arg(long, default_value_t = 50)]
        k_max: u32,
        #[arg(long)]
        expand: bool,
    },
    /// Steers the cocycle along targets while emitting branch digits.
    Track {
        #[arg(long, default_value_t = 5)]
        q: u32,
        /// Branch bits as hex (`a5f0`, most significant bit first) or binary with a `0b` prefix;
        /// random (from --seed) when omitted.
        #[arg(long)]
        bits: Option<String>,
        #[arg(long, default_value_t = 40)]
        nbits: usize,
        /// constant:A, geometric:A:RATE or harmonic:A
        #[arg(long, default_value = "constant:1")]
        targets: String,
    },
    /// Builds directions from tracking runs, with the eigenvalue candidate of (1, 0).
    Construct {
        #[arg(long, default_value_t = 5)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Branch bits for a single construction, in the form taken by `track --bits`.
        #[arg(long, conflicts_with = "count")]
        bits: Option<String>,
        #[arg(long, default_value_t = 40)]
        nbits: usize,
        #[arg(long, default_value = "constant:1")]
        targets: String,
    },
    /// Box-counting slope of constructed directions and of the middle-thirds calibration set.
    Dimension {
        #[arg(long, default_value_t = 5)]
        q: u32,
        #[arg(long, default_value_t = 512)]
        directions: usize,
        #[arg(long, default_value_t = 40)]
        nbits: usize,
    },
    /// Looks for ν₁/ν₂ in the trace field with bounded height.
    Ratio {
        #[arg(long, default_value_t = 5)]
        q: u32,
        #[arg(long, allow_hyphen_values = true)]
        nu1: f64,
        #[arg(long, allow_hyphen_values = true)]
        nu2: f64,
        #[arg(long, default_value_t = 6)]
        height: i64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn parse_vector(s: &str) -> anyhow::Result<WVector> {
    let blocks = s
        .split(';')
        .map(|b| {
            let xy: Vec<f64> = b.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>()?;
            match xy[..] {
                [x, y] => Ok([x, y]),
                _ => Err(anyhow!("block {b:?} must be x,y")),
            }
        })
        .collect::<anyhow::Result<Vec<_>>>()
        .map_err(|e| usage(format!("--vector: {e}")))?;
    Ok(WVector::new(blocks))
}

/// Hex digits, most significant bit first, or `0b` followed by binary digits.
pub fn parse_bits(s: &str) -> anyhow::Result<Vec<bool>> {
    let bad = |c: char| usage(format!("--bits: unexpected {c:?}"));
    if let Some(b) = s.strip_prefix("0b") {
        return b
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(bad(c)),
            })
            .collect();
    }
    let mut out = Vec::new();
    for c in s.strip_prefix("0x").unwrap_or(s).chars() {
        let d = c.to_digit(16).ok_or_else(|| bad(c))?;
        out.extend((0..4).rev().map(|k| d >> k & 1 == 1));
    }
    if out.is_empty() {
        return Err(usage("--bits is empty"));
    }
    Ok(out)
}

fn coding(q: u32) -> anyhow::Result<HeckeCoding> {
    HeckeCoding::new(FamilyArg::TwoQInf.family(q)).map_err(|e| usage(format!("q={q}: {e}")))
}

pub fn run(cmd: &DynCmd, g: &Global) -> anyhow::Result<Output> {
    match *cmd {
        DynCmd::Lyapunov { family, q, sigma, steps, samples } => {
            if steps == 0 || samples == 0 {
                return Err(usage("steps and samples must be positive"));
            }
            let est = lyapunov_ratio(family.family(q), sigma, steps, samples, g.seed).map_err(|e| usage(e.to_string()))?;
            let text = format!("σ={} mean {:.6} stderr {:.6} ({} samples × {} steps)\n", sigma, est.mean, est.stderr, samples, steps);
            let mut out = Output::json(&est, json!({ "family": family, "q": q, "sigma": sigma, "steps": steps, "samples": samples }))?
                .with_text(text);
            // the per-step profile records every trajectory, so it is only built when asked for
            if g.format == Some(Format::Csv) {
                let (sigmas, profile) = lyapunov_profile(family.family(q), steps, samples, g.seed)?;
                let mut header = vec!["step".to_string(), "log_norm_id".to_string()];
                header.extend(sigmas[1..].iter().map(|s| format!("log_norm_sigma_{s}")));
                let rows = profile
                    .iter()
                    .enumerate()
                    .map(|(i, r)| std::iter::once((i + 1).to_string()).chain(r.iter().map(|x| f(*x))).collect())
                    .collect();
                out.csv = Some((header, rows));
            }
            Ok(out)
        }
        DynCmd::Contract { family, q, ref vector, c0, n_max, k_max, expand } => {
            let gp = build_group(family.family(q)).map_err(|e| usage(e.to_string()))?;
            let salem = salem_word_for(&gp)?;
            let coc = EmbeddedCocycle::new(gp)?;
            let v = match vector {
                Some(s) => parse_vector(s)?,
                None => draw(g.seed, 0, coc.num_blocks(), 0).0,
            };
            if v.blocks.len() != coc.num_blocks() {
                return Err(usage(format!("vector needs {} blocks", coc.num_blocks())));
            }
            let budget = LemmaBudget { n_max, k_max };
            let w = if expand { expansion_word(&coc, &salem, &v, c0, budget)? } else { contraction_word(&coc, &salem, &v, c0, budget)? };
            let text = format!("{} n={} k={} log-ratio {:.6}\n", w.word, w.n, w.k, w.log_ratio);
            Ok(Output::json(&json!({ "salem_word": salem, "vector": v, "result": w }), json!({ "family": family, "q": q, "c0": c0, "budget": budget, "expand": expand }))?
                .with_text(text))
        }
        DynCmd::Track { q, ref bits, nbits, ref targets } => {
            let dict = default_dictionary(coding(q)?)?;
            let t: Targets = targets.parse().map_err(|e: String| usage(e))?;
            let (v, random_bits) = draw(g.seed, 0, dict.coding.num_blocks(), nbits);
            let bits = match bits {
                Some(s) => parse_bits(s)?,
                None => random_bits,
            };
            let run = tracking_run(&dict, &v, &t, &bits, None)?;
            let rows = (0..run.checkpoints.len())
                .map(|k| vec![(k + 1).to_string(), run.checkpoints[k].to_string(), f(run.targets[k]), f(run.norms[k]), f(run.errors[k])])
                .collect();
            let mut out = Output::json(&run, json!({ "q": q, "targets": targets, "nbits": bits.len() }))?
                .with_csv(&["k", "m_k", "target", "norm", "error"], rows);
            out.json["bound_holds"] = json!(run.bound_holds());
            out.json["gaps_bounded"] = json!(run.gaps_bounded());
            Ok(out)
        }
        DynCmd::Construct { q, count, ref bits, nbits, ref targets } => {
            let c = coding(q)?;
            let dict = default_dictionary(c.clone())?;
            let t: Targets = targets.parse().map_err(|e: String| usage(e))?;
            let cs = match bits {
                Some(s) => {
                    let (v, _) = draw(g.seed, 0, c.num_blocks(), 0);
                    let run = tracking_run(&dict, &v, &t, &parse_bits(s)?, None)?;
                    vec![cantor_direction(&c, &run)?]
                }
                None => constructions(&dict, &t, count, nbits, g.seed)?,
            };
            let lv = LatticeVector::from_ints(c.field(), &[1, 0], &[0, 0]);
            let mut items = Vec::new();
            let mut rows = Vec::new();
            for (i, d) in cs.iter().enumerate() {
                let eig = eigenvalue_candidate(&c, &lv, d).ok();
                let rec = recode_consistency(&c, d, 200);
                rows.push(vec![
                    i.to_string(),
                    d.x_star.clone(),
                    d.digits.len().to_string(),
                    eig.as_ref().map_or(String::new(), |e| f(e.nu)),
                    rec.consistent.to_string(),
                ]);
                items.push(json!({ "construction": d, "eigen_candidate": eig, "recode": { "mismatch_prefix": rec.mismatch_prefix, "consistent": rec.consistent } }));
            }
            // a single construction is written flat so that `flow weyl --nu` can read it
            let body = if items.len() == 1 { items.pop().unwrap() } else { json!(items) };
            Ok(Output::json(&body, json!({ "q": q, "count": cs.len(), "bits": bits, "nbits": nbits, "targets": targets }))?
                .with_csv(&["index", "x_star", "digits", "nu", "recode_consistent"], rows))
        }
        DynCmd::Dimension { q, directions, nbits } => {
            let dict = default_dictionary(coding(q)?)?;
            let cs = constructions(&dict, &Targets::Constant(1.0), directions, nbits, g.seed)?;
            let bc = box_dimension(&cs);
            let cal = box_counting_auto(&fixed_from_f64(&veech_oracles::middle_thirds_points(12), 60), 60);
            let rows = bc.exponents.iter().zip(&bc.counts).map(|(j, n)| vec![j.to_string(), n.to_string()]).collect();
            let text = format!("slope {:.6} over {} directions; middle-thirds calibration {:.6} (ln2/ln3 = {:.6})\n", bc.slope, cs.len(), cal.slope, 2f64.ln() / 3f64.ln());
            Ok(Output::json(&json!({ "directions": bc, "calibration": cal, "nested": cs.iter().all(|c| c.nested) }), json!({ "q": q, "directions": directions, "nbits": nbits }))?
                .with_csv(&["exponent", "count"], rows)
                .with_text(text))
        }
        DynCmd::Ratio { q, nu1, nu2, height, tol } => {
            if nu2 == 0.0 {
                return Err(usage("nu2 must be nonzero"));
            }
            let c = coding(q)?;
            let r = field_ratio_check(nu1, nu2, c.field(), height, tol);
            let text = match &r {
                Some(x) => format!("ν₁/ν₂ ≈ {x}\n"),
                None => format!("no element of height ≤ {height} within {tol:e}\n"),
            };
            Ok(Output::json(&json!({ "ratio": r.map(|x| x.to_string()), "value": nu1 / nu2 }), json!({ "q": q, "nu1": nu1, "nu2": nu2, "height": height, "tol": tol }))?
                .with_text(text))
        }
    }
}

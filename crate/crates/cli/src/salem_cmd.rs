use clap::Subcommand;
use serde_json::json;
use veech_core::exactfield::{isolate_real_roots, rat_string};
use veech_core::salem::{
    certify, check_row, golden_rows, nondiscreteness_witness, render_text, search, SearchBudget, WitnessBudget,
};
use veech_core::trigroup::{build_group, GroupWord};

use crate::output::{f, Format, Output};
use crate::{usage, FamilyArg, Global};

#[derive(Subcommand, Debug)]
pub enum SalemCmd {
    /// Budgeted enumeration of words, certifying every Salem element found.
    Search {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        q: u32,
        #[arg(long, visible_alias = "blocks", default_value_t = 6)]
        max_blocks: usize,
        #[arg(long, visible_alias = "exp", default_value_t = 12)]
        max_exp: u32,
        #[arg(long, default_value_t = 10_000_000)]
        max_words: u64,
    },
    /// Re-evaluates the reference table rows with qmin ≤ q ≤ qmax; with --out the JSON form is also written to <out>.json.
    Table {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 15)]
        qmax: u32,
        #[arg(long, default_value_t = 3)]
        qmin: u32,
    },
    /// Certifies one word, e.g. `t^3.s`.
    VerifyWord {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        word: String,
    },
    /// First word whose σ-conjugate is within ε of ±I.
    Witness {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        sigma: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 4)]
        max_blocks: usize,
        #[arg(long, default_value_t = 12)]
        max_exp: u32,
        #[arg(long, default_value_t = 1_000_000)]
        max_words: u64,
    },
}

fn group(family: FamilyArg, q: u32) -> anyhow::Result<veech_core::trigroup::GroupPresentation> {
    build_group(family.family(q)).map_err(|e| usage(e.to_string()))
}

pub fn run(cmd: &SalemCmd, g: &Global) -> anyhow::Result<Output> {
    match *cmd {
        SalemCmd::Search { family, q, max_blocks, max_exp, max_words } => {
            group(family, q)?;
            let budget = SearchBudget { max_blocks, max_abs_exp: max_exp, max_words };
            let report = search(family.family(q), budget);
            let rows = report
                .found
                .iter()
                .map(|c| vec![c.word.to_string(), c.degree().to_string(), c.half_trace_minpoly().to_string(), f(c.dominant())])
                .collect();
            let mut text = format!("{} scanned={} exact_checks={} found={}\n", family.family(q), report.scanned, report.exact_checks, report.found.len());
            for c in &report.found {
                text.push_str(&format!("{}\t{}\t{}\t{:.6}\n", c.word, c.degree(), c.half_trace_minpoly(), c.dominant()));
            }
            Ok(Output::json(&report, json!({ "family": family, "q": q, "budget": budget }))?
                .with_csv(&["word", "degree", "half_trace_minpoly", "dominant"], rows)
                .with_text(text))
        }
        SalemCmd::Table { family, qmax, qmin } => {
            let rows: Vec<_> = golden_rows(family.variant()).filter(|r| r.q >= qmin && r.q <= qmax).map(check_row).collect();
            if rows.is_empty() {
                return Err(usage(format!("no tabled rows with {qmin} ≤ q ≤ {qmax}")));
            }
            let csv = rows
                .iter()
                .map(|r| {
                    vec![
                        r.q.to_string(),
                        r.degree.to_string(),
                        r.word.to_string(),
                        r.minpoly.to_string(),
                        r.conjugates.join(" "),
                        r.all_ok().to_string(),
                    ]
                })
                .collect();
            Ok(Output::json(&rows, json!({ "family": family, "qmin": qmin, "qmax": qmax }))?
                .with_csv(&["q", "degree", "word", "half_trace_minpoly", "conjugates", "ok"], csv)
                .with_text(render_text(&rows))
                .default_format(Format::Text)
                .with_companion_json())
        }
        SalemCmd::VerifyWord { family, q, ref word } => {
            let gp = group(family, q)?;
            let w: GroupWord = word.parse().map_err(|e| usage(format!("word {word:?}: {e}")))?;
            let cfg = json!({ "family": family, "q": q, "word": word });
            match certify(&gp, &w) {
                Ok(cert) => {
                    let roots = isolate_real_roots(cert.half_trace_minpoly(), g.precision_bits);
                    let iv: Vec<[String; 2]> = roots
                        .iter()
                        .map(|r| {
                            let i = r.as_interval();
                            [rat_string(&i.lo), rat_string(&i.hi)]
                        })
                        .collect();
                    let text = format!(
                        "{w}: Salem, degree {}\nhalf-trace minimal polynomial {}\ndominant {:.10}\n",
                        cert.degree(),
                        cert.half_trace_minpoly(),
                        cert.dominant()
                    );
                    let rows = iv.iter().map(|i| vec![i[0].clone(), i[1].clone()]).collect();
                    let mut out = Output::json(&json!({ "salem": true, "certificate": cert, "isolating_intervals": iv }), cfg)?
                        .with_csv(&["lo", "hi"], rows)
                        .with_text(text);
                    out.json["precision_bits"] = json!(g.precision_bits);
                    Ok(out)
                }
                Err(rej) => Ok(Output::json(&json!({ "salem": false, "word": w, "rejection": rej }), cfg)?
                    .with_text(format!("{w}: not Salem ({rej:?})\n"))),
            }
        }
        SalemCmd::Witness { family, q, sigma, eps, max_blocks, max_exp, max_words } => {
            let gp = group(family, q)?;
            if sigma < 1 || sigma > gp.field.degree() {
                return Err(usage(format!("sigma must be in 1..={}", gp.field.degree())));
            }
            if eps <= 0.0 {
                return Err(usage("eps must be positive"));
            }
            let budget = WitnessBudget { max_blocks, max_abs_exp: max_exp, max_words };
            let w = nondiscreteness_witness(&gp, sigma, eps, budget);
            let text = match &w {
                Some(w) => format!("{} σ={} distance {:.6e}\n", w.word, w.sigma, w.distance),
                None => "no witness within budget\n".to_string(),
            };
            Ok(Output::json(&json!({ "witness": w }), json!({ "family": family, "q": q, "sigma": sigma, "eps": eps, "budget": budget }))?
                .with_text(text))
        }
    }
}

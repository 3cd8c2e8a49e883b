use serde::Serialize;

use crate::exactfield::{rat_to_f64, IsolatingInterval, RatPoly};
use crate::trigroup::{build_group, evaluate_word, GroupWord, TriangleFamily, Variant};

use super::certificate::{half_trace_data, is_salem, SalemRejection};
use super::SalemError;

/// One printed row of a reference table.
#[derive(Clone, Copy, Debug)]
pub struct GoldenRow {
    pub variant: Variant,
    pub q: u32,
    pub degree: usize,
    pub word: &'static str,
    /// Half-trace minimal polynomial, ascending coefficients.
    pub poly: &'static [&'static str],
    /// Conjugates of the half-trace, four significant figures, in printed order.
    pub conjugates: &'static [&'static str],
}

const fn row(
    variant: Variant,
    q: u32,
    degree: usize,
    word: &'static str,
    poly: &'static [&'static str],
    conjugates: &'static [&'static str],
) -> GoldenRow {
    GoldenRow { variant, q, degree, word, poly, conjugates }
}

use Variant::{QInfInf, TwoQInf};

pub const GOLDEN_ROWS: &[GoldenRow] = &[
    row(TwoQInf, 7, 3, "t^3.s", &["1", "-1", "-2", "1"], &["2.247", "0.5550", "-0.8019"]),
    row(TwoQInf, 9, 3, "t^4.s", &["1", "0", "-3", "1"], &["2.879", "0.6527", "-0.5321"]),
    row(
        TwoQInf,
        11,
        5,
        "t^5.s.t^4.s",
        &["89/32", "-17/16", "-243/8", "-47", "-39/2", "1"],
        &["21.73", "0.2425", "-0.6156", "-0.8781", "-0.9764"],
    ),
    row(
        TwoQInf,
        13,
        6,
        "t^7.s.t^7.s.t^4.s",
        &["-25", "-110", "41", "318", "-11", "-227", "1"],
        &["227.0", "0.9072", "0.8412", "-0.2464", "-0.6697", "-0.8746"],
    ),
    row(TwoQInf, 15, 4, "t^7.s", &["1", "1", "-4", "-4", "1"], &["4.783", "0.5112", "-0.5473", "-0.7472"]),
    row(QInfInf, 7, 3, "t.s^3", &["-1", "-4", "-3", "1"], &["4.049", "-0.3569", "-0.6920"]),
    row(
        QInfInf,
        8,
        4,
        "t.s^2.t.s^3",
        &["1/8", "4", "15", "-24", "1"],
        &["23.35", "0.8571", "-0.03655", "-0.1709"],
    ),
    row(QInfInf, 9, 3, "t.s^2", &["1", "0", "-3", "1"], &["2.879", "0.6527", "-0.5321"]),
    row(
        QInfInf,
        10,
        4,
        "t.s^3.t.s^7",
        &["-199/16", "-291/4", "-441/4", "-49", "1"],
        &["51.18", "-0.2644", "-0.9504", "-0.9672"],
    ),
    row(
        QInfInf,
        11,
        5,
        "t.s^4.t.s^7",
        &["-23/32", "-173/16", "-459/8", "-122", "-155/2", "1"],
        &["79.05", "-0.1907", "-0.2214", "-0.2388", "-0.9015"],
    ),
    row(
        QInfInf,
        12,
        4,
        "t.s^2.t.s^3",
        &["-191/16", "-48", "-61", "-24", "1"],
        &["26.38", "-0.5254", "-0.9096", "-0.9468"],
    ),
    row(
        QInfInf,
        13,
        6,
        "t.s^4.t.s^5.t^-1.s^4.t^-1.s^5",
        &["124175/64", "304515/32", "53979/8", "-26514", "-188297/4", "-43107/2", "1"],
        &["21560.", "0.5373", "-0.3375", "-0.7022", "-0.8374", "-0.8440"],
    ),
    row(
        QInfInf,
        14,
        6,
        "t.s^5.t.s^9",
        &["1009/64", "967/8", "1653/8", "-45/4", "-955/4", "-125", "1"],
        &["126.9", "0.9692", "-0.1912", "-0.6930", "-0.9794", "-0.9879"],
    ),
    row(QInfInf, 15, 4, "t.s^3", &["1", "1", "-4", "-4", "1"], &["4.783", "0.5112", "-0.5473", "-0.7472"]),
];

pub fn golden_rows(variant: Variant) -> impl Iterator<Item = &'static GoldenRow> {
    GOLDEN_ROWS.iter().filter(move |r| r.variant == variant)
}

pub fn golden_row(variant: Variant, q: u32) -> Option<&'static GoldenRow> {
    GOLDEN_ROWS.iter().find(|r| r.variant == variant && r.q == q)
}

impl GoldenRow {
    pub fn family(&self) -> TriangleFamily {
        TriangleFamily { variant: self.variant, q: self.q }
    }

    pub fn word(&self) -> GroupWord {
        self.word.parse().expect("golden word parses")
    }

    pub fn poly(&self) -> RatPoly {
        RatPoly::from_strings(self.poly).expect("golden polynomial parses")
    }
}

/// Formats with four significant figures, keeping trailing zeros and writing
/// integers of five or more digits with a trailing point ("21560.").
pub fn format_sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mut e = x.abs().log10().floor() as i32;
    let round = |e: i32| {
        let scale = 10f64.powi(3 - e);
        (x * scale).round() / scale
    };
    let mut r = round(e);
    if r.abs() >= 10f64.powi(e + 1) {
        e += 1;
        r = round(e);
    }
    if e <= 3 {
        format!("{:.*}", (3 - e) as usize, r)
    } else {
        format!("{r:.0}.")
    }
}

/// Checked comparison of a printed conjugate against an isolating interval.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugateMatch {
    pub printed: String,
    pub computed: String,
    /// Interval endpoints lie within 5e-4 relative of the printed value.
    pub within_tolerance: bool,
    /// Rounding the computed root to four figures reproduces the printed text.
    pub rounds_exactly: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub family: TriangleFamily,
    pub q: u32,
    pub degree: usize,
    pub word: GroupWord,
    pub minpoly: RatPoly,
    pub conjugates: Vec<String>,
    pub printed_conjugates: Vec<ConjugateMatch>,
    pub poly_matches: bool,
    pub degree_matches: bool,
    pub salem: Result<(), SalemRejection>,
    pub dominant: f64,
    pub dominant_matches: bool,
}

impl TableRow {
    pub fn conjugates_match(&self) -> bool {
        self.printed_conjugates.iter().all(|c| c.within_tolerance)
    }

    pub fn all_ok(&self) -> bool {
        self.poly_matches
            && self.degree_matches
            && self.conjugates_match()
            && self.salem.is_ok()
            && self.dominant_matches
    }
}

/// Distance from a printed value to an isolating interval, relative to the printed value.
fn printed_close(printed: f64, iv: &IsolatingInterval) -> bool {
    let tol = 5e-4 * printed.abs().max(1e-300);
    let lo = rat_to_f64(&iv.lo);
    let hi = rat_to_f64(&iv.hi);
    printed >= lo - tol && printed <= hi + tol
}

/// Matches printed conjugates to computed roots one-to-one by nearest value.
fn match_conjugates(printed: &[&str], roots: &[IsolatingInterval]) -> Vec<ConjugateMatch> {
    let mut used = vec![false; roots.len()];
    printed
        .iter()
        .map(|&p| {
            let v: f64 = p.parse().unwrap_or(f64::NAN);
            let best = (0..roots.len())
                .filter(|&i| !used[i])
                .min_by(|&a, &b| {
                    let da = (roots[a].mid_f64() - v).abs();
                    let db = (roots[b].mid_f64() - v).abs();
                    da.total_cmp(&db)
                });
            match best {
                Some(i) => {
                    used[i] = true;
                    let computed = format_sig4(roots[i].mid_f64());
                    ConjugateMatch {
                        printed: p.to_string(),
                        rounds_exactly: computed == p,
                        computed,
                        within_tolerance: printed_close(v, &roots[i]),
                    }
                }
                None => ConjugateMatch {
                    printed: p.to_string(),
                    computed: String::new(),
                    within_tolerance: false,
                    rounds_exactly: false,
                },
            }
        })
        .collect()
}

/// Evaluates one golden row verbatim and compares every printed item.
pub fn check_row(row: &GoldenRow) -> TableRow {
    let g = build_group(row.family()).expect("tabled q is valid");
    let word = row.word();
    let m = evaluate_word(&g, &word);
    let data = half_trace_data(&m);
    let expected = row.poly();
    let salem = is_salem(&m);
    let dominant = data.roots[0].mid_f64();
    let printed_dominant: f64 = row.conjugates[0].parse().unwrap_or(f64::NAN);
    TableRow {
        family: row.family(),
        q: row.q,
        degree: data.poly.degree().unwrap(),
        word,
        conjugates: data.roots.iter().map(|r| format_sig4(r.mid_f64())).collect(),
        printed_conjugates: match_conjugates(row.conjugates, &data.roots),
        poly_matches: data.poly == expected,
        degree_matches: data.poly.degree() == Some(row.degree),
        salem: salem.as_ref().map(|_| ()).map_err(|e| *e),
        dominant_matches: printed_close(printed_dominant, &data.roots[0]),
        dominant,
        minpoly: data.poly,
    }
}

/// Reproduces the tabled rows for the given q values, failing on the first polynomial mismatch.
pub fn reproduce_table(variant: Variant, q_list: &[u32]) -> Result<Vec<TableRow>, SalemError> {
    let mut out = Vec::new();
    for &q in q_list {
        let golden = golden_row(variant, q).ok_or(SalemError::NotTabled { q })?;
        let row = check_row(golden);
        if !row.poly_matches {
            return Err(SalemError::RowMismatch {
                q,
                expected: golden.poly().to_string(),
                got: row.minpoly.to_string(),
            });
        }
        out.push(row);
    }
    Ok(out)
}

/// Plain-text rendering in the layout of the reference tables.
pub fn render_text(rows: &[TableRow]) -> String {
    let mut s = String::new();
    if let Some(first) = rows.first() {
        let title = match first.family.variant {
            Variant::TwoQInf => "Salem elements in Δ(2,q,∞)",
            Variant::QInfInf => "Salem elements in Δ(q,∞,∞)",
        };
        s.push_str(title);
        s.push('\n');
    }
    s.push_str(&format!("{:>3} | {:>6} | matrix m\n", "q", "degree"));
    s.push_str("    | minimal polynomial of trace(m)/2\n");
    s.push_str("    | approximate conjugates of trace(m)/2\n");
    for r in rows {
        s.push_str(&"=".repeat(60));
        s.push('\n');
        s.push_str(&format!("{:>3} | {:>6} | {}\n", r.q, r.degree, r.word));
        s.push_str(&format!("    | {}\n", r.minpoly));
        s.push_str(&format!("    | {}\n", r.conjugates.join(", ")));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig4_formatting() {
        assert_eq!(format_sig4(2.24698), "2.247");
        assert_eq!(format_sig4(0.554958), "0.5550");
        assert_eq!(format_sig4(-0.80194), "-0.8019");
        assert_eq!(format_sig4(226.98), "227.0");
        assert_eq!(format_sig4(21555.68), "21560.");
        assert_eq!(format_sig4(-0.036551), "-0.03655");
        assert_eq!(format_sig4(9.99996), "10.00");
    }
}

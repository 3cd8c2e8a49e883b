use std::fmt;

use serde::Serialize;

use crate::exactfield::{
    isolate_real_roots, rat, ratio, sturm_count, ExtRat, FieldElement, IsolatingInterval, RatPoly,
};
use crate::trigroup::{Class, FieldMatrix2, GroupWord, TriangleFamily};

/// Half-trace minimal polynomial after sign normalization, with its roots.
#[derive(Clone, Debug)]
pub struct HalfTraceData {
    pub poly: RatPoly,
    pub roots: Vec<IsolatingInterval>,
    /// +1 or -1: the half-trace was multiplied by this sign before taking the minimal polynomial.
    pub sign: i8,
}

/// p(-x), rescaled to stay monic.
pub fn reflect(p: &RatPoly) -> RatPoly {
    p.scale_variable(&rat(-1)).monic()
}

/// x₀ = ±trace(M)/2, sign chosen so the conjugate of largest modulus is positive.
pub fn half_trace_data(m: &FieldMatrix2) -> HalfTraceData {
    let x0 = m.trace().scale(&ratio(1, 2));
    half_trace_data_of(&x0)
}

pub fn half_trace_data_of(x0: &FieldElement) -> HalfTraceData {
    let p = x0.minpoly();
    let roots = isolate_real_roots(&p, 64);
    if dominant_is_negative(&p, &roots) {
        let q = reflect(&p);
        let roots = isolate_real_roots(&q, 64);
        HalfTraceData { poly: q, roots, sign: -1 }
    } else {
        HalfTraceData { poly: p, roots, sign: 1 }
    }
}

/// Exact test of |smallest root| > largest root; a tie counts as not negative.
fn dominant_is_negative(p: &RatPoly, roots: &[IsolatingInterval]) -> bool {
    let mut top = roots.first().expect("totally real").clone();
    let mut bottom = roots.last().unwrap().clone();
    // top = -bottom exactly iff top is also a root of p(-x), i.e. of gcd(p(x), p(-x))
    let g = p.gcd(&reflect(p));
    if g.degree().unwrap_or(0) > 0 {
        let hit = if top.exact {
            g.sign_at(&top.hi) == 0
        } else {
            sturm_count(&g, &ExtRat::Finite(top.lo.clone()), &ExtRat::Finite(top.hi.clone())) == 1
        };
        if hit {
            return false;
        }
    }
    let mut bits = 64;
    loop {
        top.refine(bits);
        bottom.refine(bits);
        if &bottom.hi + &top.lo < rat(0) {
            return true;
        }
        if &bottom.lo + &top.hi > rat(0) {
            return false;
        }
        bits *= 2;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SalemRejection {
    NotHyperbolic,
    DegreeOne,
    NotUniqueOutside,
    UnitRoot,
    NotIntegral,
}

impl fmt::Display for SalemRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SalemRejection::NotHyperbolic => "not hyperbolic",
            SalemRejection::DegreeOne => "degree 1 (rational half-trace)",
            SalemRejection::NotUniqueOutside => "not exactly one conjugate outside [-1,1]",
            SalemRejection::UnitRoot => "half-trace polynomial vanishes at 1 or -1",
            SalemRejection::NotIntegral => "trace polynomial not integral",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SalemChecks {
    pub degree_ge_2: bool,
    pub unique_outside: bool,
    pub endpoints_nonroot: bool,
    pub integral: bool,
}

/// Evidence that a matrix is Salem, independent of how it was named.
#[derive(Clone, Debug, Serialize)]
pub struct SalemEvidence {
    pub half_trace_minpoly: RatPoly,
    pub trace_minpoly: RatPoly,
    pub degree: usize,
    pub conjugates: Vec<IsolatingInterval>,
    pub dominant: f64,
    pub checks: SalemChecks,
    #[serde(skip)]
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct SalemCertificate {
    pub word: GroupWord,
    pub family: TriangleFamily,
    #[serde(flatten)]
    pub evidence: SalemEvidence,
}

impl SalemCertificate {
    pub fn half_trace_minpoly(&self) -> &RatPoly {
        &self.evidence.half_trace_minpoly
    }

    pub fn degree(&self) -> usize {
        self.evidence.degree
    }

    pub fn dominant(&self) -> f64 {
        self.evidence.dominant
    }

    pub fn conjugates(&self) -> &[IsolatingInterval] {
        &self.evidence.conjugates
    }
}

/// Certifies that M is hyperbolic with a Salem dominant eigenvalue.
pub fn is_salem(m: &FieldMatrix2) -> Result<SalemEvidence, SalemRejection> {
    if m.classify() != Class::Hyperbolic {
        return Err(SalemRejection::NotHyperbolic);
    }
    let data = half_trace_data(m);
    salem_from_half_trace(&data)
}

pub fn salem_from_half_trace(data: &HalfTraceData) -> Result<SalemEvidence, SalemRejection> {
    let p = &data.poly;
    let degree = p.degree().unwrap();
    if degree < 2 {
        return Err(SalemRejection::DegreeOne);
    }
    let above = sturm_count(p, &ExtRat::from(1), &ExtRat::PosInf);
    let below_closed = sturm_count(p, &ExtRat::NegInf, &ExtRat::from(-1));
    let minus_one_root = p.sign_at(&rat(-1)) == 0;
    let below = below_closed - usize::from(minus_one_root);
    if !(above == 1 && below == 0) {
        return Err(SalemRejection::NotUniqueOutside);
    }
    if minus_one_root || p.sign_at(&rat(1)) == 0 {
        return Err(SalemRejection::UnitRoot);
    }
    let trace_minpoly = p.scale_variable(&ratio(1, 2)).monic();
    if !trace_minpoly.is_integral() {
        return Err(SalemRejection::NotIntegral);
    }
    Ok(SalemEvidence {
        half_trace_minpoly: p.clone(),
        trace_minpoly,
        degree,
        dominant: data.roots[0].mid_f64(),
        conjugates: data.roots.clone(),
        checks: SalemChecks {
            degree_ge_2: true,
            unique_outside: true,
            endpoints_nonroot: true,
            integral: true,
        },
        sign: data.sign,
    })
}

pub fn certify(
    g: &crate::trigroup::GroupPresentation,
    w: &GroupWord,
) -> Result<SalemCertificate, SalemRejection> {
    let m = crate::trigroup::evaluate_word(g, w);
    is_salem(&m).map(|evidence| SalemCertificate {
        word: w.clone(),
        family: g.family,
        evidence,
    })
}

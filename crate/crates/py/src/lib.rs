//! Python bindings. Structured results come back as JSON text for `json.loads`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use veech_core::conjdyn::lyapunov_ratio;
use veech_core::polyflow::{build_surface, cylinder_decomposition, saddle_connections};
use veech_core::salem::certify;
use veech_core::trigroup::{build_group, GroupWord, TriangleFamily};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

pub fn family(name: &str, q: u32) -> PyResult<TriangleFamily> {
    match name {
        "2qinf" => Ok(TriangleFamily::two_q_inf(q)),
        "qinfinf" => Ok(TriangleFamily::q_inf_inf(q)),
        _ => Err(err(format!("unknown family {name:?}; use 2qinf or qinfinf"))),
    }
}

/// (half-trace minimal polynomial, degree, dominant conjugate) of a Salem word.
#[pyfunction]
pub fn verify_word(family_name: &str, q: u32, word: &str) -> PyResult<(String, usize, f64)> {
    let g = build_group(family(family_name, q)?).map_err(err)?;
    let w: GroupWord = word.parse().map_err(err)?;
    let cert = certify(&g, &w).map_err(err)?;
    Ok((cert.half_trace_minpoly().to_string(), cert.degree(), cert.dominant()))
}

/// (mean, stderr) of λ^σ/λ^id in Δ(2,q,∞) or Δ(q,∞,∞).
#[pyfunction]
#[pyo3(signature = (family_name, q, sigma, steps=10_000, samples=100, seed=1))]
pub fn lyapunov(family_name: &str, q: u32, sigma: usize, steps: usize, samples: usize, seed: u64) -> PyResult<(f64, f64)> {
    let e = lyapunov_ratio(family(family_name, q)?, sigma, steps, samples, seed).map_err(err)?;
    Ok((e.mean, e.stderr))
}

#[pyfunction]
pub fn surface_json(n: u32) -> PyResult<String> {
    serde_json::to_string(&build_surface(n).map_err(err)?.to_json()).map_err(err)
}

/// Holonomy vectors (x, y) of saddle connections of length ≤ l_max.
#[pyfunction]
pub fn saddles(n: u32, l_max: f64) -> PyResult<Vec<(f64, f64)>> {
    let s = build_surface(n).map_err(err)?;
    Ok(saddle_connections(&s, l_max).iter().map(|c| (c.holonomy[0], c.holonomy[1])).collect())
}

#[pyfunction]
pub fn cylinders_json(n: u32, angle: f64) -> PyResult<String> {
    let s = build_surface(n).map_err(err)?;
    serde_json::to_string(&cylinder_decomposition(&s, angle).map_err(err)?).map_err(err)
}

#[pymodule]
fn veech(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(verify_word, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov, m)?)?;
    m.add_function(wrap_pyfunction!(surface_json, m)?)?;
    m.add_function(wrap_pyfunction!(saddles, m)?)?;
    m.add_function(wrap_pyfunction!(cylinders_json, m)?)?;
    Ok(())
}

//! Regular-polygon translation surfaces, straight-line flow and the Weyl-sum harness.

mod cylinder;
mod flow;
mod iet;
mod normalize;
mod saddle;
mod surface;
mod weyl;

pub use cylinder::{commensurability, cylinder_decomposition, Commensurability, Cylinder, CylinderDecomposition};
pub use flow::{flow_orbit, FlowState, OrbitSegment, Segment, Termination};
pub use iet::{first_return_iet, IETData, Transversal};
pub use normalize::{normalize_to_standard_group, Normalization};
pub use saddle::{no_small_triangle_check, periodic_directions, saddle_connections, systole, SaddleConnection};
pub use surface::{build_surface, Direction, PolygonSurface, SurfaceJson};
pub use weyl::{weyl_average, weyl_sweep, Observable, Rect, WeylReport, WeylSweep};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("n = {0}: a regular polygon needs n ≥ 3")]
    SmallN(u32),
    #[error("start point is not inside polygon {0}")]
    BadStart(usize),
    #[error("direction {0} is not periodic: no saddle connection structure closes up, so by the Veech alternative the flow in it is uniquely ergodic")]
    NotPeriodic(f64),
    #[error("transversal does not meet the recurrent part of the flow within {0} crossings")]
    NonRecurrent(usize),
    #[error("transversal must be a non-degenerate segment inside one polygon, not parallel to the flow")]
    BadTransversal,
    #[error("no generator pairing brings residuals below {tol:e} (best {best:e})")]
    Residual { tol: f64, best: f64 },
    #[error("n = {0} is outside the supported range for normalization")]
    Unsupported(u32),
    #[error("bad direction {0:?}")]
    BadDirection(String),
}

pub(crate) fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

pub(crate) fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

pub(crate) fn rotate(a: [f64; 2], phi: f64) -> [f64; 2] {
    let (s, c) = phi.sin_cos();
    [c * a[0] - s * a[1], s * a[0] + c * a[1]]
}

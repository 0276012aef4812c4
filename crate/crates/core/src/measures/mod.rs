//! Probability measures on the plane and their wedge masses.
//!
//! Every model answers `wedge_mass` for closed wedges of any angle.
//! Reflex wedges are evaluated through the complement, straight wedges
//! through a dedicated halfplane path.

mod disk;
mod gaussian;
mod polygon;

pub use disk::{disk_halfplane_area, disk_wedge_area, DiskBlob, DiskBlobMeasure};
pub use gaussian::{gaussian_wedge_mass, GaussianMeasure, DEFAULT_SUPPORT_SIGMAS};
pub use polygon::{polygon_wedge_mass, PolygonMeasure};

use thiserror::Error;

use crate::geom::{Halfplane, Vector2, Wedge, HALFPLANE_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("a disk-blob measure needs at least one blob")]
    NoBlobs,
    #[error("blob {index}: {reason}")]
    InvalidBlob { index: usize, reason: String },
    #[error("blob weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },
    #[error("blobs {a} and {b} overlap")]
    OverlappingBlobs { a: usize, b: usize },
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon vertex {index} is not finite")]
    NonFiniteVertex { index: usize },
    #[error("polygon is not strictly convex and counter-clockwise at vertex {index}")]
    NotConvex { index: usize },
    #[error("gaussian parameters invalid: {0}")]
    InvalidGaussian(String),
    #[error("QuadratureNotConverged: angular integral did not reach {tol} within {levels} levels")]
    QuadratureNotConverged { tol: f64, levels: u32 },
}

/// A disk containing the support (or, for Gaussians, all but a negligible
/// tail of it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBounds {
    pub center: Vector2,
    pub radius: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    DiskBlobs(DiskBlobMeasure),
    Polygon(PolygonMeasure),
    Gaussian(GaussianMeasure),
}

impl From<DiskBlobMeasure> for Measure {
    fn from(m: DiskBlobMeasure) -> Self {
        Measure::DiskBlobs(m)
    }
}

impl From<PolygonMeasure> for Measure {
    fn from(m: PolygonMeasure) -> Self {
        Measure::Polygon(m)
    }
}

impl From<GaussianMeasure> for Measure {
    fn from(m: GaussianMeasure) -> Self {
        Measure::Gaussian(m)
    }
}

impl Measure {
    /// Mass of the closed wedge `w`, in `[0, 1]`.
    pub fn wedge_mass(&self, w: &Wedge) -> Result<f64, MeasureError> {
        wedge_mass(self, w)
    }

    /// Mass of `{p : p·normal ≤ offset}`.
    pub fn halfplane_mass(&self, h: &Halfplane) -> f64 {
        let v = match self {
            Measure::DiskBlobs(m) => m.halfplane_mass(h),
            Measure::Polygon(m) => m.halfplane_mass(h),
            Measure::Gaussian(m) => m.halfplane_mass(h),
        };
        v.clamp(0.0, 1.0)
    }

    pub fn support_bounds(&self) -> SupportBounds {
        support_bounds(self)
    }

    /// Whether the support is connected, which makes halving sets unique.
    pub fn has_connected_support(&self) -> bool {
        match self {
            Measure::DiskBlobs(m) => m.blobs().len() == 1,
            Measure::Polygon(_) | Measure::Gaussian(_) => true,
        }
    }

    /// Image under `p ↦ λp + v`.
    pub fn transformed(&self, lambda: f64, v: Vector2) -> Self {
        match self {
            Measure::DiskBlobs(m) => Measure::DiskBlobs(m.transformed(lambda, v)),
            Measure::Polygon(m) => Measure::Polygon(m.transformed(lambda, v)),
            Measure::Gaussian(m) => Measure::Gaussian(m.transformed(lambda, v)),
        }
    }
}

/// Mass of the closed wedge `w` under `m`, clamped to `[0, 1]`.
pub fn wedge_mass(m: &Measure, w: &Wedge) -> Result<f64, MeasureError> {
    if w.is_halfplane() {
        return Ok(m.halfplane_mass(&Halfplane::from_straight_wedge(w)));
    }
    let v = if w.angle < std::f64::consts::PI {
        convex_wedge_mass(m, w)?
    } else {
        1.0 - convex_wedge_mass(m, &w.complement())?
    };
    Ok(v.clamp(0.0, 1.0))
}

fn convex_wedge_mass(m: &Measure, w: &Wedge) -> Result<f64, MeasureError> {
    debug_assert!(w.angle < std::f64::consts::PI + HALFPLANE_TOL);
    match m {
        Measure::DiskBlobs(d) => Ok(d.convex_wedge_mass(w)),
        Measure::Polygon(p) => Ok(polygon_wedge_mass(p, w)),
        Measure::Gaussian(g) => gaussian_wedge_mass(g, w),
    }
}

pub fn support_bounds(m: &Measure) -> SupportBounds {
    match m {
        Measure::DiskBlobs(d) => d.support_bounds(),
        Measure::Polygon(p) => p.support_bounds(),
        Measure::Gaussian(g) => g.support_bounds(),
    }
}

/// Smallest disk around the common bounding-box center that contains both
/// support bounds.
pub fn joint_support(a: &SupportBounds, b: &SupportBounds) -> SupportBounds {
    let lo = Vector2::new(
        (a.center.x - a.radius).min(b.center.x - b.radius),
        (a.center.y - a.radius).min(b.center.y - b.radius),
    );
    let hi = Vector2::new(
        (a.center.x + a.radius).max(b.center.x + b.radius),
        (a.center.y + a.radius).max(b.center.y + b.radius),
    );
    let center = (lo + hi) * 0.5;
    let radius = (center.dist(a.center) + a.radius).max(center.dist(b.center) + b.radius);
    SupportBounds { center, radius, exact: a.exact && b.exact }
}

/// Center and radius of the smallest axis-aligned box around `points`,
/// as a disk about the box center.
pub(crate) fn bbox_disk(points: impl Iterator<Item = (Vector2, f64)> + Clone) -> (Vector2, f64) {
    let mut lo = Vector2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vector2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (p, r) in points.clone() {
        lo.x = lo.x.min(p.x - r);
        lo.y = lo.y.min(p.y - r);
        hi.x = hi.x.max(p.x + r);
        hi.y = hi.y.max(p.y + r);
    }
    let center = (lo + hi) * 0.5;
    let radius = points.map(|(p, r)| center.dist(p) + r).fold(0.0, f64::max);
    (center, radius)
}

//! Uniform measure on a convex polygon.

use std::f64::consts::TAU;

use crate::geom::{ccw_angle, Halfplane, Vector2, Wedge};

use super::{MeasureError, SupportBounds};

/// Minimum cross product of consecutive edges for strict convexity.
pub const CONVEXITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonMeasure {
    vertices: Vec<Vector2>,
    area: f64,
}

impl PolygonMeasure {
    /// Validates a strictly convex, counter-clockwise vertex list.
    pub fn new(vertices: Vec<Vector2>) -> Result<Self, MeasureError> {
        let n = vertices.len();
        if n < 3 {
            return Err(MeasureError::TooFewVertices(n));
        }
        if let Some(index) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(MeasureError::NonFiniteVertex { index });
        }
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = vertices[i] - vertices[(i + n - 1) % n];
            let e1 = vertices[(i + 1) % n] - vertices[i];
            if e0.cross(e1) <= CONVEXITY_TOL {
                return Err(MeasureError::NotConvex { index: i });
            }
            turning += ccw_angle(e0, e1);
        }
        // Left turns that wind more than once describe a star, not a polygon.
        if (turning - TAU).abs() > 1e-9 {
            return Err(MeasureError::NotConvex { index: 0 });
        }
        let area = shoelace(&vertices);
        Ok(Self { vertices, area })
    }

    pub fn vertices(&self) -> &[Vector2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn halfplane_mass(&self, h: &Halfplane) -> f64 {
        shoelace(&clip(&self.vertices, h)) / self.area
    }

    pub fn support_bounds(&self) -> SupportBounds {
        let (center, radius) = super::bbox_disk(self.vertices.iter().map(|&v| (v, 0.0)));
        SupportBounds { center, radius, exact: true }
    }

    pub fn transformed(&self, lambda: f64, v: Vector2) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&p| p * lambda + v).collect(),
            area: self.area * lambda * lambda,
        }
    }
}

/// Mass of a wedge of angle at most π: clip by both boundary halfplanes,
/// then take the shoelace area.
pub fn polygon_wedge_mass(m: &PolygonMeasure, w: &Wedge) -> f64 {
    let left_of_lo = Halfplane::left_of(w.apex, w.dir_lo);
    let clipped = clip(&m.vertices, &left_of_lo);
    if w.is_halfplane() || clipped.len() < 3 {
        return (shoelace(&clipped) / m.area).clamp(0.0, 1.0);
    }
    let right_of_hi = Halfplane::left_of(w.apex, -w.dir_hi);
    (shoelace(&clip(&clipped, &right_of_hi)) / m.area).clamp(0.0, 1.0)
}

/// Sutherland–Hodgman clip of a convex polygon by one halfplane.
fn clip(poly: &[Vector2], h: &Halfplane) -> Vec<Vector2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return out;
    }
    let side = |p: Vector2| h.offset - p.dot(h.normal);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

fn shoelace(poly: &[Vector2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let o = poly[0];
    let mut twice = 0.0;
    for i in 1..n - 1 {
        twice += (poly[i] - o).cross(poly[i + 1] - o);
    }
    0.5 * twice
}

//! Finite mixtures of uniform disks.

use std::f64::consts::{PI, TAU};

use crate::geom::{dist_to_ray, point_in_wedge, Halfplane, Vector2, Wedge};

use super::{bbox_disk, MeasureError, SupportBounds};

/// Tolerance on the total weight.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskBlob {
    pub center: Vector2,
    pub radius: f64,
    pub weight: f64,
}

impl DiskBlob {
    pub const fn new(center: Vector2, radius: f64, weight: f64) -> Self {
        Self { center, radius, weight }
    }

    /// Fraction of this blob's mass inside the convex wedge `w`.
    pub fn convex_wedge_fraction(&self, w: &Wedge) -> f64 {
        disk_wedge_area(self.center, self.radius, w) / (PI * self.radius * self.radius)
    }

    pub fn halfplane_fraction(&self, h: &Halfplane) -> f64 {
        disk_halfplane_area(self.center, self.radius, h) / (PI * self.radius * self.radius)
    }
}

/// Uniform disks with positive weights summing to one; pairwise disjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskBlobMeasure {
    blobs: Vec<DiskBlob>,
}

impl DiskBlobMeasure {
    pub fn new(blobs: Vec<DiskBlob>) -> Result<Self, MeasureError> {
        if blobs.is_empty() {
            return Err(MeasureError::NoBlobs);
        }
        for (index, b) in blobs.iter().enumerate() {
            let reason = if !b.center.is_finite() {
                Some("center is not finite")
            } else if !(b.radius > 0.0 && b.radius.is_finite()) {
                Some("radius must be positive")
            } else if !(b.weight > 0.0 && b.weight.is_finite()) {
                Some("weight must be positive")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(MeasureError::InvalidBlob { index, reason: reason.into() });
            }
        }
        let sum: f64 = blobs.iter().map(|b| b.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(MeasureError::WeightSum { sum });
        }
        for a in 0..blobs.len() {
            for b in a + 1..blobs.len() {
                if blobs[a].center.dist(blobs[b].center) <= blobs[a].radius + blobs[b].radius {
                    return Err(MeasureError::OverlappingBlobs { a, b });
                }
            }
        }
        Ok(Self { blobs })
    }

    pub fn blobs(&self) -> &[DiskBlob] {
        &self.blobs
    }

    pub fn convex_wedge_mass(&self, w: &Wedge) -> f64 {
        self.blobs.iter().map(|b| b.weight * b.convex_wedge_fraction(w)).sum()
    }

    pub fn halfplane_mass(&self, h: &Halfplane) -> f64 {
        self.blobs.iter().map(|b| b.weight * b.halfplane_fraction(h)).sum()
    }

    pub fn support_bounds(&self) -> SupportBounds {
        let (center, radius) = bbox_disk(self.blobs.iter().map(|b| (b.center, b.radius)));
        SupportBounds { center, radius, exact: true }
    }

    pub fn transformed(&self, lambda: f64, v: Vector2) -> Self {
        Self {
            blobs: self
                .blobs
                .iter()
                .map(|b| DiskBlob::new(b.center * lambda + v, b.radius * lambda, b.weight))
                .collect(),
        }
    }
}

/// Area of the disk `{p : |p − c| ≤ r}` inside `{p : p·n ≤ offset}`.
pub fn disk_halfplane_area(center: Vector2, r: f64, h: &Halfplane) -> f64 {
    let d = h.offset - center.dot(h.normal);
    if d >= r {
        return PI * r * r;
    }
    if d <= -r {
        return 0.0;
    }
    r * r * (PI - (d / r).acos()) + d * (r * r - d * d).sqrt()
}

/// Area of a disk intersected with a wedge of angle at most π.
///
/// Green's theorem over the boundary of the intersection, with the disk
/// center as origin: each boundary ray contributes the chord it cuts and
/// each arc of the circle inside the wedge contributes a sector.
pub fn disk_wedge_area(center: Vector2, r: f64, w: &Wedge) -> f64 {
    let full = PI * r * r;
    if w.is_halfplane() {
        return disk_halfplane_area(center, r, &Halfplane::from_straight_wedge(w));
    }
    if dist_to_ray(center, w.apex, w.dir_lo) >= r && dist_to_ray(center, w.apex, w.dir_hi) >= r {
        return if point_in_wedge(w, center) { full } else { 0.0 };
    }

    let a = w.apex - center;
    let local = Wedge { apex: a, ..*w };
    let mut twice_area = 0.0;
    let mut crossings: Vec<f64> = Vec::with_capacity(4);

    for (dir, outward) in [(w.dir_lo, true), (w.dir_hi, false)] {
        let Some((t0, t1)) = ray_chord(a, dir, r) else { continue };
        let p = a + dir * t0;
        let q = a + dir * t1;
        twice_area += if outward { p.cross(q) } else { q.cross(p) };
        if t0 > 0.0 {
            crossings.push(p.angle());
        }
        crossings.push(q.angle());
    }

    if crossings.is_empty() {
        return if point_in_wedge(w, center) { full } else { 0.0 };
    }
    crossings.sort_by(f64::total_cmp);
    let n = crossings.len();
    for i in 0..n {
        let start = crossings[i];
        let mut end = if i + 1 < n { crossings[i + 1] } else { crossings[0] + TAU };
        if end < start {
            end += TAU;
        }
        let span = end - start;
        if span <= 0.0 {
            continue;
        }
        let mid = Vector2::from_angle(start + 0.5 * span) * r;
        if point_in_wedge(&local, mid) {
            twice_area += r * r * span;
        }
    }
    (0.5 * twice_area).clamp(0.0, full)
}

/// Parameter range `[t0, t1]` (`t0 ≥ 0`) where `a + t·dir` lies in the disk
/// of radius `r` about the origin.
fn ray_chord(a: Vector2, dir: Vector2, r: f64) -> Option<(f64, f64)> {
    let b = a.dot(dir);
    let c = a.norm_sq() - r * r;
    let disc = b * b - c;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t1 = -b + sq;
    if t1 <= 0.0 {
        return None;
    }
    let t0 = (-b - sq).max(0.0);
    Some((t0, t1))
}

//! Planar primitives: vectors, fans, wedges and halfplanes.
//!
//! Angles are carried as unit direction vectors. Polar angles are only
//! computed for validation and for bisectors, which keeps every predicate
//! free of 2π wraparound.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `|e| = 1` for direction vectors.
pub const UNIT_TOL: f64 = 1e-12;
/// Tolerance on the sum of fan angles.
pub const ANGLE_SUM_TOL: f64 = 1e-9;
/// Wedges whose angle is within this of π are treated as halfplanes.
pub const HALFPLANE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("a fan needs at least 2 directions, got {0}")]
    TooFewDirections(usize),
    #[error("direction {index} is the zero vector")]
    ZeroVector { index: usize },
    #[error("direction {index} is not finite")]
    NonFinite { index: usize },
    #[error("NotCounterClockwise: direction {index} does not turn counter-clockwise from direction {prev}")]
    NotCounterClockwise { index: usize, prev: usize },
    #[error("fan angles sum to {sum}, expected 2π")]
    AngleSumMismatch { sum: f64 },
    #[error("wedge index {index} out of range for a {k}-fan")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("wedge directions must be unit vectors and distinct")]
    DegenerateWedge,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector2 {
    pub x: f64,
    pub y: f64,
}

impl Vector2 {
    pub const ZERO: Vector2 = Vector2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at polar angle `theta` (radians).
    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn from_degrees(deg: f64) -> Self {
        Self::from_angle(deg.to_radians())
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-d cross product; positive when `o` is
    /// counter-clockwise from `self`.
    #[inline]
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self { x: self.x / n, y: self.y / n }
    }

    /// Left normal (rotation by +90°).
    #[inline]
    pub fn perp(self) -> Self {
        Self { x: -self.y, y: self.x }
    }

    #[inline]
    pub fn rotate(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c * self.x - s * self.y, y: s * self.x + c * self.y }
    }

    /// Polar angle in `(-π, π]`.
    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }
}

impl Add for Vector2 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self { x: self.x + o.x, y: self.y + o.y }
    }
}

impl AddAssign for Vector2 {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vector2 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Neg for Vector2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { x: -self.x, y: -self.y }
    }
}

impl Mul<f64> for Vector2 {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self { x: self.x * s, y: self.y * s }
    }
}

impl Mul<Vector2> for f64 {
    type Output = Vector2;
    #[inline]
    fn mul(self, v: Vector2) -> Vector2 {
        v * self
    }
}

impl From<[f64; 2]> for Vector2 {
    fn from(a: [f64; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl From<Vector2> for [f64; 2] {
    fn from(v: Vector2) -> Self {
        [v.x, v.y]
    }
}

/// Counter-clockwise turn from `a` to `b`, in `[0, 2π)`.
#[inline]
pub fn ccw_angle(a: Vector2, b: Vector2) -> f64 {
    let t = a.cross(b).atan2(a.dot(b));
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// Distance from `p` to the ray `origin + t·dir`, `t ≥ 0` (`dir` unit).
#[inline]
pub fn dist_to_ray(p: Vector2, origin: Vector2, dir: Vector2) -> f64 {
    let v = p - origin;
    if v.dot(dir) <= 0.0 {
        v.norm()
    } else {
        v.cross(dir).abs()
    }
}

/// Intersection of the lines `{p : p·n1 = c1}` and `{p : p·n2 = c2}`.
pub fn line_intersection(n1: Vector2, c1: f64, n2: Vector2, c2: f64) -> Option<Vector2> {
    let det = n1.cross(n2);
    if det.abs() < 1e-15 {
        return None;
    }
    // Cramer's rule on [n1; n2] p = [c1; c2].
    Some(Vector2::new((c1 * n2.y - c2 * n1.y) / det, (n1.x * c2 - n2.x * c1) / det))
}

/// A k-fan: ray directions `e_0..e_{k-1}` in counter-clockwise order.
/// Wedge `j` lies between `e_j` and `e_{j+1}` (indices cyclic).
#[derive(Debug, Clone, PartialEq)]
pub struct Fan {
    directions: Vec<Vector2>,
    angles: Vec<f64>,
}

impl Fan {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vector2] {
        &self.directions
    }

    pub fn direction(&self, j: usize) -> Vector2 {
        self.directions[j % self.len()]
    }

    /// Angle of wedge `j`.
    pub fn angle(&self, j: usize) -> f64 {
        self.angles[j % self.len()]
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Polar angles of the directions in degrees, in `[0, 360)`.
    pub fn degrees(&self) -> Vec<f64> {
        self.directions
            .iter()
            .map(|d| {
                let a = d.angle().to_degrees();
                if a < 0.0 {
                    a + 360.0
                } else {
                    a
                }
            })
            .collect()
    }

    /// Translate of wedge `j` with apex `t`.
    pub fn wedge(&self, j: usize, t: Vector2) -> Result<Wedge, GeomError> {
        wedge_of(self, j, t)
    }

    /// Pairs `(a, b)` with `e_b = -e_a` (within 1e-9), `a < b`.
    pub fn opposite_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        let mut out = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                if (self.directions[a] + self.directions[b]).norm() <= 1e-9 {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Validate and normalize a list of directions into a fan.
///
/// The input order is the fan's combinatorics: a list that is not already
/// counter-clockwise is rejected, never reordered.
pub fn fan_from_directions(dirs: &[Vector2]) -> Result<Fan, GeomError> {
    if dirs.len() < 2 {
        return Err(GeomError::TooFewDirections(dirs.len()));
    }
    let mut directions = Vec::with_capacity(dirs.len());
    for (index, d) in dirs.iter().enumerate() {
        if !d.is_finite() {
            return Err(GeomError::NonFinite { index });
        }
        let n = d.norm();
        if n == 0.0 {
            return Err(GeomError::ZeroVector { index });
        }
        directions.push(Vector2::new(d.x / n, d.y / n));
    }

    // Polar angles relative to e_0 must strictly increase within one turn.
    let mut prev_rel = 0.0;
    for index in 1..directions.len() {
        let rel = ccw_angle(directions[0], directions[index]);
        if rel <= prev_rel {
            return Err(GeomError::NotCounterClockwise { index, prev: index - 1 });
        }
        prev_rel = rel;
    }

    let k = directions.len();
    let angles: Vec<f64> = (0..k)
        .map(|j| ccw_angle(directions[j], directions[(j + 1) % k]))
        .collect();
    if let Some(index) = angles.iter().position(|&a| a <= 0.0) {
        return Err(GeomError::NotCounterClockwise { index: (index + 1) % k, prev: index });
    }
    let sum: f64 = angles.iter().sum();
    if (sum - TAU).abs() > ANGLE_SUM_TOL {
        return Err(GeomError::AngleSumMismatch { sum });
    }
    Ok(Fan { directions, angles })
}

/// Fan from polar angles in degrees.
pub fn fan_from_degrees(degrees: &[f64]) -> Result<Fan, GeomError> {
    let dirs: Vec<Vector2> = degrees.iter().map(|&d| Vector2::from_degrees(d)).collect();
    fan_from_directions(&dirs)
}

/// A closed angle: the apex, two boundary rays, and everything swept
/// counter-clockwise from `dir_lo` to `dir_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wedge {
    pub apex: Vector2,
    pub dir_lo: Vector2,
    pub dir_hi: Vector2,
    pub angle: f64,
}

impl Wedge {
    pub fn new(apex: Vector2, dir_lo: Vector2, dir_hi: Vector2) -> Result<Self, GeomError> {
        if (dir_lo.norm() - 1.0).abs() > UNIT_TOL || (dir_hi.norm() - 1.0).abs() > UNIT_TOL {
            return Err(GeomError::DegenerateWedge);
        }
        let angle = ccw_angle(dir_lo, dir_hi);
        if angle <= 0.0 {
            return Err(GeomError::DegenerateWedge);
        }
        Ok(Self { apex, dir_lo, dir_hi, angle })
    }

    #[inline]
    pub fn is_halfplane(&self) -> bool {
        (self.angle - PI).abs() <= HALFPLANE_TOL
    }

    #[inline]
    pub fn is_convex(&self) -> bool {
        self.angle <= PI + HALFPLANE_TOL
    }

    /// Inner bisector direction.
    #[inline]
    pub fn bisector(&self) -> Vector2 {
        self.dir_lo.rotate(0.5 * self.angle)
    }

    /// The same wedge with its apex moved to `apex`.
    #[inline]
    pub fn at(&self, apex: Vector2) -> Self {
        Self { apex, ..*self }
    }

    /// Closure of the set complement, sharing the apex.
    #[inline]
    pub fn complement(&self) -> Self {
        Self {
            apex: self.apex,
            dir_lo: self.dir_hi,
            dir_hi: self.dir_lo,
            angle: TAU - self.angle,
        }
    }

    #[inline]
    pub fn contains(&self, p: Vector2) -> bool {
        point_in_wedge(self, p)
    }

    /// Whether `other`, a translate of the same angle, is a subset of `self`.
    ///
    /// For a convex angle this holds iff the other apex lies in `self`. For a
    /// reflex angle `C` (complement of an open convex cone `D`) the
    /// translates of `C` contained in `C` are exactly those by `-closure(D)`.
    pub fn contains_translate(&self, other: &Wedge) -> bool {
        if self.is_convex() {
            self.contains(other.apex)
        } else {
            let stab = Wedge {
                apex: self.apex,
                dir_lo: -self.dir_hi,
                dir_hi: -self.dir_lo,
                angle: TAU - self.angle,
            };
            stab.contains(other.apex)
        }
    }
}

/// Wedge `j` of `fan` translated to apex `t`.
pub fn wedge_of(fan: &Fan, j: usize, t: Vector2) -> Result<Wedge, GeomError> {
    let k = fan.len();
    if j >= k {
        return Err(GeomError::IndexOutOfRange { index: j, k });
    }
    Ok(Wedge {
        apex: t,
        dir_lo: fan.directions[j],
        dir_hi: fan.directions[(j + 1) % k],
        angle: fan.angles[j],
    })
}

/// Central reflection through the apex: `apex - (w - apex)`.
///
/// Negating both directions is a rotation by π, so the counter-clockwise
/// order of the boundary rays and the angle are preserved.
pub fn opposite_wedge(w: &Wedge) -> Wedge {
    Wedge { apex: w.apex, dir_lo: -w.dir_lo, dir_hi: -w.dir_hi, angle: w.angle }
}

/// Closed membership. Convex wedges use two cross-product sign tests;
/// reflex wedges test for the open complement.
#[inline]
pub fn point_in_wedge(w: &Wedge, p: Vector2) -> bool {
    let v = p - w.apex;
    if w.angle <= PI {
        w.dir_lo.cross(v) >= 0.0 && v.cross(w.dir_hi) >= 0.0
    } else {
        !(w.dir_hi.cross(v) > 0.0 && v.cross(w.dir_lo) > 0.0)
    }
}

/// The set `{p : p·normal ≤ offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Halfplane {
    pub normal: Vector2,
    pub offset: f64,
}

impl Halfplane {
    pub fn new(normal: Vector2, offset: f64) -> Self {
        let n = normal.norm();
        Self { normal: normal * (1.0 / n), offset: offset / n }
    }

    #[inline]
    pub fn contains(&self, p: Vector2) -> bool {
        p.dot(self.normal) <= self.offset
    }

    /// The halfplane filled by a wedge of angle π.
    pub fn from_straight_wedge(w: &Wedge) -> Self {
        // Region left of dir_lo: (p - apex)·n ≥ 0 with n the left normal.
        let n = w.dir_lo.perp();
        Self { normal: -n, offset: -w.apex.dot(n) }
    }

    /// Halfplane containing the region to the left of the directed line
    /// through `through` with direction `dir`.
    pub fn left_of(through: Vector2, dir: Vector2) -> Self {
        let n = dir.perp();
        Self { normal: -n, offset: -through.dot(n) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn quad_fan() -> Fan {
        fan_from_directions(&[
            Vector2::new(1.0, 0.0),
            Vector2::new(0.0, 1.0),
            Vector2::new(-1.0, 0.0),
            Vector2::new(0.0, -1.0),
        ])
        .unwrap()
    }

    #[test]
    fn three_fan_angles() {
        let f = fan_from_directions(&[
            Vector2::new(1.0, 0.0),
            Vector2::new(0.0, 1.0),
            Vector2::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        ])
        .unwrap();
        assert!((f.angle(0) - PI / 2.0).abs() < 1e-12);
        assert!((f.angle(1) - 3.0 * PI / 4.0).abs() < 1e-12);
        assert!((f.angle(2) - 3.0 * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn two_fan_of_halfplanes() {
        let f = fan_from_directions(&[Vector2::new(1.0, 0.0), Vector2::new(-1.0, 0.0)]).unwrap();
        assert!((f.angle(0) - PI).abs() < 1e-12);
        assert!((f.angle(1) - PI).abs() < 1e-12);
        let w = wedge_of(&f, 0, Vector2::ZERO).unwrap();
        assert!(w.is_halfplane());
        assert!(w.contains(Vector2::new(0.3, 2.0)));
        assert!(!w.contains(Vector2::new(0.3, -2.0)));
    }

    #[test]
    fn clockwise_is_rejected() {
        let err = fan_from_directions(&[
            Vector2::new(1.0, 0.0),
            Vector2::new(0.0, -1.0),
            Vector2::new(-1.0, 0.0),
        ])
        .unwrap_err();
        assert_eq!(err, GeomError::NotCounterClockwise { index: 2, prev: 1 });
        assert!(err.to_string().contains("NotCounterClockwise"));
    }

    #[test]
    fn zero_and_duplicate_directions() {
        assert_eq!(
            fan_from_directions(&[Vector2::new(1.0, 0.0), Vector2::ZERO]).unwrap_err(),
            GeomError::ZeroVector { index: 1 }
        );
        assert!(matches!(
            fan_from_directions(&[
                Vector2::new(1.0, 0.0),
                Vector2::new(0.0, 1.0),
                Vector2::new(0.0, 2.0)
            ]),
            Err(GeomError::NotCounterClockwise { index: 2, .. })
        ));
        assert_eq!(
            fan_from_directions(&[Vector2::new(1.0, 0.0)]).unwrap_err(),
            GeomError::TooFewDirections(1)
        );
    }

    #[test]
    fn wedge_of_quadrants() {
        let f = quad_fan();
        let w = wedge_of(&f, 0, Vector2::ZERO).unwrap();
        assert!(w.contains(Vector2::new(1.0, 1.0)));
        assert!(!w.contains(Vector2::new(-1.0, 1.0)));
        let w4 = wedge_of(&f, 3, Vector2::new(2.0, 3.0)).unwrap();
        assert!(w4.contains(Vector2::new(3.0, 2.0)));
        assert!(!w4.contains(Vector2::new(3.0, 4.0)));
        assert_eq!(
            wedge_of(&f, 4, Vector2::ZERO).unwrap_err(),
            GeomError::IndexOutOfRange { index: 4, k: 4 }
        );
    }

    #[test]
    fn opposite_of_quadrant_and_halfplane() {
        let f = quad_fan();
        let w = wedge_of(&f, 0, Vector2::ZERO).unwrap();
        let o = opposite_wedge(&w);
        assert!(o.contains(Vector2::new(-1.0, -1.0)));
        assert!(!o.contains(Vector2::new(1.0, 1.0)));
        assert_eq!(o.angle, w.angle);

        let h = fan_from_directions(&[Vector2::new(1.0, 0.0), Vector2::new(-1.0, 0.0)]).unwrap();
        let up = wedge_of(&h, 0, Vector2::ZERO).unwrap();
        let down = opposite_wedge(&up);
        assert!(down.contains(Vector2::new(5.0, -1.0)));
        assert!(!down.contains(Vector2::new(5.0, 1.0)));

        let t = Wedge::new(Vector2::ZERO, Vector2::new(1.0, 0.0), Vector2::from_angle(0.75 * PI))
            .unwrap();
        let ot = opposite_wedge(&t);
        assert!((ot.angle - 0.75 * PI).abs() < 1e-15);
        assert_eq!(ot.dir_lo, -t.dir_lo);
    }

    #[test]
    fn boundary_is_closed_and_reflex_complement() {
        let f = quad_fan();
        let w = wedge_of(&f, 0, Vector2::ZERO).unwrap();
        assert!(w.contains(Vector2::new(1.0, 0.0)));
        assert!(w.contains(Vector2::ZERO));
        let reflex = Wedge::new(Vector2::ZERO, Vector2::new(0.0, 1.0), Vector2::new(1.0, 0.0)).unwrap();
        assert!((reflex.angle - 1.5 * PI).abs() < 1e-12);
        assert!(!reflex.contains(Vector2::new(1.0, 1.0)));
        assert!(reflex.contains(Vector2::new(1.0, 0.0)));
        assert!(reflex.contains(Vector2::new(-1.0, 0.5)));
    }

    #[test]
    fn reflex_translate_containment() {
        let reflex = Wedge::new(Vector2::ZERO, Vector2::new(0.0, 1.0), Vector2::new(1.0, 0.0)).unwrap();
        assert!(reflex.contains_translate(&reflex.at(Vector2::new(-1.0, -2.0))));
        assert!(!reflex.contains_translate(&reflex.at(Vector2::new(1.0, -1.0))));
        assert!(!reflex.contains_translate(&reflex.at(Vector2::new(1.0, 1.0))));
    }

    #[test]
    fn halfplane_from_straight_wedge() {
        let w = Wedge::new(Vector2::new(0.0, 2.0), Vector2::new(1.0, 0.0), Vector2::new(-1.0, 0.0)).unwrap();
        let h = Halfplane::from_straight_wedge(&w);
        assert!(h.contains(Vector2::new(7.0, 2.5)));
        assert!(!h.contains(Vector2::new(7.0, 1.5)));
    }
}

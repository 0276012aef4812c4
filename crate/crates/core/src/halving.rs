//! Halving lines, halving curves of wedge apexes, and the asymptotic
//! angles built from pairs of halving lines.
//!
//! Offsets of lines with direction `e` are measured along its left normal
//! `n = perp(e)`: the line is `{p : p·n = c}` and the halfplane
//! `{p : p·n ≤ c}` has mass nondecreasing in `c`.

use thiserror::Error;

use crate::geom::{
    line_intersection, opposite_wedge, wedge_of, Fan, GeomError, Halfplane, Vector2, Wedge,
};
use crate::measures::{Measure, MeasureError};
use crate::roots::itp;

/// Relative resolution of line offsets and apex positions.
pub const OFFSET_RESOLUTION: f64 = 1e-12;
/// Width of the band around boundary lines treated as "on the line".
pub const CONTAINMENT_BAND: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HalvingError {
    #[error("NoBracket: mass 1/2 is not attained along the search segment at s = {s}")]
    NoBracket { s: f64 },
    #[error("ParallelRays: wedge {j} is a halfplane, its boundary lines are parallel")]
    ParallelRays { j: usize },
    #[error("MixedAngles: cannot compare angles built from wedges {a} and {b}")]
    MixedAngles { a: usize, b: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// A line of given direction splitting a measure in half, with the full
/// interval of offsets that do so within tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalvingLine {
    pub direction: Vector2,
    pub normal: Vector2,
    pub offset: f64,
    pub interval: (f64, f64),
}

impl HalvingLine {
    /// The halfplane `{p·n ≤ offset}`.
    pub fn halfplane_at(&self, offset: f64) -> Halfplane {
        Halfplane { normal: self.normal, offset }
    }

    pub fn point(&self) -> Vector2 {
        self.normal * self.offset
    }

    /// Signed distance from `p` to the line, positive on the left.
    pub fn signed_distance(&self, p: Vector2) -> f64 {
        p.dot(self.normal) - self.offset
    }
}

/// Halving line of `m` with direction `direction` (unit).
pub fn halving_line(m: &Measure, direction: Vector2, tol: f64) -> HalvingLine {
    let normal = direction.perp();
    let sb = m.support_bounds();
    let center = sb.center.dot(normal);
    let pad = 1e-9 * sb.radius.max(1.0);
    let lo = center - sb.radius - pad;
    let hi = center + sb.radius + pad;
    let eps = OFFSET_RESOLUTION * sb.radius.max(center.abs()).max(f64::MIN_POSITIVE);
    let mass = |c: f64| m.halfplane_mass(&Halfplane { normal, offset: c });

    // First offset with mass ≥ 1/2 − tol, last offset with mass ≤ 1/2 + tol.
    let f_lo = |c: f64| mass(c) - (0.5 - tol);
    let first = itp(f_lo, lo, hi, f_lo(lo).min(-f64::MIN_POSITIVE), f_lo(hi).max(f64::MIN_POSITIVE), eps, 0.0);
    let f_hi = |c: f64| mass(c) - (0.5 + tol);
    let last = itp(f_hi, lo, hi, f_hi(lo).min(-f64::MIN_POSITIVE), f_hi(hi).max(f64::MIN_POSITIVE), eps, 0.0);
    let (a, b) = (first.pos, last.neg);
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    HalvingLine { direction, normal, offset: 0.5 * (a + b), interval: (a, b) }
}

/// A point of the halving curve of wedge `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub s: f64,
    pub apex: Vector2,
    pub mass_check: f64,
}

/// Coordinates for tracing the halving curve of wedge `j`: apexes are
/// `s·u + λ·b` with `b` the inner bisector and `u` its right normal, so that
/// large positive `s` approaches the halving line of `e_{j+1}`.
#[derive(Debug, Clone, Copy)]
pub struct CurveFrame {
    pub j: usize,
    pub bisector: Vector2,
    pub u: Vector2,
    template: Wedge,
    half_angle: f64,
}

impl CurveFrame {
    pub fn new(fan: &Fan, j: usize) -> Result<Self, HalvingError> {
        let template = wedge_of(fan, j, Vector2::ZERO)?;
        if template.is_halfplane() {
            return Err(HalvingError::ParallelRays { j });
        }
        let bisector = template.bisector();
        Ok(Self { j, bisector, u: -bisector.perp(), template, half_angle: 0.5 * template.angle })
    }

    pub fn apex(&self, s: f64, lambda: f64) -> Vector2 {
        self.u * s + self.bisector * lambda
    }

    pub fn wedge(&self, apex: Vector2) -> Wedge {
        self.template.at(apex)
    }

    /// Range of the bisector coordinate outside of which the wedge at
    /// `s·u + λ·b` provably holds all (λ below) or none (λ above) of the
    /// disk of radius `r` about `c`.
    pub fn lambda_bracket(&self, s: f64, c: Vector2, r: f64) -> (f64, f64) {
        let cb = c.dot(self.bisector);
        let beta = (c.dot(self.u) - s).abs();
        let pad = 1e-6 * r.max(1.0);
        let h = self.half_angle;
        if h < std::f64::consts::FRAC_PI_2 {
            (cb - (r + beta * h.cos()) / h.sin() - pad, cb + r + pad)
        } else {
            // The complement is an open cone of half-angle π − h about −b.
            let hc = std::f64::consts::PI - h;
            (cb - r - pad, cb + (r + beta * hc.cos()) / hc.sin() + pad)
        }
    }
}

/// Halving-curve point of `m` for wedge `j` on the line `apex·u = s`.
pub fn curve_point(m: &Measure, fan: &Fan, j: usize, s: f64, tol: f64) -> Result<CurvePoint, HalvingError> {
    let frame = CurveFrame::new(fan, j)?;
    curve_point_in(m, &frame, s, tol)
}

/// [`curve_point`] with a precomputed frame.
pub fn curve_point_in(m: &Measure, frame: &CurveFrame, s: f64, tol: f64) -> Result<CurvePoint, HalvingError> {
    let sb = m.support_bounds();
    let (lo, hi) = frame.lambda_bracket(s, sb.center, sb.radius);
    let mut err = None;
    let mut mass = |lambda: f64| match m.wedge_mass(&frame.wedge(frame.apex(s, lambda))) {
        Ok(v) => v,
        Err(e) => {
            err = Some(e);
            f64::NAN
        }
    };
    let m_lo = mass(lo);
    let m_hi = mass(hi);
    if m_lo < 0.5 - tol || m_hi > 0.5 + tol {
        return Err(HalvingError::NoBracket { s });
    }
    let eps = OFFSET_RESOLUTION * (hi - lo).max(sb.radius);
    // Mass is nonincreasing in λ. First λ with mass ≤ 1/2 + tol:
    let a = if m_lo > 0.5 + tol {
        itp(|l| mass(l) - (0.5 + tol), lo, hi, m_lo - (0.5 + tol), -f64::MIN_POSITIVE, eps, 0.0).neg
    } else {
        lo
    };
    // Last λ with mass ≥ 1/2 − tol:
    let b = if m_hi < 0.5 - tol {
        itp(|l| mass(l) - (0.5 - tol), lo, hi, f64::MIN_POSITIVE, m_hi - (0.5 - tol), eps, 0.0).pos
    } else {
        hi
    };
    let lambda = 0.5 * (a + b);
    let apex = frame.apex(s, lambda);
    let mass_check = mass(lambda);
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(CurvePoint { s, apex, mass_check })
}

/// Asymptotic angle of measure `source_i` for wedge `j`: the translate of
/// `−F_j` bounded by the halving lines of `e_j` and `e_{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaAngle {
    pub wedge: Wedge,
    pub source_j: usize,
    pub source_i: usize,
    /// Offsets of the two bounding halving lines (for `e_j`, `e_{j+1}`).
    pub offsets: (f64, f64),
}

/// The α angle from two precomputed halving lines.
pub fn alpha_from_lines(
    fan: &Fan,
    j: usize,
    source_i: usize,
    l_j: &HalvingLine,
    l_next: &HalvingLine,
) -> Result<AlphaAngle, HalvingError> {
    let proto = wedge_of(fan, j, Vector2::ZERO)?;
    if proto.is_halfplane() {
        return Err(HalvingError::ParallelRays { j });
    }
    let apex = line_intersection(l_j.normal, l_j.offset, l_next.normal, l_next.offset)
        .ok_or(HalvingError::ParallelRays { j })?;
    Ok(AlphaAngle {
        wedge: opposite_wedge(&proto.at(apex)),
        source_j: j,
        source_i,
        offsets: (l_j.offset, l_next.offset),
    })
}

pub fn alpha_angle(m: &Measure, fan: &Fan, j: usize, tol: f64) -> Result<AlphaAngle, HalvingError> {
    let k = fan.len();
    if j >= k {
        return Err(GeomError::IndexOutOfRange { index: j, k }.into());
    }
    if fan.wedge(j, Vector2::ZERO)?.is_halfplane() {
        return Err(HalvingError::ParallelRays { j });
    }
    let l_j = halving_line(m, fan.direction(j), tol);
    let l_next = halving_line(m, fan.direction(j + 1), tol);
    alpha_from_lines(fan, j, 0, &l_j, &l_next)
}

/// For a straight wedge the α angle degenerates to the halfplane
/// `{p·n ≤ c}` to the right of the halving line of `e_j`.
pub fn alpha_halfplane(m: &Measure, fan: &Fan, j: usize, tol: f64) -> Halfplane {
    let l = halving_line(m, fan.direction(j), tol);
    l.halfplane_at(l.offset)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Relation {
    /// The first angle is contained in the second.
    FirstInside,
    /// The second angle is contained in the first.
    SecondInside,
    /// Neither contains the other.
    Cross,
    /// A boundary line is common to both.
    SharedRay,
}

impl Relation {
    pub fn is_candidate(self) -> bool {
        matches!(self, Relation::Cross | Relation::SharedRay)
    }

    pub fn flipped(self) -> Self {
        match self {
            Relation::FirstInside => Relation::SecondInside,
            Relation::SecondInside => Relation::FirstInside,
            r => r,
        }
    }
}

/// How two translates of the same angle sit relative to each other.
pub fn containment_relation(a: &AlphaAngle, b: &AlphaAngle) -> Result<Relation, HalvingError> {
    if a.source_j != b.source_j
        || (a.wedge.dir_lo - b.wedge.dir_lo).norm() > 1e-12
        || (a.wedge.dir_hi - b.wedge.dir_hi).norm() > 1e-12
    {
        return Err(HalvingError::MixedAngles { a: a.source_j, b: b.source_j });
    }
    let band = CONTAINMENT_BAND * (1.0 + a.wedge.apex.norm().max(b.wedge.apex.norm()));
    let v = b.wedge.apex - a.wedge.apex;
    if a.wedge.dir_lo.cross(v).abs() <= band || a.wedge.dir_hi.cross(v).abs() <= band {
        return Ok(Relation::SharedRay);
    }
    Ok(if a.wedge.contains_translate(&b.wedge) {
        Relation::SecondInside
    } else if b.wedge.contains_translate(&a.wedge) {
        Relation::FirstInside
    } else {
        Relation::Cross
    })
}

/// Relation of the two α angles of a straight wedge, from the offsets of
/// the two halving lines.
pub fn halfplane_relation(c1: f64, c2: f64) -> Relation {
    let band = CONTAINMENT_BAND * (1.0 + c1.abs().max(c2.abs()));
    if (c1 - c2).abs() <= band {
        Relation::SharedRay
    } else if c1 < c2 {
        Relation::FirstInside
    } else {
        Relation::SecondInside
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fan_from_degrees;
    use crate::measures::{DiskBlob, DiskBlobMeasure, GaussianMeasure, PolygonMeasure};

    const TOL: f64 = 1e-8;

    fn std_gauss() -> Measure {
        GaussianMeasure::new(Vector2::ZERO, 1.0).unwrap().into()
    }

    fn quad_fan() -> Fan {
        fan_from_degrees(&[0.0, 90.0, 180.0, 270.0]).unwrap()
    }

    #[test]
    fn gaussian_halving_lines_pass_through_mean() {
        let m = std_gauss();
        for deg in [0.0, 33.0, 145.0, 271.0] {
            let l = halving_line(&m, Vector2::from_degrees(deg), TOL);
            assert!(l.offset.abs() < 1e-12, "{deg}: {}", l.offset);
            assert!(l.interval.1 - l.interval.0 < 1e-7);
        }
    }

    #[test]
    fn square_halving_line() {
        let m: Measure = PolygonMeasure::new(vec![
            Vector2::new(2.5, 4.5),
            Vector2::new(3.5, 4.5),
            Vector2::new(3.5, 5.5),
            Vector2::new(2.5, 5.5),
        ])
        .unwrap()
        .into();
        let l = halving_line(&m, Vector2::new(1.0, 0.0), TOL);
        assert!((l.offset - 5.0).abs() < 1e-10);
    }

    #[test]
    fn gap_in_support_gives_wide_interval() {
        let m: Measure = DiskBlobMeasure::new(vec![
            DiskBlob::new(Vector2::new(0.0, -1.0), 0.1, 0.5),
            DiskBlob::new(Vector2::new(0.0, 1.0), 0.1, 0.5),
        ])
        .unwrap()
        .into();
        let l = halving_line(&m, Vector2::new(1.0, 0.0), TOL);
        assert!((l.interval.0 + 0.9).abs() < 1e-5 && (l.interval.1 - 0.9).abs() < 1e-5);
        assert!(l.offset.abs() < 1e-9);
    }

    #[test]
    fn curve_point_on_diagonal_for_centered_gaussian() {
        let m = std_gauss();
        let p = curve_point(&m, &quad_fan(), 0, 0.0, TOL).unwrap();
        assert!((p.apex.x - p.apex.y).abs() < 1e-9);
        assert!(p.apex.x < 0.0);
        assert!((p.mass_check - 0.5).abs() <= TOL);
    }

    #[test]
    fn curve_point_far_out_approaches_halving_lines() {
        let m: Measure = PolygonMeasure::new(vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(2.0, 0.0),
            Vector2::new(1.0, 1.5),
        ])
        .unwrap()
        .into();
        let fan = fan_from_degrees(&[10.0, 100.0, 230.0]).unwrap();
        let r = m.support_bounds().radius;
        for j in 0..3 {
            let frame = CurveFrame::new(&fan, j).unwrap();
            let s0 = m.support_bounds().center.dot(frame.u);
            let plus = curve_point_in(&m, &frame, s0 + 10.0 * r, TOL).unwrap();
            let minus = curve_point_in(&m, &frame, s0 - 10.0 * r, TOL).unwrap();
            let l_next = halving_line(&m, fan.direction(j + 1), TOL);
            let l_j = halving_line(&m, fan.direction(j), TOL);
            assert!(l_next.signed_distance(plus.apex).abs() < 1e-6);
            assert!(l_j.signed_distance(minus.apex).abs() < 1e-6);
        }
    }

    #[test]
    fn reflex_wedge_curve_point() {
        let m = std_gauss();
        let fan = fan_from_degrees(&[0.0, 90.0, 135.0]).unwrap();
        let p = curve_point(&m, &fan, 2, 0.3, TOL).unwrap();
        let w = fan.wedge(2, p.apex).unwrap();
        assert!(w.angle > std::f64::consts::PI);
        assert!((m.wedge_mass(&w).unwrap() - 0.5).abs() <= TOL);
    }

    #[test]
    fn straight_wedges_are_refused() {
        let fan = fan_from_degrees(&[0.0, 180.0, 270.0]).unwrap();
        assert_eq!(
            curve_point(&std_gauss(), &fan, 0, 0.0, TOL).unwrap_err(),
            HalvingError::ParallelRays { j: 0 }
        );
        assert_eq!(
            alpha_angle(&std_gauss(), &fan, 0, TOL).unwrap_err(),
            HalvingError::ParallelRays { j: 0 }
        );
        let h = alpha_halfplane(&std_gauss(), &fan, 0, TOL);
        assert!(h.contains(Vector2::new(0.0, -1.0)));
    }

    #[test]
    fn alpha_of_centered_gaussian_is_third_quadrant() {
        let a = alpha_angle(&std_gauss(), &quad_fan(), 0, TOL).unwrap();
        assert!(a.wedge.apex.norm() < 1e-12);
        assert!(a.wedge.contains(Vector2::new(-1.0, -1.0)));
        assert!(!a.wedge.contains(Vector2::new(1.0, 1.0)));
    }

    #[test]
    fn relations() {
        let fan = quad_fan();
        let m1 = std_gauss();
        let a = alpha_angle(&m1, &fan, 0, TOL).unwrap();
        assert_eq!(containment_relation(&a, &a).unwrap(), Relation::SharedRay);
        let shift = |v: Vector2| {
            let m = m1.transformed(1.0, v);
            alpha_angle(&m, &fan, 0, TOL).unwrap()
        };
        // Third-quadrant angles: the one whose apex lies inside the other is contained.
        assert_eq!(containment_relation(&a, &shift(Vector2::new(-1.0, -1.0))).unwrap(), Relation::SecondInside);
        assert_eq!(containment_relation(&a, &shift(Vector2::new(1.0, 1.0))).unwrap(), Relation::FirstInside);
        assert_eq!(containment_relation(&a, &shift(Vector2::new(1.0, -1.0))).unwrap(), Relation::Cross);
        let other = alpha_angle(&m1, &fan, 1, TOL).unwrap();
        assert!(matches!(containment_relation(&a, &other), Err(HalvingError::MixedAngles { .. })));
    }
}

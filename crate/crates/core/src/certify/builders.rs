//! Constructions of fan/measure pairs without an equipartitioning wedge.
//!
//! Point masses are smoothed into small disks. Placements that the
//! constructions only describe qualitatively are parameters; the defaults
//! are the ones the verifier certifies.

use serde::{Deserialize, Serialize};

use crate::geom::{fan_from_degrees, Fan, Vector2};
use crate::measures::{DiskBlob, DiskBlobMeasure, GaussianMeasure, Measure};

use super::CertifyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    #[serde(rename = "FIG1_4FAN")]
    Fig1FourFan,
    #[serde(rename = "POLYGON_2KFAN")]
    Polygon2kFan,
    #[serde(rename = "ARBITRARY_4FAN")]
    Arbitrary4Fan,
    GaussianPair,
}

impl Family {
    /// Name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            Family::Fig1FourFan => "fig1",
            Family::Polygon2kFan => "polygon-2kfan",
            Family::Arbitrary4Fan => "arb4fan",
            Family::GaussianPair => "gaussian-pair",
        }
    }
}

/// Family parameters as built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub scale: f64,
    pub blob_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub placement: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleConfig {
    pub fan: Fan,
    pub m1: Measure,
    pub m2: Measure,
    pub family: Family,
    pub params: Params,
}

impl CounterexampleConfig {
    /// The same configuration under `p ↦ λp`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut params = self.params.clone();
        params.scale *= lambda;
        params.blob_radius *= lambda;
        Self {
            fan: self.fan.clone(),
            m1: self.m1.transformed(lambda, Vector2::ZERO),
            m2: self.m2.transformed(lambda, Vector2::ZERO),
            family: self.family,
            params,
        }
    }
}

/// Default blob radius for a given scale.
pub fn default_blob_radius(scale: f64) -> f64 {
    scale / 200.0
}

fn check_radius(scale: f64, blob_radius: f64) -> Result<(), CertifyError> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(CertifyError::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    let max = scale / 100.0;
    if blob_radius.is_nan() || blob_radius <= 0.0 || blob_radius > max {
        return Err(CertifyError::BlobRadiusTooLarge { radius: blob_radius, max });
    }
    Ok(())
}

fn equal_blobs(points: &[Vector2], r: f64) -> Result<Measure, CertifyError> {
    let w = 1.0 / points.len() as f64;
    let blobs = points.iter().map(|&c| DiskBlob::new(c, r, w)).collect();
    Ok(DiskBlobMeasure::new(blobs)?.into())
}

/// Vertices of a regular `n`-gon of circumradius `r` about the origin with
/// a horizontal bottom side.
pub fn regular_polygon(n: usize, r: f64) -> Vec<Vector2> {
    let base = -90.0 - 180.0 / n as f64;
    (0..n).map(|i| Vector2::from_degrees(base + 360.0 * i as f64 / n as f64) * r).collect()
}

/// Placement of the two outer blue points of the triangle construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Placement {
    /// Distance of the outer blue points beyond the bottom vertices, in
    /// units of scale, along the outward bisectors.
    pub blue_offset: f64,
}

impl Default for Fig1Placement {
    fn default() -> Self {
        Self { blue_offset: 0.3 }
    }
}

/// Red mass at the side midpoints of a regular triangle, blue mass at its
/// center and just outside its two bottom vertices; the fan's rays are
/// parallel to the triangle's sides, with the straight angle on top.
pub fn build_fig1_4fan(scale: f64, blob_radius: f64) -> Result<CounterexampleConfig, CertifyError> {
    build_fig1_4fan_with(scale, blob_radius, &Fig1Placement::default())
}

pub fn build_fig1_4fan_with(
    scale: f64,
    blob_radius: f64,
    placement: &Fig1Placement,
) -> Result<CounterexampleConfig, CertifyError> {
    check_radius(scale, blob_radius)?;
    let v = regular_polygon(3, scale);
    let red: Vec<Vector2> = (0..3).map(|i| (v[i] + v[(i + 1) % 3]) * 0.5).collect();
    let out = 1.0 + placement.blue_offset;
    let blue = vec![Vector2::ZERO, v[0] * out, v[1] * out];
    Ok(CounterexampleConfig {
        fan: fan_from_degrees(&[0.0, 180.0, 240.0, 300.0])?,
        m1: equal_blobs(&red, blob_radius)?,
        m2: equal_blobs(&blue, blob_radius)?,
        family: Family::Fig1FourFan,
        params: Params {
            scale,
            blob_radius,
            k: None,
            placement: vec![("blue_offset".into(), placement.blue_offset)],
        },
    })
}

/// Blue placement for the regular-polygon family, in units of scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygonPlacement {
    /// Radius of the circle carrying the `k − 1` inner points.
    pub inner_radius: f64,
    /// Distance of the `k` outer points from the center.
    pub outer_distance: f64,
    /// Polar angles (degrees) of the first and last outer points.
    pub outer_arc: (f64, f64),
}

impl Default for PolygonPlacement {
    fn default() -> Self {
        Self { inner_radius: 0.1, outer_distance: 6.0, outer_arc: (190.0, 350.0) }
    }
}

/// Fan of one straight angle followed by `2k − 1` equal angles; red mass on
/// a regular `(2k − 1)`-gon (side midpoints for even `k`, vertices for odd
/// `k`); blue mass with `k − 1` points near the center and `k` points far
/// below the bottom side.
pub fn build_polygon_2kfan(k: usize, scale: f64, blob_radius: f64) -> Result<CounterexampleConfig, CertifyError> {
    build_polygon_2kfan_with(k, scale, blob_radius, &PolygonPlacement::default())
}

pub fn build_polygon_2kfan_with(
    k: usize,
    scale: f64,
    blob_radius: f64,
    placement: &PolygonPlacement,
) -> Result<CounterexampleConfig, CertifyError> {
    if k < 2 {
        return Err(CertifyError::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    check_radius(scale, blob_radius)?;
    let n = 2 * k - 1;
    let step = 180.0 / n as f64;
    let degrees: Vec<f64> =
        std::iter::once(0.0).chain((0..n).map(|i| 180.0 + step * i as f64)).collect();

    let v = regular_polygon(n, scale);
    let red: Vec<Vector2> = if k.is_multiple_of(2) {
        (0..n).map(|i| (v[i] + v[(i + 1) % n]) * 0.5).collect()
    } else {
        v
    };

    let mut blue = Vec::with_capacity(n);
    if k == 2 {
        blue.push(Vector2::ZERO);
    } else {
        for i in 0..k - 1 {
            let a = 360.0 * i as f64 / (k - 1) as f64;
            blue.push(Vector2::from_degrees(a) * (placement.inner_radius * scale));
        }
    }
    let (a0, a1) = placement.outer_arc;
    for i in 0..k {
        let a = a0 + (a1 - a0) * i as f64 / (k - 1) as f64;
        blue.push(Vector2::from_degrees(a) * (placement.outer_distance * scale));
    }

    Ok(CounterexampleConfig {
        fan: fan_from_degrees(&degrees)?,
        m1: equal_blobs(&red, blob_radius)?,
        m2: equal_blobs(&blue, blob_radius)?,
        family: Family::Polygon2kFan,
        params: Params {
            scale,
            blob_radius,
            k: Some(k),
            placement: vec![
                ("inner_radius".into(), placement.inner_radius),
                ("outer_distance".into(), placement.outer_distance),
                ("outer_arc_start".into(), a0),
                ("outer_arc_end".into(), a1),
            ],
        },
    })
}

/// Distances (in units of scale) of the near, middle and far points of the
/// arbitrary 4-fan construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arbitrary4Placement {
    pub near: f64,
    pub middle: f64,
    pub far: f64,
}

impl Default for Arbitrary4Placement {
    fn default() -> Self {
        Self { near: 0.1, middle: 10.0, far: 100.0 }
    }
}

/// Whether polar angle `a` lies strictly inside the counter-clockwise arc
/// from `lo` to `hi` (degrees).
fn angle_inside(a: f64, lo: f64, hi: f64) -> bool {
    let d = (a - lo).rem_euclid(360.0);
    let w = (hi - lo).rem_euclid(360.0);
    d > 0.0 && d < w
}

fn mid_angle(lo: f64, hi: f64) -> f64 {
    (lo + 0.5 * (hi - lo).rem_euclid(360.0)).rem_euclid(360.0)
}

/// For a 4-fan without opposite rays: relabel so that `−F_1 ⊂ F_3`, put
/// one red point at the origin, two blue points near it in the two
/// components of `F_3 ∖ (−F_1)`, two red points farther out in `F_2` and
/// `F_4`, and one blue point very far out in `F_1`.
pub fn build_arbitrary_4fan(fan: &Fan, scale: f64, blob_radius: f64) -> Result<CounterexampleConfig, CertifyError> {
    build_arbitrary_4fan_with(fan, scale, blob_radius, &Arbitrary4Placement::default())
}

pub fn build_arbitrary_4fan_with(
    fan: &Fan,
    scale: f64,
    blob_radius: f64,
    placement: &Arbitrary4Placement,
) -> Result<CounterexampleConfig, CertifyError> {
    if fan.len() != 4 {
        return Err(CertifyError::InvalidParameter(format!("expected a 4-fan, got {} rays", fan.len())));
    }
    if let Some(&(a, b)) = fan.opposite_pairs().first() {
        return Err(CertifyError::HasOppositeRays { a, b });
    }
    check_radius(scale, blob_radius)?;
    let deg = fan.degrees();
    let e = |a: usize, i: usize| deg[(a + i) % 4];
    let a = (0..4)
        .find(|&a| {
            angle_inside((e(a, 0) + 180.0) % 360.0, e(a, 2), e(a, 3))
                && angle_inside((e(a, 1) + 180.0) % 360.0, e(a, 2), e(a, 3))
        })
        .ok_or_else(|| CertifyError::InvalidParameter("no angle's reflection fits in the opposite angle".into()))?;
    let e = |i: usize| e(a, i);
    let at = |angle: f64, d: f64| Vector2::from_degrees(angle) * (d * scale);

    // Components of F_3 ∖ (−F_1).
    let blue_near = [
        at(mid_angle(e(2), (e(0) + 180.0) % 360.0), placement.near),
        at(mid_angle((e(1) + 180.0) % 360.0, e(3)), placement.near),
    ];
    // (−F_3) ∖ F_1 has components (e_2 + π, e_0) and (e_1, e_3 + π); the
    // first overlaps F_4 = (e_3, e_0), the second F_2 = (e_1, e_2).
    let in_f4 = intersect_arcs((e(2) + 180.0) % 360.0, e(0), e(3), e(0));
    let in_f2 = intersect_arcs(e(1), (e(3) + 180.0) % 360.0, e(1), e(2));
    let red = vec![
        Vector2::ZERO,
        at(mid_angle(in_f4.0, in_f4.1), placement.middle),
        at(mid_angle(in_f2.0, in_f2.1), placement.middle),
    ];
    let blue = vec![blue_near[0], blue_near[1], at(mid_angle(e(0), e(1)), placement.far)];

    Ok(CounterexampleConfig {
        fan: fan.clone(),
        m1: equal_blobs(&red, blob_radius)?,
        m2: equal_blobs(&blue, blob_radius)?,
        family: Family::Arbitrary4Fan,
        params: Params {
            scale,
            blob_radius,
            k: None,
            placement: vec![
                ("near".into(), placement.near),
                ("middle".into(), placement.middle),
                ("far".into(), placement.far),
            ],
        },
    })
}

/// Intersection of two overlapping counter-clockwise arcs, as one arc.
fn intersect_arcs(a0: f64, a1: f64, b0: f64, b1: f64) -> (f64, f64) {
    let start = if a0 == b0 || angle_inside(a0, b0, b1) { a0 } else { b0 };
    let end = if a1 == b1 || angle_inside(a1, b0, b1) { a1 } else { b1 };
    (start, end)
}

/// Standard Gaussians with sigma 1 and 2 and a common mean at the origin,
/// with the quadrant fan.
pub fn build_gaussian_pair() -> CounterexampleConfig {
    build_gaussian_pair_with(fan_from_degrees(&[0.0, 90.0, 180.0, 270.0]).expect("quadrant fan"))
}

pub fn build_gaussian_pair_with(fan: Fan) -> CounterexampleConfig {
    CounterexampleConfig {
        fan,
        m1: GaussianMeasure::new(Vector2::ZERO, 1.0).expect("valid").into(),
        m2: GaussianMeasure::new(Vector2::ZERO, 2.0).expect("valid").into(),
        family: Family::GaussianPair,
        params: Params { scale: 2.0, blob_radius: 0.0, k: None, placement: Vec::new() },
    }
}

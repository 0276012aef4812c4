//! Equipartition search.
//!
//! For each wedge index the asymptotic angles of the two measures are
//! compared. Indices where neither angle contains the other are candidates:
//! there the halving curve of the first measure must cross the halving set
//! of the second, and a sign change of
//! `g(s) = μ₂(wedge at curve point of μ₁ at s) − 1/2` is bracketed and
//! refined. Straight (π) wedges reduce to comparing halving lines.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Fan, GeomError, Vector2};
use crate::halving::{
    alpha_from_lines, containment_relation, curve_point_in, halfplane_relation, halving_line,
    CurveFrame, HalvingError, HalvingLine, Relation,
};
use crate::measures::{joint_support, Measure, MeasureError};
use crate::roots::itp;

/// Scan resolution for bracketing `g`.
pub const SCAN_STEPS: usize = 512;
/// Number of ×4 scan refinements after the first pass.
pub const SCAN_REFINEMENTS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FanClass {
    /// An odd number of angles.
    Odd,
    /// Closed under negation with a multiple of four angles.
    SymmetricEven,
    /// Two opposite rays with an even number of angles on one side.
    OppositeRaysEven,
    Other,
}

impl FanClass {
    /// Whether a solution is guaranteed for measures with connected support.
    pub fn guarantees_solution(self) -> bool {
        self != FanClass::Other
    }
}

pub fn classify_fan(fan: &Fan) -> FanClass {
    let k = fan.len();
    if k % 2 == 1 {
        return FanClass::Odd;
    }
    let pairs = fan.opposite_pairs();
    if k.is_multiple_of(4) && pairs.len() * 2 == k {
        return FanClass::SymmetricEven;
    }
    if pairs.iter().any(|&(a, b)| (b - a).is_multiple_of(2) || (k - (b - a)).is_multiple_of(2)) {
        return FanClass::OppositeRaysEven;
    }
    FanClass::Other
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub relations: Vec<Relation>,
    pub candidates: Vec<usize>,
    pub alternating: bool,
    pub fan_class: FanClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    CurveIntersection,
    SharedRay,
    HalfplaneDirect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquipartitionResult {
    pub j: usize,
    pub t: Vector2,
    pub residuals: (f64, f64),
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureDiagnostic {
    pub parity: ParityReport,
    /// Wedge indices searched, in order.
    pub tried: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("NoEquipartitionFound: {}", .0.message)]
    NoEquipartitionFound(Box<FailureDiagnostic>),
    #[error(transparent)]
    Halving(#[from] HalvingError),
}

impl From<GeomError> for SolverError {
    fn from(e: GeomError) -> Self {
        SolverError::Halving(e.into())
    }
}

impl From<MeasureError> for SolverError {
    fn from(e: MeasureError) -> Self {
        SolverError::Halving(e.into())
    }
}

/// Halving lines of both measures for every fan direction.
struct Lines {
    first: Vec<HalvingLine>,
    second: Vec<HalvingLine>,
}

impl Lines {
    fn new(fan: &Fan, m1: &Measure, m2: &Measure, tol: f64) -> Self {
        let dirs = fan.directions();
        Self {
            first: dirs.iter().map(|&d| halving_line(m1, d, tol)).collect(),
            second: dirs.iter().map(|&d| halving_line(m2, d, tol)).collect(),
        }
    }
}

fn relations(fan: &Fan, lines: &Lines) -> Result<Vec<Relation>, HalvingError> {
    let k = fan.len();
    (0..k)
        .map(|j| {
            let next = (j + 1) % k;
            if fan.wedge(j, Vector2::ZERO)?.is_halfplane() {
                return Ok(halfplane_relation(lines.first[j].offset, lines.second[j].offset));
            }
            let a = alpha_from_lines(fan, j, 0, &lines.first[j], &lines.first[next])?;
            let b = alpha_from_lines(fan, j, 1, &lines.second[j], &lines.second[next])?;
            containment_relation(&a, &b)
        })
        .collect()
}

/// Whether each pair of cyclically adjacent non-candidate relations flips.
pub fn is_alternating(relations: &[Relation]) -> bool {
    let k = relations.len();
    (0..k).all(|j| {
        let (a, b) = (relations[j], relations[(j + 1) % k]);
        a.is_candidate() || b.is_candidate() || a != b
    })
}

fn report_from(fan: &Fan, lines: &Lines) -> Result<ParityReport, HalvingError> {
    let relations = relations(fan, lines)?;
    let candidates = (0..relations.len()).filter(|&j| relations[j].is_candidate()).collect();
    Ok(ParityReport {
        alternating: is_alternating(&relations),
        relations,
        candidates,
        fan_class: classify_fan(fan),
    })
}

pub fn parity_report(fan: &Fan, m1: &Measure, m2: &Measure, tol: f64) -> Result<ParityReport, HalvingError> {
    report_from(fan, &Lines::new(fan, m1, m2, tol))
}

fn truncation_note(m1: &Measure, m2: &Measure) -> Option<String> {
    let inexact = |m: &Measure| !m.support_bounds().exact;
    (inexact(m1) || inexact(m2)).then(|| {
        "support of a Gaussian measure is truncated to a finite radius for the search; \
         residuals are evaluated with the untruncated measure"
            .to_string()
    })
}

/// Search for `(j, t)` with `|μ_i(t + F_j) − 1/2| ≤ tol` for both measures.
pub fn solve_equipartition(
    fan: &Fan,
    m1: &Measure,
    m2: &Measure,
    tol: f64,
) -> Result<EquipartitionResult, SolverError> {
    let lines = Lines::new(fan, m1, m2, tol);
    let parity = report_from(fan, &lines)?;
    let k = fan.len();
    let order: Vec<usize> = parity
        .candidates
        .iter()
        .copied()
        .chain((0..k).filter(|j| !parity.candidates.contains(j)))
        .collect();

    let mut tried = Vec::new();
    for &j in &order {
        tried.push(j);
        let found = if fan.wedge(j, Vector2::ZERO)?.is_halfplane() {
            halfplane_direct(j, &lines)
        } else {
            let mut hit = None;
            if parity.relations[j] == Relation::SharedRay {
                hit = walk_shared_line(fan, j, m1, m2, &lines, tol)?;
            }
            if hit.is_none() {
                hit = curve_intersection(fan, j, m1, m2, tol)?;
            }
            hit
        };
        if let Some((t, method)) = found {
            let w = fan.wedge(j, t)?;
            let residuals = ((m1.wedge_mass(&w)? - 0.5).abs(), (m2.wedge_mass(&w)? - 0.5).abs());
            if residuals.0 <= tol && residuals.1 <= tol {
                return Ok(EquipartitionResult {
                    j,
                    t,
                    residuals,
                    method,
                    truncation_note: truncation_note(m1, m2),
                });
            }
        }
    }
    let message = if parity.candidates.is_empty() {
        format!(
            "no wedge index is a candidate (alternating = {}, fan class {:?}); no sign change found for any index",
            parity.alternating, parity.fan_class
        )
    } else {
        format!("no sign change could be refined for candidates {:?} or the remaining indices", parity.candidates)
    };
    Err(SolverError::NoEquipartitionFound(Box::new(FailureDiagnostic { parity, tried, message })))
}

fn halfplane_direct(j: usize, lines: &Lines) -> Option<(Vector2, Method)> {
    let (a, b) = (&lines.first[j], &lines.second[j]);
    let lo = a.interval.0.max(b.interval.0);
    let hi = a.interval.1.min(b.interval.1);
    if lo > hi {
        return None;
    }
    let c = 0.5 * (lo + hi);
    Some((a.normal * c, Method::HalfplaneDirect))
}

/// When both measures share the halving line of a boundary direction, an
/// apex far back on that line gives a wedge meeting both supports in the
/// same halfplane.
fn walk_shared_line(
    fan: &Fan,
    j: usize,
    m1: &Measure,
    m2: &Measure,
    lines: &Lines,
    tol: f64,
) -> Result<Option<(Vector2, Method)>, SolverError> {
    let k = fan.len();
    let sb = joint_support(&m1.support_bounds(), &m2.support_bounds());
    for idx in [j, (j + 1) % k] {
        let (a, b) = (&lines.first[idx], &lines.second[idx]);
        let lo = a.interval.0.max(b.interval.0);
        let hi = a.interval.1.min(b.interval.1);
        if lo > hi {
            continue;
        }
        let c = 0.5 * (lo + hi);
        let e = fan.direction(idx);
        let foot = a.normal * c + e * (sb.center.dot(e));
        let mut tau = sb.radius;
        for _ in 0..40 {
            let t = foot - e * tau;
            let w = fan.wedge(j, t)?;
            if (m1.wedge_mass(&w)? - 0.5).abs() <= tol && (m2.wedge_mass(&w)? - 0.5).abs() <= tol {
                return Ok(Some((t, Method::SharedRay)));
            }
            tau *= 2.0;
        }
    }
    Ok(None)
}

/// Half-width of the scan range in `s`: beyond it the halving curve of a
/// measure supported in a disk of radius `r` runs along its asymptotic ray.
pub fn scan_half_width(angle: f64, r: f64) -> f64 {
    let h = 0.5 * angle;
    let c = h.cos().abs().max(1e-3);
    1.1 * r * (1.0 + 1.0 / c) + 0.1 * r
}

fn curve_intersection(
    fan: &Fan,
    j: usize,
    m1: &Measure,
    m2: &Measure,
    tol: f64,
) -> Result<Option<(Vector2, Method)>, SolverError> {
    let frame = CurveFrame::new(fan, j)?;
    let sb = joint_support(&m1.support_bounds(), &m2.support_bounds());
    let center = sb.center.dot(frame.u);
    let half = scan_half_width(fan.angle(j), sb.radius);

    let g = |s: f64| -> Result<(f64, Vector2), SolverError> {
        let p = curve_point_in(m1, &frame, s, tol)?;
        Ok((m2.wedge_mass(&frame.wedge(p.apex))? - 0.5, p.apex))
    };

    let mut steps = SCAN_STEPS;
    for _ in 0..=SCAN_REFINEMENTS {
        let h = 2.0 * half / steps as f64;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=steps {
            let s = center - half + h * i as f64;
            let (gs, apex) = match g(s) {
                Ok(v) => v,
                Err(SolverError::Halving(HalvingError::NoBracket { .. })) => {
                    prev = None;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if gs.abs() <= tol {
                return Ok(Some((apex, Method::CurveIntersection)));
            }
            if let Some((sp, gp)) = prev {
                if gp.signum() != gs.signum() {
                    if let Some(t) = refine(&g, sp, s, gp, gs, tol, sb.radius)? {
                        return Ok(Some((t, Method::CurveIntersection)));
                    }
                }
            }
            prev = Some((s, gs));
        }
        steps *= 4;
    }
    Ok(None)
}

fn refine(
    g: &impl Fn(f64) -> Result<(f64, Vector2), SolverError>,
    a: f64,
    b: f64,
    ga: f64,
    gb: f64,
    tol: f64,
    scale: f64,
) -> Result<Option<Vector2>, SolverError> {
    let mut err = None;
    let mut best: Option<Vector2> = None;
    itp(
        |s| match g(s) {
            Ok((v, apex)) => {
                if v.abs() <= tol {
                    best = Some(apex);
                }
                v
            }
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        a,
        b,
        ga,
        gb,
        1e-14 * scale.max(a.abs()).max(b.abs()),
        tol,
    );
    if let Some(e) = err {
        return Err(e);
    }
    if best.is_some() {
        return Ok(best);
    }
    // A jump of g: the curve of the first measure is not continuous here.
    Ok(None)
}

/// Halving intervals of both measures for one fan direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionGap {
    pub j: usize,
    pub direction: Vector2,
    pub interval_first: (f64, f64),
    pub interval_second: (f64, f64),
    /// Distance between the two intervals; 0 when they overlap.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub holds: bool,
    pub min_gap: f64,
    pub violating: Vec<usize>,
    pub directions: Vec<DirectionGap>,
}

/// Whether no line parallel to a fan ray halves both measures.
pub fn check_theorem4_hypothesis(fan: &Fan, m1: &Measure, m2: &Measure, tol: f64) -> HypothesisReport {
    let directions: Vec<DirectionGap> = fan
        .directions()
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            let a = halving_line(m1, d, tol).interval;
            let b = halving_line(m2, d, tol).interval;
            let gap = (b.0 - a.1).max(a.0 - b.1).max(0.0);
            DirectionGap { j, direction: d, interval_first: a, interval_second: b, gap }
        })
        .collect();
    let violating: Vec<usize> = directions.iter().filter(|d| d.gap <= tol).map(|d| d.j).collect();
    let min_gap = directions.iter().map(|d| d.gap).fold(f64::INFINITY, f64::min);
    HypothesisReport { holds: violating.is_empty(), min_gap, violating, directions }
}

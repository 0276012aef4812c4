//! Static SVG rendering of a problem and, optionally, its solution wedge
//! and a traced halving curve.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::geom::{Fan, Vector2};
use crate::measures::Measure;

const RED: &str = "#d62728";
const BLUE: &str = "#1f77b4";
const SHADE: &str = "#f2c14e";

/// Axis-aligned box in user coordinates.
#[derive(Debug, Clone, Copy)]
struct Bounds {
    min: Vector2,
    max: Vector2,
}

impl Bounds {
    fn empty() -> Self {
        Self { min: Vector2::new(f64::INFINITY, f64::INFINITY), max: Vector2::new(f64::NEG_INFINITY, f64::NEG_INFINITY) }
    }

    fn add_disk(&mut self, c: Vector2, r: f64) {
        self.min = Vector2::new(self.min.x.min(c.x - r), self.min.y.min(c.y - r));
        self.max = Vector2::new(self.max.x.max(c.x + r), self.max.y.max(c.y + r));
    }

    fn size(&self) -> f64 {
        (self.max.x - self.min.x).max(self.max.y - self.min.y)
    }
}

/// Fixed-precision number with negative zero folded to zero.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// SVG user coordinates flip the y axis.
fn pt(p: Vector2) -> String {
    format!("{},{}", num(p.x), num(-p.y))
}

fn measure_bounds(m: &Measure, b: &mut Bounds) {
    match m {
        Measure::DiskBlobs(d) => d.blobs().iter().for_each(|blob| b.add_disk(blob.center, blob.radius)),
        Measure::Gaussian(g) => b.add_disk(g.mean, 3.0 * g.sigma),
        Measure::Polygon(p) => p.vertices().iter().for_each(|&v| b.add_disk(v, 0.0)),
    }
}

fn draw_measure(out: &mut String, m: &Measure, color: &str, label: &str) {
    writeln!(out, r#"<g id="{label}" fill="{color}">"#).unwrap();
    match m {
        Measure::DiskBlobs(d) => {
            for blob in d.blobs() {
                writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill-opacity="0.85"/>"#,
                    num(blob.center.x),
                    num(-blob.center.y),
                    num(blob.radius)
                )
                .unwrap();
            }
        }
        Measure::Gaussian(g) => {
            for k in [3.0, 2.0, 1.0] {
                writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill-opacity="0.15"/>"#,
                    num(g.mean.x),
                    num(-g.mean.y),
                    num(k * g.sigma)
                )
                .unwrap();
            }
        }
        Measure::Polygon(p) => {
            let pts: Vec<String> = p.vertices().iter().map(|&v| pt(v)).collect();
            writeln!(out, r#"<polygon points="{}" fill-opacity="0.4"/>"#, pts.join(" ")).unwrap();
        }
    }
    out.push_str("</g>\n");
}

/// Points of the wedge `apex + F_j` cut off by a circle of radius `reach`.
fn wedge_polygon(fan: &Fan, j: usize, apex: Vector2, reach: f64) -> Vec<Vector2> {
    let start = fan.direction(j).angle();
    let angle = fan.angle(j);
    let steps = (angle / (PI / 16.0)).ceil().max(1.0) as usize;
    let mut pts = vec![apex];
    for i in 0..=steps {
        pts.push(apex + Vector2::from_angle(start + angle * i as f64 / steps as f64) * reach);
    }
    pts
}

fn draw_fan(out: &mut String, fan: &Fan, apex: Vector2, reach: f64, stroke: f64, id: &str) {
    writeln!(out, r#"<g id="{id}" stroke="black" stroke-width="{}" fill="none">"#, num(stroke)).unwrap();
    for &d in fan.directions() {
        writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(apex.x), num(-apex.y), num((apex + d * reach).x), num(-(apex + d * reach).y))
            .unwrap();
    }
    writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#, num(apex.x), num(-apex.y), num(2.0 * stroke)).unwrap();
    out.push_str("</g>\n");
}

/// Renders the measures, the fan and, when given, the solution wedge
/// `t + F_j` and a curve polyline. Output depends only on the inputs.
pub fn render(
    fan: &Fan,
    m1: &Measure,
    m2: &Measure,
    solution: Option<(usize, Vector2)>,
    curve: Option<&[Vector2]>,
) -> String {
    let mut b = Bounds::empty();
    measure_bounds(m1, &mut b);
    measure_bounds(m2, &mut b);
    if let Some((_, t)) = solution {
        b.add_disk(t, 0.0);
    }
    for &p in curve.unwrap_or(&[]) {
        if p.is_finite() {
            b.add_disk(p, 0.0);
        }
    }
    let size = b.size().max(1e-9);
    let margin = 0.1 * size;
    let (x0, y0) = (b.min.x - margin, -(b.max.y + margin));
    let (w, h) = (b.max.x - b.min.x + 2.0 * margin, b.max.y - b.min.y + 2.0 * margin);
    let stroke = 0.003 * size;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        num(x0),
        num(y0),
        num(w),
        num(h),
        (800.0 * h / w).round() as i64
    )
    .unwrap();
    writeln!(out, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#, num(x0), num(y0), num(w), num(h)).unwrap();

    let reach = 2.0 * (w * w + h * h).sqrt();
    if let Some((j, t)) = solution {
        let pts: Vec<String> = wedge_polygon(fan, j, t, reach).into_iter().map(pt).collect();
        writeln!(out, r#"<polygon id="solution" points="{}" fill="{SHADE}" fill-opacity="0.35"/>"#, pts.join(" ")).unwrap();
    }
    draw_measure(&mut out, m1, RED, "measure-1");
    draw_measure(&mut out, m2, BLUE, "measure-2");
    match solution {
        Some((_, t)) => draw_fan(&mut out, fan, t, reach, stroke, "fan"),
        None => {
            // Inset in the top right corner showing the fan's shape.
            let r = 0.06 * size;
            let apex = Vector2::new(x0 + w - 1.5 * r, -y0 - 1.5 * r);
            draw_fan(&mut out, fan, apex, r, stroke, "fan-inset");
        }
    }
    if let Some(curve) = curve {
        let pts: Vec<String> = curve.iter().filter(|p| p.is_finite()).map(|&p| pt(p)).collect();
        writeln!(out, r#"<polyline id="curve" points="{}" fill="none" stroke="black" stroke-dasharray="{} {}" stroke-width="{}"/>"#, pts.join(" "), num(4.0 * stroke), num(2.0 * stroke), num(stroke))
            .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

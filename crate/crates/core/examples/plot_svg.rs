//! Solves a small instance and writes an SVG of the measures, the fan and
//! the equipartitioning wedge.

use fan_sandwich::cli::svg::render;
use fan_sandwich::geom::{fan_from_degrees, Vector2};
use fan_sandwich::halving::curve_point;
use fan_sandwich::measures::{DiskBlob, DiskBlobMeasure, GaussianMeasure, Measure};
use fan_sandwich::solver::solve_equipartition;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fan = fan_from_degrees(&[90.0, 210.0, 330.0])?;
    let m1: Measure = DiskBlobMeasure::new(vec![DiskBlob::new(Vector2::ZERO, 1.0, 1.0)])?.into();
    let m2: Measure = GaussianMeasure::new(Vector2::new(2.5, 1.0), 0.6)?.into();
    let r = solve_equipartition(&fan, &m1, &m2, 1e-10)?;

    let curve: Vec<Vector2> = (0..=60)
        .filter_map(|i| curve_point(&m1, &fan, r.j, -6.0 + 0.2 * i as f64, 1e-12).ok())
        .map(|p| p.apex)
        .collect();
    let svg = render(&fan, &m1, &m2, Some((r.j, r.t)), Some(&curve));

    let path = std::env::args().nth(1).unwrap_or_else(|| "equipartition.svg".into());
    std::fs::write(&path, svg)?;
    println!("wrote {path}");
    Ok(())
}

//! Checks whether some line parallel to a fan ray halves both measures.

use fan_sandwich::geom::{fan_from_degrees, Vector2};
use fan_sandwich::measures::{GaussianMeasure, Measure};
use fan_sandwich::solver::{check_theorem4_hypothesis, solve_equipartition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fan = fan_from_degrees(&[0.0, 90.0, 180.0, 270.0])?;
    let g1: Measure = GaussianMeasure::new(Vector2::ZERO, 1.0)?.into();
    for (name, m2) in [
        ("common mean", GaussianMeasure::new(Vector2::ZERO, 2.0)?),
        ("shifted mean", GaussianMeasure::new(Vector2::new(1.0, 2.0), 2.0)?),
    ] {
        let m2: Measure = m2.into();
        let h = check_theorem4_hypothesis(&fan, &g1, &m2, 1e-8);
        let gaps: Vec<f64> = h.directions.iter().map(|d| d.gap).collect();
        println!("{name}: holds {}, gaps {gaps:.4?}", h.holds);
        match solve_equipartition(&fan, &g1, &m2, 1e-8) {
            Ok(r) => println!("  solved: wedge {} at ({:.6}, {:.6})", r.j, r.t.x, r.t.y),
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}

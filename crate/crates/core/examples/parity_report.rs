//! Prints containment relations of the α angles for several fans and
//! shows that they alternate around the cycle.

use fan_sandwich::geom::{fan_from_degrees, Vector2};
use fan_sandwich::measures::{DiskBlob, DiskBlobMeasure, GaussianMeasure, Measure};
use fan_sandwich::solver::parity_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m1: Measure = DiskBlobMeasure::new(vec![
        DiskBlob::new(Vector2::new(-1.0, 0.0), 0.6, 0.5),
        DiskBlob::new(Vector2::new(1.5, 0.5), 0.4, 0.5),
    ])?
    .into();
    let m2: Measure = GaussianMeasure::new(Vector2::new(0.3, 1.2), 0.7)?.into();

    for degrees in [vec![90.0, 210.0, 330.0], vec![0.0, 90.0, 180.0, 270.0], vec![10.0, 80.0, 150.0, 260.0, 300.0]] {
        let fan = fan_from_degrees(&degrees)?;
        let p = parity_report(&fan, &m1, &m2, 1e-10)?;
        println!("{degrees:?} ({:?})", p.fan_class);
        println!("  relations  {:?}", p.relations);
        println!("  candidates {:?}, alternating {}", p.candidates, p.alternating);
    }
    Ok(())
}

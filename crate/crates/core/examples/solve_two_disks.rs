//! Equipartitions two unit disks by a translated angle of a 3-fan.

use fan_sandwich::geom::{fan_from_degrees, Vector2};
use fan_sandwich::measures::{DiskBlob, DiskBlobMeasure, Measure};
use fan_sandwich::solver::solve_equipartition;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fan = fan_from_degrees(&[90.0, 210.0, 330.0])?;
    let m1: Measure = DiskBlobMeasure::new(vec![DiskBlob::new(Vector2::ZERO, 1.0, 1.0)])?.into();
    let m2: Measure = DiskBlobMeasure::new(vec![DiskBlob::new(Vector2::new(3.0, 1.0), 0.5, 1.0)])?.into();

    let r = solve_equipartition(&fan, &m1, &m2, 1e-10)?;
    let w = fan.wedge(r.j, r.t)?;
    println!("wedge {} at apex ({:.9}, {:.9}) via {:?}", r.j, r.t.x, r.t.y, r.method);
    println!("masses: {:.12} {:.12}", m1.wedge_mass(&w)?, m2.wedge_mass(&w)?);
    Ok(())
}

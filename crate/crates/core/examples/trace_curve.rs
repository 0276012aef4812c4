//! Samples the halving curve of one wedge for a Gaussian and prints CSV.

use fan_sandwich::geom::{fan_from_degrees, Vector2};
use fan_sandwich::halving::{curve_point, HalvingError};
use fan_sandwich::measures::{GaussianMeasure, Measure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fan = fan_from_degrees(&[0.0, 100.0, 230.0])?;
    let m: Measure = GaussianMeasure::new(Vector2::new(0.5, -0.3), 0.8)?.into();
    let j = 0;

    println!("s,x,y,mass");
    for i in 0..=40 {
        let s = -10.0 + 0.5 * i as f64;
        match curve_point(&m, &fan, j, s, 1e-12) {
            Ok(p) => println!("{s},{},{},{}", p.apex.x, p.apex.y, p.mass_check),
            Err(HalvingError::NoBracket { .. }) => println!("{s},NaN,NaN,NaN"),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

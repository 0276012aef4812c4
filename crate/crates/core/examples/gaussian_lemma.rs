//! Two centred Gaussians with σ = 1 and σ = 2: the wedge masses obey
//! f1(t) = f2(2t), and halving apexes sit inside the negated wedge.

use fan_sandwich::certify::build_gaussian_pair;
use fan_sandwich::geom::Vector2;
use fan_sandwich::halving::curve_point;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = build_gaussian_pair();
    let mut worst: f64 = 0.0;
    for j in 0..cfg.fan.len() {
        for a in -8..=8 {
            for b in -8..=8 {
                let t = Vector2::new(0.5 * a as f64, 0.5 * b as f64);
                let f1 = cfg.m1.wedge_mass(&cfg.fan.wedge(j, t)?)?;
                let f2 = cfg.m2.wedge_mass(&cfg.fan.wedge(j, t * 2.0)?)?;
                worst = worst.max((f1 - f2).abs());
            }
        }
    }
    println!("max |f1(t) - f2(2t)| = {worst:e}");

    for j in 0..cfg.fan.len() {
        let p = curve_point(&cfg.m1, &cfg.fan, j, 1.0, 1e-12)?;
        let q = curve_point(&cfg.m2, &cfg.fan, j, 1.0, 1e-12)?;
        println!("wedge {j}: halving apexes ({:.4}, {:.4}) and ({:.4}, {:.4})", p.apex.x, p.apex.y, q.apex.x, q.apex.y);
    }
    Ok(())
}

//! Certifies the regular-polygon counterexample for several k.

use std::time::Instant;

use fan_sandwich::certify::{build_polygon_2kfan, default_blob_radius, verify_no_equipartition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in [2, 3, 4] {
        let cfg = build_polygon_2kfan(k, 1.0, default_blob_radius(1.0))?;
        let start = Instant::now();
        let verdict = verify_no_equipartition(&cfg, 1.0 / 2000.0, 1e-9)?;
        let delta = verdict.certificate().map(|c| c.delta);
        println!("k = {k}: {}-fan, delta {delta:?}, {:.1} s", cfg.fan.len(), start.elapsed().as_secs_f64());
    }
    Ok(())
}

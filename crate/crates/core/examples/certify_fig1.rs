//! Builds the four-fan counterexample and certifies that no translate of
//! any of its wedges equipartitions the two measures.

use fan_sandwich::certify::{build_fig1_4fan, default_blob_radius, verify_no_equipartition, Verdict};
use fan_sandwich::solver::solve_equipartition;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scale = 1.0;
    let cfg = build_fig1_4fan(scale, default_blob_radius(scale))?;
    println!("fan {:?}", cfg.fan.degrees());

    if let Err(e) = solve_equipartition(&cfg.fan, &cfg.m1, &cfg.m2, 1e-8) {
        println!("solver: {e}");
    }

    match verify_no_equipartition(&cfg, scale / 2000.0, 1e-9)? {
        Verdict::Certificate(c) => {
            println!("certified delta {:.6} with {} evaluations", c.delta, c.evaluations);
            for w in &c.per_j {
                println!("  wedge {}: min deviation {:.6} at ({:.4}, {:.4})", w.j, w.min_dev, w.min_dev_at.x, w.min_dev_at.y);
            }
            if let Some(z) = c.boundary_cases.zero_crossing {
                println!("  zero-crossing bound {z:.6}");
            }
        }
        Verdict::Refutation(r) => println!("refuted at wedge {} apex {:?}", r.j, r.t),
    }
    Ok(())
}

mod common;

use fan_sandwich::geom::{fan_from_degrees, Vector2};
use fan_sandwich::halving::{alpha_angle, containment_relation, curve_point, Relation};
use fan_sandwich::measures::{DiskBlob, DiskBlobMeasure, GaussianMeasure, Measure};
use fan_sandwich::solver::{
    check_theorem4_hypothesis, classify_fan, parity_report, solve_equipartition, FanClass, SolverError,
};

use common::*;

fn disk(x: f64, y: f64, r: f64) -> Measure {
    DiskBlobMeasure::new(vec![DiskBlob::new(Vector2::new(x, y), r, 1.0)]).unwrap().into()
}

/// Minimizes the oracle deviation over successively finer grids.
fn grid_refinement(fan: &fan_sandwich::geom::Fan, m1: &Measure, m2: &Measure, j: usize, center: Vector2, half: f64) -> Vector2 {
    let mut best = center;
    let mut half = half;
    let n = 20;
    while half > 1e-8 {
        let step = 2.0 * half / n as f64;
        let mut best_dev = f64::INFINITY;
        let c = best;
        for a in 0..=n {
            for b in 0..=n {
                let t = c + Vector2::new(-half + a as f64 * step, -half + b as f64 * step);
                let d = dev_oracle(fan, m1, m2, j, t);
                if d < best_dev {
                    best_dev = d;
                    best = t;
                }
            }
        }
        half = 2.0 * step;
    }
    best
}

#[test]
fn two_disks_three_fan_matches_grid_oracle() {
    let fan = fan_from_degrees(&[90.0, 210.0, 330.0]).unwrap();
    let (m1, m2) = (disk(0.0, 0.0, 1.0), disk(3.0, 1.0, 0.5));
    let r = solve_equipartition(&fan, &m1, &m2, 1e-10).unwrap();
    assert!(r.residuals.0 <= 1e-8 && r.residuals.1 <= 1e-8, "{r:?}");
    let oracle = grid_refinement(&fan, &m1, &m2, r.j, r.t, 0.5);
    assert!(r.t.dist(oracle) < 1e-5, "{:?} vs {oracle:?}", r.t);
}

#[test]
fn theorem_suites_small() {
    for (name, suite) in
        [("odd", theorem1_suite(101, 30)), ("symmetric", theorem2_suite(102, 20)), ("opposite", theorem3_suite(103, 20))]
    {
        for (i, (fan, m1, m2)) in suite.iter().enumerate() {
            assert!(classify_fan(fan).guarantees_solution());
            let r = solve_equipartition(fan, m1, m2, 1e-8).unwrap_or_else(|e| panic!("{name} {i}: {e}"));
            let w = fan.wedge(r.j, r.t).unwrap();
            // Residuals are recomputed independently of the solver's own report.
            assert!((m1.wedge_mass(&w).unwrap() - 0.5).abs() <= 1e-6, "{name} {i}");
            assert!((m2.wedge_mass(&w).unwrap() - 0.5).abs() <= 1e-6, "{name} {i}");
            let p = parity_report(fan, m1, m2, 1e-10).unwrap();
            assert!(p.alternating, "{name} {i}: {:?}", p.relations);
        }
    }
}

#[test]
fn flip_law_for_odd_fans() {
    // With no candidate index, relations alternate around the cycle, which
    // is impossible for odd k, so some index is always a candidate.
    for (fan, m1, m2) in theorem1_suite(104, 40) {
        let p = parity_report(&fan, &m1, &m2, 1e-10).unwrap();
        assert!(!p.candidates.is_empty(), "{:?}", p.relations);
    }
}

#[test]
fn relation_of_translated_copies() {
    // Measure 2 is measure 1 moved into the interior of -F_0 direction, so
    // its alpha angle for wedge 0 is a translate deeper inside.
    let fan = fan_from_degrees(&[0.0, 120.0, 240.0]).unwrap();
    let m1 = disk(0.0, 0.0, 1.0);
    let shift = -fan.wedge(0, Vector2::ZERO).unwrap().bisector() * 0.7;
    let m2 = disk(shift.x, shift.y, 1.0);
    let a = alpha_angle(&m1, &fan, 0, 1e-12).unwrap();
    let b = alpha_angle(&m2, &fan, 0, 1e-12).unwrap();
    let rel = containment_relation(&a, &b).unwrap();
    assert_ne!(rel, Relation::Cross);
    assert_eq!(containment_relation(&b, &a).unwrap(), rel.flipped());
}

#[test]
fn curve_points_halve_the_measure() {
    let fan = fan_from_degrees(&[10.0, 100.0, 230.0]).unwrap();
    let m: Measure = GaussianMeasure::new(Vector2::new(0.5, -0.3), 0.8).unwrap().into();
    for j in 0..3 {
        for s in [-20.0, -3.0, 0.0, 1.5, 20.0] {
            let p = curve_point(&m, &fan, j, s, 1e-12).unwrap();
            let w = fan.wedge(j, p.apex).unwrap();
            assert!((m.wedge_mass(&w).unwrap() - 0.5).abs() < 1e-9);
            assert!((p.mass_check - 0.5).abs() < 1e-9);
        }
    }
}

#[test]
fn fig1_has_no_solution_and_reports_parity() {
    let cfg = fan_sandwich::certify::build_fig1_4fan(1.0, 0.005).unwrap();
    assert_eq!(classify_fan(&cfg.fan), FanClass::Other);
    match solve_equipartition(&cfg.fan, &cfg.m1, &cfg.m2, 1e-8) {
        Err(SolverError::NoEquipartitionFound(d)) => {
            assert_eq!(d.tried.len(), 4);
            assert_eq!(d.parity.relations.len(), 4);
        }
        other => panic!("expected no solution, got {other:?}"),
    }
}

#[test]
fn hypothesis_check() {
    let fan = fan_from_degrees(&[0.0, 90.0, 180.0, 270.0]).unwrap();
    let common: (Measure, Measure) =
        (GaussianMeasure::new(Vector2::ZERO, 1.0).unwrap().into(), GaussianMeasure::new(Vector2::ZERO, 2.0).unwrap().into());
    let r = check_theorem4_hypothesis(&fan, &common.0, &common.1, 1e-8);
    assert!(!r.holds);
    assert!(r.directions.iter().all(|d| d.gap == 0.0));

    let shifted: Measure = GaussianMeasure::new(Vector2::new(1.0, 2.0), 2.0).unwrap().into();
    let r = check_theorem4_hypothesis(&fan, &common.0, &shifted, 1e-8);
    assert!(r.holds);
    // Gaps are the distances between the means projected on the normals.
    for d in &r.directions {
        let expected = Vector2::new(1.0, 2.0).dot(d.direction.perp()).abs();
        assert!((d.gap - expected).abs() < 1e-6, "{d:?}");
    }
}

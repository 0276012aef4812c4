mod common;

use std::f64::consts::TAU;

use fan_sandwich::certify::*;
use fan_sandwich::geom::{fan_from_degrees, Fan, Vector2};
use fan_sandwich::measures::{DiskBlob, DiskBlobMeasure, GaussianMeasure, Measure};
use fan_sandwich::solver::solve_equipartition;
use rand::Rng;

use common::*;

fn certificate(v: Verdict) -> Certificate {
    match v {
        Verdict::Certificate(c) => c,
        Verdict::Refutation(r) => panic!("unexpected refutation {r:?}"),
    }
}

/// Random points of each searched square, snapped to a lattice ten times
/// finer than the grid, must keep the certified deviation.
fn spot_check(cfg: &CounterexampleConfig, cert: &Certificate, per_j: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    let fine = cert.grid_step / 10.0;
    let mut violations = 0;
    for region in &cert.region {
        for _ in 0..per_j {
            let raw = region.center
                + Vector2::new(
                    r.random_range(-region.half_width..region.half_width),
                    r.random_range(-region.half_width..region.half_width),
                );
            let t = Vector2::new((raw.x / fine).round() * fine, (raw.y / fine).round() * fine);
            // Oracle error is below 1e-6.
            if dev_oracle(&cfg.fan, &cfg.m1, &cfg.m2, region.j, t) < cert.delta - 1e-6 {
                violations += 1;
            }
        }
    }
    violations
}

#[test]
fn fig1_certificate() {
    let cfg = build_fig1_4fan(1.0, 0.005).unwrap();
    let cert = certificate(verify_no_equipartition(&cfg, 1e-3, 1e-9).unwrap());
    assert!(cert.delta >= 0.05, "delta {}", cert.delta);
    assert_eq!(cert.boundary_cases.one_line.len(), 8);
    assert!((cert.boundary_cases.zero_crossing.unwrap() - 1.0 / 6.0).abs() < 1e-12);
    assert_eq!(spot_check(&cfg, &cert, 250, 1), 0);

    // Fine re-scan at step 1e-4 around the reported minimizer. The minimum
    // of the deviation is attained on a plateau, so the check is that the
    // fine minimum equals the reported one and that the fine minimizers
    // come within 2e-3 of the reported location.
    let best = cert.per_j.iter().min_by(|a, b| a.min_dev.total_cmp(&b.min_dev)).unwrap();
    let h = 1e-4;
    let scan: Vec<(Vector2, f64)> = (-100..=100)
        .flat_map(|a| (-100..=100).map(move |b| (a, b)))
        .map(|(a, b)| {
            let t = best.min_dev_at + Vector2::new(a as f64 * h, b as f64 * h);
            (t, deviation(&cfg.fan, &cfg.m1, &cfg.m2, best.j, t).unwrap())
        })
        .collect();
    let fine_min = scan.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    assert!((fine_min - best.min_dev).abs() < 1e-12, "{fine_min} vs {}", best.min_dev);
    let nearest = scan
        .iter()
        .filter(|s| s.1 <= fine_min + 1e-12)
        .map(|s| s.0.dist(best.min_dev_at))
        .fold(f64::INFINITY, f64::min);
    assert!(nearest <= 2e-3);
    assert!(fine_min >= cert.delta);
}

#[test]
fn far_apexes_keep_the_bound() {
    let cfg = build_fig1_4fan(1.0, 0.005).unwrap();
    let cert = certificate(verify_no_equipartition(&cfg, 5e-4, 1e-9).unwrap());
    let mut r = rng(2);
    for _ in 0..2000 {
        let j = r.random_range(0..cfg.fan.len());
        let region = &cert.region[j];
        let dist = region.covered_radius * r.random_range(1.0..30.0f64);
        let t = region.center + Vector2::from_angle(r.random_range(0.0..TAU)) * dist;
        let d = dev_oracle(&cfg.fan, &cfg.m1, &cfg.m2, j, t);
        assert!(d >= cert.delta - 1e-6, "j {j} t {t:?}: {d} < {}", cert.delta);
    }
}

#[test]
fn certificate_is_scale_invariant() {
    let base = build_fig1_4fan(1.0, 0.005).unwrap();
    let base_cert = certificate(verify_no_equipartition(&base, 5e-4, 1e-9).unwrap());
    let d0 = base_cert.delta;
    for lambda in [2.0, 0.5, 3.0, 10.0] {
        let cfg = base.scaled(lambda);
        let c = certificate(verify_no_equipartition(&cfg, 5e-4 * lambda, 1e-9).unwrap());
        assert!((c.delta - d0).abs() <= 1e-9, "lambda {lambda}: {} vs {d0}", c.delta);
        for (a, b) in c.region.iter().zip(&base_cert.region) {
            assert!((a.covered_radius - lambda * b.covered_radius).abs() <= 1e-9 * lambda);
            assert!((a.half_width - lambda * b.half_width).abs() <= 1e-9 * lambda);
        }
    }
    let built = build_fig1_4fan(3.0, 0.015).unwrap();
    let c = certificate(verify_no_equipartition(&built, 1.5e-3, 1e-9).unwrap());
    assert!((c.delta - d0).abs() <= 1e-9);
}

#[test]
fn theorem1_instance_is_refuted_at_the_solver_witness() {
    let fan = fan_from_degrees(&[90.0, 210.0, 330.0]).unwrap();
    let m1: Measure = DiskBlobMeasure::new(vec![DiskBlob::new(Vector2::ZERO, 1.0, 1.0)]).unwrap().into();
    let m2: Measure = DiskBlobMeasure::new(vec![DiskBlob::new(Vector2::new(3.0, 1.0), 0.5, 1.0)]).unwrap().into();
    let s = solve_equipartition(&fan, &m1, &m2, 1e-10).unwrap();
    match verify(&fan, &m1, &m2, 1e-3, 1e-9).unwrap() {
        Verdict::Refutation(r) => {
            assert_eq!(r.j, s.j);
            assert!(r.t.dist(s.t) <= 1e-3, "{:?} vs {:?}", r.t, s.t);
            assert!(r.residuals.0 <= 1e-9 && r.residuals.1 <= 1e-9);
        }
        Verdict::Certificate(c) => panic!("certified a solvable instance: {}", c.delta),
    }
}

#[test]
fn coarse_grid_and_unsupported_measures() {
    let cfg = build_fig1_4fan(1.0, 0.005).unwrap();
    assert!(matches!(verify_no_equipartition(&cfg, 0.5, 1e-9), Err(CertifyError::GridTooCoarse { .. })));
    let mut r = rng(3);
    let p: Measure = random_polygon(&mut r, Vector2::ZERO).into();
    assert!(matches!(
        verify(&cfg.fan, &cfg.m1, &p, 1e-2, 1e-9),
        Err(CertifyError::UnsupportedMeasure { index: 1 })
    ));
    assert!(matches!(verify_no_equipartition(&cfg, 0.0, 1e-9), Err(CertifyError::InvalidParameter(_))));
}

/// Solvable instances with disk or Gaussian measures.
fn duality_battery() -> Vec<(Fan, Measure, Measure)> {
    let mut r = rng(4);
    let mut out = Vec::new();
    let pick = |r: &mut rand_chacha::ChaCha8Rng| -> Measure {
        let c = Vector2::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        if r.random_bool(0.5) {
            DiskBlobMeasure::new(vec![DiskBlob::new(c, r.random_range(0.3..1.2), 1.0)]).unwrap().into()
        } else {
            GaussianMeasure::new(c, r.random_range(0.3..1.0)).unwrap().into()
        }
    };
    for i in 0..20 {
        let fan = match i % 3 {
            0 => random_fan(&mut r, [3, 5][i % 2]),
            1 => random_symmetric_fan(&mut r, 2),
            _ => random_opposite_fan(&mut r, 4, 2),
        };
        out.push((fan, pick(&mut r), pick(&mut r)));
    }
    out
}

#[test]
fn verifier_and_solver_agree() {
    for (i, (fan, m1, m2)) in duality_battery().into_iter().enumerate() {
        let solved = solve_equipartition(&fan, &m1, &m2, 1e-8).is_ok();
        let scale = fan_sandwich::measures::joint_support(&m1.support_bounds(), &m2.support_bounds()).radius;
        let v = verify(&fan, &m1, &m2, scale / 200.0, 1e-8).unwrap();
        assert!(solved, "instance {i} unsolved");
        assert!(v.refutation().is_some(), "instance {i} certified");
    }
    let fans = [[0.0, 80.0, 170.0, 250.0]];
    let mut families = vec![build_fig1_4fan(1.0, 0.005).unwrap(), build_polygon_2kfan(2, 1.0, 0.005).unwrap()];
    families.extend(fans.iter().map(|a| build_arbitrary_4fan(&fan_from_degrees(a).unwrap(), 1.0, 0.005).unwrap()));
    for cfg in families {
        let solved = solve_equipartition(&cfg.fan, &cfg.m1, &cfg.m2, 1e-8).is_ok();
        let certified = verify_no_equipartition(&cfg, 5e-4, 1e-8).unwrap().certificate().is_some();
        assert!(certified && !solved, "{:?}: certified {certified}, solved {solved}", cfg.family);
    }
}

#[test]
fn gaussian_scaling_identity_and_locus() {
    let cfg = build_gaussian_pair();
    let (Measure::Gaussian(g1), Measure::Gaussian(g2)) = (&cfg.m1, &cfg.m2) else { panic!() };
    assert_eq!((g1.sigma, g2.sigma), (1.0, 2.0));
    assert_eq!((g1.mean, g2.mean), (Vector2::ZERO, Vector2::ZERO));
    for j in 0..4 {
        for a in [-3.0, -0.5, 0.0, 1.25, 4.0] {
            for b in [-4.0, -1.0, 0.3, 2.0] {
                let t = Vector2::new(a, b);
                let f1 = cfg.m1.wedge_mass(&cfg.fan.wedge(j, t).unwrap()).unwrap();
                let f2 = cfg.m2.wedge_mass(&cfg.fan.wedge(j, t * 2.0).unwrap()).unwrap();
                assert!((f1 - f2).abs() <= 2e-10);
            }
        }
    }
}

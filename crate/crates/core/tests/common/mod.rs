//! Shared instance generators and independent oracles for the integration
//! tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use fan_sandwich::geom::{fan_from_degrees, Fan, Vector2, Wedge};
use fan_sandwich::measures::{DiskBlob, DiskBlobMeasure, GaussianMeasure, Measure, PolygonMeasure};
use fan_sandwich::solver::{classify_fan, FanClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A single disk, a convex polygon or an isotropic Gaussian: each has
/// connected support.
pub fn random_measure(rng: &mut ChaCha8Rng) -> Measure {
    let c = Vector2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    match rng.random_range(0..3) {
        0 => DiskBlobMeasure::new(vec![DiskBlob::new(c, rng.random_range(0.3..1.5), 1.0)]).unwrap().into(),
        1 => GaussianMeasure::new(c, rng.random_range(0.3..1.5)).unwrap().into(),
        _ => random_polygon(rng, c).into(),
    }
}

pub fn random_polygon(rng: &mut ChaCha8Rng, c: Vector2) -> PolygonMeasure {
    let n = rng.random_range(3..9);
    let r = rng.random_range(0.5..2.0);
    let step = TAU / n as f64;
    let phase = rng.random_range(0.0..TAU);
    let verts = (0..n)
        .map(|i| {
            let a = phase + step * (i as f64 + rng.random_range(-0.3..0.3));
            c + Vector2::from_angle(a) * r
        })
        .collect();
    PolygonMeasure::new(verts).unwrap()
}

/// Blobs on a few disjoint disks with random weights.
pub fn random_blobs(rng: &mut ChaCha8Rng) -> DiskBlobMeasure {
    let n = rng.random_range(1..5);
    let mut blobs: Vec<DiskBlob> = Vec::new();
    while blobs.len() < n {
        let c = Vector2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let r = rng.random_range(0.2..1.0);
        if blobs.iter().all(|b| b.center.dist(c) > b.radius + r + 0.01) {
            blobs.push(DiskBlob::new(c, r, rng.random_range(0.2..1.0)));
        }
    }
    let total: f64 = blobs.iter().map(|b| b.weight).sum();
    for b in &mut blobs {
        b.weight /= total;
    }
    let last = blobs.len() - 1;
    let head: f64 = blobs[..last].iter().map(|b| b.weight).sum();
    blobs[last].weight = 1.0 - head;
    DiskBlobMeasure::new(blobs).unwrap()
}

fn fan_from_raw(mut a: Vec<f64>) -> Option<Fan> {
    for x in a.iter_mut() {
        *x = x.rem_euclid(360.0);
    }
    a.sort_by(f64::total_cmp);
    let f = fan_from_degrees(&a).ok()?;
    f.angles().iter().all(|&x| x > 0.05).then_some(f)
}

pub fn random_fan(rng: &mut ChaCha8Rng, k: usize) -> Fan {
    loop {
        if let Some(f) = fan_from_raw((0..k).map(|_| rng.random_range(0.0..360.0)).collect()) {
            return f;
        }
    }
}

/// Centrally symmetric fan with `2·h` rays.
pub fn random_symmetric_fan(rng: &mut ChaCha8Rng, h: usize) -> Fan {
    loop {
        let b: Vec<f64> = (0..h).map(|_| rng.random_range(0.0..180.0)).collect();
        let raw = b.iter().copied().chain(b.iter().map(|x| x + 180.0)).collect();
        if let Some(f) = fan_from_raw(raw) {
            if classify_fan(&f) == FanClass::SymmetricEven {
                return f;
            }
        }
    }
}

/// Even fan with `k` rays, two of them opposite, and `side` rays strictly
/// on one side of the line they span.
pub fn random_opposite_fan(rng: &mut ChaCha8Rng, k: usize, side: usize) -> Fan {
    loop {
        let base = rng.random_range(0.0..180.0);
        let mut v = vec![base, base + 180.0];
        for _ in 0..side - 1 {
            v.push(base + rng.random_range(1.0..179.0));
        }
        for _ in 0..(k - side - 1) {
            v.push(base + 180.0 + rng.random_range(1.0..179.0));
        }
        if let Some(f) = fan_from_raw(v) {
            if classify_fan(&f) != FanClass::Other {
                return f;
            }
        }
    }
}

pub type Instance = (Fan, Measure, Measure);

pub fn theorem1_suite(seed: u64, n: usize) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let fan = random_fan(&mut r, [3, 5, 7][i % 3]);
            (fan, random_measure(&mut r), random_measure(&mut r))
        })
        .collect()
}

pub fn theorem2_suite(seed: u64, n: usize) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let fan = random_symmetric_fan(&mut r, [2, 4][i % 2]);
            (fan, random_measure(&mut r), random_measure(&mut r))
        })
        .collect()
}

pub fn theorem3_suite(seed: u64, n: usize) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let k = [4, 6, 8][i % 3];
            let side = [2, 4, 2][i % 3].min(k - 2);
            let fan = random_opposite_fan(&mut r, k, side);
            (fan, random_measure(&mut r), random_measure(&mut r))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Independent mass oracles.

fn clip(poly: &[Vector2], normal: Vector2, offset: f64) -> Vec<Vector2> {
    // Keep {p·normal ≤ offset}.
    let mut out = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let (da, db) = (a.dot(normal) - offset, b.dot(normal) - offset);
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            out.push(a + (b - a) * (da / (da - db)));
        }
    }
    out
}

fn shoelace(poly: &[Vector2]) -> f64 {
    let mut s = 0.0;
    for i in 0..poly.len() {
        s += poly[i].cross(poly[(i + 1) % poly.len()]);
    }
    0.5 * s.abs()
}

/// Area of `poly ∩ {apex + cone(lo, hi)}` for a cone of angle at most π.
fn convex_cone_area(poly: &[Vector2], apex: Vector2, lo: Vector2, hi: Vector2) -> f64 {
    // Left of lo: −perp(lo)·p ≤ −perp(lo)·apex. Right of hi: perp(hi)·p ≤ perp(hi)·apex.
    let n1 = -lo.perp();
    let n2 = hi.perp();
    let p = clip(poly, n1, n1.dot(apex));
    let p = clip(&p, n2, n2.dot(apex));
    if p.len() < 3 {
        0.0
    } else {
        shoelace(&p)
    }
}

/// Area of `poly ∩ wedge`, splitting reflex wedges into two convex cones.
pub fn polygon_area_in_wedge(poly: &[Vector2], w: &Wedge) -> f64 {
    if w.angle <= PI {
        convex_cone_area(poly, w.apex, w.dir_lo, w.dir_hi)
    } else {
        let mid = w.dir_lo.rotate(0.5 * w.angle);
        convex_cone_area(poly, w.apex, w.dir_lo, mid) + convex_cone_area(poly, w.apex, mid, w.dir_hi)
    }
}

/// A regular `n`-gon with the same area as the disk.
pub fn disk_polygon(c: Vector2, r: f64, n: usize) -> Vec<Vector2> {
    let step = TAU / n as f64;
    let rr = r * (TAU / (n as f64 * step.sin())).sqrt();
    (0..n).map(|i| c + Vector2::from_angle(step * i as f64) * rr).collect()
}

/// Wedge mass of a disk-blob measure by polygonal approximation.
pub fn blobs_wedge_mass_oracle(m: &DiskBlobMeasure, w: &Wedge, n: usize) -> f64 {
    m.blobs()
        .iter()
        .map(|b| b.weight * polygon_area_in_wedge(&disk_polygon(b.center, b.radius, n), w) / (PI * b.radius * b.radius))
        .sum()
}

pub fn polygon_wedge_mass_oracle(m: &PolygonMeasure, w: &Wedge) -> f64 {
    polygon_area_in_wedge(m.vertices(), w) / shoelace(m.vertices())
}

/// Gaussian wedge mass by a polar integral about the apex, with the radial
/// part evaluated in closed form and Simpson's rule in the angle.
pub fn gaussian_wedge_mass_oracle(g: &GaussianMeasure, w: &Wedge, n: usize) -> f64 {
    // Along direction u from the apex, the radial integral of the density
    // is ∫_0^∞ r φ(a + r u) dr, closed form via erfc.
    let a = w.apex - g.mean;
    let s = g.sigma;
    let radial = |theta: f64| {
        let u = Vector2::from_angle(theta);
        let b = a.dot(u);
        let c2 = a.norm_sq() - b * b;
        let pref = (-c2 / (2.0 * s * s)).exp() / (2.0 * PI);
        let tail = 0.5 * libm::erfc(b / (s * std::f64::consts::SQRT_2));
        pref * ((-b * b / (2.0 * s * s)).exp() - b / s * (2.0 * PI).sqrt() * tail)
    };
    let t0 = w.dir_lo.angle();
    let n = n + n % 2;
    let h = w.angle / n as f64;
    let mut sum = radial(t0) + radial(t0 + w.angle);
    for i in 1..n {
        sum += radial(t0 + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

pub fn mass_oracle(m: &Measure, w: &Wedge) -> f64 {
    match m {
        Measure::DiskBlobs(d) => blobs_wedge_mass_oracle(d, w, 4096),
        Measure::Polygon(p) => polygon_wedge_mass_oracle(p, w),
        Measure::Gaussian(g) => gaussian_wedge_mass_oracle(g, w, 20000),
    }
}

/// `max_i |μ_i(t + F_j) − 1/2|` from the oracles.
pub fn dev_oracle(fan: &Fan, m1: &Measure, m2: &Measure, j: usize, t: Vector2) -> f64 {
    let w = fan.wedge(j, t).unwrap();
    (mass_oracle(m1, &w) - 0.5).abs().max((mass_oracle(m2, &w) - 0.5).abs())
}

// ---------------------------------------------------------------------------
// Monte Carlo.

/// One sample from the measure.
pub fn sample(m: &Measure, r: &mut ChaCha8Rng) -> Vector2 {
    match m {
        Measure::DiskBlobs(d) => {
            let u: f64 = r.random();
            let mut acc = 0.0;
            let blobs = d.blobs();
            let mut pick = &blobs[blobs.len() - 1];
            for b in blobs {
                acc += b.weight;
                if u < acc {
                    pick = b;
                    break;
                }
            }
            loop {
                let x = r.random_range(-1.0..1.0);
                let y = r.random_range(-1.0..1.0);
                if x * x + y * y <= 1.0 {
                    return pick.center + Vector2::new(x, y) * pick.radius;
                }
            }
        }
        Measure::Polygon(p) => {
            let v = p.vertices();
            let (mut lo, mut hi) = (v[0], v[0]);
            for q in v {
                lo = Vector2::new(lo.x.min(q.x), lo.y.min(q.y));
                hi = Vector2::new(hi.x.max(q.x), hi.y.max(q.y));
            }
            loop {
                let q = Vector2::new(r.random_range(lo.x..hi.x), r.random_range(lo.y..hi.y));
                if (0..v.len()).all(|i| (v[(i + 1) % v.len()] - v[i]).cross(q - v[i]) >= 0.0) {
                    return q;
                }
            }
        }
        Measure::Gaussian(g) => {
            use rand_distr::{Distribution, StandardNormal};
            let x: f64 = StandardNormal.sample(r);
            let y: f64 = StandardNormal.sample(r);
            g.mean + Vector2::new(x, y) * g.sigma
        }
    }
}

pub fn monte_carlo_hits(m: &Measure, w: &Wedge, n: usize, r: &mut ChaCha8Rng) -> usize {
    (0..n).filter(|_| fan_sandwich::geom::point_in_wedge(w, sample(m, r))).count()
}

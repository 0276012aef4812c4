//! Certified search for equipartitioning apexes.
//!
//! Each wedge index is handled separately. Inside a square region `K` the
//! deviation `dev(t) = max_i |μ_i(t + F_j) − 1/2|` is evaluated at cell
//! centers of an adaptive quadtree; a cell of half-diagonal `ρ` is certified
//! with the bound `dev(center) − L·ρ`, where `L` is a Lipschitz constant of
//! `dev` valid on that cell. Only blobs that some boundary ray from the
//! cell can meet contribute to `L`, which keeps the tree shallow away from
//! the rays' shadows. Outside `K` at most one boundary ray meets the
//! support, and the masses reduce to blob subset sums or halfplane masses.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;

use crate::geom::{dist_to_ray, Fan, Halfplane, Vector2, Wedge};
use crate::measures::{joint_support, Measure, SupportBounds};

use super::{
    BoundaryCases, CertifyError, Certificate, RefutationSource, Refutation, Region, SweepRecord,
    Verdict, VerifyOptions, WedgeSummary,
};

/// One disk of either measure.
#[derive(Debug, Clone, Copy)]
struct Blob {
    center: Vector2,
    radius: f64,
    /// Largest mass flux of this blob through one chord: `2w/(πr)`.
    chord_flux: f64,
    measure: usize,
}

pub(super) struct Problem<'a> {
    fan: &'a Fan,
    measures: [&'a Measure; 2],
    blobs: Vec<Blob>,
    /// Apex-independent Lipschitz contribution per measure (Gaussians).
    base_lipschitz: [f64; 2],
    /// Line-offset Lipschitz contribution per measure (Gaussians).
    base_lipschitz_1d: [f64; 2],
    support: SupportBounds,
    compact: bool,
}

impl<'a> Problem<'a> {
    pub(super) fn new(fan: &'a Fan, m1: &'a Measure, m2: &'a Measure) -> Result<Self, CertifyError> {
        let mut blobs = Vec::new();
        let mut base = [0.0; 2];
        let mut base_1d = [0.0; 2];
        for (i, m) in [m1, m2].into_iter().enumerate() {
            match m {
                Measure::DiskBlobs(d) => {
                    for b in d.blobs() {
                        blobs.push(Blob {
                            center: b.center,
                            radius: b.radius,
                            chord_flux: 2.0 * b.weight / (PI * b.radius),
                            measure: i,
                        });
                    }
                }
                Measure::Gaussian(g) => {
                    // Mass flux through a line is at most the peak of the
                    // one-dimensional marginal density.
                    let peak = 1.0 / (g.sigma * (2.0 * PI).sqrt());
                    base[i] = 2.0 * peak;
                    base_1d[i] = peak;
                }
                Measure::Polygon(_) => {
                    return Err(CertifyError::UnsupportedMeasure { index: i });
                }
            }
        }
        let support = joint_support(&m1.support_bounds(), &m2.support_bounds());
        Ok(Self {
            fan,
            measures: [m1, m2],
            blobs,
            base_lipschitz: base,
            base_lipschitz_1d: base_1d,
            compact: support.exact,
            support,
        })
    }

    /// Global Lipschitz constant of `dev` in the apex, with every blob
    /// charged one chord per boundary ray.
    pub(super) fn global_lipschitz(&self) -> f64 {
        let mut l = self.base_lipschitz;
        for b in &self.blobs {
            l[b.measure] += 2.0 * b.chord_flux;
        }
        l[0].max(l[1])
    }

    fn masses(&self, w: &Wedge) -> Result<(f64, f64), CertifyError> {
        Ok((self.measures[0].wedge_mass(w)?, self.measures[1].wedge_mass(w)?))
    }

    fn dev(&self, j: usize, t: Vector2) -> Result<f64, CertifyError> {
        let (a, b) = self.masses(&self.fan.wedge(j, t)?)?;
        Ok((a - 0.5).abs().max((b - 0.5).abs()))
    }

    fn residuals(&self, j: usize, t: Vector2) -> Result<(f64, f64), CertifyError> {
        let (a, b) = self.masses(&self.fan.wedge(j, t)?)?;
        Ok(((a - 0.5).abs(), (b - 0.5).abs()))
    }

    /// Lipschitz constant of `dev` for apexes within `rho` of `c`.
    ///
    /// Translating the apex with unit velocity `v` changes a blob's mass by
    /// the density times the flux of `v` through the rays inside the disk.
    /// That flux equals minus the flux through the arc of the circle inside
    /// the wedge, which is at most `2r` whatever the number of rays, so a
    /// blob touched by the wedge boundary contributes `2w/(πr)` once.
    fn local_lipschitz(&self, j: usize, c: Vector2, rho: f64) -> f64 {
        let lo = self.fan.direction(j);
        let hi = self.fan.direction(j + 1);
        let mut l = self.base_lipschitz;
        for b in &self.blobs {
            let reach = b.radius + rho;
            if dist_to_ray(b.center, c, lo) <= reach || dist_to_ray(b.center, c, hi) <= reach {
                l[b.measure] += b.chord_flux;
            }
        }
        l[0].max(l[1])
    }

    /// Radius of the disk of apexes, about the support center, outside of
    /// which at most one boundary ray of wedge `j` meets the support (for
    /// Gaussians, the truncated support).
    pub(super) fn region_radius(&self, j: usize) -> f64 {
        let r = self.support.radius;
        let theta = self.fan.angle(j);
        let narrow = theta.min(2.0 * PI - theta);
        (2.0 * r).max(2.0 * r / theta + r).max(r / (0.5 * narrow).sin())
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    center: Vector2,
    size: f64,
}

#[derive(Debug, Clone, Copy)]
struct Eval {
    dev: f64,
    bound: f64,
}

/// Outcome of the grid stage for one wedge index.
pub(super) enum GridOutcome {
    Certified(WedgeSummary),
    Witness(Refutation),
    TooCoarse(WedgeSummary),
}

/// Square region searched for wedge `j`, with side a power-of-two multiple
/// of `grid_step` times the initial resolution so the finest cells have
/// side exactly `grid_step`.
pub(super) fn region_for(p: &Problem, j: usize, opts: &VerifyOptions) -> Region {
    let (center, half) = match opts.region_half_width {
        Some(h) => (p.support.center, h),
        None => (p.support.center, p.region_radius(j)),
    };
    let n0 = opts.initial_cells as f64;
    let mut levels = 0u32;
    while opts.grid_step * n0 * 2f64.powi(levels as i32) < 2.0 * half {
        levels += 1;
    }
    let side = opts.grid_step * n0 * 2f64.powi(levels as i32);
    Region { j, center, half_width: 0.5 * side, covered_radius: half, levels }
}

pub(super) fn grid_stage(p: &Problem, region: &Region, opts: &VerifyOptions) -> Result<(GridOutcome, u64), CertifyError> {
    let j = region.j;
    let n0 = opts.initial_cells;
    let size0 = 2.0 * region.half_width / n0 as f64;
    let origin = region.center - Vector2::new(region.half_width, region.half_width);
    let mut cells: Vec<Cell> = (0..n0 * n0)
        .map(|idx| {
            let (row, col) = (idx / n0, idx % n0);
            Cell {
                center: origin + Vector2::new((col as f64 + 0.5) * size0, (row as f64 + 0.5) * size0),
                size: size0,
            }
        })
        .collect();

    let mut evaluations = 0u64;
    let mut best_dev = f64::INFINITY;
    let mut best_at = region.center;
    let mut delta = f64::INFINITY;
    let mut leaves = 0u64;
    // Uncertified finest cells, kept as polishing seeds.
    let mut open: Vec<(f64, Vector2)> = Vec::new();

    while !cells.is_empty() {
        let evals: Vec<Result<Eval, CertifyError>> = cells
            .par_iter()
            .map(|c| {
                let dev = p.dev(j, c.center)?;
                let rho = c.size * SQRT_2 * 0.5;
                let l = p.local_lipschitz(j, c.center, rho);
                Ok(Eval { dev, bound: dev - l * rho })
            })
            .collect();
        evaluations += cells.len() as u64;
        let evals: Vec<Eval> = evals.into_iter().collect::<Result<_, _>>()?;

        let mut witness: Option<(Vector2, f64)> = None;
        for (c, e) in cells.iter().zip(&evals) {
            if e.dev < best_dev {
                best_dev = e.dev;
                best_at = c.center;
            }
            if e.dev <= opts.tol {
                let better = match witness {
                    None => true,
                    Some((w, _)) => (c.center.y, c.center.x) < (w.y, w.x),
                };
                if better {
                    witness = Some((c.center, e.dev));
                }
            }
        }
        if let Some((t, _)) = witness {
            let residuals = p.residuals(j, t)?;
            return Ok((GridOutcome::Witness(Refutation { j, t, residuals, source: RefutationSource::Grid }), evaluations));
        }

        let threshold = opts.refine_fraction * best_dev;
        let mut next = Vec::new();
        for (c, e) in cells.iter().zip(&evals) {
            let can_split = c.size > opts.grid_step * (1.0 + 1e-9);
            if e.bound < threshold && can_split {
                let q = 0.25 * c.size;
                for (dx, dy) in [(-q, -q), (q, -q), (-q, q), (q, q)] {
                    next.push(Cell { center: c.center + Vector2::new(dx, dy), size: 0.5 * c.size });
                }
            } else {
                leaves += 1;
                delta = delta.min(e.bound);
                if e.bound <= 0.0 {
                    open.push((e.dev, c.center));
                }
            }
        }
        cells = next;
    }

    let summary = WedgeSummary { j, delta, min_dev: best_dev, min_dev_at: best_at, leaves };
    if delta > 0.0 {
        return Ok((GridOutcome::Certified(summary), evaluations));
    }
    open.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1.y, a.1.x).partial_cmp(&(b.1.y, b.1.x)).unwrap()));
    for &(_, seed) in open.iter().take(opts.polish_seeds) {
        let (t, evals) = polish(p, j, seed, opts.tol, p.support.radius)?;
        evaluations += evals;
        if let Some(t) = t {
            let residuals = p.residuals(j, t)?;
            return Ok((GridOutcome::Witness(Refutation { j, t, residuals, source: RefutationSource::Polish }), evaluations));
        }
    }
    Ok((GridOutcome::TooCoarse(summary), evaluations))
}

/// Damped Gauss–Newton on `(μ₁ − 1/2, μ₂ − 1/2)` from `start`.
fn polish(p: &Problem, j: usize, start: Vector2, tol: f64, scale: f64) -> Result<(Option<Vector2>, u64), CertifyError> {
    let f = |t: Vector2| -> Result<[f64; 2], CertifyError> {
        let (a, b) = p.masses(&p.fan.wedge(j, t)?)?;
        Ok([a - 0.5, b - 0.5])
    };
    let norm = |v: [f64; 2]| v[0].abs().max(v[1].abs());
    let h = 1e-7 * scale.max(1e-300);
    let mut t = start;
    let mut ft = f(t)?;
    let mut evals = 1u64;
    let mut damping = 1e-6;
    for _ in 0..60 {
        if norm(ft) <= tol {
            return Ok((Some(t), evals));
        }
        let fx1 = f(t + Vector2::new(h, 0.0))?;
        let fx0 = f(t - Vector2::new(h, 0.0))?;
        let fy1 = f(t + Vector2::new(0.0, h))?;
        let fy0 = f(t - Vector2::new(0.0, h))?;
        evals += 4;
        let jac = [
            [(fx1[0] - fx0[0]) / (2.0 * h), (fy1[0] - fy0[0]) / (2.0 * h)],
            [(fx1[1] - fx0[1]) / (2.0 * h), (fy1[1] - fy0[1]) / (2.0 * h)],
        ];
        // (JᵀJ + λ·diag) δ = −Jᵀf
        let jtj = [
            [jac[0][0] * jac[0][0] + jac[1][0] * jac[1][0], jac[0][0] * jac[0][1] + jac[1][0] * jac[1][1]],
            [jac[0][1] * jac[0][0] + jac[1][1] * jac[1][0], jac[0][1] * jac[0][1] + jac[1][1] * jac[1][1]],
        ];
        let g = [jac[0][0] * ft[0] + jac[1][0] * ft[1], jac[0][1] * ft[0] + jac[1][1] * ft[1]];
        let mut improved = false;
        for _ in 0..12 {
            let a = jtj[0][0] * (1.0 + damping) + 1e-300;
            let d = jtj[1][1] * (1.0 + damping) + 1e-300;
            let det = a * d - jtj[0][1] * jtj[1][0];
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let step = Vector2::new(-(d * g[0] - jtj[0][1] * g[1]) / det, -(a * g[1] - jtj[1][0] * g[0]) / det);
            let cand = t + step;
            let fc = f(cand)?;
            evals += 1;
            if norm(fc) < norm(ft) {
                t = cand;
                ft = fc;
                damping = (damping * 0.1).max(1e-12);
                improved = true;
                break;
            }
            damping *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok((if norm(ft) <= tol { Some(t) } else { None }, evals))
}

/// Lower bound on `dev` when no boundary ray meets the support: each blob
/// is wholly inside or outside the wedge.
pub(super) fn zero_crossing_bound(p: &Problem) -> f64 {
    let mut bound: f64 = 0.0;
    for m in p.measures {
        if let Measure::DiskBlobs(d) = m {
            let weights: Vec<f64> = d.blobs().iter().map(|b| b.weight).collect();
            bound = bound.max(subset_gap(&weights));
        }
    }
    bound
}

/// `min_S |Σ_{i∈S} w_i − 1/2|` over all subsets.
fn subset_gap(weights: &[f64]) -> f64 {
    let mut sums = vec![0.0];
    for &w in weights {
        let more: Vec<f64> = sums.iter().map(|s| s + w).collect();
        sums.extend(more);
        if sums.len() > 1 << 20 {
            // Too many blobs to enumerate; zero is always a valid bound.
            return 0.0;
        }
    }
    sums.iter().map(|s| (s - 0.5).abs()).fold(f64::INFINITY, f64::min)
}

/// Certified 1-d sweep for apexes outside the region where only the ray
/// of direction `e_j` (`left = true`, wedge on its left) or `e_{j+1}`
/// (`left = false`, wedge on its right) meets the support.
pub(super) fn one_line_sweep(
    p: &Problem,
    j: usize,
    left: bool,
    outside: f64,
    opts: &VerifyOptions,
) -> Result<(SweepRecord, Option<Refutation>, u64), CertifyError> {
    let d = if left { p.fan.direction(j) } else { p.fan.direction(j + 1) };
    let n = d.perp();
    let c0 = p.support.center.dot(n);
    let r = p.support.radius;
    // Masses of the wedge side of the line {p·n = c}.
    let masses = |c: f64| -> (f64, f64) {
        let h = Halfplane { normal: n, offset: c };
        let below = (p.measures[0].halfplane_mass(&h), p.measures[1].halfplane_mass(&h));
        if left {
            (1.0 - below.0, 1.0 - below.1)
        } else {
            below
        }
    };
    let dev_at = |c: f64| {
        let (a, b) = masses(c);
        (a - 0.5).abs().max((b - 0.5).abs())
    };
    let lipschitz = |c: f64, half: f64| {
        let mut l = p.base_lipschitz_1d;
        for b in &p.blobs {
            if (b.center.dot(n) - c).abs() <= b.radius + half {
                // Conservative: twice the single-chord flux.
                l[b.measure] += 2.0 * b.chord_flux;
            }
        }
        l[0].max(l[1])
    };

    let n0 = 64usize;
    let width0 = 2.0 * r / n0 as f64;
    let mut cells: Vec<(f64, f64)> = (0..n0).map(|i| (c0 - r + (i as f64 + 0.5) * width0, width0)).collect();
    let mut best = f64::INFINITY;
    let mut bound = f64::INFINITY;
    let mut evaluations = 0u64;
    let mut witness = None;
    while !cells.is_empty() {
        let evals: Vec<(f64, f64)> = cells
            .iter()
            .map(|&(c, w)| {
                let dev = dev_at(c);
                (dev, dev - lipschitz(c, 0.5 * w) * 0.5 * w)
            })
            .collect();
        evaluations += cells.len() as u64;
        for (&(c, _), &(dev, _)) in cells.iter().zip(&evals) {
            best = best.min(dev);
            if dev <= opts.tol && witness.is_none() {
                witness = Some(c);
            }
        }
        if witness.is_some() {
            break;
        }
        let threshold = opts.refine_fraction * best;
        let mut next = Vec::new();
        for (&(c, w), &(_, lb)) in cells.iter().zip(&evals) {
            if lb < threshold && w > opts.grid_step * (1.0 + 1e-9) {
                next.push((c - 0.25 * w, 0.5 * w));
                next.push((c + 0.25 * w, 0.5 * w));
            } else {
                bound = bound.min(lb);
            }
        }
        cells = next;
    }

    let refutation = match witness {
        Some(c) => {
            // An apex far back along −d on this line, outside the searched region.
            let foot = n * c + d * p.support.center.dot(d);
            let t = foot - d * (2.0 * outside + r);
            let residuals = p.residuals(j, t)?;
            (residuals.0 <= opts.tol && residuals.1 <= opts.tol)
                .then_some(Refutation { j, t, residuals, source: RefutationSource::Sweep })
        }
        None => None,
    };
    let record = SweepRecord { j, direction: d, wedge_on_left: left, bound, min_dev: best };
    Ok((record, refutation, evaluations))
}

/// Runs all stages and assembles the verdict.
pub(super) fn verify(fan: &Fan, m1: &Measure, m2: &Measure, opts: &VerifyOptions) -> Result<Verdict, CertifyError> {
    if !(opts.grid_step > 0.0 && opts.grid_step.is_finite()) {
        return Err(CertifyError::InvalidParameter(format!("grid_step must be positive, got {}", opts.grid_step)));
    }
    let p = Problem::new(fan, m1, m2)?;
    let mut evaluations = 0u64;
    let mut regions = Vec::new();
    let mut per_j = Vec::new();
    let mut coarse = Vec::new();
    let mut refutations = Vec::new();

    for j in 0..fan.len() {
        let region = region_for(&p, j, opts);
        let (outcome, evals) = grid_stage(&p, &region, opts)?;
        evaluations += evals;
        regions.push(region);
        match outcome {
            GridOutcome::Certified(s) => per_j.push(s),
            GridOutcome::TooCoarse(s) => {
                coarse.push(s.j);
                per_j.push(s);
            }
            GridOutcome::Witness(r) => {
                refutations.push(r);
                break;
            }
        }
    }
    if let Some(r) = refutations.into_iter().next() {
        return Ok(Verdict::Refutation(r));
    }

    let mut boundary = BoundaryCases::default();
    if p.compact {
        boundary.zero_crossing = Some(zero_crossing_bound(&p));
        for (j, region) in regions.iter().enumerate() {
            for left in [true, false] {
                let (rec, refutation, evals) = one_line_sweep(&p, j, left, region.covered_radius, opts)?;
                evaluations += evals;
                if let Some(r) = refutation {
                    return Ok(Verdict::Refutation(r));
                }
                boundary.one_line.push(rec);
            }
        }
    } else {
        boundary.note = Some(
            "region-bounded: a measure has unbounded support, so apexes outside the searched squares \
             are not covered"
                .into(),
        );
    }

    let grid_delta = per_j.iter().map(|s| s.delta).fold(f64::INFINITY, f64::min);
    if !coarse.is_empty() {
        return Err(CertifyError::GridTooCoarse { indices: coarse, bound: grid_delta, grid_step: opts.grid_step });
    }
    let mut delta = grid_delta;
    if let Some(z) = boundary.zero_crossing {
        delta = delta.min(z);
    }
    for s in &boundary.one_line {
        delta = delta.min(s.bound);
    }
    if delta <= 0.0 {
        return Err(CertifyError::GridTooCoarse { indices: Vec::new(), bound: delta, grid_step: opts.grid_step });
    }
    Ok(Verdict::Certificate(Certificate {
        delta,
        region: regions,
        grid_step: opts.grid_step,
        lipschitz: p.global_lipschitz(),
        boundary_cases: boundary,
        evaluations,
        per_j,
        region_bounded: !p.compact,
    }))
}

/// Deviation at `t` for wedge `j`, for independent re-checks.
pub fn deviation(fan: &Fan, m1: &Measure, m2: &Measure, j: usize, t: Vector2) -> Result<f64, CertifyError> {
    let w = fan.wedge(j, t)?;
    Ok((m1.wedge_mass(&w)? - 0.5).abs().max((m2.wedge_mass(&w)? - 0.5).abs()))
}

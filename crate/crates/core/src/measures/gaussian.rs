//! Isotropic Gaussian measures.
//!
//! Wedge masses use polar coordinates about the apex. Along each ray the
//! radial integral has a closed form in `exp` and `erfc`; the angular
//! integral is done by adaptive Gauss–Kronrod quadrature.

use std::f64::consts::{PI, SQRT_2};

use libm::erfc;

use crate::geom::{Halfplane, Vector2, Wedge};

use super::{MeasureError, SupportBounds};

/// Effective support radius in units of sigma.
pub const DEFAULT_SUPPORT_SIGMAS: f64 = 8.0;
/// Absolute tolerance of the angular quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Maximum bisection depth of the angular quadrature.
pub const QUADRATURE_MAX_LEVELS: u32 = 60;
/// Wedges whose mass is provably below this are reported as empty.
const TAIL_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMeasure {
    pub mean: Vector2,
    pub sigma: f64,
    pub support_sigmas: f64,
}

impl GaussianMeasure {
    pub fn new(mean: Vector2, sigma: f64) -> Result<Self, MeasureError> {
        Self::with_support_sigmas(mean, sigma, DEFAULT_SUPPORT_SIGMAS)
    }

    pub fn with_support_sigmas(
        mean: Vector2,
        sigma: f64,
        support_sigmas: f64,
    ) -> Result<Self, MeasureError> {
        if !mean.is_finite() {
            return Err(MeasureError::InvalidGaussian("mean is not finite".into()));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(MeasureError::InvalidGaussian(format!("sigma must be positive, got {sigma}")));
        }
        if !(support_sigmas > 0.0 && support_sigmas.is_finite()) {
            return Err(MeasureError::InvalidGaussian(format!(
                "support radius multiplier must be positive, got {support_sigmas}"
            )));
        }
        Ok(Self { mean, sigma, support_sigmas })
    }

    pub fn density(&self, p: Vector2) -> f64 {
        let s2 = self.sigma * self.sigma;
        (-(p - self.mean).norm_sq() / (2.0 * s2)).exp() / (2.0 * PI * s2)
    }

    pub fn halfplane_mass(&self, h: &Halfplane) -> f64 {
        let z = (h.offset - self.mean.dot(h.normal)) / self.sigma;
        0.5 * erfc(-z / SQRT_2)
    }

    pub fn support_bounds(&self) -> SupportBounds {
        SupportBounds { center: self.mean, radius: self.support_sigmas * self.sigma, exact: false }
    }

    pub fn transformed(&self, lambda: f64, v: Vector2) -> Self {
        Self { mean: self.mean * lambda + v, sigma: self.sigma * lambda, ..*self }
    }

    /// Mass on the ray segment of directions `u(φ)` per unit angle.
    fn radial(&self, d: Vector2, dd: f64, u: Vector2) -> f64 {
        let two_s2 = 2.0 * self.sigma * self.sigma;
        let p = d.dot(u);
        let q = d.cross(u);
        let x = p / (self.sigma * SQRT_2);
        let v = (-dd / two_s2).exp() - PI.sqrt() * x * (-(q * q) / two_s2).exp() * erfc(x);
        v.max(0.0) / (2.0 * PI)
    }
}

/// Mass of a wedge of angle at most π under an isotropic Gaussian.
pub fn gaussian_wedge_mass(m: &GaussianMeasure, w: &Wedge) -> Result<f64, MeasureError> {
    if w.is_halfplane() {
        return Ok(m.halfplane_mass(&Halfplane::from_straight_wedge(w)));
    }
    let bound = m
        .halfplane_mass(&Halfplane::left_of(w.apex, w.dir_lo))
        .min(m.halfplane_mass(&Halfplane::left_of(w.apex, -w.dir_hi)));
    if bound <= TAIL_CUTOFF {
        return Ok(0.0);
    }
    let d = w.apex - m.mean;
    let dd = d.norm_sq();
    let lo = w.dir_lo;
    let f = |phi: f64| m.radial(d, dd, lo.rotate(phi));
    let v = adaptive_gk15(&f, 0.0, w.angle, QUADRATURE_TOL, QUADRATURE_MAX_LEVELS)?;
    Ok(v.clamp(0.0, 1.0))
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and |Kronrod − Gauss| on `[a, b]`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adaptive_gk15(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_levels: u32,
) -> Result<f64, MeasureError> {
    let total = b - a;
    let mut stack = vec![(a, b, 0u32)];
    let mut sum = 0.0;
    while let Some((lo, hi, level)) = stack.pop() {
        let (k, err) = gk15(f, lo, hi);
        let local_tol = tol * (hi - lo) / total;
        if err <= local_tol || err <= 1e-15 * k.abs() {
            sum += k;
            continue;
        }
        if level >= max_levels {
            return Err(MeasureError::QuadratureNotConverged { tol, levels: max_levels });
        }
        let mid = 0.5 * (lo + hi);
        stack.push((mid, hi, level + 1));
        stack.push((lo, mid, level + 1));
    }
    Ok(sum)
}

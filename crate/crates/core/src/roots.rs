//! Bracketed scalar root finding.

/// Outcome of [`itp`]: the final bracket, oriented so that `f(neg) < 0`
/// and `f(pos) > 0` (either may be the larger abscissa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub neg: f64,
    pub pos: f64,
    pub f_neg: f64,
    pub f_pos: f64,
    pub evaluations: usize,
}

impl Bracket {
    pub fn mid(&self) -> f64 {
        0.5 * (self.neg + self.pos)
    }

    pub fn width(&self) -> f64 {
        (self.pos - self.neg).abs()
    }
}

/// ITP (interpolate, truncate, project) root search on `[a, b]`.
///
/// `fa` and `fb` must have opposite strict signs. Stops when the bracket is
/// no wider than `2·eps`, or as soon as `|f| ≤ ftol` at an iterate (that
/// iterate becomes both ends of the returned bracket). Worst case is one
/// step more than plain bisection; smooth roots converge superlinearly.
pub fn itp(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    eps: f64,
    ftol: f64,
) -> Bracket {
    debug_assert!(fa * fb < 0.0, "itp needs a sign change: f({a}) = {fa}, f({b}) = {fb}");
    // Orient so that ya < 0 < yb with a < b.
    let (mut a, mut b, mut ya, mut yb) = if a <= b { (a, b, fa, fb) } else { (b, a, fb, fa) };
    let sign = if ya < 0.0 { 1.0 } else { -1.0 };
    ya *= sign;
    yb *= sign;
    let eps = eps.max(f64::EPSILON * a.abs().max(b.abs()));
    let mut evaluations = 0usize;

    let n_half = ((b - a) / (2.0 * eps)).log2().ceil().max(0.0);
    let n_max = n_half + 1.0;
    let k1 = 0.2 / (b - a);
    let mut j = 0.0;
    while b - a > 2.0 * eps {
        let x_half = 0.5 * (a + b);
        let r = (eps * 2f64.powf(n_max - j) - 0.5 * (b - a)).max(0.0);
        let delta = k1 * (b - a) * (b - a);
        let x_f = (yb * a - ya * b) / (yb - ya);
        let sigma = (x_half - x_f).signum();
        let x_t = if delta <= (x_half - x_f).abs() { x_f + sigma * delta } else { x_half };
        let x = if (x_t - x_half).abs() <= r { x_t } else { x_half - sigma * r };
        let y = sign * f(x);
        evaluations += 1;
        if y.abs() <= ftol {
            return finish(x, x, y * sign, y * sign, sign, evaluations);
        }
        if y > 0.0 {
            b = x;
            yb = y;
        } else if y < 0.0 {
            a = x;
            ya = y;
        } else {
            return finish(x, x, 0.0, 0.0, sign, evaluations);
        }
        j += 1.0;
    }
    finish(a, b, ya * sign, yb * sign, sign, evaluations)
}

fn finish(a: f64, b: f64, fa: f64, fb: f64, sign: f64, evaluations: usize) -> Bracket {
    // Internally f(a) < 0 < f(b) for sign·f; map back to the caller's f.
    if sign > 0.0 {
        Bracket { neg: a, pos: b, f_neg: fa, f_pos: fb, evaluations }
    } else {
        Bracket { neg: b, pos: a, f_neg: fb, f_pos: fa, evaluations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let br = itp(|x| x * x * x - 2.0, 0.0, 2.0, -2.0, 6.0, 1e-14, 0.0);
        assert!((br.mid() - 2f64.cbrt()).abs() < 1e-13);
        assert!(br.f_neg <= 0.0 && br.f_pos >= 0.0, "{br:?}");
        assert!(br.evaluations < 20);
    }

    #[test]
    fn decreasing_function_and_reversed_interval() {
        let br = itp(|x| 1.0 - x, 3.0, -1.0, -2.0, 2.0, 1e-12, 0.0);
        assert!((br.mid() - 1.0).abs() < 1e-12);
        assert!(br.neg >= 1.0 && br.pos <= 1.0);
    }

    #[test]
    fn step_function_converges_like_bisection() {
        let br = itp(|x| if x < 0.3 { -1.0 } else { 1.0 }, 0.0, 1.0, -1.0, 1.0, 1e-12, 0.0);
        assert!(br.neg < 0.3 && br.pos >= 0.3 && br.width() <= 2e-12);
        assert!(br.evaluations <= 42);
    }

    #[test]
    fn early_exit_on_small_residual() {
        let br = itp(|x| x - 0.25, 0.0, 1.0, -0.25, 0.75, 1e-15, 1e-3);
        assert_eq!(br.neg, br.pos);
        assert!((br.neg - 0.25).abs() <= 1e-3);
    }
}

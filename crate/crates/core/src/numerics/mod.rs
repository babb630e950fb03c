//! Shared numerical machinery: adaptive Runge-Kutta integration, adaptive
//! Gauss-Kronrod quadrature, incomplete-gamma evaluation and linear fits.

pub mod fit;
pub mod ode;
pub mod quad;
pub mod special;

/// Safeguarded Newton iteration on a bracketed monotone function.
///
/// `f` returns (value, derivative). The root must lie in [lo, hi].
/// Falls back to bisection whenever the Newton step leaves the bracket.
pub fn bracketed_newton<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> f64
where
    F: FnMut(f64) -> (f64, f64),
{
    let (flo, _) = f(lo);
    if flo == 0.0 {
        return lo;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == flo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let newton = if dfx != 0.0 { x - fx / dfx } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo).abs() <= tol {
            return x;
        }
    }
    x
}

/// Cubic Hermite interpolation of (y0, d0) at t=0 and (y1, d1) at t=1.
pub fn hermite(t: f64, h: f64, y0: f64, d0: f64, y1: f64, d1: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d1
}

/// Derivative (with respect to the physical abscissa) of `hermite`.
pub fn hermite_deriv(t: f64, h: f64, y0: f64, d0: f64, y1: f64, d1: f64) -> f64 {
    let t2 = t * t;
    ((6.0 * t2 - 6.0 * t) * y0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * d0
        + (-6.0 * t2 + 6.0 * t) * y1
        + (3.0 * t2 - 2.0 * t) * h * d1)
        / h
}

//! Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)).
//!
//! The integrator records every accepted step together with the derivative at
//! the step endpoints, so trajectories can later be resampled with cubic
//! Hermite interpolation without losing the integrator's accuracy order.

use crate::error::{Error, Result};

/// Dormand-Prince 5(4) coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One accepted integration step: solution and derivative at both endpoints.
#[derive(Debug, Clone)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub dy0: [f64; N],
    pub dy1: [f64; N],
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_init: 1e-6, h_max: f64::INFINITY, max_steps: 2_000_000 }
    }
}

/// Integrate y' = f(t, y) from t0 toward t_end (either direction), stopping
/// early when `stop(t, y)` turns true. Returns the accepted steps in order.
pub fn integrate_adaptive<const N: usize, F, S>(
    mut f: F,
    t0: f64,
    t_end: f64,
    y0: [f64; N],
    opts: &OdeOptions,
    mut stop: S,
) -> Result<Vec<Step<N>>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    S: FnMut(f64, &[f64; N]) -> bool,
{
    let dir = (t_end - t0).signum();
    if dir == 0.0 {
        return Ok(Vec::new());
    }
    let mut t = t0;
    let mut y = y0;
    let mut dy = f(t, &y);
    let mut h = opts.h_init.min(opts.h_max).min((t_end - t0).abs()) * dir;
    let mut steps: Vec<Step<N>> = Vec::new();

    for _ in 0..opts.max_steps {
        if (t - t_end) * dir >= 0.0 {
            return Ok(steps);
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        // Seven stages; FSAL reuses the first derivative.
        let mut k = [[0.0; N]; 7];
        k[0] = dy;
        for i in 1..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i) {
                for n in 0..N {
                    yi[n] += h * A[i][j] * kj[n];
                }
            }
            k[i] = f(t + C[i] * h, &yi);
        }
        let mut y5 = y;
        let mut err = 0.0_f64;
        for n in 0..N {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for i in 0..7 {
                d5 += B5[i] * k[i][n];
                d4 += B4[i] * k[i][n];
            }
            y5[n] += h * d5;
            let scale = opts.atol + opts.rtol * y[n].abs().max(y5[n].abs());
            let e = h * (d5 - d4) / scale;
            err += e * e;
        }
        err = (err / N as f64).sqrt();

        if err <= 1.0 {
            let dy1 = k[6]; // FSAL: stage 7 is f at the new point
            steps.push(Step { t0: t, t1: t + h, y0: y, y1: y5, dy0: dy, dy1 });
            t += h;
            y = y5;
            dy = dy1;
            if stop(t, &y) {
                return Ok(steps);
            }
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h = (h * fac).abs().min(opts.h_max).copysign(dir);
        if h.abs() < f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::ConvergenceFailure(format!(
                "step size underflow at t = {t} (err = {err:.3e})"
            )));
        }
    }
    Err(Error::ConvergenceFailure(format!(
        "step budget of {} exhausted at t = {t}",
        opts.max_steps
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_decay() {
        let steps =
            integrate_adaptive(|_, y: &[f64; 1]| [-y[0]], 0.0, 5.0, [1.0], &OdeOptions::default(), |_, _| false)
                .unwrap();
        let last = steps.last().unwrap();
        assert_relative_eq!(last.y1[0], (-5.0_f64).exp(), max_relative = 1e-9);
    }

    #[test]
    fn harmonic_oscillator_backward() {
        // integrate backward in time; y(t) = (cos t, -sin t) reached at t = -pi
        let steps = integrate_adaptive(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            -std::f64::consts::PI,
            [1.0, 0.0],
            &OdeOptions::default(),
            |_, _| false,
        )
        .unwrap();
        let last = steps.last().unwrap();
        assert_relative_eq!(last.y1[0], -1.0, max_relative = 1e-8);
        assert!(last.y1[1].abs() < 1e-8);
    }

    #[test]
    fn stop_condition_halts_integration() {
        let steps = integrate_adaptive(
            |_, y: &[f64; 1]| [y[0]],
            0.0,
            100.0,
            [1.0],
            &OdeOptions::default(),
            |_, y| y[0] > 10.0,
        )
        .unwrap();
        let last = steps.last().unwrap();
        assert!(last.y1[0] > 10.0 && last.y1[0] < 11.0);
        assert!(last.t1 < 3.0);
    }
}

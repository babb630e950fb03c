//! Run orchestration: configuration, diagnostic fits and verification suites.

pub mod config;
pub mod verify;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::fit::{fit_decay, DecayModel};

/// Default fit window for power-law diagnostics (in shifted time 1 + t).
pub const DEFAULT_POWER_WINDOW: (f64, f64) = (10.0, 1e3);
/// Default fit window for exponential diagnostics.
pub const DEFAULT_EXP_WINDOW: (f64, f64) = (20.0, 200.0);

/// Minimum number of samples a windowed fit must see.
pub const MIN_FIT_SAMPLES: usize = 8;

/// A sampled decay diagnostic together with its windowed fit.
#[derive(Debug, Clone, Serialize)]
pub struct DecaySeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub fit_kind: DecayModel,
    /// Fitted log-space slope: the power exponent or the signed
    /// exponential rate; negative means decay.
    pub slope: f64,
    /// Log-space intercept (ln of the fitted amplitude).
    pub intercept: f64,
    pub r2: f64,
    /// The (t_lo, t_hi) range the fit actually used.
    pub window: (f64, f64),
}

/// Fit a decay law to the samples falling inside `window`.
///
/// Requires at least `MIN_FIT_SAMPLES` in-window samples, all positive;
/// fewer samples mean the diagnostic cannot support a rate claim.
pub fn fit_decay_series(
    times: &[f64],
    values: &[f64],
    fit_kind: DecayModel,
    window: (f64, f64),
) -> Result<DecaySeries> {
    if times.len() != values.len() {
        return Err(Error::InsufficientData(format!(
            "mismatched sample lengths {} vs {}",
            times.len(),
            values.len()
        )));
    }
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&t, &y) in times.iter().zip(values) {
        if t >= window.0 && t <= window.1 {
            ts.push(t);
            ys.push(y);
        }
    }
    if ts.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "window [{}, {}] holds {} samples, need >= {MIN_FIT_SAMPLES}",
            window.0,
            window.1,
            ts.len()
        )));
    }
    let fit = fit_decay(&ts, &ys, fit_kind)?;
    Ok(DecaySeries {
        times: times.to_vec(),
        values: values.to_vec(),
        fit_kind,
        slope: fit.rate,
        intercept: fit.amplitude.ln(),
        r2: fit.r_squared,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::fit::log_space;
    use approx::assert_relative_eq;

    #[test]
    fn windowed_fit_ignores_outside_samples() {
        // corrupt samples outside the window must not move the fit
        let t: Vec<f64> = log_space(1.0, 1e4, 32);
        let y: Vec<f64> =
            t.iter().map(|&ti| if ti < 10.0 { 7.0 } else { 2.0 * ti.powf(-1.5) }).collect();
        let s = fit_decay_series(&t, &y, DecayModel::Power, (10.0, 1e4)).unwrap();
        assert_relative_eq!(s.slope, -1.5, max_relative = 1e-10);
        assert_relative_eq!(s.intercept, 2.0_f64.ln(), max_relative = 1e-8);
        assert!(s.r2 > 1.0 - 1e-10);
        assert_eq!(s.times.len(), 32);
    }

    #[test]
    fn sparse_window_is_rejected() {
        let t: Vec<f64> = log_space(1.0, 100.0, 12);
        let y: Vec<f64> = t.iter().map(|&ti| ti.powf(-1.0)).collect();
        assert!(fit_decay_series(&t, &y, DecayModel::Power, (90.0, 100.0)).is_err());
    }
}

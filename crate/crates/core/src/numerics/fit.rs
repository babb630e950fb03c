//! Least-squares decay-rate fits on sampled diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    /// y = C t^p: regress log y against log t; `rate` is the exponent p.
    Power,
    /// y = C e^{-c t}: regress log y against t; `rate` is -c.
    Exponential,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DecayFit {
    pub model: DecayModel,
    /// Power exponent, or the (signed) exponential rate; negative means decay.
    pub rate: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub n_samples: usize,
}

/// Fit a decay law to positive samples (t_i, y_i), t_i > 0.
///
/// Nonpositive y-samples are rejected: they carry no information about a
/// multiplicative decay rate and usually indicate a broken diagnostic.
pub fn fit_decay(t: &[f64], y: &[f64], model: DecayModel) -> Result<DecayFit> {
    if t.len() != y.len() {
        return Err(Error::InsufficientData(format!(
            "mismatched sample lengths {} vs {}",
            t.len(),
            y.len()
        )));
    }
    if t.len() < 3 {
        return Err(Error::InsufficientData(format!("need >= 3 samples, got {}", t.len())));
    }
    let mut xs = Vec::with_capacity(t.len());
    let mut ys = Vec::with_capacity(t.len());
    for (&ti, &yi) in t.iter().zip(y) {
        if !(ti > 0.0) || !(yi > 0.0) || !yi.is_finite() {
            return Err(Error::InsufficientData(format!(
                "sample (t={ti}, y={yi}) not usable in a log-space fit"
            )));
        }
        xs.push(match model {
            DecayModel::Power => ti.ln(),
            DecayModel::Exponential => ti,
        });
        ys.push(yi.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, yv) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (yv - my);
        syy += (yv - my) * (yv - my);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(DecayFit { model, rate: slope, amplitude: intercept.exp(), r_squared, n_samples: t.len() })
}

/// `count` logarithmically spaced points on [a, b], inclusive.
pub fn log_space(a: f64, b: f64, count: usize) -> Vec<f64> {
    debug_assert!(a > 0.0 && b > a && count >= 2);
    let (la, lb) = (a.ln(), b.ln());
    (0..count)
        .map(|i| {
            // endpoints exactly: exp(ln b) can land an ulp outside [a, b]
            if i == 0 {
                a
            } else if i == count - 1 {
                b
            } else {
                (la + (lb - la) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recovers_power_law() {
        let t = log_space(10.0, 1000.0, 24);
        let y: Vec<f64> = t.iter().map(|ti| 3.5 * ti.powf(-0.8125)).collect();
        let fit = fit_decay(&t, &y, DecayModel::Power).unwrap();
        assert_relative_eq!(fit.rate, -0.8125, max_relative = 1e-12);
        assert_relative_eq!(fit.amplitude, 3.5, max_relative = 1e-10);
        assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn recovers_exponential_law() {
        let t: Vec<f64> = (20..=200).step_by(10).map(|i| i as f64).collect();
        let y: Vec<f64> = t.iter().map(|ti| 0.2 * (-0.03 * ti).exp()).collect();
        let fit = fit_decay(&t, &y, DecayModel::Exponential).unwrap();
        assert_relative_eq!(fit.rate, -0.03, max_relative = 1e-12);
        assert_relative_eq!(fit.amplitude, 0.2, max_relative = 1e-10);
    }

    #[test]
    fn rejects_nonpositive_samples() {
        assert!(fit_decay(&[1.0, 2.0, 3.0], &[1.0, 0.0, 1.0], DecayModel::Power).is_err());
        assert!(fit_decay(&[1.0, 2.0], &[1.0, 1.0], DecayModel::Power).is_err());
    }
}

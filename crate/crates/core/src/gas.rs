//! Ideal polytropic gas thermodynamics, characteristic speeds and
//! sonic-region classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on |M - 1| below which a state is classified as transonic.
///
/// The sonic state of the composite wave sits exactly on the transonic set by
/// construction, so it is detected by tolerance, not by measurement.
pub const TOL_MACH: f64 = 1e-9;

/// Physical constants of the gas: gas constant, adiabatic exponent,
/// viscosity, heat conduction and the entropy normalization constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasParams {
    pub r: f64,
    pub gamma: f64,
    pub mu: f64,
    pub kappa: f64,
    #[serde(default = "default_entropy_norm")]
    pub a: f64,
}

fn default_entropy_norm() -> f64 {
    1.0
}

impl GasParams {
    pub fn new(r: f64, gamma: f64, mu: f64, kappa: f64) -> Self {
        Self { r, gamma, mu, kappa, a: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.gamma > 1.0 && self.mu > 0.0 && self.kappa > 0.0 && self.a > 0.0)
        {
            return Err(Error::Domain(format!(
                "gas parameters must satisfy R>0, gamma>1, mu>0, kappa>0, A>0; got {self:?}"
            )));
        }
        Ok(())
    }
}

/// A point (v, u, theta) in phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoState {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
}

impl ThermoState {
    pub fn new(v: f64, u: f64, theta: f64) -> Self {
        Self { v, u, theta }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v > 0.0 && self.theta > 0.0 && self.v.is_finite() && self.theta.is_finite()) {
            return Err(Error::Domain(format!(
                "state requires v > 0 and theta > 0; got v={}, theta={}",
                self.v, self.theta
            )));
        }
        Ok(())
    }
}

/// Derived quantities of the equation of state at a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosOutput {
    pub p: f64,
    pub e: f64,
    pub s_entropy: f64,
}

/// p = R theta / v, e = R theta / (gamma - 1), and the entropy solving
/// p = A v^{-gamma} exp((gamma-1) s / R).
pub fn eval_eos(state: &ThermoState, gas: &GasParams) -> Result<EosOutput> {
    gas.validate()?;
    state.validate()?;
    let p = gas.r * state.theta / state.v;
    let e = gas.r * state.theta / (gas.gamma - 1.0);
    // p v^gamma / A = exp((gamma-1) s / R)
    let s_entropy = gas.r / (gas.gamma - 1.0) * (p * state.v.powf(gas.gamma) / gas.a).ln();
    Ok(EosOutput { p, e, s_entropy })
}

/// Recover (v, theta) from (p, s); inverse of `eval_eos` given u.
pub fn state_from_pressure_entropy(p: f64, s: f64, u: f64, gas: &GasParams) -> Result<ThermoState> {
    gas.validate()?;
    if !(p > 0.0) {
        return Err(Error::Domain(format!("pressure must be positive, got {p}")));
    }
    // p = A v^{-gamma} exp((gamma-1) s / R)  =>  v = (A exp((gamma-1)s/R) / p)^{1/gamma}
    let v = (gas.a * ((gas.gamma - 1.0) * s / gas.r).exp() / p).powf(1.0 / gas.gamma);
    let theta = p * v / gas.r;
    Ok(ThermoState::new(v, u, theta))
}

pub fn pressure(state: &ThermoState, gas: &GasParams) -> f64 {
    gas.r * state.theta / state.v
}

/// Sound speed c = sqrt(R gamma theta).
pub fn sound_speed(state: &ThermoState, gas: &GasParams) -> f64 {
    (gas.r * gas.gamma * state.theta).sqrt()
}

pub fn mach(state: &ThermoState, gas: &GasParams) -> f64 {
    state.u.abs() / sound_speed(state, gas)
}

/// The three characteristic speeds (lambda_1, 0, lambda_3) in Lagrangian
/// coordinates, lambda_{1,3} = -+ sqrt(R gamma theta) / v.
pub fn char_speeds(state: &ThermoState, gas: &GasParams) -> Result<(f64, f64, f64)> {
    gas.validate()?;
    state.validate()?;
    let c = sound_speed(state, gas);
    Ok((-c / state.v, 0.0, c / state.v))
}

/// Sonic classification by the Mach number, crossed with the velocity sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SonicRegion {
    SubsonicPlus,
    SubsonicMinus,
    TransonicPlus,
    TransonicMinus,
    SupersonicPlus,
    SupersonicMinus,
}

impl SonicRegion {
    pub fn is_positive(&self) -> bool {
        matches!(
            self,
            SonicRegion::SubsonicPlus | SonicRegion::TransonicPlus | SonicRegion::SupersonicPlus
        )
    }
}

pub fn classify(state: &ThermoState, gas: &GasParams) -> Result<SonicRegion> {
    gas.validate()?;
    state.validate()?;
    let m = mach(state, gas);
    let positive = state.u > 0.0;
    Ok(if (m - 1.0).abs() <= TOL_MACH {
        if positive { SonicRegion::TransonicPlus } else { SonicRegion::TransonicMinus }
    } else if m < 1.0 {
        if positive { SonicRegion::SubsonicPlus } else { SonicRegion::SubsonicMinus }
    } else if positive {
        SonicRegion::SupersonicPlus
    } else {
        SonicRegion::SupersonicMinus
    })
}

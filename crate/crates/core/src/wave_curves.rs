//! Wave-curve geometry in phase space and the medium-state solver for the
//! four-wave decomposition.
//!
//! A case consists of five states: boundary (left), sonic (star), mid,
//! post-contact (star_up) and far field (right), linked by
//!
//!   left --boundary layer-- star --1-rarefaction-- mid --contact-- star_up
//!        --3-rarefaction-- right
//!
//! with the sonic state exactly transonic and on the boundary ray
//! u/v = u_-/v_-.  Rarefaction curves are isentropes, so everything except
//! the layer is available in closed form through the variable
//! z = v^{(1-gamma)/2}, in which the curves are straight lines.

use serde::{Deserialize, Serialize};

use crate::boundary_layer::{self, BlCase};
use crate::error::{Error, Result};
use crate::gas::{self, GasParams, ThermoState};

/// Wave strengths of a case; `delta` is the total end-state jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveStrengths {
    pub delta_b: f64,
    pub delta_r1: f64,
    pub delta_d: f64,
    pub delta_r3: f64,
    pub delta: f64,
}

/// Requested strengths for case generation (the total jump is an output).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrengthInput {
    pub delta_b: f64,
    pub delta_r1: f64,
    pub delta_d: f64,
    pub delta_r3: f64,
}

impl StrengthInput {
    pub fn zero() -> Self {
        Self { delta_b: 0.0, delta_r1: 0.0, delta_d: 0.0, delta_r3: 0.0 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta_b >= 0.0
            && self.delta_r1 >= 0.0
            && self.delta_d >= 0.0
            && self.delta_r3 >= 0.0)
        {
            return Err(Error::InvalidStrengths(format!("strengths must be >= 0, got {self:?}")));
        }
        Ok(())
    }
}

/// The five states and strengths of one four-wave case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseSetup {
    pub left: ThermoState,
    pub right: ThermoState,
    pub star: ThermoState,
    pub mid: ThermoState,
    pub star_up: ThermoState,
    pub sigma_minus: f64,
    pub strengths: WaveStrengths,
}

/// Relative tolerance the nine case residuals must meet.
pub const CASE_RESIDUAL_TOL: f64 = 1e-8;

impl CaseSetup {
    /// The nine defining residuals, each scaled to be dimensionless.
    pub fn residuals(&self, g: &GasParams) -> Result<Vec<(&'static str, f64)>> {
        let (l, r) = (&self.left, &self.right);
        let (st, m, su) = (&self.star, &self.mid, &self.star_up);
        let mut out = Vec::new();
        out.push((
            "sonic_state_transonic",
            (st.u - gas::sound_speed(st, g)) / st.u,
        ));
        out.push(("boundary_ray", (st.u / st.v - l.u / l.v) / (l.u / l.v)));
        let sig = boundary_layer::sigma_membership_distance((l.u, l.theta), st, g)?;
        out.push(("layer_orbit_membership", sig / st.u.max(st.theta)));
        out.push(("contact_velocity", (m.u - su.u) / m.u));
        out.push((
            "contact_pressure",
            (gas::pressure(m, g) - gas::pressure(su, g)) / gas::pressure(m, g),
        ));
        let s = |x: &ThermoState| gas::eval_eos(x, g).map(|e| e.s_entropy);
        out.push(("fan1_entropy", (s(st)? - s(m)?) / (1.0 + s(m)?.abs())));
        out.push(("fan3_entropy", (s(su)? - s(r)?) / (1.0 + s(r)?.abs())));
        out.push(("fan1_velocity", (st.u - curve_u(1, m, st.v, g)) / m.u));
        out.push(("fan3_velocity", (su.u - curve_u(3, r, su.v, g)) / r.u));
        Ok(out)
    }

    pub fn validate(&self, g: &GasParams) -> Result<()> {
        for (name, r) in self.residuals(g)? {
            if !(r.abs() <= CASE_RESIDUAL_TOL) {
                return Err(Error::NoSolution(format!(
                    "case residual {name} = {r:.3e} exceeds {CASE_RESIDUAL_TOL}"
                )));
            }
        }
        Ok(())
    }
}

fn z_of(v: f64, g: &GasParams) -> f64 {
    v.powf(0.5 * (1.0 - g.gamma))
}

fn v_of_z(z: f64, g: &GasParams) -> f64 {
    z.powf(2.0 / (1.0 - g.gamma))
}

/// Isentrope coefficient K with lambda_i = -+ K v^{-(gamma+1)/2}.
fn curve_k(anchor: &ThermoState, g: &GasParams) -> f64 {
    (g.r * g.gamma * anchor.theta * anchor.v.powf(g.gamma - 1.0)).sqrt()
}

/// Velocity on the i-family isentropic curve through `anchor` at volume v.
fn curve_u(family: u8, anchor: &ThermoState, v: f64, g: &GasParams) -> f64 {
    let k = curve_k(anchor, g);
    let dz = z_of(v, g) - z_of(anchor.v, g);
    let sign = if family == 1 { -1.0 } else { 1.0 };
    anchor.u + sign * 2.0 * k / (g.gamma - 1.0) * dz
}

/// Point on the i-family rarefaction curve through `anchor` at volume v:
/// same entropy, velocity from the closed-form characteristic integral.
pub fn rarefaction_branch(
    family: u8,
    anchor: &ThermoState,
    v: f64,
    g: &GasParams,
) -> Result<ThermoState> {
    g.validate()?;
    anchor.validate()?;
    if family != 1 && family != 3 {
        return Err(Error::Domain(format!("rarefaction family must be 1 or 3, got {family}")));
    }
    if !(v > 0.0) {
        return Err(Error::Domain(format!("curve parameter must satisfy v > 0, got {v}")));
    }
    if v == anchor.v {
        // degenerate curve segment: keep the anchor bitwise
        return Ok(*anchor);
    }
    let theta = anchor.theta * (anchor.v / v).powf(g.gamma - 1.0);
    Ok(ThermoState::new(v, curve_u(family, anchor, v, g), theta))
}

/// Sonic state on the 1-family curve through `mid`: the unique volume where
/// u(v) = sqrt(R gamma theta(v)).  In the z variable both sides are linear.
///
/// Requires the mid state to be supersonic (otherwise the sonic point lies
/// forward of mid and the 1-fan would be oriented the wrong way).
fn sonic_state_on_fan1(mid: &ThermoState, g: &GasParams) -> Result<ThermoState> {
    let k = curve_k(mid, g);
    let z_m = z_of(mid.v, g);
    let z_star = ((g.gamma - 1.0) * mid.u + 2.0 * k * z_m) / ((g.gamma + 1.0) * k);
    if !(z_star > 0.0) {
        return Err(Error::InvalidStrengths("no sonic point on the 1-curve with v > 0".into()));
    }
    if z_star < z_m * (1.0 - 1e-12) {
        return Err(Error::InvalidStrengths(format!(
            "mid state is subsonic (M = {:.6}); the 1-fan cannot reach the sonic set",
            gas::mach(mid, g)
        )));
    }
    let v = v_of_z(z_star, g);
    rarefaction_branch(1, mid, v, g)
}

struct MediumStates {
    star: ThermoState,
    mid: ThermoState,
    star_up: ThermoState,
}

/// Medium states as functions of the reduced unknowns (v_up = volume of the
/// post-contact state, theta_m = mid temperature), right state fixed.
fn medium_from_reduced(
    v_up: f64,
    theta_m: f64,
    right: &ThermoState,
    g: &GasParams,
) -> Result<MediumStates> {
    if !(v_up > 0.0 && theta_m > 0.0) {
        return Err(Error::Domain("reduced unknowns left the positive cone".into()));
    }
    let star_up = rarefaction_branch(3, right, v_up, g)?;
    let p_up = gas::pressure(&star_up, g);
    let v_m = g.r * theta_m / p_up;
    let mid = ThermoState::new(v_m, star_up.u, theta_m);
    let star = sonic_state_on_fan1(&mid, g)?;
    Ok(MediumStates { star, mid, star_up })
}

fn norm3(a: &ThermoState, b: &ThermoState) -> f64 {
    ((a.v - b.v).powi(2) + (a.u - b.u).powi(2) + (a.theta - b.theta).powi(2)).sqrt()
}

fn assemble_case(
    ms: MediumStates,
    right: &ThermoState,
    delta_b: f64,
    g: &GasParams,
) -> Result<CaseSetup> {
    let star = ms.star;
    let left = if delta_b == 0.0 {
        star
    } else {
        boundary_layer::solve_bl_transonic(&star, delta_b, Some(1.0), g)?.boundary
    };
    let strengths = WaveStrengths {
        delta_b,
        delta_r1: ms.mid.u - star.u,
        delta_d: (ms.star_up.theta - ms.mid.theta).abs(),
        delta_r3: right.u - ms.star_up.u,
        delta: norm3(right, &left),
    };
    Ok(CaseSetup {
        left,
        right: *right,
        star,
        mid: ms.mid,
        star_up: ms.star_up,
        sigma_minus: -left.u / left.v,
        strengths,
    })
}

/// Forward construction from the far-field state: walk the 3-curve, the
/// contact and the 1-curve backward, project onto the sonic set, then attach
/// the boundary layer.
///
/// The sonic projection fixes the 1-fan strength, so the requested delta_r1
/// is only a hint; the realized value is reported in the output.  Use
/// `generate_case_from_sonic` when exact strengths are needed.
pub fn generate_case(
    right: &ThermoState,
    req: &StrengthInput,
    g: &GasParams,
) -> Result<CaseSetup> {
    g.validate()?;
    right.validate()?;
    req.validate()?;
    let k_r = curve_k(right, g);
    let z_up = z_of(right.v, g) - req.delta_r3 * (g.gamma - 1.0) / (2.0 * k_r);
    if !(z_up > 0.0) {
        return Err(Error::InvalidStrengths("3-fan strength pushes the volume past infinity".into()));
    }
    let star_up = rarefaction_branch(3, right, v_of_z(z_up, g), g)?;
    let theta_m = star_up.theta + req.delta_d;
    let ms = medium_from_reduced(star_up.v, theta_m, right, g)?;
    assemble_case(ms, right, req.delta_b, g)
}

/// Forward construction from a prescribed sonic state (v, theta given,
/// u = sound speed); honors every requested strength exactly and derives
/// the far-field state.
pub fn generate_case_from_sonic(
    v_star: f64,
    theta_star: f64,
    req: &StrengthInput,
    g: &GasParams,
) -> Result<CaseSetup> {
    g.validate()?;
    req.validate()?;
    let star = ThermoState::new(v_star, (g.r * g.gamma * theta_star).sqrt(), theta_star);
    star.validate()?;
    let k_s = curve_k(&star, g);
    // 1-curve forward: u rises by delta_r1; zero strength must keep the
    // state bitwise (the z round trip is not exact)
    let mid = if req.delta_r1 == 0.0 {
        star
    } else {
        let z_m = z_of(star.v, g) - req.delta_r1 * (g.gamma - 1.0) / (2.0 * k_s);
        if !(z_m > 0.0) {
            return Err(Error::InvalidStrengths(
                "1-fan strength pushes the volume past infinity".into(),
            ));
        }
        rarefaction_branch(1, &star, v_of_z(z_m, g), g)?
    };
    // contact: equal velocity and pressure, temperature drops by delta_d
    let theta_up = mid.theta - req.delta_d;
    if !(theta_up > 0.0) {
        return Err(Error::InvalidStrengths("contact strength exceeds the mid temperature".into()));
    }
    let star_up = if req.delta_d == 0.0 {
        mid
    } else {
        ThermoState::new(mid.v * theta_up / mid.theta, mid.u, theta_up)
    };
    // 3-curve forward: u rises by delta_r3
    let right = if req.delta_r3 == 0.0 {
        star_up
    } else {
        let k_u = curve_k(&star_up, g);
        let z_r = z_of(star_up.v, g) + req.delta_r3 * (g.gamma - 1.0) / (2.0 * k_u);
        rarefaction_branch(3, &star_up, v_of_z(z_r, g), g)?
    };
    assemble_case(MediumStates { star, mid, star_up }, &right, req.delta_b, g)
}

/// Recover the medium states from the end states by damped Newton on the
/// reduced unknowns (post-contact volume, mid temperature).  The sonic and
/// contact conditions hold by construction at every iterate; the two
/// residuals are the boundary-ray condition and membership of the boundary
/// data in the layer orbit.
pub fn solve_medium_states(
    left: &ThermoState,
    right: &ThermoState,
    g: &GasParams,
) -> Result<CaseSetup> {
    g.validate()?;
    left.validate()?;
    right.validate()?;
    if left.u <= 0.0 {
        return Err(Error::Domain(format!("inflow requires u_- > 0, got {}", left.u)));
    }
    let mut x = [right.v, right.theta];
    let mut solved = false;
    // plain Newton first; on failure, 10-step continuation in the end-state gap
    for stage in 0..=10 {
        let frac = if stage == 0 { 1.0 } else { stage as f64 / 10.0 };
        let l = ThermoState::new(
            right.v + frac * (left.v - right.v),
            right.u + frac * (left.u - right.u),
            right.theta + frac * (left.theta - right.theta),
        );
        match newton_medium(&mut x, &l, right, g) {
            Ok(()) => {
                if frac == 1.0 {
                    solved = true;
                    break;
                }
            }
            Err(e) => {
                if stage == 0 {
                    continue; // fall through to continuation
                }
                return Err(e);
            }
        }
    }
    if !solved {
        return Err(Error::NoSolution("continuation did not reach the full end-state gap".into()));
    }
    let ms = medium_from_reduced(x[0], x[1], right, g)?;
    if boundary_layer::bl_existence(&ms.star, g)? != BlCase::Transonic {
        return Err(Error::InvalidRegion(format!(
            "recovered sonic state {:?} is not transonic inflow",
            ms.star
        )));
    }
    let delta_b =
        ((left.u - ms.star.u).powi(2) + (left.theta - ms.star.theta).powi(2)).sqrt();
    let case = assemble_case(ms, right, if delta_b < 1e-12 { 0.0 } else { delta_b }, g)?;
    // the assembled boundary state must reproduce the given one
    let mismatch = norm3(&case.left, left) / (1.0 + norm3(left, &ThermoState::new(0.0, 0.0, 0.0)));
    if mismatch > 1e-7 {
        return Err(Error::NoSolution(format!(
            "converged medium states reproduce the boundary state only to {mismatch:.3e}"
        )));
    }
    Ok(case)
}

fn medium_residual(x: &[f64; 2], left: &ThermoState, right: &ThermoState, g: &GasParams) -> Option<[f64; 2]> {
    let ms = medium_from_reduced(x[0], x[1], right, g).ok()?;
    let ray = (ms.star.u / ms.star.v - left.u / left.v) / (left.u / left.v);
    let th_sigma = boundary_layer::sigma_theta_at_u(left.u, &ms.star, g).ok()?;
    Some([ray, (th_sigma - left.theta) / left.theta])
}

fn newton_medium(
    x: &mut [f64; 2],
    left: &ThermoState,
    right: &ThermoState,
    g: &GasParams,
) -> Result<()> {
    let mut r = medium_residual(x, left, right, g)
        .ok_or_else(|| Error::NoSolution("initial guess infeasible".into()))?;
    for _ in 0..200 {
        let rn = r[0].abs().max(r[1].abs());
        if rn <= 1e-11 {
            return Ok(());
        }
        // finite-difference Jacobian
        let mut jac = [[0.0; 2]; 2];
        for col in 0..2 {
            let h = 1e-7 * x[col].abs().max(1e-3);
            let mut xp = *x;
            xp[col] += h;
            let rp = medium_residual(&xp, left, right, g)
                .ok_or_else(|| Error::NoSolution("Jacobian probe infeasible".into()))?;
            for row in 0..2 {
                jac[row][col] = (rp[row] - r[row]) / h;
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoSolution("singular Jacobian in medium-state solve".into()));
        }
        let dx = [
            -(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            -(jac[0][0] * r[1] - jac[1][0] * r[0]) / det,
        ];
        // damped line search
        let mut lambda = 1.0;
        let mut advanced = false;
        for _ in 0..25 {
            let xt = [x[0] + lambda * dx[0], x[1] + lambda * dx[1]];
            if let Some(rt) = medium_residual(&xt, left, right, g) {
                if rt[0].abs().max(rt[1].abs()) < rn {
                    *x = xt;
                    r = rt;
                    advanced = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !advanced {
            return Err(Error::NoSolution(format!(
                "Newton stalled at residual {rn:.3e} for the medium states"
            )));
        }
    }
    Err(Error::NoSolution("medium-state Newton exceeded 200 iterations".into()))
}

//! Stationary boundary layer of the half-line inflow problem.
//!
//! The layer is the orbit of a planar autonomous ODE for (U, Θ) connecting
//! the boundary state to a far-field target moving with the boundary speed.
//! A transonic target is a degenerate saddle-knot: a single admissible orbit
//! Sigma approaches it tangentially to the null eigendirection with algebraic
//! decay ~ 1/(1 + a delta_b xi).  A subsonic target is a saddle and the orbit
//! rides the stable eigendirection with exponential decay.  A supersonic (or
//! outgoing) target admits no layer at all.
//!
//! All orbits are produced by backward integration from a point at distance
//! `EPS_LAUNCH_REL * max(u, theta)` along the relevant eigendirection; in
//! backward time the transverse direction is contracting in both cases, so
//! the shot is well conditioned.

use crate::error::{Error, Result};
use crate::gas::{self, GasParams, SonicRegion, ThermoState};
use crate::numerics::ode::{integrate_adaptive, OdeOptions, Step};
use crate::numerics::{hermite, hermite_deriv};

/// Relative offset of the launch point from the far-field fixed point.
pub const EPS_LAUNCH_REL: f64 = 1e-6;

/// Largest admissible layer strength.
pub const DELTA_B_MAX: f64 = 0.2;

/// Pair distance (relative to the target scale) at which the transonic
/// orbit is handed over to the algebraic tail model.  Beyond this point the
/// derivative recovered from the ODE right-hand side is a cancellation of
/// O(z) terms and interpolation noise dominates the true O(z^2) value.
const TAIL_SWITCH_REL: f64 = 1e-4;

/// Algebraic far tail of a transonic layer: for xi >= x_switch,
/// u = u_t - pu/(xi + s) and theta = theta_t - pth/(xi + s), matched so u
/// and u' are continuous at the switch point.
#[derive(Debug, Clone, Copy)]
struct TailModel {
    x_switch: f64,
    s: f64,
    pu: f64,
    pth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlCase {
    None,
    Transonic,
    Subsonic,
}

/// Existence classification of the layer for a given far-field target.
pub fn bl_existence(target: &ThermoState, g: &GasParams) -> Result<BlCase> {
    if target.u <= 0.0 {
        return Ok(BlCase::None);
    }
    Ok(match gas::classify(target, g)? {
        SonicRegion::TransonicPlus => BlCase::Transonic,
        SonicRegion::SubsonicPlus => BlCase::Subsonic,
        _ => BlCase::None,
    })
}

/// Right-hand side of the layer ODE for (U, Θ), target state (u_t, θ_t).
///
/// The specific-volume component is eliminated through V = U v_t / u_t,
/// which leaves only (u_t, θ_t) in the coefficients.
fn rhs(y: &[f64; 2], u_t: f64, th_t: f64, g: &GasParams) -> [f64; 2] {
    let (u, th) = (y[0], y[1]);
    let du = (u * (u - u_t) + g.r * th - g.r * th_t / u_t * u) / g.mu;
    let dth = g.r / (g.kappa * (g.gamma - 1.0)) * u * (th - th_t)
        + g.r * th_t / (g.kappa * u_t) * u * (u - u_t)
        - u * (u - u_t) * (u - u_t) / (2.0 * g.kappa);
    [du, dth]
}

/// Jacobian of `rhs` at an arbitrary point.
fn rhs_jacobian(y: &[f64; 2], u_t: f64, th_t: f64, g: &GasParams) -> [[f64; 2]; 2] {
    let (u, th) = (y[0], y[1]);
    let j11 = (2.0 * u - u_t - g.r * th_t / u_t) / g.mu;
    let j12 = g.r / g.mu;
    let j21 = g.r / (g.kappa * (g.gamma - 1.0)) * (th - th_t)
        + g.r * th_t / (g.kappa * u_t) * (2.0 * u - u_t)
        - ((u - u_t) * (u - u_t) + 2.0 * u * (u - u_t)) / (2.0 * g.kappa);
    let j22 = g.r / (g.kappa * (g.gamma - 1.0)) * u;
    [[j11, j12], [j21, j22]]
}

/// Linearization data at the far-field fixed point.
///
/// For a subsonic target this is a genuine saddle: `lam_j1 > 0 > lam_j2`,
/// `tangent` is the stable eigendirection, and `c2` is the root of the
/// invariant-line quadratic whose direction matches it (`a2` is the
/// associated normalization).  For a transonic target the determinant
/// vanishes; `lam_j2 = 0`, `tangent` is the null eigendirection and the
/// quadratic data is reported for the degenerate limit.
#[derive(Debug, Clone, Copy)]
pub struct SaddleData {
    pub lam_j1: f64,
    pub lam_j2: f64,
    pub a2: f64,
    pub c2: f64,
    pub c2_rejected: f64,
    /// Unit vector (du, dtheta) spanning the approach direction.
    pub tangent: [f64; 2],
}

pub fn saddle_data(target: &ThermoState, g: &GasParams) -> Result<SaddleData> {
    g.validate()?;
    target.validate()?;
    let (u_t, th_t) = (target.u, target.theta);
    if u_t <= 0.0 {
        return Err(Error::InvalidRegion(format!("target must have u > 0, got u = {u_t}")));
    }
    let j = rhs_jacobian(&[u_t, th_t], u_t, th_t, g);
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let lam_j1 = 0.5 * (tr + disc);
    let lam_j2 = 0.5 * (tr - disc);
    // eigendirection of the smaller eigenvalue: (1, (lam - j11)/j12)
    let mut tangent = [1.0, (lam_j2 - j[0][0]) / j[0][1]];
    let norm = (tangent[0] * tangent[0] + tangent[1] * tangent[1]).sqrt();
    tangent[0] /= norm;
    tangent[1] /= norm;

    // invariant-line quadratic y^2 + b y + c = 0; its two roots give two
    // candidate line directions (a2, 1 + a2 c2 u_t) — keep the one aligned
    // with the decaying eigendirection.
    let m2 = gas::mach(target, g).powi(2);
    let b = (m2 * g.gamma - 1.0) / (m2 * g.r * g.gamma) - g.mu / (g.kappa * (g.gamma - 1.0));
    let c = -g.mu / (m2 * g.r * g.gamma * g.kappa);
    let qdisc = (b * b - 4.0 * c).max(0.0).sqrt();
    let roots = [0.5 * (-b + qdisc), 0.5 * (-b - qdisc)];
    let a2 = -g.r / (g.mu * (lam_j1 - lam_j2));
    let align = |c2: f64| -> f64 {
        let d = [a2, 1.0 + a2 * c2 * u_t];
        let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
        ((d[0] * tangent[0] + d[1] * tangent[1]) / n).abs()
    };
    let (c2, c2_rejected) = if align(roots[0]) >= align(roots[1]) {
        (roots[0], roots[1])
    } else {
        (roots[1], roots[0])
    };
    Ok(SaddleData { lam_j1, lam_j2, a2, c2, c2_rejected, tangent })
}

/// Pointwise evaluation of a layer profile with analytic derivatives.
#[derive(Debug, Clone, Copy)]
pub struct BlPoint {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
    pub dv: f64,
    pub du: f64,
    pub dtheta: f64,
    pub d2v: f64,
    pub d2u: f64,
    pub d2theta: f64,
}

/// A constructed boundary-layer profile.
///
/// `xi`, `u`, `theta`, ... are samples on a geometrically graded grid for
/// export; `eval` interpolates the underlying integrator orbit directly and
/// is the authoritative representation.
#[derive(Debug, Clone)]
pub struct BLProfile {
    pub xi: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub v: Vec<f64>,
    pub du: Vec<f64>,
    pub dtheta: Vec<f64>,
    pub case_tag: BlCase,
    pub delta_b: f64,
    pub sigma_minus: f64,
    pub target: ThermoState,
    pub boundary: ThermoState,
    gas: GasParams,
    /// Backward orbit; `xi = s - s_end` maps orbit time s to profile abscissa.
    steps: Vec<Step<2>>,
    s_end: f64,
    tail: Option<TailModel>,
}

impl BLProfile {
    /// Length of the stored orbit in xi; the profile equals the target
    /// state (to within the launch offset) beyond it.
    pub fn orbit_extent(&self) -> f64 {
        -self.s_end
    }

    pub fn xi_max(&self) -> f64 {
        *self.xi.last().unwrap()
    }

    pub fn eval(&self, xi: f64) -> BlPoint {
        let (u_t, th_t) = (self.target.u, self.target.theta);
        if let Some(tm) = &self.tail {
            if xi >= tm.x_switch {
                let ratio = self.target.v / u_t;
                let d = xi + tm.s;
                let du = tm.pu / (d * d);
                let d2u = -2.0 * tm.pu / (d * d * d);
                let dth = tm.pth / (d * d);
                return BlPoint {
                    v: (u_t - tm.pu / d) * ratio,
                    u: u_t - tm.pu / d,
                    theta: th_t - tm.pth / d,
                    dv: du * ratio,
                    du,
                    dtheta: dth,
                    d2v: d2u * ratio,
                    d2u,
                    d2theta: -2.0 * tm.pth / (d * d * d),
                };
            }
        }
        let s = xi + self.s_end;
        let (u, th) = if xi < 0.0 {
            (self.boundary.u, self.boundary.theta)
        } else if s >= 0.0 || self.steps.is_empty() {
            (u_t, th_t)
        } else {
            // steps are ordered with decreasing time; binary search for the
            // step bracket t1 <= s <= t0
            let mut lo = 0usize;
            let mut hi = self.steps.len() - 1;
            while lo < hi {
                let mid = (lo + hi) / 2;
                if self.steps[mid].t1 <= s {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let st = &self.steps[lo];
            let h = st.t1 - st.t0;
            let t = (s - st.t0) / h;
            (
                hermite(t, h, st.y0[0], st.dy0[0], st.y1[0], st.dy1[0]),
                hermite(t, h, st.y0[1], st.dy0[1], st.y1[1], st.dy1[1]),
            )
        };
        self.point_from_state(u, th)
    }

    fn point_from_state(&self, u: f64, th: f64) -> BlPoint {
        let (u_t, th_t) = (self.target.u, self.target.theta);
        let ratio = self.target.v / u_t; // V = U v_t / u_t
        let f = rhs(&[u, th], u_t, th_t, &self.gas);
        let j = rhs_jacobian(&[u, th], u_t, th_t, &self.gas);
        let d2u = j[0][0] * f[0] + j[0][1] * f[1];
        let d2th = j[1][0] * f[0] + j[1][1] * f[1];
        BlPoint {
            v: u * ratio,
            u,
            theta: th,
            dv: f[0] * ratio,
            du: f[0],
            dtheta: f[1],
            d2v: d2u * ratio,
            d2u,
            d2theta: d2th,
        }
    }

    /// Max deviation between the interpolant's derivative and the ODE
    /// right-hand side at orbit-step midpoints with xi in [0, xi_max].
    pub fn max_ode_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for st in &self.steps {
            let s_mid = 0.5 * (st.t0 + st.t1);
            if s_mid - self.s_end > self.xi_max() {
                continue;
            }
            let h = st.t1 - st.t0;
            let mut y = [0.0; 2];
            let mut dy = [0.0; 2];
            for n in 0..2 {
                y[n] = hermite(0.5, h, st.y0[n], st.dy0[n], st.y1[n], st.dy1[n]);
                dy[n] = hermite_deriv(0.5, h, st.y0[n], st.dy0[n], st.y1[n], st.dy1[n]);
            }
            let f = rhs(&y, self.target.u, self.target.theta, &self.gas);
            worst = worst.max((dy[0] - f[0]).abs()).max((dy[1] - f[1]).abs());
        }
        worst
    }
}

fn pair_norm(y: &[f64; 2], u_t: f64, th_t: f64) -> f64 {
    ((y[0] - u_t) * (y[0] - u_t) + (y[1] - th_t) * (y[1] - th_t)).sqrt()
}

/// Backward shot from the launch point along `dir`, stopping at strength
/// `delta_b`.  Returns the truncated orbit (last step refined so the final
/// point has pair distance exactly delta_b) and the boundary values.
fn shoot_backward(
    target: &ThermoState,
    dir: [f64; 2],
    delta_b: f64,
    h_max: f64,
    g: &GasParams,
) -> Result<(Vec<Step<2>>, f64, [f64; 2])> {
    let (u_t, th_t) = (target.u, target.theta);
    let eps = EPS_LAUNCH_REL * u_t.max(th_t);
    let y0 = [u_t + eps * dir[0], th_t + eps * dir[1]];
    let opts =
        OdeOptions { rtol: 1e-10, atol: 1e-14, h_init: 1e-3, h_max, ..Default::default() };
    let mut steps = integrate_adaptive(
        |_, y| rhs(y, u_t, th_t, g),
        0.0,
        -1e12,
        y0,
        &opts,
        |_, y| {
            y[0] <= 0.0 || y[1] <= 0.0 || !y[0].is_finite() || pair_norm(y, u_t, th_t) >= delta_b
        },
    )?;
    let last = steps
        .last()
        .ok_or_else(|| Error::LaunchFailure("orbit produced no steps".into()))?
        .clone();
    if last.y1[0] <= 0.0 || last.y1[1] <= 0.0 || pair_norm(&last.y1, u_t, th_t) < delta_b {
        return Err(Error::LaunchFailure(format!(
            "orbit left the physical region before reaching strength {delta_b}"
        )));
    }
    // refine the stopping time inside the last step so the endpoint sits at
    // pair distance delta_b exactly (bisection on the Hermite interpolant)
    let h = last.t1 - last.t0;
    let interp = |t: f64| -> [f64; 2] {
        [
            hermite(t, h, last.y0[0], last.dy0[0], last.y1[0], last.dy1[0]),
            hermite(t, h, last.y0[1], last.dy0[1], last.y1[1], last.dy1[1]),
        ]
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if pair_norm(&interp(mid), u_t, th_t) >= delta_b {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t_cut = 0.5 * (lo + hi);
    let y_end = interp(t_cut);
    let s_end = last.t0 + t_cut * h;
    let idx = steps.len() - 1;
    steps[idx] = Step {
        t0: last.t0,
        t1: s_end,
        y0: last.y0,
        y1: y_end,
        dy0: last.dy0,
        dy1: rhs(&y_end, u_t, th_t, g),
    };
    Ok((steps, s_end, y_end))
}

/// Geometric grid from 0 to xi_max with initial spacing 0.01, ratio 1.05.
fn graded_grid(xi_max: f64) -> Vec<f64> {
    let mut xs = vec![0.0];
    let mut h = 0.01;
    let mut x = 0.0;
    while x < xi_max {
        x = (x + h).min(xi_max);
        xs.push(x);
        h *= 1.05;
    }
    xs
}

fn assemble_profile(
    target: &ThermoState,
    g: &GasParams,
    case_tag: BlCase,
    delta_b: f64,
    xi_max: f64,
    steps: Vec<Step<2>>,
    s_end: f64,
    boundary_uth: [f64; 2],
) -> BLProfile {
    let sigma_minus = -target.u / target.v;
    let boundary =
        ThermoState::new(boundary_uth[0] * target.v / target.u, boundary_uth[0], boundary_uth[1]);
    let mut prof = BLProfile {
        xi: Vec::new(),
        u: Vec::new(),
        theta: Vec::new(),
        v: Vec::new(),
        du: Vec::new(),
        dtheta: Vec::new(),
        case_tag,
        delta_b,
        sigma_minus,
        target: *target,
        boundary,
        gas: *g,
        steps,
        s_end,
        tail: None,
    };
    let grid = graded_grid(xi_max);
    for &x in &grid {
        let p = prof.eval(x);
        prof.u.push(p.u);
        prof.theta.push(p.theta);
        prof.v.push(p.v);
        prof.du.push(p.du);
        prof.dtheta.push(p.dtheta);
    }
    prof.xi = grid;
    prof
}

/// Build the transonic (degenerate) layer of strength `delta_b`.
///
/// The orbit is launched along the null eigendirection on the side U < u_t,
/// integrated backward until |(U, Θ) - (u_t, θ_t)| = delta_b, and re-indexed
/// so that point is xi = 0.
pub fn solve_bl_transonic(
    target: &ThermoState,
    delta_b: f64,
    xi_max: Option<f64>,
    g: &GasParams,
) -> Result<BLProfile> {
    if bl_existence(target, g)? != BlCase::Transonic {
        return Err(Error::InvalidRegion(format!("target {target:?} is not transonic inflow")));
    }
    if !(delta_b > 0.0 && delta_b <= DELTA_B_MAX) {
        return Err(Error::Domain(format!("delta_b must lie in (0, {DELTA_B_MAX}], got {delta_b}")));
    }
    let sd = saddle_data(target, g)?;
    // null direction, oriented so U decreases away from the fixed point
    let mut dir = sd.tangent;
    if dir[0] > 0.0 {
        dir = [-dir[0], -dir[1]];
    }
    let (steps, s_end, bdry) = shoot_backward(target, dir, delta_b, f64::INFINITY, g)?;
    let xi_max = xi_max.unwrap_or(1e3 / delta_b);
    let mut prof =
        assemble_profile(target, g, BlCase::Transonic, delta_b, xi_max, steps, s_end, bdry);
    prof.tail = fit_tail(&prof);
    Ok(prof)
}

/// Match the algebraic tail model at the pair distance `TAIL_SWITCH_REL`
/// from the target (u and u' continuous; theta continuous).
fn fit_tail(prof: &BLProfile) -> Option<TailModel> {
    let (u_t, th_t) = (prof.target.u, prof.target.theta);
    let z_s = TAIL_SWITCH_REL * u_t.max(th_t);
    if prof.delta_b <= 2.0 * z_s {
        return None;
    }
    // pair distance decreases monotonically along the layer; bisect for z_s
    let (mut lo, mut hi) = (0.0_f64, prof.orbit_extent());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let p = prof.eval(mid);
        if pair_norm(&[p.u, p.theta], u_t, th_t) >= z_s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x_switch = 0.5 * (lo + hi);
    let p = prof.eval(x_switch);
    let (zu, zth) = (u_t - p.u, th_t - p.theta);
    if !(zu > 0.0 && p.du > 0.0) {
        return None;
    }
    let d = zu / p.du;
    Some(TailModel { x_switch, s: d - x_switch, pu: zu * d, pth: zth * d })
}

/// Point at pair distance `delta_b` from `target` on the subsonic stable
/// manifold; `side` picks the branch by the sign of the U-offset.
pub fn subsonic_manifold_point(
    target: &ThermoState,
    delta_b: f64,
    side: i8,
    g: &GasParams,
) -> Result<(f64, f64)> {
    if bl_existence(target, g)? != BlCase::Subsonic {
        return Err(Error::InvalidRegion(format!("target {target:?} is not subsonic inflow")));
    }
    let sd = saddle_data(target, g)?;
    let mut dir = sd.tangent;
    if (side as f64) * dir[0] < 0.0 {
        dir = [-dir[0], -dir[1]];
    }
    let (_, _, b) = shoot_backward(target, dir, delta_b, 0.04 / (-sd.lam_j2), g)?;
    Ok((b[0], b[1]))
}

/// Build the subsonic layer whose boundary trace is `(u_minus, th_minus)`.
///
/// The boundary point must lie on the stable manifold (within launch
/// accuracy); it determines the strength and the branch.
pub fn solve_bl_subsonic(
    target: &ThermoState,
    u_minus: f64,
    th_minus: f64,
    xi_max: Option<f64>,
    g: &GasParams,
) -> Result<BLProfile> {
    if bl_existence(target, g)? != BlCase::Subsonic {
        return Err(Error::InvalidRegion(format!("target {target:?} is not subsonic inflow")));
    }
    let sd = saddle_data(target, g)?;
    let delta_b = pair_norm(&[u_minus, th_minus], target.u, target.theta);
    let xi_max = xi_max.unwrap_or(50.0 / (-sd.lam_j2));
    if delta_b == 0.0 {
        return Ok(assemble_profile(
            target,
            g,
            BlCase::Subsonic,
            0.0,
            xi_max,
            Vec::new(),
            0.0,
            [target.u, target.theta],
        ));
    }
    let mut dir = sd.tangent;
    if (u_minus - target.u) * dir[0] < 0.0 {
        dir = [-dir[0], -dir[1]];
    }
    let (steps, s_end, bdry) = shoot_backward(target, dir, delta_b, 0.04 / (-sd.lam_j2), g)?;
    Ok(assemble_profile(target, g, BlCase::Subsonic, delta_b, xi_max, steps, s_end, bdry))
}

/// Minimal Euclidean distance in the (u, θ) plane from `candidate` to the
/// transonic orbit Sigma (including the fixed point at its closure).
pub fn sigma_membership_distance(
    candidate: (f64, f64),
    target: &ThermoState,
    g: &GasParams,
) -> Result<f64> {
    if bl_existence(target, g)? != BlCase::Transonic {
        return Err(Error::InvalidRegion(format!("target {target:?} is not transonic inflow")));
    }
    let sd = saddle_data(target, g)?;
    let mut dir = sd.tangent;
    if dir[0] > 0.0 {
        dir = [-dir[0], -dir[1]];
    }
    // trace Sigma out to a strength safely beyond the admissible range
    let reach = 1.5 * DELTA_B_MAX;
    let (steps, _, _) = match shoot_backward(target, dir, reach, f64::INFINITY, g) {
        Ok(r) => r,
        // orbit left the physical region first: distance against what exists
        Err(Error::LaunchFailure(_)) => {
            let eps = EPS_LAUNCH_REL * target.u.max(target.theta);
            let y0 = [target.u + eps * dir[0], target.theta + eps * dir[1]];
            let opts =
                OdeOptions { rtol: 1e-10, atol: 1e-14, h_init: 1e-3, ..Default::default() };
            let st = integrate_adaptive(
                |_, y| rhs(y, target.u, target.theta, g),
                0.0,
                -1e12,
                y0,
                &opts,
                |_, y| y[0] <= 1e-12 || y[1] <= 1e-12,
            )?;
            (st, 0.0, y0)
        }
        Err(e) => return Err(e),
    };
    let (cu, cth) = candidate;
    let mut best = {
        // segment from the launch point to the fixed point closes the orbit
        let eps = EPS_LAUNCH_REL * target.u.max(target.theta);
        let p0 = [target.u + eps * dir[0], target.theta + eps * dir[1]];
        let p1 = [target.u, target.theta];
        dist_to_segment(cu, cth, p0, p1)
    };
    for st in &steps {
        let h = st.t1 - st.t0;
        let d2 = |t: f64| -> f64 {
            let u = hermite(t, h, st.y0[0], st.dy0[0], st.y1[0], st.dy1[0]);
            let th = hermite(t, h, st.y0[1], st.dy0[1], st.y1[1], st.dy1[1]);
            (u - cu) * (u - cu) + (th - cth) * (th - cth)
        };
        // coarse scan, then golden-section refinement on the best bracket
        let mut t_best = 0.0;
        let mut f_best = f64::INFINITY;
        for k in 0..=8 {
            let t = k as f64 / 8.0;
            let f = d2(t);
            if f < f_best {
                f_best = f;
                t_best = t;
            }
        }
        let (mut lo, mut hi) = ((t_best - 0.125).max(0.0), (t_best + 0.125).min(1.0));
        const INVPHI: f64 = 0.618_033_988_749_894_9;
        for _ in 0..60 {
            let m1 = hi - INVPHI * (hi - lo);
            let m2 = lo + INVPHI * (hi - lo);
            if d2(m1) <= d2(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        best = best.min(d2(0.5 * (lo + hi)).sqrt());
    }
    Ok(best)
}

/// Temperature of the transonic orbit Sigma at velocity `u_value`, treating
/// the orbit as a graph θ(u) (U is strictly monotone along it).
///
/// Near the fixed point (within the launch offset) the tangent-line
/// extrapolation is used, which keeps the function smooth through u = u_t;
/// this is what makes it usable as a root-finding residual.
pub fn sigma_theta_at_u(u_value: f64, target: &ThermoState, g: &GasParams) -> Result<f64> {
    if bl_existence(target, g)? != BlCase::Transonic {
        return Err(Error::InvalidRegion(format!("target {target:?} is not transonic inflow")));
    }
    let sd = saddle_data(target, g)?;
    let mut dir = sd.tangent;
    if dir[0] > 0.0 {
        dir = [-dir[0], -dir[1]];
    }
    let slope = dir[1] / dir[0];
    let eps = EPS_LAUNCH_REL * target.u.max(target.theta);
    let u_launch = target.u + eps * dir[0];
    if u_value >= u_launch {
        return Ok(target.theta + slope * (u_value - target.u));
    }
    let y0 = [u_launch, target.theta + eps * dir[1]];
    let opts = OdeOptions { rtol: 1e-10, atol: 1e-14, h_init: 1e-3, ..Default::default() };
    let steps = integrate_adaptive(
        |_, y| rhs(y, target.u, target.theta, g),
        0.0,
        -1e12,
        y0,
        &opts,
        |_, y| y[0] <= u_value || y[1] <= 0.0,
    )?;
    let last = steps
        .last()
        .ok_or_else(|| Error::LaunchFailure("orbit produced no steps".into()))?;
    if last.y1[0] > u_value {
        return Err(Error::LaunchFailure(format!(
            "orbit left the physical region before reaching u = {u_value}"
        )));
    }
    // U decreases along the backward orbit; bisect the last step for U = u_value
    let h = last.t1 - last.t0;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let u = hermite(mid, h, last.y0[0], last.dy0[0], last.y1[0], last.dy1[0]);
        if u <= u_value {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok(hermite(t, h, last.y0[1], last.dy0[1], last.y1[1], last.dy1[1]))
}

fn dist_to_segment(x: f64, y: f64, p0: [f64; 2], p1: [f64; 2]) -> f64 {
    let dx = p1[0] - p0[0];
    let dy = p1[1] - p0[1];
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((x - p0[0]) * dx + (y - p0[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    let px = p0[0] + t * dx;
    let py = p0[1] + t * dy;
    ((x - px) * (x - px) + (y - py) * (y - py)).sqrt()
}

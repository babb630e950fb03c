//! Superposition of the four elementary waves and its source terms.
//!
//! The composite field adds the boundary-layer profile, the two smoothed
//! rarefaction fans and the viscous contact wave, subtracting the three
//! intermediate constant states they share.  Because each component solves
//! its own reduced equations, the composite solves the full viscous system
//! only up to residual sources G (momentum) and H (energy); this module
//! evaluates those sources analytically and measures the pairwise wave
//! interactions that control them.

use crate::boundary_layer::{solve_bl_transonic, BLProfile};
use crate::contact_wave::{build_contact, ContactWave};
use crate::error::{Error, Result};
use crate::gas::{GasParams, ThermoState};
use crate::numerics::quad::integrate_best_effort_with_breakpoints;
use crate::rarefaction::RarefactionWave;
use crate::wave_curves::CaseSetup;
use serde::{Deserialize, Serialize};

/// One component's state and analytic xi-derivatives at a point.
#[derive(Debug, Clone, Copy)]
pub struct PartPoint {
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

impl PartPoint {
    fn constant(s: &ThermoState) -> Self {
        PartPoint {
            v: s.v,
            u: s.u,
            theta: s.theta,
            dv: 0.0,
            du: 0.0,
            dtheta: 0.0,
            d2v: 0.0,
            d2u: 0.0,
            d2theta: 0.0,
        }
    }
}

/// The four components at one (t, xi), plus the contact energy defect.
#[derive(Debug, Clone, Copy)]
pub struct PartEval {
    pub bl: PartPoint,
    pub fan1: PartPoint,
    pub contact: PartPoint,
    pub fan3: PartPoint,
    pub hd: f64,
}

/// Composite state and derivatives at one point.
pub type CompositePoint = PartPoint;

/// The assembled four-wave ansatz for one case.
///
/// Degenerate components (zero strength) are represented by `None` and
/// evaluate to their constant anchor state.
#[derive(Debug, Clone)]
pub struct CompositeWave {
    pub case: CaseSetup,
    pub bl: Option<BLProfile>,
    pub fan1: Option<RarefactionWave>,
    pub contact: ContactWave,
    pub fan3: Option<RarefactionWave>,
    gas: GasParams,
}

/// Smallest velocity jump treated as a genuine fan.
const MIN_FAN_JUMP: f64 = 1e-12;

/// Foot-point cutoff for the quadrature support of a fan derivative: past
/// this point the smoothing ramp has decayed below every representable
/// interaction magnitude.
const FAN_TAIL_CUT: f64 = 700.0;

pub fn build_composite(case: &CaseSetup, g: &GasParams) -> Result<CompositeWave> {
    case.validate(g)?;
    let bl = if case.strengths.delta_b > 0.0 {
        Some(solve_bl_transonic(&case.star, case.strengths.delta_b, None, g)?)
    } else {
        None
    };
    let fan1 = if (case.mid.u - case.star.u).abs() > MIN_FAN_JUMP {
        Some(RarefactionWave::new(1, case.star, case.mid, case.sigma_minus, g)?)
    } else {
        None
    };
    let contact = build_contact(case, g)?;
    let fan3 = if (case.right.u - case.star_up.u).abs() > MIN_FAN_JUMP {
        Some(RarefactionWave::new(3, case.star_up, case.right, case.sigma_minus, g)?)
    } else {
        None
    };
    Ok(CompositeWave { case: case.clone(), bl, fan1, contact, fan3, gas: *g })
}

impl CompositeWave {
    /// All four components at (t, xi).
    pub fn parts(&self, t: f64, xi: f64) -> PartEval {
        let bl = match &self.bl {
            Some(p) => {
                let b = p.eval(xi);
                PartPoint {
                    v: b.v,
                    u: b.u,
                    theta: b.theta,
                    dv: b.dv,
                    du: b.du,
                    dtheta: b.dtheta,
                    d2v: b.d2v,
                    d2u: b.d2u,
                    d2theta: b.d2theta,
                }
            }
            None => PartPoint::constant(&self.case.star),
        };
        let fan = |w: &Option<RarefactionWave>, anchor: &ThermoState| match w {
            Some(f) => {
                let p = f.eval(t, xi);
                PartPoint {
                    v: p.v,
                    u: p.u,
                    theta: p.theta,
                    dv: p.dv,
                    du: p.du,
                    dtheta: p.dtheta,
                    d2v: p.d2v,
                    d2u: p.d2u,
                    d2theta: p.d2theta,
                }
            }
            None => PartPoint::constant(anchor),
        };
        let fan1 = fan(&self.fan1, &self.case.star);
        let fan3 = fan(&self.fan3, &self.case.star_up);
        let c = self.contact.eval(t, xi);
        let contact = PartPoint {
            v: c.v,
            u: c.u,
            theta: c.theta,
            dv: c.dv,
            du: c.du,
            dtheta: c.dtheta,
            d2v: c.d2v,
            d2u: c.d2u,
            d2theta: c.d2theta,
        };
        PartEval { bl, fan1, contact, fan3, hd: c.hd }
    }

    /// Superposed state: sum of the components minus the shared states.
    pub fn eval(&self, t: f64, xi: f64) -> CompositePoint {
        let p = self.parts(t, xi);
        self.superpose(&p)
    }

    fn superpose(&self, p: &PartEval) -> CompositePoint {
        // each non-contact part is subtracted against its own shared anchor
        // so an absent (constant) part contributes exactly zero
        let c = &self.case;
        PartPoint {
            v: p.contact.v + (p.bl.v - c.star.v) + (p.fan1.v - c.mid.v) + (p.fan3.v - c.star_up.v),
            u: p.contact.u + (p.bl.u - c.star.u) + (p.fan1.u - c.mid.u) + (p.fan3.u - c.star_up.u),
            theta: p.contact.theta
                + (p.bl.theta - c.star.theta)
                + (p.fan1.theta - c.mid.theta)
                + (p.fan3.theta - c.star_up.theta),
            dv: p.bl.dv + p.fan1.dv + p.contact.dv + p.fan3.dv,
            du: p.bl.du + p.fan1.du + p.contact.du + p.fan3.du,
            dtheta: p.bl.dtheta + p.fan1.dtheta + p.contact.dtheta + p.fan3.dtheta,
            d2v: p.bl.d2v + p.fan1.d2v + p.contact.d2v + p.fan3.d2v,
            d2u: p.bl.d2u + p.fan1.d2u + p.contact.d2u + p.fan3.d2u,
            d2theta: p.bl.d2theta + p.fan1.d2theta + p.contact.d2theta + p.fan3.d2theta,
        }
    }

    /// The residual sources (G, H) of the superposed field at (t, xi).
    ///
    /// G is the momentum-equation defect: the pressure of the sum differs
    /// from the sum of component pressures, and the viscous flux is only
    /// carried by the layer and the contact.  H is the analogous energy
    /// defect, including the contact's own energy error.
    pub fn sources(&self, t: f64, xi: f64) -> (f64, f64) {
        let g = &self.gas;
        let p = self.parts(t, xi);
        let tot = self.superpose(&p);
        let pr = |q: &PartPoint| g.r * q.theta / q.v;
        let dpr = |q: &PartPoint| g.r * (q.dtheta * q.v - q.theta * q.dv) / (q.v * q.v);
        // (U_xi / V)_xi
        let visc = |q: &PartPoint| (q.d2u * q.v - q.du * q.dv) / (q.v * q.v);
        // (Theta_xi / V)_xi
        let heat = |q: &PartPoint| (q.d2theta * q.v - q.dtheta * q.dv) / (q.v * q.v);
        let diss = |q: &PartPoint| q.du * q.du / q.v;
        let g1 = dpr(&tot) - dpr(&p.bl) - dpr(&p.fan1) - dpr(&p.contact) - dpr(&p.fan3);
        let g2 = -self.gas.mu * (visc(&tot) - visc(&p.bl) - visc(&p.contact));
        let h1 = pr(&tot) * tot.du
            - pr(&p.bl) * p.bl.du
            - pr(&p.fan1) * p.fan1.du
            - pr(&p.contact) * p.contact.du
            - pr(&p.fan3) * p.fan3.du;
        let h2 = -(g.kappa * (heat(&tot) - heat(&p.bl) - heat(&p.contact))
            + g.mu * (diss(&tot) - diss(&p.bl) - diss(&p.contact))
            - p.hd);
        (g1 + g2, h1 + h2)
    }

    /// Support of the layer derivative in xi.
    pub fn bl_window(&self) -> (f64, f64) {
        match &self.bl {
            Some(p) => (0.0, p.orbit_extent()),
            None => (0.0, 0.0),
        }
    }

    /// Support of a fan derivative in xi at time t: exactly zero left of the
    /// plateau edge, cut on the right where the ramp tail underflows.
    pub fn fan_window(&self, fan: &Option<RarefactionWave>, t: f64) -> (f64, f64) {
        match fan {
            Some(f) => {
                let ts = 1.0 + t;
                let shift = -f.sigma_minus * ts;
                (f.burgers.w_minus * ts + shift, f.burgers.w_plus * ts + shift + FAN_TAIL_CUT)
            }
            None => (0.0, 0.0),
        }
    }

    /// Support of the contact derivative in xi at time t (the self-similar
    /// profile is constant beyond its finite eta range).
    pub fn contact_window(&self, t: f64) -> (f64, f64) {
        let tau = (1.0 + t).sqrt();
        let eta_max = *self.contact.profile.eta.last().unwrap();
        let center = -self.contact.sigma_minus * t;
        (center - eta_max * tau, center + eta_max * tau)
    }
}

/// Composite field sampled on a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompositeField {
    pub t: f64,
    pub xi: Vec<f64>,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub dv: Vec<f64>,
    pub du: Vec<f64>,
    pub dtheta: Vec<f64>,
}

/// Sample the composite on `xi_grid`, checking pointwise positivity.
pub fn eval_composite(wave: &CompositeWave, t: f64, xi_grid: &[f64]) -> Result<CompositeField> {
    let n = xi_grid.len();
    let mut f = CompositeField {
        t,
        xi: xi_grid.to_vec(),
        v: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
        theta: Vec::with_capacity(n),
        dv: Vec::with_capacity(n),
        du: Vec::with_capacity(n),
        dtheta: Vec::with_capacity(n),
    };
    for &xi in xi_grid {
        let p = wave.eval(t, xi);
        if !(p.v > 0.0 && p.theta > 0.0) {
            return Err(Error::PositivityViolation(format!(
                "composite state (v, theta) = ({}, {}) at (t, xi) = ({t}, {xi}); \
                 wave strengths too large",
                p.v, p.theta
            )));
        }
        f.v.push(p.v);
        f.u.push(p.u);
        f.theta.push(p.theta);
        f.dv.push(p.dv);
        f.du.push(p.du);
        f.dtheta.push(p.dtheta);
    }
    Ok(f)
}

/// Sources (G, H) sampled on a grid.
pub fn eval_sources(wave: &CompositeWave, t: f64, xi_grid: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut gs = Vec::with_capacity(xi_grid.len());
    let mut hs = Vec::with_capacity(xi_grid.len());
    for &xi in xi_grid {
        let (gv, hv) = wave.sources(t, xi);
        gs.push(gv);
        hs.push(hv);
    }
    (gs, hs)
}

/// The twelve pairwise interaction integrals and the source norms at one t.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InteractionReport {
    pub t: f64,
    /// In order: layer-fan1, layer-contact, layer-fan3, contact-fan1,
    /// contact-fan3, fan1-fan3 (each with both difference pairings), then
    /// the six derivative products in the same pair order.
    pub i: [f64; 12],
    pub g_l1: f64,
    pub h_l1: f64,
    pub g_l2: f64,
    pub h_l2: f64,
}

/// Relative quadrature tolerance for the interaction integrals.
const INTERACTION_RTOL: f64 = 1e-10;
/// Per-panel subdivision cap; interpolated-data noise in the far layer tail
/// puts a floor under the reachable error, so deep refinement is wasted.
const QUAD_MAX_SPLITS: usize = 2000;
/// Relative quadrature tolerance for the source norms.
const NORM_RTOL: f64 = 1e-8;

pub fn interaction_integrals(wave: &CompositeWave, t: f64) -> Result<InteractionReport> {
    let case = &wave.case;
    let f1_w = wave.fan_window(&wave.fan1, t);
    let d_w = wave.contact_window(t);
    let f3_w = wave.fan_window(&wave.fan3, t);
    // the layer's algebraic tail extends past its integrated orbit; stretch
    // its window so every moving support stays covered at late times
    let bl_w = {
        let w = wave.bl_window();
        (w.0, w.1.max(f1_w.1).max(d_w.1).max(f3_w.1))
    };
    let breaks: Vec<f64> = {
        let mut b = vec![bl_w.0, bl_w.1, f1_w.0, f1_w.1, d_w.0, d_w.1, f3_w.0, f3_w.1];
        // the layer tail decays algebraically over several decades; seed the
        // adaptive quadrature with logarithmically spaced panels
        let mut x = 1.0;
        while x < bl_w.1 {
            b.push(x);
            x *= 4.0;
        }
        b.sort_by(|a, c| a.partial_cmp(c).unwrap());
        b
    };
    // |dA| |B - anchor| over the support of dA
    let pair = |dwin: (f64, f64),
                    da: &dyn Fn(f64) -> f64,
                    bv: &dyn Fn(f64) -> f64,
                    anchor: f64|
     -> Result<f64> {
        let (lo, hi) = (dwin.0.max(0.0), dwin.1);
        if !(hi > lo) {
            return Ok(0.0);
        }
        let (v, _) = integrate_best_effort_with_breakpoints(
            |xi| (da(xi) * (bv(xi) - anchor)).abs(),
            lo,
            hi,
            &breaks,
            INTERACTION_RTOL,
            QUAD_MAX_SPLITS,
        );
        Ok(v)
    };
    let bl_v = |xi: f64| wave.bl.as_ref().map_or(case.star.v, |p| p.eval(xi).v);
    let bl_dv = |xi: f64| wave.bl.as_ref().map_or(0.0, |p| p.eval(xi).dv);
    let f1_v = |xi: f64| wave.fan1.as_ref().map_or(case.star.v, |f| f.eval(t, xi).v);
    let f1_dv = |xi: f64| wave.fan1.as_ref().map_or(0.0, |f| f.eval(t, xi).dv);
    let d_v = |xi: f64| wave.contact.eval(t, xi).v;
    let d_dv = |xi: f64| wave.contact.eval(t, xi).dv;
    let f3_v = |xi: f64| wave.fan3.as_ref().map_or(case.star_up.v, |f| f.eval(t, xi).v);
    let f3_dv = |xi: f64| wave.fan3.as_ref().map_or(0.0, |f| f.eval(t, xi).dv);
    let (v_s, v_m, v_u) = (case.star.v, case.mid.v, case.star_up.v);

    let i1 = pair(bl_w, &bl_dv, &f1_v, v_s)? + pair(f1_w, &f1_dv, &bl_v, v_s)?;
    let i2 = pair(bl_w, &bl_dv, &d_v, v_m)? + pair(d_w, &d_dv, &bl_v, v_s)?;
    let i3 = pair(bl_w, &bl_dv, &f3_v, v_u)? + pair(f3_w, &f3_dv, &bl_v, v_s)?;
    let i4 = pair(d_w, &d_dv, &f1_v, v_m)? + pair(f1_w, &f1_dv, &d_v, v_m)?;
    let i5 = pair(d_w, &d_dv, &f3_v, v_u)? + pair(f3_w, &f3_dv, &d_v, v_u)?;
    let i6 = pair(f1_w, &f1_dv, &f3_v, v_u)? + pair(f3_w, &f3_dv, &f1_v, v_m)?;

    // |dA dB| over the intersection of the supports
    let prod = |wa: (f64, f64),
                    wb: (f64, f64),
                    da: &dyn Fn(f64) -> f64,
                    db: &dyn Fn(f64) -> f64|
     -> Result<f64> {
        let lo = wa.0.max(wb.0).max(0.0);
        let hi = wa.1.min(wb.1);
        if !(hi > lo) {
            return Ok(0.0);
        }
        let (v, _) = integrate_best_effort_with_breakpoints(
            |xi| (da(xi) * db(xi)).abs(),
            lo,
            hi,
            &breaks,
            INTERACTION_RTOL,
            QUAD_MAX_SPLITS,
        );
        Ok(v)
    };
    let i7 = prod(bl_w, d_w, &bl_dv, &d_dv)?;
    let i8 = prod(bl_w, f1_w, &bl_dv, &f1_dv)?;
    let i9 = prod(bl_w, f3_w, &bl_dv, &f3_dv)?;
    let i10 = prod(d_w, f1_w, &d_dv, &f1_dv)?;
    let i11 = prod(d_w, f3_w, &d_dv, &f3_dv)?;
    let i12 = prod(f1_w, f3_w, &f1_dv, &f3_dv)?;

    // source norms over the union of all supports
    let hi_all = bl_w.1.max(f1_w.1).max(d_w.1).max(f3_w.1);
    let norm = |f: &dyn Fn(f64) -> f64| {
        integrate_best_effort_with_breakpoints(f, 0.0, hi_all, &breaks, NORM_RTOL, QUAD_MAX_SPLITS).0
    };
    let g_l1 = norm(&|xi| wave.sources(t, xi).0.abs());
    let h_l1 = norm(&|xi| wave.sources(t, xi).1.abs());
    let g_l2 = norm(&|xi| wave.sources(t, xi).0.powi(2)).sqrt();
    let h_l2 = norm(&|xi| wave.sources(t, xi).1.powi(2)).sqrt();

    Ok(InteractionReport {
        t,
        i: [i1, i2, i3, i4, i5, i6, i7, i8, i9, i10, i11, i12],
        g_l1,
        h_l1,
        g_l2,
        h_l2,
    })
}

/// Write interaction reports as CSV: `t,I1,...,I12,G_L1,H_L1,G_L2,H_L2`.
pub fn write_interactions_csv<W: std::io::Write>(
    reports: &[InteractionReport],
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(out, "t,I1,I2,I3,I4,I5,I6,I7,I8,I9,I10,I11,I12,G_L1,H_L1,G_L2,H_L2")?;
    for r in reports {
        write!(out, "{}", r.t)?;
        for v in r.i {
            write!(out, ",{v}")?;
        }
        writeln!(out, ",{},{},{},{}", r.g_l1, r.h_l1, r.g_l2, r.h_l2)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::fit::{fit_decay, DecayModel};
    use crate::wave_curves::{generate_case_from_sonic, StrengthInput};
    use approx::assert_relative_eq;

    fn sample_wave() -> (CompositeWave, GasParams) {
        let g = GasParams::new(1.0, 5.0 / 3.0, 1.0, 1.0);
        let req = StrengthInput { delta_b: 0.02, delta_r1: 0.05, delta_d: 0.02, delta_r3: 0.05 };
        let case = generate_case_from_sonic(1.0, 1.0, &req, &g).unwrap();
        (build_composite(&case, &g).unwrap(), g)
    }

    #[test]
    fn superposition_identity_and_positivity() {
        let (w, _) = sample_wave();
        let case = &w.case;
        let t = 3.0;
        for i in 0..=60 {
            let xi = 0.5 * i as f64;
            let p = w.parts(t, xi);
            let tot = w.eval(t, xi);
            let expect = p.bl.v + p.fan1.v + p.contact.v + p.fan3.v
                - (case.star.v + case.mid.v + case.star_up.v);
            assert!((tot.v - expect).abs() <= 1e-12);
            assert!(tot.v > 0.0 && tot.theta > 0.0);
        }
        // the layer tail decays only algebraically, so the far-field check
        // needs the last node beyond the stored orbit
        let mut grid: Vec<f64> = (0..=300).map(|i| 0.2 * i as f64).collect();
        grid.extend([1e3, 1e4, 1e6]);
        let f = eval_composite(&w, t, &grid).unwrap();
        // far field approaches the right state
        assert!((f.v.last().unwrap() - case.right.v).abs() <= 1e-6);
        assert!((f.u.last().unwrap() - case.right.u).abs() <= 1e-6);
        assert!((f.theta.last().unwrap() - case.right.theta).abs() <= 1e-6);
    }

    #[test]
    fn boundary_value_is_left_state_plus_contact_mismatch() {
        let (w, _) = sample_wave();
        let case = &w.case;
        let p = w.eval(0.0, 0.0);
        let c = w.contact.eval(0.0, 0.0);
        assert_relative_eq!(p.v, case.left.v + c.v - case.mid.v, epsilon = 1e-6);
        assert_relative_eq!(p.u, case.left.u + c.u - case.mid.u, epsilon = 1e-6);
        assert_relative_eq!(p.theta, case.left.theta + c.theta - case.mid.theta, epsilon = 1e-6);
    }

    #[test]
    fn zero_strengths_give_constant_field_and_zero_sources() {
        let g = GasParams::new(1.0, 5.0 / 3.0, 1.0, 1.0);
        let case = generate_case_from_sonic(1.0, 1.0, &StrengthInput::zero(), &g).unwrap();
        let w = build_composite(&case, &g).unwrap();
        for (t, xi) in [(0.0, 0.0), (2.0, 5.0), (40.0, 33.0)] {
            let p = w.eval(t, xi);
            assert_relative_eq!(p.v, case.right.v, epsilon = 1e-12);
            assert_relative_eq!(p.u, case.right.u, epsilon = 1e-12);
            assert_relative_eq!(p.theta, case.right.theta, epsilon = 1e-12);
            let (gv, hv) = w.sources(t, xi);
            assert!(gv.abs() <= 1e-12 && hv.abs() <= 1e-12, "sources ({gv}, {hv})");
        }
    }

    #[test]
    fn sources_match_residual_oracle() {
        // G and H must reproduce the finite-difference residuals of the
        // full viscous system applied to the superposed field, and the
        // mass equation must balance with no source at all
        let (w, g) = sample_wave();
        let t = 4.0;
        let sig = w.case.sigma_minus;
        // fixed-x differencing absorbs the advective derivative
        let f = |tt: f64, xx: f64| w.eval(tt, xx - sig * tt);
        let (ht, hx) = (1e-3, 1e-3);
        let d1 = |gf: &dyn Fn(f64) -> f64, h: f64| {
            let c = |h: f64| (gf(h) - gf(-h)) / (2.0 * h);
            (4.0 * c(h) - c(2.0 * h)) / 3.0
        };
        for x in [0.5, 1.5, 3.0, 4.5, 7.0] {
            let pt = f(t, x);
            let xi = x - sig * t;
            let (gv, hv) = w.sources(t, xi);
            let mass = d1(&|d| f(t + d, x).v, ht) - pt.du;
            assert!(mass.abs() <= 1e-7, "mass residual {mass} at x = {x}");
            let u_t = d1(&|d| f(t + d, x).u, ht);
            let p_x = d1(&|d| g.r * f(t, x + d).theta / f(t, x + d).v, hx);
            let visc_x = d1(&|d| g.mu * f(t, x + d).du / f(t, x + d).v, hx);
            let g_fd = u_t + p_x - visc_x;
            assert!((gv - g_fd).abs() <= 1e-6, "G {gv} vs fd {g_fd} at x = {x}");
            let th_t = d1(&|d| f(t + d, x).theta, ht);
            let heat_x = d1(&|d| g.kappa * f(t, x + d).dtheta / f(t, x + d).v, hx);
            let h_fd = g.r / (g.gamma - 1.0) * th_t + g.r * pt.theta / pt.v * pt.du
                - heat_x
                - g.mu * pt.du * pt.du / pt.v;
            assert!((hv - h_fd).abs() <= 1e-6, "H {hv} vs fd {h_fd} at x = {x}");
        }
    }

    #[test]
    fn degenerate_contact_zeroes_its_interactions() {
        let g = GasParams::new(1.0, 5.0 / 3.0, 1.0, 1.0);
        let req = StrengthInput { delta_b: 0.01, delta_r1: 0.05, delta_d: 0.0, delta_r3: 0.05 };
        let case = generate_case_from_sonic(1.0, 1.0, &req, &g).unwrap();
        let w = build_composite(&case, &g).unwrap();
        let rep = interaction_integrals(&w, 5.0).unwrap();
        for k in [1, 3, 4, 6, 9, 10] {
            assert_eq!(rep.i[k], 0.0, "I{} with a flat contact", k + 1);
        }
        for v in rep.i {
            assert!(v >= 0.0);
        }
    }

    #[test]
    fn interaction_rates_meet_stated_bounds() {
        let (w, _) = sample_wave();
        // the asymptotic rates set in only once the fans have stretched
        // past the layer's 1/delta_b core, so the fit window is late
        let ts: Vec<f64> = (6..=13).map(|k| 10.0_f64.powf(0.5 * k as f64)).collect();
        let reports: Vec<InteractionReport> =
            ts.iter().map(|&t| interaction_integrals(&w, t).unwrap()).collect();
        let fit_power = |k: usize, lo: f64, hi: f64| {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for (j, r) in reports.iter().enumerate() {
                if ts[j] >= lo && ts[j] <= hi {
                    xs.push(1.0 + ts[j]);
                    ys.push(r.i[k]);
                }
            }
            fit_decay(&xs, &ys, DecayModel::Power).unwrap()
        };
        // layer-fan1 at least as fast as -13/16
        let f1 = fit_power(0, 1e4, 1e7);
        assert!(f1.rate <= -13.0 / 16.0 + 0.1, "I1 rate {}", f1.rate);
        // layer-contact at least as fast as -1
        let f2 = fit_power(1, 1e3, 1e7);
        assert!(f2.rate <= -1.0 + 0.1, "I2 rate {}", f2.rate);
        // layer-fan3 at least as fast as -7/8
        let f3 = fit_power(2, 1e3, 1e7);
        assert!(f3.rate <= -7.0 / 8.0 + 0.1, "I3 rate {}", f3.rate);
        // layer x contact derivative product at least as fast as -2
        let f7 = fit_power(6, 1e3, 1e5);
        assert!(f7.rate <= -2.0 + 0.15, "I7 rate {}", f7.rate);
        // layer x fan derivative products at least as fast as -1
        let f8 = fit_power(7, 1e4, 1e7);
        assert!(f8.rate <= -1.0 + 0.1, "I8 rate {}", f8.rate);
        let f9 = fit_power(8, 1e3, 1e7);
        assert!(f9.rate <= -1.0 + 0.1, "I9 rate {}", f9.rate);
    }

    /// Below this, an interaction integral is indistinguishable from the
    /// quadrature's absolute floor and cannot support a decay fit.
    const MEASURABLE: f64 = 1e-13;

    #[test]
    fn remote_interactions_decay_exponentially() {
        let (w, _) = sample_wave();
        // contact-fan and fan-fan pairs separate at linear speed, so their
        // integrals decay exponentially; each pair has its own window in
        // which the values still stand above the measurability floor
        let ts: Vec<f64> =
            [1.0, 2.0, 3.0, 5.0, 7.0, 9.0, 12.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0]
                .to_vec();
        let reports: Vec<InteractionReport> =
            ts.iter().map(|&t| interaction_integrals(&w, t).unwrap()).collect();
        for (k, lo, hi) in [
            (3usize, 20.0, 50.0), // contact-fan1: overlap until the contact clears the ramp
            (4, 1.0, 50.0),       // contact-fan3
            (5, 1.0, 15.0),       // fan1-fan3
            (9, 20.0, 50.0),      // derivative products in the same pair order
            (10, 1.0, 50.0),
            (11, 1.0, 15.0),
        ] {
            let mut tt = Vec::new();
            let mut ys = Vec::new();
            for (j, r) in reports.iter().enumerate() {
                if ts[j] >= lo && ts[j] <= hi && r.i[k] > MEASURABLE {
                    tt.push(ts[j]);
                    ys.push(r.i[k]);
                }
            }
            if tt.len() < 4 {
                // never rose above the floor: decay certainly at least
                // exponential, but there is nothing to fit
                let peak = reports.iter().map(|r| r.i[k]).fold(0.0, f64::max);
                assert!(peak <= MEASURABLE, "I{}: unfittable yet above floor", k + 1);
                continue;
            }
            let fit = fit_decay(&tt, &ys, DecayModel::Exponential).unwrap();
            assert!(fit.rate < 0.0, "I{} rate {}", k + 1, fit.rate);
            assert!(fit.r_squared >= 0.98, "I{} r2 {}", k + 1, fit.r_squared);
        }
    }

    #[test]
    fn source_norms_decay_at_stated_rates() {
        let (w, _) = sample_wave();
        let ts: Vec<f64> = (8..=12).map(|k| 10.0_f64.powf(0.5 * k as f64)).collect();
        let reports: Vec<InteractionReport> =
            ts.iter().map(|&t| interaction_integrals(&w, t).unwrap()).collect();
        let shifted: Vec<f64> = ts.iter().map(|t| 1.0 + t).collect();
        let l1: Vec<f64> = reports.iter().map(|r| r.g_l1 + r.h_l1).collect();
        let fit1 = fit_decay(&shifted, &l1, DecayModel::Power).unwrap();
        assert!(fit1.rate <= -13.0 / 16.0 + 0.1, "L1 rate {}", fit1.rate);
        let l2: Vec<f64> = reports.iter().map(|r| r.g_l2 + r.h_l2).collect();
        let fit2 = fit_decay(&shifted, &l2, DecayModel::Power).unwrap();
        assert!(fit2.rate <= -1.0 + 0.1, "L2 rate {}", fit2.rate);
    }

    #[test]
    fn csv_round_trip() {
        let (w, _) = sample_wave();
        let rep = interaction_integrals(&w, 2.0).unwrap();
        let mut buf = Vec::new();
        write_interactions_csv(&[rep.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,I1,I2,I3,I4,I5,I6,I7,I8,I9,I10,I11,I12,G_L1,H_L1,G_L2,H_L2"
        );
        let row: Vec<f64> =
            lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(row[0], rep.t);
        assert_eq!(row[1], rep.i[0]);
        assert_eq!(row[16], rep.h_l2);
    }
}

//! Verification suites: each one exercises a wave block or the full run,
//! writes its artifacts and reports one pass/fail line per assertion.

use std::path::Path;

use serde::Serialize;

use crate::boundary_layer::{
    solve_bl_subsonic, solve_bl_transonic, subsonic_manifold_point, EPS_LAUNCH_REL,
};
use crate::composite::{
    build_composite, eval_composite, interaction_integrals, write_interactions_csv, CompositeWave,
    InteractionReport,
};
use crate::contact_wave::build_contact;
use crate::error::{Error, Result};
use crate::gas::{eval_eos, GasParams, ThermoState};
use crate::numerics::fit::{log_space, DecayModel};
use crate::rarefaction::RarefactionWave;
use crate::solver::{
    domain_length, far_field_quiet, initial_data, integrate, perturbation_norms, write_norms_csv,
    write_profiles_csv, BoundaryData, BumpSpec, Grid, StepperOptions,
};
use crate::wave_curves::rarefaction_branch;

use super::config::RunConfig;
use super::fit_decay_series;

/// Smallest integral value the quadrature can distinguish from zero; a
/// diagnostic staying below it passes by smallness instead of by rate.
pub const MEASURABLE: f64 = 1e-13;

/// The suite names `run_suite` accepts, in canonical order.
pub const SUITES: [&str; 6] =
    ["bl", "contact", "rarefaction", "interactions", "sources", "stability"];

/// One checked claim: a stated bound and the measured value.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub stated: String,
    pub measured: String,
    pub pass: bool,
}

/// All assertions of one suite plus where its artifacts went.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub assertions: Vec<Assertion>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.into(), assertions: Vec::new() }
    }

    fn check(&mut self, name: &str, stated: &str, measured: String, pass: bool) {
        self.assertions.push(Assertion { name: name.into(), stated: stated.into(), measured, pass });
    }

    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    /// One line per assertion: name, stated bound, measured value, verdict.
    pub fn write_summary<W: std::io::Write>(&self, w: &mut W) -> Result<()> {
        for a in &self.assertions {
            writeln!(
                w,
                "{}.{}\tstated {}\tmeasured {}\t{}",
                self.suite,
                a.name,
                a.stated,
                a.measured,
                if a.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Run one verification suite; artifacts land in `out_dir/<suite>/`.
pub fn run_suite(cfg: &RunConfig, suite: &str, out_dir: &Path) -> Result<SuiteReport> {
    let dir = out_dir.join(suite);
    std::fs::create_dir_all(&dir)?;
    let mut rep = SuiteReport::new(suite);
    match suite {
        "bl" => suite_bl(cfg, &mut rep)?,
        "contact" => suite_contact(cfg, &mut rep)?,
        "rarefaction" => suite_rarefaction(cfg, &mut rep)?,
        "interactions" => suite_interactions(cfg, &dir, &mut rep)?,
        "sources" => suite_sources(cfg, &dir, &mut rep)?,
        "stability" => suite_stability(cfg, &dir, &mut rep)?,
        other => return Err(Error::Config(format!("unknown suite `{other}`"))),
    }
    let mut f = std::fs::File::create(dir.join("summary.txt"))?;
    rep.write_summary(&mut f)?;
    Ok(rep)
}

/// Stationary layer: algebraic transonic tails and exponential subsonic tail.
fn suite_bl(cfg: &RunConfig, rep: &mut SuiteReport) -> Result<()> {
    let g = cfg.gas.params();
    let case = cfg.build_case()?;
    let target = case.star;
    for db in [0.02, 0.05, 0.1] {
        let prof = solve_bl_transonic(&target, db, None, &g)?;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut dys = Vec::new();
        for i in 0..prof.xi.len() {
            let xi = prof.xi[i];
            if xi >= 10.0 / db && xi <= 1e3 / db {
                xs.push(1.0 + db * xi);
                ys.push((prof.u[i] - target.u).abs());
                dys.push(prof.du[i].abs());
            }
        }
        let vfit = fit_decay_series(&xs, &ys, DecayModel::Power, (0.0, f64::INFINITY))?;
        rep.check(
            &format!("transonic_value_slope_db{db}"),
            "-1 +/- 0.15",
            format!("{}", vfit.slope),
            (vfit.slope + 1.0).abs() <= 0.15,
        );
        let dfit = fit_decay_series(&xs, &dys, DecayModel::Power, (0.0, f64::INFINITY))?;
        rep.check(
            &format!("transonic_deriv_slope_db{db}"),
            "-2 +/- 0.2",
            format!("{}", dfit.slope),
            (dfit.slope + 2.0).abs() <= 0.2,
        );
    }
    // subsonic companion: same volume and temperature, velocity at half the
    // sound speed so the far-field point is a genuine saddle
    let sub = ThermoState::new(target.v, 0.5 * (g.r * g.gamma * target.theta).sqrt(), target.theta);
    let (ub, thb) = subsonic_manifold_point(&sub, 0.05, -1, &g)?;
    let prof = solve_bl_subsonic(&sub, ub, thb, None, &g)?;
    let floor = 10.0 * EPS_LAUNCH_REL * sub.u.max(sub.theta);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..prof.xi.len() {
        let dev = (prof.u[i] - sub.u).abs();
        if dev > floor {
            xs.push(prof.xi[i] + 1.0);
            ys.push(dev);
        }
    }
    let fit = fit_decay_series(&xs, &ys, DecayModel::Exponential, (0.0, f64::INFINITY))?;
    rep.check("subsonic_rate", "< 0", format!("{}", fit.slope), fit.slope < 0.0);
    rep.check("subsonic_r2", ">= 0.99", format!("{}", fit.r2), fit.r2 >= 0.99);
    Ok(())
}

/// Diffusion wave: 1/(1+t) derivative envelope and the decay of its trace
/// mismatch at the inflow boundary.
fn suite_contact(cfg: &RunConfig, rep: &mut SuiteReport) -> Result<()> {
    let g = cfg.gas.params();
    let case = cfg.build_case()?;
    let cw = build_contact(&case, &g)?;
    let mut worst_ratio = 1.0_f64;
    let mut base = 0.0_f64;
    for &t in &[1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0] {
        let center = -cw.sigma_minus * t;
        let width = 14.0 * (1.0 + t).sqrt();
        let mut dmax = 0.0_f64;
        for k in 0..=800 {
            let xi = center - width + 2.0 * width * k as f64 / 800.0;
            dmax = dmax.max(cw.eval(t, xi).du.abs());
        }
        let scaled = dmax * (1.0 + t);
        if t == 1.0 {
            base = scaled;
        } else if base > 0.0 {
            worst_ratio = worst_ratio.max(scaled / base).max(base / scaled);
        }
    }
    rep.check(
        "derivative_envelope_ratio",
        "<= 2 of the t = 1 value on [1, 200]",
        format!("{worst_ratio}"),
        worst_ratio <= 2.0,
    );
    // trace mismatch at xi = 0 dies faster than exponentially; it underflows
    // past t ~ 30, so the fit sits early
    let ts: Vec<f64> = (1..=10).map(|k| 2.0 * k as f64).collect();
    let ys: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let p = cw.eval(t, 0.0);
            ((p.v - case.mid.v).powi(2)
                + (p.u - case.mid.u).powi(2)
                + (p.theta - case.mid.theta).powi(2))
            .sqrt()
        })
        .collect();
    if ys.iter().all(|&y| y <= MEASURABLE) {
        rep.check("boundary_mismatch", "<= 1e-13 (below measurable)", format!("{:e}", ys[0]), true);
    } else {
        let fit = fit_decay_series(&ts, &ys, DecayModel::Exponential, (0.0, f64::INFINITY))?;
        rep.check("boundary_mismatch_rate", "< 0", format!("{}", fit.slope), fit.slope < 0.0);
        rep.check("boundary_mismatch_r2", ">= 0.98", format!("{}", fit.r2), fit.r2 >= 0.98);
    }
    Ok(())
}

/// A fan scenario whose expansion slope reaches the 1/(1+t) regime inside
/// the pinned [10, 1e3] window: the anchors sit far apart in characteristic
/// speed so the slope cap 1/t dominates the initial-smoothing plateau early.
fn criterion_fan(family: u8, g: &GasParams) -> Result<RarefactionWave> {
    let left = ThermoState::new(1.0, 0.5, 960.0);
    // family 1 expands with growing volume, family 3 with shrinking volume
    let v_r = if family == 1 { 1.182 } else { 1.0 / 1.182 };
    let right = rarefaction_branch(family, &left, v_r, g)?;
    RarefactionWave::new(family, left, right, -0.5, g)
}

/// Smoothed fans: inverse-time expansion slope, entropy constancy and
/// pointwise expansiveness.
fn suite_rarefaction(cfg: &RunConfig, rep: &mut SuiteReport) -> Result<()> {
    let g = cfg.gas.params();
    for family in [1u8, 3u8] {
        let fan = criterion_fan(family, &g)?;
        let ts = log_space(10.0, 1e3, 16);
        let mut tp = Vec::new();
        let mut sup = Vec::new();
        let mut min_du = f64::INFINITY;
        for &t in &ts {
            let tsh = 1.0 + t;
            let lo = (-fan.sigma_minus + fan.burgers.w_minus) * tsh - 5.0;
            let hi = (-fan.sigma_minus + fan.burgers.w_plus) * tsh + 60.0;
            let mut m = 0.0_f64;
            for i in 0..=2000 {
                let xi = lo + (hi - lo) * i as f64 / 2000.0;
                let du = fan.eval(t, xi).du;
                m = m.max(du);
                min_du = min_du.min(du);
            }
            tp.push(tsh);
            sup.push(m);
        }
        let fit = fit_decay_series(&tp, &sup, DecayModel::Power, (0.0, f64::INFINITY))?;
        rep.check(
            &format!("fan{family}_slope"),
            "-1 +/- 0.1 on t in [10, 1e3]",
            format!("{}", fit.slope),
            (fit.slope + 1.0).abs() <= 0.1,
        );
        rep.check(
            &format!("fan{family}_expansive"),
            "du >= 0 at every node",
            format!("min du {min_du:e}"),
            min_du >= 0.0,
        );
        // entropy must not vary across the fan
        let s_ref = eval_eos(&fan.right, &g)?.s_entropy;
        let mut dev = 0.0_f64;
        let t = 50.0;
        let tsh = 1.0 + t;
        let lo = (-fan.sigma_minus + fan.burgers.w_minus) * tsh - 5.0;
        let hi = (-fan.sigma_minus + fan.burgers.w_plus) * tsh + 60.0;
        for i in 0..=400 {
            let xi = lo + (hi - lo) * i as f64 / 400.0;
            let p = fan.eval(t, xi);
            let s = eval_eos(&ThermoState::new(p.v, p.u, p.theta), &g)?.s_entropy;
            dev = dev.max((s - s_ref).abs() / (1.0 + s_ref.abs()));
        }
        rep.check(
            &format!("fan{family}_entropy_constancy"),
            "<= 1e-10",
            format!("{dev:e}"),
            dev <= 1e-10,
        );
    }
    Ok(())
}

/// The 24 sample times of the interaction diagnostics: a dense early block
/// for the exponentially decaying pairings and a late logarithmic block for
/// the algebraic ones (their rates only set in once the fans have stretched
/// past the layer core at t ~ 1/delta).
pub fn interaction_times() -> Vec<f64> {
    let mut ts = vec![
        1.0, 2.0, 3.0, 5.0, 7.0, 9.0, 12.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 60.0,
    ];
    ts.extend(log_space(1e3, 1e7, 8));
    ts
}

/// Power-law entries: (index, stated asymptotic exponent, fit window in
/// shifted time 1 + t, spanning the whole late sample block).
const POWER_ENTRIES: [(usize, f64, (f64, f64)); 6] = [
    (0, -13.0 / 16.0, (1e3, 2e7)),
    (1, -1.0, (1e3, 2e7)),
    (2, -7.0 / 8.0, (1e3, 2e7)),
    (6, -2.0, (1e3, 2e7)),
    (7, -1.0, (1e3, 2e7)),
    (8, -1.0, (1e3, 2e7)),
];

/// Exponential entries: (index, fit window).
const EXP_ENTRIES: [(usize, (f64, f64)); 4] =
    [(3, (20.0, 60.0)), (5, (1.0, 15.0)), (9, (20.0, 60.0)), (11, (1.0, 15.0))];

/// Entries whose integrand is a product of essentially disjoint supports:
/// they must stay below the measurable floor at every sample.
const SMALL_ENTRIES: [usize; 2] = [4, 10];

pub fn collect_reports(wave: &CompositeWave, ts: &[f64]) -> Result<Vec<InteractionReport>> {
    ts.iter().map(|&t| interaction_integrals(wave, t)).collect()
}

/// Wave-pairing integrals: every entry decays at least at its stated rate
/// (or stays unmeasurably small).
fn suite_interactions(cfg: &RunConfig, dir: &Path, rep: &mut SuiteReport) -> Result<()> {
    let g = cfg.gas.params();
    let case = cfg.build_case()?;
    let wave = build_composite(&case, &g)?;
    let ts = interaction_times();
    let reports = collect_reports(&wave, &ts)?;
    let mut f = std::fs::File::create(dir.join("interactions.csv"))?;
    write_interactions_csv(&reports, &mut f)?;

    let tp: Vec<f64> = ts.iter().map(|&t| 1.0 + t).collect();
    for (k, target, window) in POWER_ENTRIES {
        let ys: Vec<f64> = reports.iter().map(|r| r.i[k]).collect();
        let name = format!("i{}_power_slope", k + 1);
        if ys.iter().all(|&y| y <= MEASURABLE) {
            rep.check(&name, "<= 1e-13 (below measurable)", format!("{:e}", ys[0]), true);
            continue;
        }
        let fit = fit_decay_series(&tp, &ys, DecayModel::Power, window)?;
        rep.check(
            &name,
            &format!("<= {:.4}", target + 0.1),
            format!("{}", fit.slope),
            fit.slope <= target + 0.1,
        );
    }
    for (k, window) in EXP_ENTRIES {
        let ys: Vec<f64> = reports.iter().map(|r| r.i[k]).collect();
        let base = format!("i{}_exp", k + 1);
        if ys.iter().all(|&y| y <= MEASURABLE) {
            rep.check(&base, "<= 1e-13 (below measurable)", format!("{:e}", ys[0]), true);
            continue;
        }
        let fit = fit_decay_series(&ts, &ys, DecayModel::Exponential, window)?;
        rep.check(&format!("{base}_rate"), "< 0", format!("{}", fit.slope), fit.slope < 0.0);
        rep.check(&format!("{base}_r2"), ">= 0.98", format!("{}", fit.r2), fit.r2 >= 0.98);
    }
    for k in SMALL_ENTRIES {
        let worst = reports.iter().map(|r| r.i[k]).fold(0.0_f64, f64::max);
        rep.check(
            &format!("i{}_smallness", k + 1),
            "<= 1e-13 at every sample",
            format!("{worst:e}"),
            worst <= MEASURABLE,
        );
    }
    Ok(())
}

/// Source terms: L1 and L2 norms decay at their stated rates, and the
/// pointwise values agree with a finite-difference residual oracle.
fn suite_sources(cfg: &RunConfig, dir: &Path, rep: &mut SuiteReport) -> Result<()> {
    let g = cfg.gas.params();
    let case = cfg.build_case()?;
    let wave = build_composite(&case, &g)?;
    let ts = log_space(1e4, 1e6, 9);
    let reports = collect_reports(&wave, &ts)?;
    let mut f = std::fs::File::create(dir.join("interactions.csv"))?;
    write_interactions_csv(&reports, &mut f)?;

    let tp: Vec<f64> = ts.iter().map(|&t| 1.0 + t).collect();
    let all = (0.0, f64::INFINITY);
    for (name, pick, target) in [
        ("g_l1_slope", &(|r: &InteractionReport| r.g_l1) as &dyn Fn(&InteractionReport) -> f64, -13.0 / 16.0),
        ("h_l1_slope", &|r: &InteractionReport| r.h_l1, -13.0 / 16.0),
        ("g_l2_slope", &|r: &InteractionReport| r.g_l2, -1.0),
        ("h_l2_slope", &|r: &InteractionReport| r.h_l2, -1.0),
    ] {
        let ys: Vec<f64> = reports.iter().map(pick).collect();
        let fit = fit_decay_series(&tp, &ys, DecayModel::Power, all)?;
        rep.check(
            name,
            &format!("<= {:.4}", target + 0.1),
            format!("{}", fit.slope),
            fit.slope <= target + 0.1,
        );
    }

    // pointwise oracle: G and H must reproduce Richardson finite-difference
    // residuals of the viscous system applied to the superposed field, at
    // fixed x so the advective derivative drops out
    let t = 5.0;
    let sig = case.sigma_minus;
    let f = |tt: f64, xx: f64| wave.eval(tt, xx - sig * tt);
    let (ht, hx) = (1e-3, 1e-3);
    let d1 = |gf: &dyn Fn(f64) -> f64, h: f64| {
        let c = |h: f64| (gf(h) - gf(-h)) / (2.0 * h);
        (4.0 * c(h) - c(2.0 * h)) / 3.0
    };
    let mut worst_mass = 0.0_f64;
    let mut worst_g = 0.0_f64;
    let mut worst_h = 0.0_f64;
    for x in [0.5, 1.5, 3.0, 4.5, 7.0] {
        let pt = f(t, x);
        let (gv, hv) = wave.sources(t, x - sig * t);
        worst_mass = worst_mass.max((d1(&|d| f(t + d, x).v, ht) - pt.du).abs());
        let u_t = d1(&|d| f(t + d, x).u, ht);
        let p_x = d1(&|d| g.r * f(t, x + d).theta / f(t, x + d).v, hx);
        let visc_x = d1(&|d| g.mu * f(t, x + d).du / f(t, x + d).v, hx);
        worst_g = worst_g.max((gv - (u_t + p_x - visc_x)).abs());
        let th_t = d1(&|d| f(t + d, x).theta, ht);
        let heat_x = d1(&|d| g.kappa * f(t, x + d).dtheta / f(t, x + d).v, hx);
        let h_fd = g.r / (g.gamma - 1.0) * th_t + g.r * pt.theta / pt.v * pt.du
            - heat_x
            - g.mu * pt.du * pt.du / pt.v;
        worst_h = worst_h.max((hv - h_fd).abs());
    }
    rep.check("mass_residual", "<= 1e-7", format!("{worst_mass:e}"), worst_mass <= 1e-7);
    rep.check("g_matches_residual", "<= 1e-6", format!("{worst_g:e}"), worst_g <= 1e-6);
    rep.check("h_matches_residual", "<= 1e-6", format!("{worst_h:e}"), worst_h <= 1e-6);
    Ok(())
}

/// Run the configured case to `t_final` against the composite reference;
/// writes `norms.csv` and `profiles.csv` into `dir` and returns the norm
/// records at t = 0 and every snapshot time.
pub fn run_simulation(cfg: &RunConfig, dir: &Path) -> Result<Vec<crate::solver::NormsRecord>> {
    std::fs::create_dir_all(dir)?;
    let g = cfg.gas.params();
    let case = cfg.build_case()?;
    let wave = build_composite(&case, &g)?;
    let t_final = cfg.run.t_final;
    let l = if cfg.grid.l > 0.0 { cfg.grid.l } else { domain_length(&wave, t_final) };
    far_field_quiet(&wave, l, t_final)?;
    let grid = Grid::new(cfg.grid.n, l)?;

    // scale the bump so its contribution to the H1 norm matches the request
    let mut bump = BumpSpec {
        amplitude: 0.0,
        center: cfg.run.bump_center,
        width: cfg.run.bump_width,
    };
    let f0 = eval_composite(&wave, 0.0, &grid.nodes())?;
    if cfg.run.bump_h1 > 0.0 {
        bump.amplitude = 1e-3;
        let probe = perturbation_norms(&initial_data(&wave, &grid, &bump)?, &f0, &g)?;
        bump.amplitude = 1e-3 * cfg.run.bump_h1 / probe.h1;
    }
    let init = initial_data(&wave, &grid, &bump)?;

    let mut snaps = cfg.run.snapshot_times.clone();
    snaps.retain(|&t| t > 0.0 && t <= t_final);
    snaps.sort_by(f64::total_cmp);
    let bc = BoundaryData { left: case.left, right: case.right };
    let opts = StepperOptions { cfl: cfg.grid.cfl, hit_times: &snaps, ..Default::default() };

    let mut norms = vec![perturbation_norms(&init, &f0, &g)?];
    let mut prof_buf = Vec::new();
    write_profiles_csv(&mut prof_buf, true, &init, &f0)?;
    let mut err = None;
    let mut next = 0usize;
    let fin = integrate(&init, &bc, case.sigma_minus, &g, &grid, t_final, &opts, |s| {
        if next < snaps.len() && (s.t - snaps[next]).abs() <= 1e-9 * (1.0 + s.t) {
            next += 1;
            let step = || -> Result<()> {
                let f = eval_composite(&wave, s.t, &grid.nodes())?;
                norms.push(perturbation_norms(s, &f, &g)?);
                write_profiles_csv(&mut prof_buf, false, s, &f)
            }();
            if let (Err(e), None) = (step, &err) {
                err = Some(e);
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    if (fin.t - t_final).abs() > 1e-9 * (1.0 + t_final) {
        return Err(Error::ConvergenceFailure(format!("run stopped at t = {}", fin.t)));
    }
    let mut f = std::fs::File::create(dir.join("norms.csv"))?;
    write_norms_csv(&mut f, &norms)?;
    std::fs::write(dir.join("profiles.csv"), &prof_buf)?;
    Ok(norms)
}

/// Full nonlinear run against the composite reference: perturbation-norm
/// contraction, H1 boundedness and energy decrease.
fn suite_stability(cfg: &RunConfig, dir: &Path, rep: &mut SuiteReport) -> Result<()> {
    let norms = run_simulation(cfg, dir)?;
    let case = cfg.build_case()?;
    let sup = |r: &crate::solver::NormsRecord| r.sup_phi.max(r.sup_psi).max(r.sup_theta);
    let first = &norms[0];
    let last = norms.last().unwrap();
    rep.check(
        "sup_contraction",
        "sup at t_final <= 0.2 x initial sup",
        format!("{:e} vs initial {:e}", sup(last), sup(first)),
        sup(last) <= 0.2 * sup(first),
    );
    let h1_bound = 3.0 * first.h1 + 2.0 * case.strengths.delta;
    let h1_max = norms.iter().map(|r| r.h1).fold(0.0_f64, f64::max);
    rep.check(
        "h1_bounded",
        "h1 <= 3 x initial h1 + 2 x total wave strength throughout",
        format!("max {:e} vs bound {:e}", h1_max, h1_bound),
        h1_max <= h1_bound,
    );
    rep.check(
        "energy_decrease",
        "energy at t_final <= initial energy",
        format!("{:e} vs initial {:e}", last.energy, first.energy),
        last.energy <= first.energy,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_rejected() {
        let cfg = RunConfig::default();
        let tmp = std::env::temp_dir().join("fourwave_verify_unknown");
        assert!(run_suite(&cfg, "nope", &tmp).is_err());
    }

    #[test]
    fn trivial_stability_all_zero() {
        // zero strengths and no bump: the run must report identically zero
        // perturbation norms and every stability assertion passes
        let text = r#"
            [case]
            strengths = [0.0, 0.0, 0.0, 0.0]
            [grid]
            n = 64
            l = 50.0
            [run]
            t_final = 1.0
            snapshot_times = [0.5, 1.0]
            bump_h1 = 0.0
        "#;
        let cfg = RunConfig::from_toml(text).unwrap();
        let tmp = std::env::temp_dir().join("fourwave_verify_trivial");
        let rep = run_suite(&cfg, "stability", &tmp).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.assertions);
        let norms = std::fs::read_to_string(tmp.join("stability/norms.csv")).unwrap();
        for line in norms.lines().skip(1) {
            let mut fields = line.split(',');
            fields.next(); // t
            for v in fields {
                assert_eq!(v.parse::<f64>().unwrap(), 0.0, "nonzero norm in `{line}`");
            }
        }
    }
}

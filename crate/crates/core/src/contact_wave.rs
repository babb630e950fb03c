//! Viscous contact wave: self-similar nonlinear diffusion profile and the
//! lifted (V, U, Θ) field with its energy-equation residual.
//!
//! The temperature rides a self-similar solution Y(η), η = x/sqrt(1+t), of
//! a (Y'/Y)' = -(η/2) Y'.  The volume follows from the constant contact
//! pressure, the velocity from the exact mass equation, and the temperature
//! carries a first-order correction chosen so the momentum equation is
//! satisfied exactly as well; the only leftover residual sits in the energy
//! equation and is reported pointwise as `hd`.

use crate::error::{Error, Result};
use crate::gas::{self, GasParams};
use crate::numerics::{hermite, hermite_deriv};
use crate::wave_curves::CaseSetup;

/// Default interior node count of the self-similar BVP.
pub const SELFSIMILAR_NODES: usize = 8000;

/// Self-similar temperature profile Y(η) with derivative samples.
#[derive(Debug, Clone)]
pub struct SelfSimilarProfile {
    pub eta: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
    pub a_diff: f64,
    pub theta_left: f64,
    pub theta_right: f64,
}

impl SelfSimilarProfile {
    pub fn eta_max(&self) -> f64 {
        *self.eta.last().unwrap()
    }

    /// (Y, Y') at arbitrary η; constant endpoints beyond the grid.
    pub fn eval(&self, eta: f64) -> (f64, f64) {
        let n = self.eta.len();
        if eta <= self.eta[0] {
            return (self.theta_left, 0.0);
        }
        if eta >= self.eta[n - 1] {
            return (self.theta_right, 0.0);
        }
        let h = self.eta[1] - self.eta[0];
        let i = (((eta - self.eta[0]) / h) as usize).min(n - 2);
        let t = (eta - self.eta[i]) / h;
        (
            hermite(t, h, self.y[i], self.dy[i], self.y[i + 1], self.dy[i + 1]),
            hermite_deriv(t, h, self.y[i], self.dy[i], self.y[i + 1], self.dy[i + 1]),
        )
    }

    /// (Y, Y', Y'', Y''') with the higher derivatives taken from the ODE:
    /// Y'' = (Y')²/Y − η Y Y'/(2a), and its η-derivative for Y'''.
    pub fn eval_full(&self, eta: f64) -> (f64, f64, f64, f64) {
        let (y, dy) = self.eval(eta);
        let a = self.a_diff;
        let d2y = dy * dy / y - eta * y * dy / (2.0 * a);
        let d3y = 2.0 * dy * d2y / y - dy * dy * dy / (y * y)
            - (y * dy + eta * dy * dy + eta * y * d2y) / (2.0 * a);
        (y, dy, d2y, d3y)
    }

    /// Max residual of the central-difference BVP system at interior nodes.
    pub fn max_discrete_residual(&self) -> f64 {
        let h = self.eta[1] - self.eta[0];
        let mut worst = 0.0_f64;
        for i in 1..self.eta.len() - 1 {
            worst = worst.max(discrete_residual(&self.y, i, h, self.eta[i], self.a_diff).abs());
        }
        worst
    }
}

/// a (Y'/Y)' + (η/2) Y' at node i, central differences with harmonic-free
/// arithmetic midpoints for Y on the half nodes.
fn discrete_residual(y: &[f64], i: usize, h: f64, eta: f64, a: f64) -> f64 {
    let flux_r = (y[i + 1] - y[i]) / (h * 0.5 * (y[i + 1] + y[i]));
    let flux_l = (y[i] - y[i - 1]) / (h * 0.5 * (y[i] + y[i - 1]));
    a * (flux_r - flux_l) / h + eta / 2.0 * (y[i + 1] - y[i - 1]) / (2.0 * h)
}

/// Solve the self-similar BVP with `n` intervals on [−η_max, η_max] by
/// damped Newton with continuation from the linear profile.
pub fn solve_selfsimilar_with_n(
    theta_left: f64,
    theta_right: f64,
    a_diff: f64,
    eta_max: f64,
    n: usize,
) -> Result<SelfSimilarProfile> {
    if !(theta_left > 0.0 && theta_right > 0.0 && a_diff > 0.0 && eta_max > 0.0) {
        return Err(Error::Domain(format!(
            "need positive endpoints/coefficient, got ({theta_left}, {theta_right}, {a_diff})"
        )));
    }
    let h = 2.0 * eta_max / n as f64;
    let eta: Vec<f64> = (0..=n).map(|i| -eta_max + h * i as f64).collect();
    if theta_left == theta_right {
        // degenerate gap: the constant profile is the exact solution
        let y = vec![theta_left; n + 1];
        let dy = vec![0.0; n + 1];
        return Ok(SelfSimilarProfile { eta, y, dy, a_diff, theta_left, theta_right });
    }
    let mut y: Vec<f64> = eta
        .iter()
        .map(|&e| theta_left + (theta_right - theta_left) * (e + eta_max) / (2.0 * eta_max))
        .collect();
    // continuation in the endpoint gap; the constant profile is exact at c=0
    let n_cont = 4;
    for c in 1..=n_cont {
        let frac = c as f64 / n_cont as f64;
        let tl = theta_left + (1.0 - frac) * 0.5 * (theta_right - theta_left);
        let tr = theta_right - (1.0 - frac) * 0.5 * (theta_right - theta_left);
        y[0] = tl;
        y[n] = tr;
        newton_bvp(&mut y, &eta, h, a_diff)?;
    }
    // nodal slopes by fourth-order differences so the Hermite reconstruction
    // stays consistent with the solved samples well below the residual scale
    let mut dy = vec![0.0; n + 1];
    for i in 2..=n - 2 {
        dy[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
    }
    dy[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
    dy[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
    dy[n - 1] =
        (3.0 * y[n] + 10.0 * y[n - 1] - 18.0 * y[n - 2] + 6.0 * y[n - 3] - y[n - 4]) / (12.0 * h);
    dy[n] =
        (25.0 * y[n] - 48.0 * y[n - 1] + 36.0 * y[n - 2] - 16.0 * y[n - 3] + 3.0 * y[n - 4])
            / (12.0 * h);
    Ok(SelfSimilarProfile { eta, y, dy, a_diff, theta_left, theta_right })
}

pub fn solve_selfsimilar(
    theta_left: f64,
    theta_right: f64,
    a_diff: f64,
    eta_max: f64,
) -> Result<SelfSimilarProfile> {
    solve_selfsimilar_with_n(theta_left, theta_right, a_diff, eta_max, SELFSIMILAR_NODES)
}

/// Damped Newton on the interior unknowns with a tridiagonal (Thomas) solve.
fn newton_bvp(y: &mut [f64], eta: &[f64], h: f64, a: f64) -> Result<()> {
    let n = y.len() - 1;
    let res_norm = |y: &[f64]| -> f64 {
        let mut s = 0.0_f64;
        for i in 1..n {
            s = s.max(discrete_residual(y, i, h, eta[i], a).abs());
        }
        s
    };
    // roundoff floor of the residual scales with a/h^2
    let tol = (1e-15 * a / (h * h)).max(1e-13);
    let mut rn = res_norm(y);
    for _ in 0..60 {
        if rn <= tol {
            return Ok(());
        }
        // tridiagonal Jacobian by analytic differentiation of the residual
        let mut sub = vec![0.0; n - 1];
        let mut diag = vec![0.0; n - 1];
        let mut sup = vec![0.0; n - 1];
        let mut rhs = vec![0.0; n - 1];
        for i in 1..n {
            let ym_r = 0.5 * (y[i + 1] + y[i]);
            let ym_l = 0.5 * (y[i] + y[i - 1]);
            let dr = y[i + 1] - y[i];
            let dl = y[i] - y[i - 1];
            // d residual / d y[i-1], y[i], y[i+1]
            let d_im1 =
                a / (h * h) * (1.0 / ym_l + 0.5 * dl / (ym_l * ym_l)) - eta[i] / (4.0 * h);
            let d_i = a / (h * h)
                * (-1.0 / ym_r - 0.5 * dr / (ym_r * ym_r) - 1.0 / ym_l
                    + 0.5 * dl / (ym_l * ym_l));
            let d_ip1 =
                a / (h * h) * (1.0 / ym_r - 0.5 * dr / (ym_r * ym_r)) + eta[i] / (4.0 * h);
            let k = i - 1;
            if k > 0 {
                sub[k] = d_im1;
            }
            diag[k] = d_i;
            if k + 1 < n - 1 {
                sup[k] = d_ip1;
            }
            rhs[k] = -discrete_residual(y, i, h, eta[i], a);
        }
        thomas(&sub, &mut diag, &sup, &mut rhs);
        // damped update
        let mut lambda = 1.0;
        let mut advanced = false;
        for _ in 0..30 {
            let mut yt = y.to_vec();
            let mut ok = true;
            for i in 1..n {
                yt[i] = y[i] + lambda * rhs[i - 1];
                if yt[i] <= 0.0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                let rt = res_norm(&yt);
                if rt < rn {
                    y.copy_from_slice(&yt);
                    rn = rt;
                    advanced = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !advanced {
            if rn <= 1e-9 {
                return Ok(()); // stalled at the arithmetic floor
            }
            return Err(Error::ConvergenceFailure(format!(
                "self-similar Newton stalled at residual {rn:.3e}"
            )));
        }
    }
    Err(Error::ConvergenceFailure("self-similar Newton exceeded 60 iterations".into()))
}

/// In-place tridiagonal solve; `diag`/`rhs` are overwritten, answer in rhs.
fn thomas(sub: &[f64], diag: &mut [f64], sup: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
    }
}

/// Pointwise contact-wave values with analytic ξ-derivatives and the
/// energy-equation residual.
#[derive(Debug, Clone, Copy)]
pub struct ContactPoint {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
    pub dv: f64,
    pub du: f64,
    pub dtheta: f64,
    pub d2v: f64,
    pub d2u: f64,
    pub d2theta: f64,
    pub hd: f64,
}

/// The assembled viscous contact wave for one case.
#[derive(Debug, Clone)]
pub struct ContactWave {
    pub profile: SelfSimilarProfile,
    pub p_contact: f64,
    pub u_contact: f64,
    /// Pre-contact anchor (v_m, theta_m); v is evaluated as an offset from
    /// it so a degenerate (flat) profile reproduces v_m exactly.
    pub v_mid: f64,
    pub theta_mid: f64,
    pub sigma_minus: f64,
    pub delta_d: f64,
    /// Velocity-correction coefficient (γ−1)κ/(Rγ) from the mass equation.
    pub c_u: f64,
    /// Temperature-correction coefficient (μ − c_u)/p making the momentum
    /// equation exact.
    pub beta: f64,
    gas: GasParams,
}

/// Build the contact wave between the mid and post-contact states of a case.
pub fn build_contact(case: &CaseSetup, g: &GasParams) -> Result<ContactWave> {
    g.validate()?;
    let p_c = gas::pressure(&case.mid, g);
    let a_diff = (g.gamma - 1.0) * g.kappa * p_c / (g.r * g.r * g.gamma);
    let eta_max = 12.0 * a_diff.sqrt().max(1.0);
    let profile = solve_selfsimilar(case.mid.theta, case.star_up.theta, a_diff, eta_max)?;
    let c_u = (g.gamma - 1.0) * g.kappa / (g.r * g.gamma);
    Ok(ContactWave {
        profile,
        p_contact: p_c,
        u_contact: case.mid.u,
        v_mid: case.mid.v,
        theta_mid: case.mid.theta,
        sigma_minus: case.sigma_minus,
        delta_d: case.strengths.delta_d,
        c_u,
        beta: (g.mu - c_u) / p_c,
        gas: *g,
    })
}

impl ContactWave {
    pub fn a_diff(&self) -> f64 {
        self.profile.a_diff
    }

    pub fn eval(&self, t: f64, xi: f64) -> ContactPoint {
        if self.profile.theta_left == self.profile.theta_right {
            // degenerate contact: exactly the mid state, no residual
            return ContactPoint {
                v: self.v_mid,
                u: self.u_contact,
                theta: self.theta_mid,
                dv: 0.0,
                du: 0.0,
                dtheta: 0.0,
                d2v: 0.0,
                d2u: 0.0,
                d2theta: 0.0,
                hd: 0.0,
            };
        }
        let g = &self.gas;
        let tau = 1.0 + t;
        let s1 = 1.0 / tau.sqrt();
        let x = xi + self.sigma_minus * t;
        let eta = x * s1;
        let (y, dy, d2y, d3y) = self.profile.eval_full(eta);

        let v = self.v_mid + g.r * (y - self.theta_mid) / self.p_contact;
        let l = dy / y;
        let dl = d2y / y - l * l;
        let d2l = d3y / y - 3.0 * dy * d2y / (y * y) + 2.0 * l * l * l;
        let u = self.u_contact + self.c_u * l * s1;
        let w = -eta * dy / (2.0 * tau); // Θ^sim_t
        let theta = y + self.beta * w;

        // ξ-derivatives (x and ξ derivatives coincide at fixed t)
        let w_x = -s1 * (dy + eta * d2y) / (2.0 * tau);
        let w_xx = -s1 * s1 * (2.0 * d2y + eta * d3y) / (2.0 * tau);
        let dv = g.r * dy * s1 / self.p_contact;
        let d2v = g.r * d2y * s1 * s1 / self.p_contact;
        let du = self.c_u * dl * s1 * s1;
        let d2u = self.c_u * d2l * s1 * s1 * s1;
        let dtheta = dy * s1 + self.beta * w_x;
        let d2theta = d2y * s1 * s1 + self.beta * w_xx;

        // energy-equation residual
        let w_t = eta * (3.0 * dy + eta * d2y) / (4.0 * tau * tau);
        let theta_t = w + self.beta * w_t;
        let p = self.p_contact * theta / y;
        let hd = g.r / (g.gamma - 1.0) * theta_t + p * du
            - g.kappa * (d2theta * v - dtheta * dv) / (v * v)
            - g.mu * du * du / v;
        ContactPoint { v, u, theta, dv, du, dtheta, d2v, d2u, d2theta, hd }
    }
}

//! Run configuration: TOML schema, validation and case construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasParams, ThermoState};
use crate::wave_curves::{
    generate_case, generate_case_from_sonic, solve_medium_states, CaseSetup, StrengthInput,
};

/// A (v, u, theta) triple in configuration files.
pub type StateTriple = [f64; 3];

fn to_state(s: &StateTriple) -> ThermoState {
    ThermoState::new(s[0], s[1], s[2])
}

/// Gas section; all keys optional with the documented defaults.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GasSection {
    pub r: f64,
    pub gamma: f64,
    pub mu: f64,
    pub kappa: f64,
    pub a: f64,
}

impl Default for GasSection {
    fn default() -> Self {
        GasSection { r: 1.0, gamma: 5.0 / 3.0, mu: 1.0, kappa: 1.0, a: 1.0 }
    }
}

impl GasSection {
    pub fn params(&self) -> GasParams {
        GasParams { r: self.r, gamma: self.gamma, mu: self.mu, kappa: self.kappa, a: self.a }
    }
}

/// Case section: either forward construction from strengths (mode
/// "forward") or the medium-state solve from the two end states (mode
/// "solve").  Exactly one of `strengths` / `left_state` must be present.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CaseSection {
    pub mode: String,
    /// Forward mode: (delta_b, delta_r1, delta_d, delta_r3).
    pub strengths: Option<[f64; 4]>,
    /// Forward mode anchor: sonic state volume and temperature; every
    /// requested strength is honored exactly.
    pub sonic_state: Option<[f64; 2]>,
    /// Forward mode alternative anchor: the far-field state (the realized
    /// 1-fan strength then comes out of the sonic projection).
    pub right_state: Option<StateTriple>,
    /// Solve mode: boundary state (v_-, u_-, theta_-).
    pub left_state: Option<StateTriple>,
}

impl Default for CaseSection {
    fn default() -> Self {
        CaseSection {
            mode: "forward".into(),
            strengths: Some([0.02, 0.05, 0.02, 0.05]),
            sonic_state: Some([1.0, 1.0]),
            right_state: None,
            left_state: None,
        }
    }
}

/// Grid section; `l = 0` requests the solver's domain-length policy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub l: f64,
    pub cfl: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { n: 4096, l: 0.0, cfl: crate::solver::DEFAULT_CFL }
    }
}

/// Run section: horizon, output times and the initial perturbation bump.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub t_final: f64,
    pub snapshot_times: Vec<f64>,
    /// Target H1 size of the initial bump (amplitude is scaled to match).
    pub bump_h1: f64,
    pub bump_center: f64,
    pub bump_width: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            t_final: 200.0,
            snapshot_times: vec![0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0],
            bump_h1: 0.01,
            bump_center: 40.0,
            bump_width: 10.0,
        }
    }
}

/// Verify section: which suites a full run executes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub suites: Vec<String>,
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection {
            suites: ["bl", "contact", "rarefaction", "interactions", "sources", "stability"]
                .map(String::from)
                .to_vec(),
        }
    }
}

/// Full configuration of one run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub gas: GasSection,
    pub case: CaseSection,
    pub grid: GridSection,
    pub run: RunSection,
    pub verify: VerifySection,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.gas.params().validate()?;
        match self.case.mode.as_str() {
            "forward" => {
                if self.case.strengths.is_none() || self.case.left_state.is_some() {
                    return Err(Error::Config(
                        "forward mode needs `strengths` and no `left_state`".into(),
                    ));
                }
            }
            "solve" => {
                if self.case.left_state.is_none()
                    || self.case.right_state.is_none()
                    || self.case.strengths.is_some()
                {
                    return Err(Error::Config(
                        "solve mode needs `left_state` and `right_state`, no `strengths`".into(),
                    ));
                }
            }
            m => return Err(Error::Config(format!("unknown case mode `{m}`"))),
        }
        if self.grid.n < 4 || !(self.grid.cfl > 0.0 && self.grid.cfl <= 1.0) {
            return Err(Error::Config("grid needs n >= 4 and 0 < cfl <= 1".into()));
        }
        Ok(())
    }

    /// Build the four-wave case this configuration describes.
    pub fn build_case(&self) -> Result<CaseSetup> {
        let g = self.gas.params();
        match self.case.mode.as_str() {
            "forward" => {
                let s = self.case.strengths.expect("validated");
                let req = StrengthInput {
                    delta_b: s[0],
                    delta_r1: s[1],
                    delta_d: s[2],
                    delta_r3: s[3],
                };
                if let Some(r) = &self.case.right_state {
                    generate_case(&to_state(r), &req, &g)
                } else {
                    let sonic = self.case.sonic_state.unwrap_or([1.0, 1.0]);
                    generate_case_from_sonic(sonic[0], sonic[1], &req, &g)
                }
            }
            "solve" => {
                let l = to_state(self.case.left_state.as_ref().expect("validated"));
                let r = to_state(self.case.right_state.as_ref().expect("validated"));
                solve_medium_states(&l, &r, &g)
            }
            _ => unreachable!("validated"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_and_build() {
        let cfg = RunConfig::from_toml("").unwrap();
        assert_eq!(cfg.grid.n, 4096);
        let case = cfg.build_case().unwrap();
        assert!((case.strengths.delta_r1 - 0.05).abs() < 1e-12);
    }

    #[test]
    fn forward_and_solve_modes_exclusive() {
        let bad = r#"
            [case]
            mode = "forward"
            left_state = [1.0, 1.0, 1.0]
        "#;
        assert!(RunConfig::from_toml(bad).is_err());
        let bad2 = r#"
            [case]
            mode = "solve"
            right_state = [1.0, 1.0, 1.0]
        "#;
        assert!(RunConfig::from_toml(bad2).is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("[gas]\nzeta = 2.0\n").is_err());
    }

    #[test]
    fn solve_mode_reproduces_forward_case() {
        let cfg = RunConfig::from_toml("").unwrap();
        let case = cfg.build_case().unwrap();
        let text = format!(
            "[case]\nmode = \"solve\"\nstrengths = []\nleft_state = [{}, {}, {}]\nright_state = [{}, {}, {}]\n",
            case.left.v, case.left.u, case.left.theta,
            case.right.v, case.right.u, case.right.theta
        );
        // empty strengths array is still "present": must be rejected
        assert!(RunConfig::from_toml(&text).is_err());
    }
}

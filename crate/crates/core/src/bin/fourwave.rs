//! Command-line front end: case construction, wave profiles, simulation,
//! interaction reports and the verification suites.
//!
//! Exit codes: 0 all checks pass, 1 a verification assertion failed,
//! 2 usage or configuration error, 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fourwave::composite::{build_composite, eval_composite, write_interactions_csv};
use fourwave::error::Error;
use fourwave::harness::config::RunConfig;
use fourwave::harness::verify::{collect_reports, interaction_times, run_simulation, run_suite};
use fourwave::solver::{domain_length, write_profiles_csv, Grid, SolutionState};

#[derive(Parser)]
#[command(name = "fourwave", version, about = "Four-wave asymptotics of half-line viscous gas flow")]
struct Cli {
    /// TOML configuration file; every key has a documented default.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV artifacts and summaries.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

/// One flag per configuration key; a flag given on the command line
/// replaces the corresponding key of the loaded configuration.
#[derive(Args)]
struct Overrides {
    /// [gas] specific gas constant R.
    #[arg(long, global = true)]
    r: Option<f64>,
    /// [gas] adiabatic exponent.
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// [gas] viscosity.
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// [gas] heat conductivity.
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// [gas] entropy normalization constant.
    #[arg(long, global = true)]
    a: Option<f64>,
    /// [case] mode: "forward" or "solve".
    #[arg(long, global = true)]
    mode: Option<String>,
    /// [case] wave strengths delta_b,delta_r1,delta_d,delta_r3.
    #[arg(long, global = true, value_delimiter = ',', num_args = 4)]
    strengths: Option<Vec<f64>>,
    /// [case] sonic anchor v,theta (forward mode).
    #[arg(long, global = true, value_delimiter = ',', num_args = 2)]
    sonic_state: Option<Vec<f64>>,
    /// [case] far-field state v,u,theta.
    #[arg(long, global = true, value_delimiter = ',', num_args = 3)]
    right_state: Option<Vec<f64>>,
    /// [case] boundary state v,u,theta (solve mode).
    #[arg(long, global = true, value_delimiter = ',', num_args = 3)]
    left_state: Option<Vec<f64>>,
    /// [grid] number of cells.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// [grid] domain length; 0 selects the solver policy.
    #[arg(long, global = true)]
    l: Option<f64>,
    /// [grid] CFL number.
    #[arg(long, global = true)]
    cfl: Option<f64>,
    /// [run] final time.
    #[arg(long, global = true)]
    t_final: Option<f64>,
    /// [run] snapshot times.
    #[arg(long, global = true, value_delimiter = ',')]
    snapshot_times: Option<Vec<f64>>,
    /// [run] H1 size of the initial bump.
    #[arg(long, global = true)]
    bump_h1: Option<f64>,
    /// [run] bump center.
    #[arg(long, global = true)]
    bump_center: Option<f64>,
    /// [run] bump width.
    #[arg(long, global = true)]
    bump_width: Option<f64>,
    /// [verify] suites a full verification runs.
    #[arg(long, global = true, value_delimiter = ',')]
    suites: Option<Vec<String>>,
}

impl Overrides {
    fn apply(&self, cfg: &mut RunConfig) -> Result<(), Error> {
        macro_rules! set {
            ($field:expr, $target:expr) => {
                if let Some(v) = &$field {
                    $target = v.clone();
                }
            };
        }
        set!(self.r, cfg.gas.r);
        set!(self.gamma, cfg.gas.gamma);
        set!(self.mu, cfg.gas.mu);
        set!(self.kappa, cfg.gas.kappa);
        set!(self.a, cfg.gas.a);
        set!(self.mode, cfg.case.mode);
        if let Some(s) = &self.strengths {
            cfg.case.strengths = Some([s[0], s[1], s[2], s[3]]);
        }
        if let Some(s) = &self.sonic_state {
            cfg.case.sonic_state = Some([s[0], s[1]]);
        }
        if let Some(s) = &self.right_state {
            cfg.case.right_state = Some([s[0], s[1], s[2]]);
        }
        if let Some(s) = &self.left_state {
            cfg.case.left_state = Some([s[0], s[1], s[2]]);
        }
        set!(self.n, cfg.grid.n);
        set!(self.l, cfg.grid.l);
        set!(self.cfl, cfg.grid.cfl);
        set!(self.t_final, cfg.run.t_final);
        set!(self.snapshot_times, cfg.run.snapshot_times);
        set!(self.bump_h1, cfg.run.bump_h1);
        set!(self.bump_center, cfg.run.bump_center);
        set!(self.bump_width, cfg.run.bump_width);
        set!(self.suites, cfg.verify.suites);
        cfg.validate()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build or recover the four-wave case decomposition.
    Case {
        #[command(subcommand)]
        action: CaseAction,
    },
    /// Evaluate the composite wave profiles.
    Waves {
        #[command(subcommand)]
        action: WavesAction,
    },
    /// Run the time integration and write norms.csv / profiles.csv.
    Simulate,
    /// Write the interaction-integral table interactions.csv.
    Report,
    /// Run verification suites; exits 1 if any assertion fails.
    Verify {
        /// Suites to run; defaults to the configured list.
        names: Vec<String>,
    },
}

#[derive(Subcommand)]
enum CaseAction {
    /// Forward construction from wave strengths.
    Generate,
    /// Recover the medium states from the two end states.
    Solve,
}

#[derive(Subcommand)]
enum WavesAction {
    /// Sample all wave components on the grid at one time.
    Build {
        /// Evaluation time.
        #[arg(long)]
        t: f64,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    cli.overrides.apply(&mut cfg)?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Case { action } => {
            let mut cfg = load_config(cli)?;
            cfg.case.mode = match action {
                CaseAction::Generate => "forward".into(),
                CaseAction::Solve => "solve".into(),
            };
            cfg.validate()?;
            let case = cfg.build_case()?;
            println!("{}", serde_json::to_string_pretty(&case).map_err(io_err)?);
            Ok(true)
        }
        Command::Waves { action: WavesAction::Build { t } } => {
            let cfg = load_config(cli)?;
            let g = cfg.gas.params();
            let case = cfg.build_case()?;
            let wave = build_composite(&case, &g)?;
            let l = if cfg.grid.l > 0.0 {
                cfg.grid.l
            } else {
                domain_length(&wave, cfg.run.t_final.max(*t))
            };
            let grid = Grid::new(cfg.grid.n, l)?;
            let f = eval_composite(&wave, *t, &grid.nodes())?;
            let state =
                SolutionState { t: *t, v: f.v.clone(), u: f.u.clone(), theta: f.theta.clone() };
            let dir = cli.out.join("waves");
            std::fs::create_dir_all(&dir)?;
            let mut w = std::fs::File::create(dir.join("profiles.csv"))?;
            write_profiles_csv(&mut w, true, &state, &f)?;
            Ok(true)
        }
        Command::Simulate => {
            let cfg = load_config(cli)?;
            let norms = run_simulation(&cfg, &cli.out.join("simulate"))?;
            for r in &norms {
                println!(
                    "t = {}: sup ({:.3e}, {:.3e}, {:.3e}), l2 {:.3e}, h1 {:.3e}, energy {:.3e}",
                    r.t, r.sup_phi, r.sup_psi, r.sup_theta, r.l2, r.h1, r.energy
                );
            }
            Ok(true)
        }
        Command::Report => {
            let cfg = load_config(cli)?;
            let g = cfg.gas.params();
            let wave = build_composite(&cfg.build_case()?, &g)?;
            let reports = collect_reports(&wave, &interaction_times())?;
            let dir = cli.out.join("report");
            std::fs::create_dir_all(&dir)?;
            let mut w = std::fs::File::create(dir.join("interactions.csv"))?;
            write_interactions_csv(&reports, &mut w)?;
            Ok(true)
        }
        Command::Verify { names } => {
            let cfg = load_config(cli)?;
            let names = if names.is_empty() { cfg.verify.suites.clone() } else { names.clone() };
            let mut all = true;
            for name in &names {
                let rep = run_suite(&cfg, name, &cli.out)?;
                let mut buf = Vec::new();
                rep.write_summary(&mut buf)?;
                print!("{}", String::from_utf8_lossy(&buf));
                all &= rep.all_pass();
            }
            Ok(all)
        }
    }
}

fn io_err(e: serde_json::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

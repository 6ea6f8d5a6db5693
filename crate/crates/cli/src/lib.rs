//! Command-line front end for the `gauss_ent` simulation library.

pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::Parser;
use gauss_ent::experiments::{
    asymptotic_phase_diagram, classify_phase, linear_grid, sweep, SweepSpec,
};
use gauss_ent::types::{thermal_c_from_temperature, EnvironmentParams};
use gauss_ent::validation::{check_physical_state, validate_diffusion, Severity, Strictness};
use gauss_ent::{
    dynamics, metrics, sample_trajectory, steady_covariance, CovarianceMatrix, EnvironmentSpec,
};
use thiserror::Error;

pub use config::{Command, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("physicality violation: {0}")]
    Physicality(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Physicality(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<gauss_ent::Error> for CliError {
    fn from(e: gauss_ent::Error) -> Self {
        use gauss_ent::Error as E;
        match e {
            E::Singular { .. } => CliError::Numerical(e.to_string()),
            E::Unphysical(_) => CliError::Physicality(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gauss-ent",
    version,
    about = "Entanglement dynamics of two oscillators in a common thermal bath"
)]
pub struct Cli {
    pub command: Command,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a configuration key; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = config::split_pair)]
    pub set: Vec<(String, String)>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Reject unphysical initial states instead of warning.
    #[arg(long)]
    pub strict: bool,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    pub dump_config: bool,
}

impl Cli {
    /// Config file, then `--set`, then dedicated flags.
    pub fn resolve_config(&self) -> Result<RunConfig, CliError> {
        let mut pairs = Vec::new();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            pairs.extend(config::parse_config_text(&text)?);
        }
        pairs.extend(self.set.iter().cloned());
        if let Some(f) = self.format {
            pairs.push((
                "format".into(),
                if f == Format::Json { "json" } else { "csv" }.into(),
            ));
        }
        if self.strict {
            pairs.push(("strict".into(), "true".into()));
        }
        RunConfig::from_pairs(pairs)
    }
}

/// Result of a run: the rendered artifact plus diagnostics for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub warnings: Vec<String>,
}

fn strictness(cfg: &RunConfig) -> Strictness {
    if cfg.strict {
        Strictness::Strict
    } else {
        Strictness::Lenient
    }
}

fn thermal_c(cfg: &RunConfig) -> Result<f64, CliError> {
    match cfg.temperature {
        config::Temperature::Coth(c) => Ok(c),
        config::Temperature::Kelvin(t) => Ok(thermal_c_from_temperature(cfg.omega, t)?),
    }
}

/// Environment at the configured C (or at `c_override`).
pub fn environment(cfg: &RunConfig, c_override: Option<f64>) -> Result<EnvironmentSpec, CliError> {
    let c = match c_override {
        Some(c) => c,
        None => thermal_c(cfg)?,
    };
    let thermal = EnvironmentSpec::thermal(cfg.lambda, c, cfg.d_xy, cfg.d_xpy, cfg.m, cfg.omega)?;
    if !cfg.overrides.any() {
        return Ok(thermal);
    }
    let o = cfg.overrides;
    Ok(EnvironmentSpec::new(EnvironmentParams {
        m: cfg.m,
        omega: cfg.omega,
        lambda: cfg.lambda,
        thermal_c: c,
        d_xx: o.d_xx.unwrap_or(thermal.d_xx),
        d_xpx: o.d_xpx.unwrap_or(thermal.d_xpx),
        d_pxpx: o.d_pxpx.unwrap_or(thermal.d_pxpx),
        d_xy: cfg.d_xy,
        d_xpy: cfg.d_xpy,
        d_pxpy: o.d_pxpy.unwrap_or(thermal.d_pxpy),
    })?)
}

/// Diffusion inequalities always gate; the full positivity test only warns.
fn check_environment(env: &EnvironmentSpec, warnings: &mut Vec<String>) -> Result<(), CliError> {
    let report = validate_diffusion(env);
    if !report.passed() {
        let failed: Vec<String> = report
            .failures()
            .filter(|c| c.severity == Severity::Gate)
            .map(|c| format!("{} (margin {:.6e})", c.name, c.margin))
            .collect();
        return Err(CliError::Physicality(format!(
            "diffusion coefficients at C = {} violate {}",
            env.thermal_c,
            failed.join(", ")
        )));
    }
    for c in report.failures() {
        warnings.push(format!(
            "diffusion at C = {}: {} fails (margin {:.6e}); the bath is not completely positive",
            env.thermal_c, c.name, c.margin
        ));
    }
    Ok(())
}

fn initial_state(
    cfg: &RunConfig,
    warnings: &mut Vec<String>,
) -> Result<CovarianceMatrix, CliError> {
    let sigma = cfg.initial.covariance()?;
    let report = check_physical_state(&sigma);
    match strictness(cfg).enforce("initial state", &report) {
        Ok(w) => {
            if !w.is_empty() {
                warnings.push("unphysical initial state; proceeding in lenient mode".into());
                warnings.extend(w);
            }
            Ok(sigma)
        }
        Err(e) => Err(CliError::Physicality(format!(
            "unphysical initial state: {e}"
        ))),
    }
}

fn render(
    format: Format,
    csv: impl FnOnce() -> String,
    json: impl FnOnce() -> serde_json::Value,
) -> String {
    match format {
        Format::Csv => csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json()).expect("json value serializes");
            s.push('\n');
            s
        }
    }
}

fn c_grid(cfg: &RunConfig) -> Vec<f64> {
    linear_grid(cfg.c_min, cfg.c_max, cfg.n_c)
}

/// Executes one command and renders its artifact.
pub fn run(command: Command, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let mut warnings = Vec::new();
    let text = match command {
        Command::Steady => {
            let env = environment(cfg, None)?;
            check_environment(&env, &mut warnings)?;
            let sigma = steady_covariance(&env)?;
            let residual = dynamics::lyapunov_residual(&env, &sigma);
            render(
                cfg.format,
                || output::steady_csv(&sigma),
                || output::steady_json(&sigma, residual),
            )
        }
        Command::Metrics => {
            let env = environment(cfg, None)?;
            check_environment(&env, &mut warnings)?;
            let initial = initial_state(cfg, &mut warnings)?;
            let sigma = gauss_ent::evolve(&initial, &env, cfg.t)?;
            let m = metrics(&sigma);
            if !m.log_negativity.is_defined() {
                warnings.push(format!(
                    "logarithmic negativity undefined at t = {} (nu_tilde_minus^2 <= 0 or complex)",
                    cfg.t
                ));
            }
            render(
                cfg.format,
                || output::metrics_csv(cfg.t, &m),
                || output::metrics_json(cfg.t, &sigma, &m),
            )
        }
        Command::Evolve => {
            let env = environment(cfg, None)?;
            check_environment(&env, &mut warnings)?;
            let initial = initial_state(cfg, &mut warnings)?;
            let traj = sample_trajectory(&initial, &env, cfg.t_max, cfg.n_steps)?;
            let ms: Vec<_> = traj.states.iter().map(metrics).collect();
            render(
                cfg.format,
                || output::trajectory_csv(&traj, &ms),
                || output::trajectory_json(&traj, &ms),
            )
        }
        Command::Sweep => {
            let initial = initial_state(cfg, &mut warnings)?;
            if cfg.overrides.any() {
                return Err(CliError::Config(
                    "sweeps need a thermal bath; drop d_xx/d_xpx/d_pxpx/d_pxpy".into(),
                ));
            }
            for c in c_grid(cfg) {
                check_environment(&environment(cfg, Some(c))?, &mut warnings)?;
            }
            let spec = SweepSpec {
                env_base: environment(cfg, Some(cfg.c_min.max(1.0)))?,
                initial,
                t_max: cfg.t_max,
                n_t: cfg.n_t,
                c_min: cfg.c_min,
                c_max: cfg.c_max,
                n_c: cfg.n_c,
            };
            let result = sweep(&spec)?;
            render(
                cfg.format,
                || output::sweep_csv(&result),
                || output::sweep_json(&result),
            )
        }
        Command::Classify => {
            let initial = initial_state(cfg, &mut warnings)?;
            let mut rows = Vec::new();
            for c in c_grid(cfg) {
                let env = environment(cfg, Some(c))?;
                check_environment(&env, &mut warnings)?;
                let pc = classify_phase(&initial, &env, cfg.t_max, cfg.n_t)?;
                warnings.extend(pc.warnings.iter().map(|w| format!("C = {c}: {w}")));
                rows.push((c, pc));
            }
            render(
                cfg.format,
                || output::classify_csv(&rows),
                || output::classify_json(&rows),
            )
        }
        Command::PhaseDiagram => {
            if cfg.d_xy != 0.0 {
                return Err(CliError::Config("phase-diagram requires d_xy = 0".into()));
            }
            let d_grid = linear_grid(cfg.d_xpy_min, cfg.d_xpy_max, cfg.n_d);
            let diagram = asymptotic_phase_diagram(cfg.lambda, cfg.omega, &d_grid, &c_grid(cfg))?;
            render(
                cfg.format,
                || output::phase_diagram_csv(&diagram),
                || output::phase_diagram_json(&diagram),
            )
        }
    };
    Ok(RunOutput { text, warnings })
}

/// Full CLI behaviour minus process exit.
pub fn main_with(cli: &Cli) -> Result<RunOutput, CliError> {
    let cfg = cli.resolve_config()?;
    if cli.dump_config {
        return Ok(RunOutput {
            text: cfg.to_text(),
            warnings: Vec::new(),
        });
    }
    let out = run(cli.command, &cfg)?;
    if let Some(path) = &cli.out {
        std::fs::write(path, &out.text)?;
    }
    Ok(out)
}

//! Flat `key = value` run configuration.
//!
//! Sources are applied in order (config file, then `--set` overrides, then
//! dedicated flags), later ones winning. [`RunConfig::to_text`] writes a file
//! that parses back to the same configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use gauss_ent::types::CovarianceMatrix;
use gauss_ent::Preset;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Evolve,
    Steady,
    Metrics,
    Sweep,
    Classify,
    PhaseDiagram,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Steady => "steady",
            Command::Metrics => "metrics",
            Command::Sweep => "sweep",
            Command::Classify => "classify",
            Command::PhaseDiagram => "phase-diagram",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// How the bath temperature was given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    /// C = coth(ω/2T) directly.
    Coth(f64),
    /// T with k = 1.
    Kelvin(f64),
}

/// Initial covariance matrix: a named preset or ten explicit entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Preset(Preset),
    Explicit([f64; 10]),
}

impl InitialState {
    pub fn covariance(&self) -> Result<CovarianceMatrix, CliError> {
        match *self {
            InitialState::Preset(p) => Ok(p.initial()),
            InitialState::Explicit(e) => CovarianceMatrix::from_entries(
                e[0], e[1], e[2], e[3], e[4], e[5], e[6], e[7], e[8], e[9],
            )
            .map_err(|e| CliError::Config(e.to_string())),
        }
    }

    pub fn is_preset(&self) -> bool {
        matches!(self, InitialState::Preset(_))
    }
}

/// Optional overrides turning the thermal bath into a general one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiffusionOverrides {
    pub d_xx: Option<f64>,
    pub d_xpx: Option<f64>,
    pub d_pxpx: Option<f64>,
    pub d_pxpy: Option<f64>,
}

impl DiffusionOverrides {
    pub fn any(&self) -> bool {
        self.d_xx.is_some()
            || self.d_xpx.is_some()
            || self.d_pxpx.is_some()
            || self.d_pxpy.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lambda: f64,
    pub omega: f64,
    pub m: f64,
    pub temperature: Temperature,
    pub d_xy: f64,
    pub d_xpy: f64,
    pub overrides: DiffusionOverrides,
    pub initial: InitialState,
    /// Evaluation time for `metrics`.
    pub t: f64,
    pub t_max: f64,
    pub n_t: usize,
    pub n_steps: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub n_c: usize,
    pub d_xpy_min: f64,
    pub d_xpy_max: f64,
    pub n_d: usize,
    pub strict: bool,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lambda: 0.1,
            omega: 1.0,
            m: 1.0,
            temperature: Temperature::Coth(1.0),
            d_xy: 0.0,
            d_xpy: 0.049,
            overrides: DiffusionOverrides::default(),
            initial: InitialState::Preset(Preset::Fig1),
            t: 0.0,
            t_max: 50.0,
            n_t: 500,
            n_steps: 500,
            c_min: 1.0,
            c_max: 1.5,
            n_c: 20,
            d_xpy_min: 0.0,
            d_xpy_max: 0.06,
            n_d: 13,
            strict: false,
            format: Format::Csv,
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        pairs.push(
            split_pair(line).map_err(|e| CliError::Config(format!("line {}: {e}", lineno + 1)))?,
        );
    }
    Ok(pairs)
}

/// Splits `key=value`.
pub fn split_pair(s: &str) -> Result<(String, String), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let (k, v) = (k.trim(), v.trim());
    if k.is_empty() {
        return Err(format!("empty key in `{s}`"));
    }
    Ok((k.to_string(), v.to_string()))
}

fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = v
        .parse()
        .map_err(|_| CliError::Config(format!("`{key}`: expected a number, got `{v}`")))?;
    if !x.is_finite() {
        return Err(CliError::Config(format!("`{key}`: value must be finite")));
    }
    Ok(x)
}

fn parse_usize(key: &str, v: &str) -> Result<usize, CliError> {
    v.parse().map_err(|_| {
        CliError::Config(format!(
            "`{key}`: expected a non-negative integer, got `{v}`"
        ))
    })
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Config(format!(
            "`{key}`: expected true or false, got `{v}`"
        ))),
    }
}

const SIGMA_PREFIX: &str = "sigma.";

impl RunConfig {
    /// Applies pairs on top of the defaults.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut cfg = RunConfig::default();
        // last write wins per key
        let map: BTreeMap<String, String> = pairs.into_iter().collect();
        if map.contains_key("c") && map.contains_key("temperature") {
            return Err(CliError::Config(
                "give exactly one of `c` and `temperature`".into(),
            ));
        }
        let has_sigma = map.keys().any(|k| k.starts_with(SIGMA_PREFIX));
        if has_sigma && map.contains_key("preset") {
            return Err(CliError::Config(
                "give either `preset` or explicit `sigma.*` entries, not both".into(),
            ));
        }

        let mut sigma = [0.0; 10];
        for (k, v) in &map {
            let v = v.as_str();
            match k.as_str() {
                "lambda" => cfg.lambda = parse_f64(k, v)?,
                "omega" => cfg.omega = parse_f64(k, v)?,
                "m" => cfg.m = parse_f64(k, v)?,
                "c" => cfg.temperature = Temperature::Coth(parse_f64(k, v)?),
                "temperature" => cfg.temperature = Temperature::Kelvin(parse_f64(k, v)?),
                "d_xy" => cfg.d_xy = parse_f64(k, v)?,
                "d_xpy" => cfg.d_xpy = parse_f64(k, v)?,
                "d_xx" => cfg.overrides.d_xx = Some(parse_f64(k, v)?),
                "d_xpx" => cfg.overrides.d_xpx = Some(parse_f64(k, v)?),
                "d_pxpx" => cfg.overrides.d_pxpx = Some(parse_f64(k, v)?),
                "d_pxpy" => cfg.overrides.d_pxpy = Some(parse_f64(k, v)?),
                "preset" => {
                    cfg.initial = InitialState::Preset(v.parse().map_err(
                        |e: gauss_ent::presets::UnknownPreset| CliError::Config(e.to_string()),
                    )?)
                }
                "t" => cfg.t = parse_f64(k, v)?,
                "t_max" => cfg.t_max = parse_f64(k, v)?,
                "n_t" => cfg.n_t = parse_usize(k, v)?,
                "n_steps" => cfg.n_steps = parse_usize(k, v)?,
                "c_min" => cfg.c_min = parse_f64(k, v)?,
                "c_max" => cfg.c_max = parse_f64(k, v)?,
                "n_c" => cfg.n_c = parse_usize(k, v)?,
                "d_xpy_min" => cfg.d_xpy_min = parse_f64(k, v)?,
                "d_xpy_max" => cfg.d_xpy_max = parse_f64(k, v)?,
                "n_d" => cfg.n_d = parse_usize(k, v)?,
                "strict" => cfg.strict = parse_bool(k, v)?,
                "format" => cfg.format = v.parse().map_err(CliError::Config)?,
                key if key.starts_with(SIGMA_PREFIX) => {
                    let name = &key[SIGMA_PREFIX.len()..];
                    let idx = CovarianceMatrix::ENTRY_NAMES
                        .iter()
                        .position(|n| *n == name)
                        .ok_or_else(|| {
                            CliError::Config(format!(
                                "unknown covariance entry `{key}` (expected sigma.{{{}}})",
                                CovarianceMatrix::ENTRY_NAMES.join(",")
                            ))
                        })?;
                    sigma[idx] = parse_f64(k, v)?;
                }
                other => return Err(CliError::Config(format!("unknown key `{other}`"))),
            }
        }
        if has_sigma {
            cfg.initial = InitialState::Explicit(sigma);
        }
        Ok(cfg)
    }

    /// Canonical text form; parses back to an equal config.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    fn pairs(&self) -> Vec<(String, String)> {
        let num = |x: f64| format!("{x:?}");
        let mut out: Vec<(String, String)> = vec![
            ("lambda".into(), num(self.lambda)),
            ("omega".into(), num(self.omega)),
            ("m".into(), num(self.m)),
        ];
        match self.temperature {
            Temperature::Coth(c) => out.push(("c".into(), num(c))),
            Temperature::Kelvin(t) => out.push(("temperature".into(), num(t))),
        }
        out.push(("d_xy".into(), num(self.d_xy)));
        out.push(("d_xpy".into(), num(self.d_xpy)));
        let o = &self.overrides;
        for (k, v) in [
            ("d_xx", o.d_xx),
            ("d_xpx", o.d_xpx),
            ("d_pxpx", o.d_pxpx),
            ("d_pxpy", o.d_pxpy),
        ] {
            if let Some(v) = v {
                out.push((k.into(), num(v)));
            }
        }
        match self.initial {
            InitialState::Preset(p) => out.push(("preset".into(), p.name().into())),
            InitialState::Explicit(e) => {
                for (name, v) in CovarianceMatrix::ENTRY_NAMES.iter().zip(e) {
                    out.push((format!("{SIGMA_PREFIX}{name}"), num(v)));
                }
            }
        }
        out.extend([
            ("t".into(), num(self.t)),
            ("t_max".into(), num(self.t_max)),
            ("n_t".into(), self.n_t.to_string()),
            ("n_steps".into(), self.n_steps.to_string()),
            ("c_min".into(), num(self.c_min)),
            ("c_max".into(), num(self.c_max)),
            ("n_c".into(), self.n_c.to_string()),
            ("d_xpy_min".into(), num(self.d_xpy_min)),
            ("d_xpy_max".into(), num(self.d_xpy_max)),
            ("n_d".into(), self.n_d.to_string()),
            ("strict".into(), self.strict.to_string()),
            ("format".into(), self.format.name().into()),
        ]);
        out
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.pairs() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

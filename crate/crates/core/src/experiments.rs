//! Entanglement-phase classification and (t, C) parameter sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{uniform_grid, Dynamics};
use crate::entanglement::{
    asymptotic_simon, log_negativity, simon_function, LogNegativity, PPT_BAND,
};
use crate::error::{Error, Result};
use crate::types::{CovarianceMatrix, EnvironmentSpec};

/// Crossing brackets are refined until narrower than this.
pub const CROSSING_TOLERANCE: f64 = 1e-8;
/// Two crossings closer than this are a grazing contact and cancel.
pub const TANGENCY_GAP: f64 = 1e-6;
pub const MIN_CLASSIFY_SAMPLES: usize = 100;
/// t_max must reach this many relaxation times 1/λ.
pub const MIN_RELAXATION_TIMES: f64 = 5.0;

/// Sign rule used when tracking S(t): values inside the PPT band count as
/// separable so that rounding noise on an exact zero never registers.
pub fn entangled_sign(s: f64) -> bool {
    s < -PPT_BAND
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseLabel {
    RemainsSeparable,
    RemainsEntangled,
    GenerationPersistent,
    GenerationTransient,
    SuddenDeath,
    CollapseRevival,
}

impl PhaseLabel {
    /// Label from the initial sign, the number of observed crossings and the
    /// sign of S(∞). If the sampled tail ends on the wrong side of S(∞), one
    /// more crossing is implied beyond the grid.
    pub fn from_pattern(
        initially_entangled: bool,
        crossings: usize,
        asymptotically_entangled: bool,
    ) -> Self {
        let sampled_end = initially_entangled ^ (crossings % 2 == 1);
        let total = crossings + usize::from(sampled_end != asymptotically_entangled);
        match (initially_entangled, total) {
            (false, 0) => Self::RemainsSeparable,
            (false, 1) => Self::GenerationPersistent,
            (false, 2) => Self::GenerationTransient,
            (true, 0) => Self::RemainsEntangled,
            (true, 1) => Self::SuddenDeath,
            _ => Self::CollapseRevival,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::RemainsSeparable => "remains_separable",
            Self::RemainsEntangled => "remains_entangled",
            Self::GenerationPersistent => "generation_persistent",
            Self::GenerationTransient => "generation_transient",
            Self::SuddenDeath => "sudden_death",
            Self::CollapseRevival => "collapse_revival",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// S goes from ≥ 0 to < 0.
    Entangling,
    Disentangling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub time: f64,
    /// Refined bracket; S has opposite signs at the two ends.
    pub bracket: (f64, f64),
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseClassification {
    pub label: PhaseLabel,
    pub event_times: Vec<f64>,
    pub crossings: Vec<Crossing>,
    pub initial_s: f64,
    pub initially_entangled: bool,
    pub s_infinity: f64,
    pub asymptotically_entangled: bool,
    pub warnings: Vec<String>,
}

/// S(∞), from the closed form when the bath is thermal.
fn s_infinity(dynamics: &Dynamics) -> f64 {
    asymptotic_simon(dynamics.env()).unwrap_or_else(|_| simon_function(dynamics.steady()))
}

fn check_classify_grid(env: &EnvironmentSpec, t_max: f64, n_t: usize) -> Result<()> {
    if n_t < MIN_CLASSIFY_SAMPLES {
        return Err(Error::InvalidGrid(format!(
            "classification needs at least {MIN_CLASSIFY_SAMPLES} samples, got {n_t}"
        )));
    }
    if !(t_max * env.lambda >= MIN_RELAXATION_TIMES * (1.0 - 1e-12)) {
        return Err(Error::InvalidGrid(format!(
            "t_max = {t_max} is shorter than {MIN_RELAXATION_TIMES}/λ = {}",
            MIN_RELAXATION_TIMES / env.lambda
        )));
    }
    Ok(())
}

/// Samples S(t) on `n_t` points over [0, t_max], refines every sign change by
/// bisection on the exact flow and labels the pattern.
pub fn classify_phase(
    initial: &CovarianceMatrix,
    env: &EnvironmentSpec,
    t_max: f64,
    n_t: usize,
) -> Result<PhaseClassification> {
    check_classify_grid(env, t_max, n_t)?;
    let dynamics = Dynamics::new(*env)?;
    let times = uniform_grid(t_max, n_t);
    let s_values = times
        .iter()
        .map(|&t| dynamics.evolve(initial, t).map(|s| simon_function(&s)))
        .collect::<Result<Vec<_>>>()?;
    classify_samples(&dynamics, initial, &times, &s_values)
}

fn classify_samples(
    dynamics: &Dynamics,
    initial: &CovarianceMatrix,
    times: &[f64],
    s_values: &[f64],
) -> Result<PhaseClassification> {
    let s_at = |t: f64| dynamics.evolve(initial, t).map(|s| simon_function(&s));

    let mut crossings = Vec::new();
    for k in 1..times.len() {
        let (before, after) = (entangled_sign(s_values[k - 1]), entangled_sign(s_values[k]));
        if before == after {
            continue;
        }
        let (mut lo, mut hi) = (times[k - 1], times[k]);
        while hi - lo > CROSSING_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if entangled_sign(s_at(mid)?) == before {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        crossings.push(Crossing {
            time: 0.5 * (lo + hi),
            bracket: (lo, hi),
            direction: if after {
                Direction::Entangling
            } else {
                Direction::Disentangling
            },
        });
    }
    let crossings = merge_tangencies(crossings);

    let initial_s = s_values[0];
    let initially_entangled = entangled_sign(initial_s);
    let s_infinity = s_infinity(dynamics);
    let asymptotically_entangled = entangled_sign(s_infinity);

    let mut warnings = Vec::new();
    let last = *s_values.last().expect("grid is nonempty");
    if entangled_sign(last) != asymptotically_entangled {
        warnings.push(format!(
            "S at t = {} is {last:.3e} but S(inf) = {s_infinity:.3e}; the grid ends before the final sign change",
            times[times.len() - 1]
        ));
    }

    Ok(PhaseClassification {
        label: PhaseLabel::from_pattern(
            initially_entangled,
            crossings.len(),
            asymptotically_entangled,
        ),
        event_times: crossings.iter().map(|c| c.time).collect(),
        crossings,
        initial_s,
        initially_entangled,
        s_infinity,
        asymptotically_entangled,
        warnings,
    })
}

/// Drops adjacent pairs of crossings closer than [`TANGENCY_GAP`].
fn merge_tangencies(crossings: Vec<Crossing>) -> Vec<Crossing> {
    let mut kept: Vec<Crossing> = Vec::with_capacity(crossings.len());
    for c in crossings {
        match kept.last() {
            Some(prev) if c.time - prev.time < TANGENCY_GAP => {
                kept.pop();
            }
            _ => kept.push(c),
        }
    }
    kept
}

/// `n` points from `start` to `end` inclusive; a single point sits at `start`.
pub fn linear_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    uniform_grid(end - start, n)
        .into_iter()
        .enumerate()
        .map(|(k, d)| if n > 1 && k + 1 == n { end } else { start + d })
        .collect()
}

/// Grid over time and the thermal parameter C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    /// Thermal bath; its C is replaced at every grid column.
    pub env_base: EnvironmentSpec,
    pub initial: CovarianceMatrix,
    pub t_max: f64,
    pub n_t: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub n_c: usize,
}

impl SweepSpec {
    /// t ∈ [0, 50] over 500 points and C ∈ [1, 1.5] over 20 columns.
    pub fn with_defaults(env_base: EnvironmentSpec, initial: CovarianceMatrix) -> Self {
        Self {
            env_base,
            initial,
            t_max: 50.0,
            n_t: 500,
            c_min: 1.0,
            c_max: 1.5,
            n_c: 20,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 || self.n_c == 0 {
            return Err(Error::InvalidGrid("grids must be nonempty".into()));
        }
        if !(self.t_max >= 0.0) || !self.t_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "t_max must be non-negative, got {}",
                self.t_max
            )));
        }
        if !(self.c_min >= 1.0) || !(self.c_max >= self.c_min) || !self.c_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "need 1 <= c_min <= c_max, got [{}, {}]",
                self.c_min, self.c_max
            )));
        }
        self.env_base.ensure_thermal()
    }

    pub fn times(&self) -> Vec<f64> {
        uniform_grid(self.t_max, self.n_t)
    }

    pub fn c_values(&self) -> Vec<f64> {
        linear_grid(self.c_min, self.c_max, self.n_c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub t: f64,
    pub c: f64,
    pub s: f64,
    pub l: LogNegativity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepColumn {
    pub c: f64,
    /// None when the time grid is too short or too coarse to classify.
    pub classification: Option<PhaseClassification>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub times: Vec<f64>,
    pub c_values: Vec<f64>,
    /// t-major, then C.
    pub points: Vec<SweepPoint>,
    pub columns: Vec<SweepColumn>,
}

impl SweepResult {
    pub fn point(&self, t_index: usize, c_index: usize) -> &SweepPoint {
        &self.points[t_index * self.c_values.len() + c_index]
    }
}

/// Fills the (t, C) grid with S and L. Columns run in parallel; the output
/// order does not depend on scheduling.
pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let times = spec.times();
    let c_values = spec.c_values();

    let columns: Vec<(Vec<(f64, LogNegativity)>, SweepColumn)> = c_values
        .par_iter()
        .map(|&c| {
            let dynamics = Dynamics::new(spec.env_base.with_thermal_c(c)?)?;
            let samples = times
                .iter()
                .map(|&t| {
                    let sigma = dynamics.evolve(&spec.initial, t)?;
                    Ok((simon_function(&sigma), log_negativity(&sigma)))
                })
                .collect::<Result<Vec<_>>>()?;
            let classification =
                if check_classify_grid(dynamics.env(), spec.t_max, spec.n_t).is_ok() {
                    let s_values: Vec<f64> = samples.iter().map(|p| p.0).collect();
                    Some(classify_samples(
                        &dynamics,
                        &spec.initial,
                        &times,
                        &s_values,
                    )?)
                } else {
                    None
                };
            Ok((samples, SweepColumn { c, classification }))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut points = Vec::with_capacity(times.len() * c_values.len());
    for (i, &t) in times.iter().enumerate() {
        for (j, &c) in c_values.iter().enumerate() {
            let (s, l) = columns[j].0[i];
            points.push(SweepPoint { t, c, s, l });
        }
    }
    Ok(SweepResult {
        times,
        c_values,
        points,
        columns: columns.into_iter().map(|(_, col)| col).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseCell {
    Entangled,
    Separable,
    /// (λ/2)C < |D_xpy|: the bath itself is not allowed.
    Unphysical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseDiagram {
    pub lambda: f64,
    pub omega: f64,
    pub d_xpy: Vec<f64>,
    pub c: Vec<f64>,
    /// `cells[row][col]` for `d_xpy[row]`, `c[col]`.
    pub cells: Vec<Vec<PhaseCell>>,
}

impl PhaseDiagram {
    /// First column of `row` that is separable at infinity.
    pub fn first_separable_column(&self, row: usize) -> Option<usize> {
        self.cells[row]
            .iter()
            .position(|c| *c == PhaseCell::Separable)
    }
}

/// Sign of S(∞) over a (D_xpy, C) grid with D_xy = 0.
pub fn asymptotic_phase_diagram(
    lambda: f64,
    omega: f64,
    d_xpy_grid: &[f64],
    c_grid: &[f64],
) -> Result<PhaseDiagram> {
    if d_xpy_grid.is_empty() || c_grid.is_empty() {
        return Err(Error::InvalidGrid("grids must be nonempty".into()));
    }
    let cells = d_xpy_grid
        .iter()
        .map(|&d_xpy| {
            c_grid
                .iter()
                .map(|&c| {
                    let env = EnvironmentSpec::thermal(lambda, c, 0.0, d_xpy, 1.0, omega)?;
                    if 0.5 * lambda * c < d_xpy.abs() {
                        return Ok(PhaseCell::Unphysical);
                    }
                    Ok(if asymptotic_simon(&env)? < 0.0 {
                        PhaseCell::Entangled
                    } else {
                        PhaseCell::Separable
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseDiagram {
        lambda,
        omega,
        d_xpy: d_xpy_grid.to_vec(),
        c: c_grid.to_vec(),
        cells,
    })
}

//! Initial states and bath of the four reference figures.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::types::{CovarianceMatrix, EnvironmentSpec};

pub const FIG_LAMBDA: f64 = 0.1;
pub const FIG_D_XY: f64 = 0.0;
pub const FIG_D_XPY: f64 = 0.049;

/// λ = 0.1, D_xy = 0, D_xpy = 0.049, m = ω = 1 at the given C.
pub fn fig_environment(thermal_c: f64) -> Result<EnvironmentSpec> {
    EnvironmentSpec::thermal(FIG_LAMBDA, thermal_c, FIG_D_XY, FIG_D_XPY, 1.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Separable single-mode squeezed state.
    Fig1,
    /// Separable mixed state.
    Fig2,
    /// Squeezed state with cross correlations (fails CM positivity).
    Fig3,
    /// Mixed state with cross correlations (ν₋ = 0).
    Fig4,
    Vacuum,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig1,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Vacuum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Vacuum => "vacuum",
        }
    }

    /// Both modes carry the same single-mode block; unlisted entries are zero.
    pub fn initial(self) -> CovarianceMatrix {
        let (xx, pxpx, xy, pxpy) = match self {
            Preset::Fig1 => (0.75, 1.0 / 3.0, 0.0, 0.0),
            Preset::Fig2 => (1.0, 0.5, 0.0, 0.0),
            Preset::Fig3 => (0.75, 1.0 / 3.0, 0.5, -0.5),
            Preset::Fig4 => (1.0, 0.5, 0.5, -0.5),
            Preset::Vacuum => return CovarianceMatrix::vacuum(),
        };
        CovarianceMatrix::symmetric_modes(xx, pxpx, xy, pxpy).expect("preset is symmetric")
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownPreset(pub String);

impl fmt::Display for UnknownPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown preset `{}` (expected fig1..fig4 or vacuum)",
            self.0
        )
    }
}

impl std::error::Error for UnknownPreset {}

impl FromStr for Preset {
    type Err = UnknownPreset;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownPreset(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn captions() {
        let s = Preset::Fig3.initial();
        assert_eq!(s.get(0, 0), 0.75);
        assert_eq!(s.get(1, 1), 1.0 / 3.0);
        assert_eq!(s.get(0, 2), 0.5);
        assert_eq!(s.get(1, 3), -0.5);
        assert_eq!(s.get(0, 1), 0.0);
        assert_eq!(s.get(0, 3), 0.0);
        assert_eq!(s.a(), s.b());

        let s = Preset::Fig2.initial();
        assert_eq!(s.c(), nalgebra::Matrix2::zeros());
        assert_eq!(s.get(3, 3), 0.5);
    }

    #[test]
    fn parse_names() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert_eq!("FIG2".parse::<Preset>().unwrap(), Preset::Fig2);
        assert!("fig5".parse::<Preset>().is_err());
    }
}

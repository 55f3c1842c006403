//! Types shared by the three estimators: scale points, the window policy
//! and the log-log fit that turns scale points into a Hurst estimate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HurstError, Result};
use crate::regression::{ols_fit, RegressionFit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "RS")]
    Rs,
    #[serde(rename = "RSAL")]
    Rsal,
    #[serde(rename = "DFA")]
    Dfa,
    #[serde(rename = "VTP")]
    Vtp,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Rs => "RS",
            Method::Rsal => "RSAL",
            Method::Dfa => "DFA",
            Method::Vtp => "VTP",
        }
    }

    /// Maps the log-log slope to a Hurst estimate.
    pub fn hurst_from_slope(self, slope: f64) -> f64 {
        match self {
            Method::Rs | Method::Rsal | Method::Dfa => slope,
            // slope is -beta
            Method::Vtp => 1.0 + slope / 2.0,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Warning {
    /// DFA slope above 1.
    NonstationaryOrDetrendFail,
    /// At least one zero-variance subseries was left out of an R/S average.
    DegenerateSubseriesExcluded,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Warning::NonstationaryOrDetrendFail => "NONSTATIONARY_OR_DETREND_FAIL",
            Warning::DegenerateSubseriesExcluded => "DEGENERATE_SUBSERIES_EXCLUDED",
        })
    }
}

/// One abscissa of a log-log regression: window length `n` (R/S, DFA) or
/// block size `w` (VTP) with its positive statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalePoint {
    pub scale: usize,
    pub statistic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub method: Method,
    pub hurst: f64,
    pub fit: RegressionFit,
    pub points: Vec<ScalePoint>,
    pub warnings: Vec<Warning>,
}

impl EstimatorResult {
    /// Regresses `log statistic` on `log scale` and maps the slope to H.
    ///
    /// Callers guarantee every statistic is positive.
    pub fn from_points(method: Method, points: Vec<ScalePoint>) -> Result<Self> {
        let mut scales: Vec<usize> = points.iter().map(|p| p.scale).collect();
        scales.sort_unstable();
        scales.dedup();
        if scales.len() < 2 {
            return Err(match method {
                Method::Vtp => HurstError::InsufficientScales(scales.len()),
                _ => HurstError::InsufficientWindows {
                    len: 0,
                    found: scales.len(),
                },
            });
        }
        let xy: Vec<(f64, f64)> = points
            .iter()
            .map(|p| ((p.scale as f64).ln(), p.statistic.ln()))
            .collect();
        let fit = ols_fit(&xy)?;
        let hurst = method.hurst_from_slope(fit.slope);
        let mut warnings = Vec::new();
        if method == Method::Dfa && hurst > 1.0 {
            warnings.push(Warning::NonstationaryOrDetrendFail);
        }
        Ok(Self {
            method,
            hurst,
            fit,
            points,
            warnings,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaxWindowRule {
    #[default]
    HalfN,
    FullN,
}

impl fmt::Display for MaxWindowRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaxWindowRule::HalfN => "half-n",
            MaxWindowRule::FullN => "full-n",
        })
    }
}

/// Selects the subseries lengths used by R/S and DFA: every divisor `n` of
/// the series length with `min_window <= n <= max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPolicy {
    min_window: usize,
    max_window_rule: MaxWindowRule,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self {
            min_window: 2,
            max_window_rule: MaxWindowRule::HalfN,
        }
    }
}

impl WindowPolicy {
    pub const MIN_WINDOW_FLOOR: usize = 2;

    pub fn new(min_window: usize, max_window_rule: MaxWindowRule) -> Result<Self> {
        if min_window < Self::MIN_WINDOW_FLOOR {
            return Err(HurstError::InvalidPolicy(format!(
                "min_window must be at least {}, got {min_window}",
                Self::MIN_WINDOW_FLOOR
            )));
        }
        Ok(Self {
            min_window,
            max_window_rule,
        })
    }

    pub fn min_window(&self) -> usize {
        self.min_window
    }

    pub fn max_window_rule(&self) -> MaxWindowRule {
        self.max_window_rule
    }

    pub fn max_window(&self, len: usize) -> usize {
        match self.max_window_rule {
            MaxWindowRule::HalfN => len / 2,
            MaxWindowRule::FullN => len,
        }
    }

    /// Window lengths for a series of length `len`, ascending.
    pub fn windows(&self, len: usize) -> Vec<usize> {
        (self.min_window..=self.max_window(len))
            .filter(|n| len.is_multiple_of(*n))
            .collect()
    }

    /// Like [`windows`](Self::windows) but errors when fewer than two remain.
    pub fn checked_windows(&self, len: usize) -> Result<Vec<usize>> {
        let windows = self.windows(len);
        if windows.len() < 2 {
            return Err(HurstError::InsufficientWindows {
                len,
                found: windows.len(),
            });
        }
        Ok(windows)
    }
}

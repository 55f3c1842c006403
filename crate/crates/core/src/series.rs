//! Time-series container and the per-subseries building blocks shared by the
//! rescaled-range and fluctuation estimators: equal-length partitioning,
//! mean and standard deviation, cumulative profiles and their range.
//!
//! Everything here works on `&[f64]` so estimators can walk
//! `chunks_exact` windows without copying; [`TimeSeries`] guards the
//! invariants (finite values, length ≥ 2) at the boundary.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{HurstError, Result};

/// Ordered, finite, real-valued observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TimeSeries(Vec<f64>);

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(HurstError::SeriesTooShort(values.len()));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(HurstError::NonFiniteValue { index, value });
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Applies `x -> a*x + b` to every observation.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|x| a * x + b).collect())
    }
}

impl Deref for TimeSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl<'de> Deserialize<'de> for TimeSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(d)?;
        TimeSeries::new(values).map_err(serde::de::Error::custom)
    }
}

/// Denominator used for the per-subseries standard deviation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SdMode {
    /// Divide by n.
    Population,
    /// Divide by n - 1. Consistent with the `(n - 1/2)/n` factor in the
    /// expected R/S.
    #[default]
    Sample,
}

impl std::fmt::Display for SdMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SdMode::Population => f.write_str("population"),
            SdMode::Sample => f.write_str("sample"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubseriesStats {
    pub mean: f64,
    pub std_dev: f64,
}

impl SubseriesStats {
    /// True when the spread is zero up to rounding in the mean.
    pub fn is_degenerate(&self, subseries: &[f64]) -> bool {
        let magnitude = subseries.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        self.std_dev <= 4.0 * f64::EPSILON * magnitude
    }
}

/// Cumulative series of a subseries; same length as its source.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile(Vec<f64>);

impl Profile {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for Profile {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Profile {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// Splits `series` into `N / n` contiguous, non-overlapping subseries.
pub fn partition(series: &TimeSeries, n: usize) -> Result<Vec<TimeSeries>> {
    check_window(series.len(), n)?;
    Ok(series
        .chunks_exact(n)
        .map(|chunk| TimeSeries(chunk.to_vec()))
        .collect())
}

pub(crate) fn check_window(len: usize, n: usize) -> Result<()> {
    if n < 2 {
        return Err(HurstError::WindowTooSmall { window: n, min: 2 });
    }
    if n > len || !len.is_multiple_of(n) {
        return Err(HurstError::NonDivisorWindow { window: n, len });
    }
    Ok(())
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn subseries_stats(subseries: &[f64], mode: SdMode) -> SubseriesStats {
    let n = subseries.len();
    let mean = mean(subseries);
    let ss: f64 = subseries.iter().map(|x| (x - mean) * (x - mean)).sum();
    let denom = match mode {
        SdMode::Population => n as f64,
        SdMode::Sample => (n - 1) as f64,
    };
    SubseriesStats {
        mean,
        std_dev: (ss / denom).sqrt(),
    }
}

pub fn centered_cumsum(subseries: &[f64], mean: f64) -> Profile {
    let mut acc = 0.0;
    Profile(
        subseries
            .iter()
            .map(|x| {
                acc += x - mean;
                acc
            })
            .collect(),
    )
}

pub fn plain_cumsum(subseries: &[f64]) -> Profile {
    let mut acc = 0.0;
    Profile(
        subseries
            .iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect(),
    )
}

pub fn range_of(profile: &[f64]) -> f64 {
    let (lo, hi) = profile
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)));
    hi - lo
}

//! Variance-time plot.
//!
//! The series is averaged over non-overlapping blocks of size `w`; the
//! variance of the block means decays like `w^-beta`, and `H = 1 - beta/2`.
//!
//! The variance at scale `w` is taken about the grand mean of the full
//! series and normalised by `N / w` (a real number when `w` does not divide
//! `N`). The `N mod w` observations left after the last complete block are
//! either averaged into one short trailing block ([`RemainderRule::Partial`],
//! the default) or dropped ([`RemainderRule::Discard`], in which case the
//! normaliser is the complete-block count). For divisor `w` the two agree.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HurstError, Result};
use crate::estimate::{EstimatorResult, Method, ScalePoint};
use crate::series::{mean, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregationScale {
    w: usize,
    block_count: usize,
}

impl AggregationScale {
    pub fn new(w: usize, len: usize) -> Result<Self> {
        if w == 0 || w > len / 2 {
            return Err(HurstError::ScaleTooLarge { scale: w, len });
        }
        Ok(Self {
            w,
            block_count: len / w,
        })
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }
}

/// Which block sizes in `1..=N/2` the estimator regresses over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleRule {
    /// Every integer.
    #[default]
    All,
    DivisorsOnly,
}

impl fmt::Display for ScaleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScaleRule::All => "all",
            ScaleRule::DivisorsOnly => "divisors-only",
        })
    }
}

impl ScaleRule {
    pub fn scales(self, len: usize) -> Vec<AggregationScale> {
        (1..=len / 2)
            .filter(|w| self == ScaleRule::All || len.is_multiple_of(*w))
            .map(|w| AggregationScale {
                w,
                block_count: len / w,
            })
            .collect()
    }
}

/// Treatment of the observations after the last complete block.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemainderRule {
    /// Average them into one short trailing block; normalise by `N / w`.
    #[default]
    Partial,
    /// Drop them; normalise by the number of complete blocks.
    Discard,
}

impl fmt::Display for RemainderRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RemainderRule::Partial => "partial",
            RemainderRule::Discard => "discard",
        })
    }
}

/// Block means of size `w` over complete blocks only.
pub fn aggregate(series: &TimeSeries, w: usize) -> Result<TimeSeries> {
    aggregate_with(series, w, RemainderRule::Discard)
}

pub fn aggregate_with(series: &TimeSeries, w: usize, rule: RemainderRule) -> Result<TimeSeries> {
    AggregationScale::new(w, series.len())?;
    TimeSeries::new(block_means(series, w, rule).collect())
}

fn block_means(series: &[f64], w: usize, rule: RemainderRule) -> impl Iterator<Item = f64> + '_ {
    let covered = match rule {
        RemainderRule::Partial => series.len(),
        RemainderRule::Discard => series.len() - series.len() % w,
    };
    series[..covered]
        .chunks(w)
        .map(|block| block.iter().sum::<f64>() / block.len() as f64)
}

/// Variance of the complete-block means about the series' grand mean.
pub fn aggregated_variance(series: &TimeSeries, w: usize) -> Result<ScalePoint> {
    aggregated_variance_with(series, w, RemainderRule::Discard)
}

pub fn aggregated_variance_with(series: &TimeSeries, w: usize, rule: RemainderRule) -> Result<ScalePoint> {
    let scale = AggregationScale::new(w, series.len())?;
    variance_at(&Deviations::of(series), scale.w, rule)
}

/// Observations minus the grand mean, together with the magnitude of the
/// original data for the zero-variance test. Block means of deviations avoid
/// the cancellation that large offsets cause when raw sums are centred late.
struct Deviations {
    values: Vec<f64>,
    magnitude: f64,
}

impl Deviations {
    fn of(series: &[f64]) -> Self {
        let rough = mean(series);
        // second pass removes most of the rounding in the first
        let grand_mean = rough + series.iter().map(|x| x - rough).sum::<f64>() / series.len() as f64;
        Self {
            values: series.iter().map(|x| x - grand_mean).collect(),
            magnitude: series.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
        }
    }
}

fn variance_at(dev: &Deviations, w: usize, rule: RemainderRule) -> Result<ScalePoint> {
    let len = dev.values.len();
    let ss: f64 = block_means(&dev.values, w, rule).map(|m| m * m).sum();
    let normaliser = match rule {
        RemainderRule::Partial => len as f64 / w as f64,
        RemainderRule::Discard => (len / w) as f64,
    };
    let statistic = ss / normaliser;

    let noise = 16.0 * f64::EPSILON * dev.magnitude;
    if statistic <= noise * noise {
        return Err(HurstError::ZeroVariance { scale: w });
    }
    Ok(ScalePoint {
        scale: w,
        statistic,
    })
}

/// Regresses `log Var[X^(w)]` on `log w`; the slope is `-beta`.
pub fn estimate_vtp(
    series: &TimeSeries,
    scales: &[AggregationScale],
    rule: RemainderRule,
) -> Result<EstimatorResult> {
    let mut distinct: Vec<usize> = scales.iter().map(|s| s.w).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(HurstError::InsufficientScales(distinct.len()));
    }
    let dev = Deviations::of(series);
    let points = scales
        .iter()
        .map(|s| {
            // Scales built for another length would break the block count.
            AggregationScale::new(s.w, series.len())?;
            variance_at(&dev, s.w, rule)
        })
        .collect::<Result<Vec<_>>>()?;
    EstimatorResult::from_points(Method::Vtp, points)
}

/// [`estimate_vtp`] over the scales selected by `scales`.
pub fn estimate_vtp_with(series: &TimeSeries, scales: ScaleRule, rule: RemainderRule) -> Result<EstimatorResult> {
    estimate_vtp(series, &scales.scales(series.len()), rule)
}

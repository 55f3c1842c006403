//! Unweighted ordinary least squares on (x, y) pairs.

use serde::{Deserialize, Serialize};

use crate::error::{HurstError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub n_points: usize,
    pub residual_rms: f64,
}

impl RegressionFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Fits `y = slope * x + intercept`, accumulating centered sums.
pub fn ols_fit(points: &[(f64, f64)]) -> Result<RegressionFit> {
    let n = points.len();
    if n < 2 {
        return Err(HurstError::DegenerateDesign);
    }
    let x_mean = points.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / n as f64;

    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x - x_mean;
        sxx += dx * dx;
        sxy += dx * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(HurstError::DegenerateDesign);
    }

    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - slope * x - intercept;
            r * r
        })
        .sum();

    Ok(RegressionFit {
        slope,
        intercept,
        n_points: n,
        residual_rms: (ss_res / n as f64).sqrt(),
    })
}

/// Fits a line to `profile[t - 1]` against `t = 1..=n`.
pub fn fit_line_to_profile(profile: &[f64]) -> Result<RegressionFit> {
    let points: Vec<(f64, f64)> = profile
        .iter()
        .enumerate()
        .map(|(i, &y)| ((i + 1) as f64, y))
        .collect();
    ols_fit(&points)
}

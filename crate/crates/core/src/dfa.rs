//! Detrended fluctuation analysis.
//!
//! Each subseries of length `n` is integrated into its running sum (no mean
//! removal), a least-squares line over `t = 1..n` is subtracted, and the RMS
//! of what remains is the fluctuation `F(m)`. `F(n)` averages `F(m)` over the
//! subseries and H is the slope of `log F(n)` against `log n`.
//!
//! Skipping the mean removal does not change `F(m)`: a constant offset `c`
//! adds the ramp `c * t` to the running sum, which the fitted line absorbs.
//! The estimate is therefore invariant under `x -> a*x + b` for `a > 0`.

use crate::error::{HurstError, Result};
use crate::estimate::{EstimatorResult, Method, ScalePoint, WindowPolicy};
use crate::regression::fit_line_to_profile;
use crate::series::{check_window, plain_cumsum, TimeSeries};

pub const MIN_DFA_WINDOW: usize = 3;

/// Smallest window the estimator regresses over, whatever the policy says.
pub const DFA_WINDOW_FLOOR: usize = 4;

/// RMS residual of the running sum of `subseries` about its least-squares line.
pub fn detrended_fluctuation(subseries: &[f64]) -> Result<f64> {
    let n = subseries.len();
    if n < MIN_DFA_WINDOW {
        return Err(HurstError::WindowTooSmall {
            window: n,
            min: MIN_DFA_WINDOW,
        });
    }
    let profile = plain_cumsum(subseries);
    let fit = fit_line_to_profile(&profile)?;
    let ss: f64 = profile
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let r = y - fit.predict((i + 1) as f64);
            r * r
        })
        .sum();
    Ok((ss / n as f64).sqrt())
}

/// Mean fluctuation over the `N / n` subseries of length `n`.
pub fn dfa_statistic(series: &[f64], n: usize) -> Result<ScalePoint> {
    if n < MIN_DFA_WINDOW {
        return Err(HurstError::WindowTooSmall {
            window: n,
            min: MIN_DFA_WINDOW,
        });
    }
    check_window(series.len(), n)?;
    let d = series.len() / n;
    let mut sum = 0.0;
    for chunk in series.chunks_exact(n) {
        sum += detrended_fluctuation(chunk)?;
    }
    let statistic = sum / d as f64;

    // Rounding noise left after removing an exactly linear profile.
    let magnitude = series.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if statistic <= 16.0 * f64::EPSILON * n as f64 * magnitude {
        return Err(HurstError::ZeroFluctuation { window: n });
    }
    Ok(ScalePoint { scale: n, statistic })
}

/// DFA estimate over the policy's windows (never below 4).
///
/// A slope above 1 is returned with `NONSTATIONARY_OR_DETREND_FAIL` attached.
pub fn estimate_dfa(series: &TimeSeries, policy: &WindowPolicy) -> Result<EstimatorResult> {
    let floor = policy.min_window().max(DFA_WINDOW_FLOOR);
    let windows: Vec<usize> = policy
        .windows(series.len())
        .into_iter()
        .filter(|&n| n >= floor)
        .collect();
    if windows.len() < 2 {
        return Err(HurstError::InsufficientWindows {
            len: series.len(),
            found: windows.len(),
        });
    }
    let points = windows
        .into_iter()
        .map(|n| dfa_statistic(series, n))
        .collect::<Result<Vec<_>>>()?;
    EstimatorResult::from_points(Method::Dfa, points)
}

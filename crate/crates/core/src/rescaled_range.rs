//! Rescaled range (R/S) analysis and its small-sample adjusted variant.
//!
//! For each window length `n` the series is cut into `N / n` subseries; each
//! contributes the range of its mean-centered cumulative sum divided by its
//! standard deviation, and `(R/S)_n` is the average over subseries. Plain R/S
//! regresses `log (R/S)_n` on `log n`.
//!
//! The adjusted statistic removes the small-`n` bias of R/S by replacing the
//! Anis-Lloyd expectation (with the Peters `(n - 1/2)/n` factor) by the
//! asymptotic expectation `sqrt(pi n / 2)`:
//!
//! ```text
//! (R/S)al_n = (R/S)_n - E(R/S)_n + sqrt(0.5 * pi * n)
//! ```
//!
//! so a series whose R/S behaves exactly as expected for independent data
//! regresses to a slope of 0.5.

use std::f64::consts::PI;

use crate::error::{HurstError, Result};
use crate::estimate::{EstimatorResult, Method, ScalePoint, Warning, WindowPolicy};
use crate::series::{centered_cumsum, check_window, range_of, subseries_stats, SdMode, TimeSeries};

/// Above this window length the gamma ratio is replaced by its asymptote.
pub const GAMMA_BRANCH_LIMIT: usize = 340;

/// `R/S` of one subseries, or `None` when its standard deviation is zero.
pub fn rescaled_range(subseries: &[f64], mode: SdMode) -> Option<f64> {
    let stats = subseries_stats(subseries, mode);
    if stats.is_degenerate(subseries) {
        return None;
    }
    let range = range_of(&centered_cumsum(subseries, stats.mean));
    Some(range / stats.std_dev)
}

/// Mean R/S over the non-degenerate subseries of length `n`.
pub fn rs_statistic(series: &[f64], n: usize, mode: SdMode) -> Result<ScalePoint> {
    rs_statistic_counted(series, n, mode).map(|(p, _)| p)
}

fn rs_statistic_counted(series: &[f64], n: usize, mode: SdMode) -> Result<(ScalePoint, usize)> {
    check_window(series.len(), n)?;
    let (mut sum, mut used, mut skipped) = (0.0, 0usize, 0usize);
    for chunk in series.chunks_exact(n) {
        match rescaled_range(chunk, mode) {
            Some(rs) => {
                sum += rs;
                used += 1;
            }
            None => skipped += 1,
        }
    }
    if used == 0 {
        return Err(HurstError::AllSubseriesDegenerate { window: n });
    }
    Ok((
        ScalePoint {
            scale: n,
            statistic: sum / used as f64,
        },
        skipped,
    ))
}

/// Anis-Lloyd expected R/S for window length `n`, with the Peters factor.
pub fn expected_rs(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(HurstError::InvalidWindow(n));
    }
    let nf = n as f64;
    let peters = (nf - 0.5) / nf;
    let gamma_term = if n <= GAMMA_BRANCH_LIMIT {
        (libm::lgamma((nf - 1.0) / 2.0) - libm::lgamma(nf / 2.0)).exp() / PI.sqrt()
    } else {
        1.0 / (nf * PI / 2.0).sqrt()
    };
    let sum: f64 = (1..n).map(|i| ((n - i) as f64 / i as f64).sqrt()).sum();
    Ok(peters * gamma_term * sum)
}

/// Asymptotic expectation of the adjusted statistic, `sqrt(pi n / 2)`.
pub fn expected_rsal(n: usize) -> f64 {
    (0.5 * PI * n as f64).sqrt()
}

/// Plain R/S estimate: slope of `log (R/S)_n` against `log n`.
pub fn estimate_rs(series: &TimeSeries, policy: &WindowPolicy, mode: SdMode) -> Result<EstimatorResult> {
    let (points, skipped) = collect_points(series, policy, mode)?;
    let mut result = EstimatorResult::from_points(Method::Rs, points)?;
    if skipped > 0 {
        result.warnings.push(Warning::DegenerateSubseriesExcluded);
    }
    Ok(result)
}

/// Adjusted R/S estimate: slope of `log (R/S)al_n` against `log n`.
pub fn estimate_rsal(series: &TimeSeries, policy: &WindowPolicy, mode: SdMode) -> Result<EstimatorResult> {
    let (points, skipped) = collect_points(series, policy, mode)?;
    let adjusted = adjust_points(&points)?;
    let mut result = EstimatorResult::from_points(Method::Rsal, adjusted)?;
    if skipped > 0 {
        result.warnings.push(Warning::DegenerateSubseriesExcluded);
    }
    Ok(result)
}

/// Converts `(R/S)_n` points into adjusted `(R/S)al_n` points.
pub fn adjust_points(points: &[ScalePoint]) -> Result<Vec<ScalePoint>> {
    let mut adjusted = Vec::with_capacity(points.len());
    let mut bad = Vec::new();
    for p in points {
        let statistic = p.statistic - expected_rs(p.scale)? + expected_rsal(p.scale);
        if statistic <= 0.0 {
            bad.push(p.scale);
        }
        adjusted.push(ScalePoint {
            scale: p.scale,
            statistic,
        });
    }
    if !bad.is_empty() {
        return Err(HurstError::NonPositiveStatistic { windows: bad });
    }
    Ok(adjusted)
}

fn collect_points(series: &TimeSeries, policy: &WindowPolicy, mode: SdMode) -> Result<(Vec<ScalePoint>, usize)> {
    let windows = policy.checked_windows(series.len())?;
    let mut skipped = 0;
    let points = windows
        .into_iter()
        .map(|n| {
            let (p, s) = rs_statistic_counted(series, n, mode)?;
            skipped += s;
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((points, skipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::MaxWindowRule;

    const POP: SdMode = SdMode::Population;
    const SAMPLE: SdMode = SdMode::Sample;

    /// Gamma((n-1)/2) / Gamma(n/2) by the recurrence r(n+2) = (n-1)/n * r(n),
    /// seeded with r(2) = sqrt(pi) and r(3) = 2/sqrt(pi).
    fn gamma_ratio_oracle(n: usize) -> f64 {
        let mut r = if n.is_multiple_of(2) { PI.sqrt() } else { 2.0 / PI.sqrt() };
        let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
        while k < n {
            r *= (k as f64 - 1.0) / k as f64;
            k += 2;
        }
        r
    }

    fn expected_rs_oracle(n: usize) -> f64 {
        let nf = n as f64;
        let sum: f64 = (1..n).map(|i| ((nf - i as f64) / i as f64).sqrt()).sum();
        (nf - 0.5) / nf * gamma_ratio_oracle(n) / PI.sqrt() * sum
    }

    #[test]
    fn rescaled_range_examples() {
        let rs = rescaled_range(&[1., 2., 3.], POP).unwrap();
        assert!((rs - 1.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(rescaled_range(&[5., 5., 5.], POP), None);
        assert_eq!(rescaled_range(&[1., 3.], POP), Some(1.0));
    }

    #[test]
    fn rs_statistic_examples() {
        let p = rs_statistic(&[1., 2., 3., 1., 3., 5.], 3, POP).unwrap();
        assert_eq!(p.scale, 3);
        assert!((p.statistic - 1.5f64.sqrt()).abs() < 1e-12);

        assert_eq!(
            rs_statistic(&[2.0; 12], 4, POP),
            Err(HurstError::AllSubseriesDegenerate { window: 4 })
        );

        let xs = [0.3, 1.9, -0.4, 2.2, 0.8, 1.1];
        let whole = rs_statistic(&xs, 6, POP).unwrap();
        assert_eq!(whole.statistic, rescaled_range(&xs, POP).unwrap());
    }

    #[test]
    fn sample_sd_shrinks_by_root_ratio() {
        let xs = [1., 2., 3.];
        let ratio = rescaled_range(&xs, SAMPLE).unwrap() / rescaled_range(&xs, POP).unwrap();
        assert!((ratio - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        // pairs always give R/S = 1/sqrt(2) under the sample convention
        assert!((rescaled_range(&[0.2, 9.0], SAMPLE).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_subseries_are_excluded() {
        let xs = [1., 1., 1., 1., 1., 2., 3., 4.];
        let p = rs_statistic(&xs, 4, POP).unwrap();
        assert_eq!(p.statistic, rescaled_range(&[1., 2., 3., 4.], POP).unwrap());
    }

    #[test]
    fn expected_rs_at_two() {
        assert!((expected_rs(2).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(expected_rs(1), Err(HurstError::InvalidWindow(1)));
        assert_eq!(expected_rs(0), Err(HurstError::InvalidWindow(0)));
    }

    #[test]
    fn expected_rs_matches_recurrence_oracle() {
        for n in 2..=GAMMA_BRANCH_LIMIT {
            let got = expected_rs(n).unwrap();
            let want = expected_rs_oracle(n);
            assert!((got - want).abs() <= 1e-10 * want, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn branch_seam_is_continuous() {
        let nf = 340.0f64;
        let sum: f64 = (1..340).map(|i| ((nf - i as f64) / i as f64).sqrt()).sum();
        let asymptotic = (nf - 0.5) / nf / (nf * PI / 2.0).sqrt() * sum;
        let gamma = expected_rs(340).unwrap();
        assert!(((gamma - asymptotic) / gamma).abs() < 0.005);
    }

    #[test]
    fn expected_rs_asymptote() {
        let ratio = expected_rs(1000).unwrap() / expected_rsal(1000);
        assert!((0.95..=1.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn expected_rs_monotone_per_branch_and_bounded() {
        // The asymptotic branch starts about 0.2% below the gamma branch, so
        // 341 dips under 340; each branch on its own is increasing.
        for branch in [2..=GAMMA_BRANCH_LIMIT, GAMMA_BRANCH_LIMIT + 1..=4096] {
            let mut prev = 0.0;
            for n in branch {
                let e = expected_rs(n).unwrap();
                assert!(e > prev, "not increasing at {n}");
                assert!(e > 0.0 && e < expected_rsal(n), "bound fails at {n}");
                prev = e;
            }
        }
        let dip = expected_rs(341).unwrap() / expected_rs(340).unwrap();
        assert!(dip > 0.99 && dip < 1.0, "{dip}");
    }

    #[test]
    fn single_window_is_insufficient() {
        let series = TimeSeries::new((0..16).map(|i| (i * 7 % 5) as f64).collect()).unwrap();
        let policy = WindowPolicy::new(8, MaxWindowRule::HalfN).unwrap();
        assert!(matches!(
            estimate_rs(&series, &policy, POP),
            Err(HurstError::InsufficientWindows { len: 16, found: 1 })
        ));
        assert!(matches!(
            estimate_rsal(&series, &policy, POP),
            Err(HurstError::InsufficientWindows { .. })
        ));
    }

    #[test]
    fn expected_behaved_points_regress_to_half() {
        let observed: Vec<ScalePoint> = [8usize, 16, 32, 64, 128]
            .iter()
            .map(|&n| ScalePoint {
                scale: n,
                statistic: expected_rs(n).unwrap(),
            })
            .collect();
        let adjusted = adjust_points(&observed).unwrap();
        let r = EstimatorResult::from_points(Method::Rsal, adjusted).unwrap();
        assert!((r.hurst - 0.5).abs() < 1e-12);
    }

    #[test]
    fn non_positive_adjustment_lists_windows() {
        let e8 = expected_rs(8).unwrap();
        let observed = [
            ScalePoint { scale: 8, statistic: e8 - expected_rsal(8) - 0.1 },
            ScalePoint { scale: 16, statistic: 4.0 },
        ];
        assert_eq!(
            adjust_points(&observed),
            Err(HurstError::NonPositiveStatistic { windows: vec![8] })
        );
    }

    #[test]
    fn constant_series_fails() {
        let series = TimeSeries::new(vec![3.0; 64]).unwrap();
        let policy = WindowPolicy::new(4, MaxWindowRule::HalfN).unwrap();
        assert!(matches!(
            estimate_rsal(&series, &policy, POP),
            Err(HurstError::AllSubseriesDegenerate { .. })
        ));
    }
}

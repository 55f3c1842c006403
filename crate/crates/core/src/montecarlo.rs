//! Monte Carlo comparison of the adjusted R/S, DFA and VTP estimators on
//! independent exponential data, where the true Hurst exponent is 0.5.
//!
//! Work is split over `(cell, iteration)` pairs. Each pair draws from its own
//! derived RNG stream and the per-iteration estimates are reduced in
//! iteration order, so a report is bit-identical for any thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dfa::estimate_dfa;
use crate::error::{HurstError, Result};
use crate::estimate::{EstimatorResult, Method, WindowPolicy};
use crate::rescaled_range::{estimate_rs, estimate_rsal};
use crate::sampling::{derive_stream, exponential_sample, mix64, ExponentialSpec, GENERATOR_NAME};
use crate::series::{SdMode, TimeSeries};
use crate::vtp::{estimate_vtp_with, RemainderRule, ScaleRule};

/// Hurst exponent of memoryless data.
pub const TRUE_HURST: f64 = 0.5;

pub const DEFAULT_LAMBDAS: [f64; 6] = [0.1, 0.5, 1.5, 3.0, 5.0, 7.0];
pub const DEFAULT_SIZES: [usize; 4] = [128, 256, 512, 1024];
pub const DEFAULT_ITERATION_COUNTS: [usize; 3] = [100, 500, 1000];

/// Shortest series the harness and CLI will estimate from.
pub const MIN_SERIES_LENGTH: usize = 16;

pub const COMPARED_METHODS: [Method; 3] = [Method::Rsal, Method::Dfa, Method::Vtp];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationCell {
    pub lambda: f64,
    pub series_length: usize,
    pub iterations: usize,
}

impl SimulationCell {
    /// Stable id derived from the cell's parameters, independent of its
    /// position in the grid.
    pub fn id(&self) -> u64 {
        let mut h = mix64(self.lambda.to_bits());
        h = mix64(h ^ self.series_length as u64);
        mix64(h ^ self.iterations as u64)
    }
}

/// Cartesian product in lambda-major, then size, then iteration order.
pub fn grid(lambdas: &[f64], sizes: &[usize], iteration_counts: &[usize]) -> Vec<SimulationCell> {
    let mut cells = Vec::with_capacity(lambdas.len() * sizes.len() * iteration_counts.len());
    for &lambda in lambdas {
        for &series_length in sizes {
            for &iterations in iteration_counts {
                cells.push(SimulationCell {
                    lambda,
                    series_length,
                    iterations,
                });
            }
        }
    }
    cells
}

pub fn default_grid() -> Vec<SimulationCell> {
    grid(&DEFAULT_LAMBDAS, &DEFAULT_SIZES, &DEFAULT_ITERATION_COUNTS)
}

/// Everything an estimator run depends on besides the data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorSettings {
    pub window_policy: WindowPolicy,
    pub sd_mode: SdMode,
    pub vtp_scales: ScaleRule,
    pub vtp_remainder: RemainderRule,
}

impl EstimatorSettings {
    /// Fails when `len` is below [`MIN_SERIES_LENGTH`] or leaves any
    /// estimator with fewer than two windows or scales.
    pub fn check_length(&self, len: usize) -> Result<()> {
        if len < MIN_SERIES_LENGTH {
            return Err(HurstError::SeriesTooShortForEstimation {
                len,
                min: MIN_SERIES_LENGTH,
            });
        }
        self.window_policy.checked_windows(len)?;
        let dfa_windows = self
            .window_policy
            .windows(len)
            .into_iter()
            .filter(|&n| n >= crate::dfa::DFA_WINDOW_FLOOR)
            .count();
        if dfa_windows < 2 {
            return Err(HurstError::InsufficientWindows { len, found: dfa_windows });
        }
        let scales = self.vtp_scales.scales(len).len();
        if scales < 2 {
            return Err(HurstError::InsufficientScales(scales));
        }
        Ok(())
    }

    pub fn run(&self, method: Method, series: &TimeSeries) -> Result<EstimatorResult> {
        match method {
            Method::Rs => estimate_rs(series, &self.window_policy, self.sd_mode),
            Method::Rsal => estimate_rsal(series, &self.window_policy, self.sd_mode),
            Method::Dfa => estimate_dfa(series, &self.window_policy),
            Method::Vtp => estimate_vtp_with(series, self.vtp_scales, self.vtp_remainder),
        }
    }

    pub fn estimate(&self, method: Method, series: &TimeSeries) -> Result<f64> {
        self.run(method, series).map(|r| r.hurst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub mean_hurst: f64,
    pub mse: f64,
    pub failure_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub cell: SimulationCell,
    pub rsal: MethodSummary,
    pub dfa: MethodSummary,
    pub vtp: MethodSummary,
}

impl CellReport {
    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        match method {
            Method::Rsal => Some(&self.rsal),
            Method::Dfa => Some(&self.dfa),
            Method::Vtp => Some(&self.vtp),
            Method::Rs => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub artifact_version: String,
    pub master_seed: u64,
    pub generator: String,
    pub true_hurst: f64,
    pub settings: EstimatorSettings,
    /// Omitted unless explicitly requested so reruns stay byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_secs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub metadata: ReportMetadata,
    pub cells: Vec<CellReport>,
}

pub fn mse(estimates: &[f64], true_h: f64) -> Result<f64> {
    if estimates.is_empty() {
        return Err(HurstError::EmptyEstimates);
    }
    let sum: f64 = estimates.iter().map(|h| (h - true_h) * (h - true_h)).sum();
    Ok(sum / estimates.len() as f64)
}

/// Draws iteration `k` of `cell` and runs the three compared estimators.
/// `None` marks an estimator failure.
pub fn simulate_iteration(
    cell: &SimulationCell,
    master_seed: u64,
    iteration: u64,
    settings: &EstimatorSettings,
) -> Result<[Option<f64>; 3]> {
    let spec = ExponentialSpec::new(cell.lambda, cell.series_length)?;
    let mut stream = derive_stream(master_seed, cell.id(), iteration);
    let series = exponential_sample(&mut stream, &spec);
    Ok(COMPARED_METHODS.map(|m| settings.estimate(m, &series).ok()))
}

fn summarize(cell: &SimulationCell, estimates: &[[Option<f64>; 3]]) -> Result<CellReport> {
    let mut summaries = Vec::with_capacity(3);
    for (slot, method) in COMPARED_METHODS.iter().enumerate() {
        let ok: Vec<f64> = estimates.iter().filter_map(|e| e[slot]).collect();
        if ok.is_empty() {
            return Err(HurstError::CellFailed {
                lambda: cell.lambda,
                series_length: cell.series_length,
                iterations: cell.iterations,
                method: method.to_string(),
            });
        }
        summaries.push(MethodSummary {
            mean_hurst: ok.iter().sum::<f64>() / ok.len() as f64,
            mse: mse(&ok, TRUE_HURST)?,
            failure_count: estimates.len() - ok.len(),
        });
    }
    Ok(CellReport {
        cell: *cell,
        rsal: summaries[0],
        dfa: summaries[1],
        vtp: summaries[2],
    })
}

fn validate_cell(cell: &SimulationCell, settings: &EstimatorSettings) -> Result<()> {
    ExponentialSpec::new(cell.lambda, cell.series_length)?;
    if cell.iterations == 0 {
        return Err(HurstError::InvalidSpec("iterations must be at least 1".into()));
    }
    settings.check_length(cell.series_length)
}

/// Runs one cell on the current rayon pool.
pub fn run_cell(cell: &SimulationCell, master_seed: u64, settings: &EstimatorSettings) -> Result<CellReport> {
    validate_cell(cell, settings)?;
    let estimates = (0..cell.iterations as u64)
        .into_par_iter()
        .map(|k| simulate_iteration(cell, master_seed, k, settings))
        .collect::<Result<Vec<_>>>()?;
    summarize(cell, &estimates)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub cells: Vec<SimulationCell>,
    pub master_seed: u64,
    pub settings: EstimatorSettings,
    /// Worker threads; 0 uses rayon's default.
    pub threads: usize,
}

pub fn run_grid(config: &GridConfig) -> Result<SimulationReport> {
    if config.cells.is_empty() {
        return Err(HurstError::EmptyGrid);
    }
    for cell in &config.cells {
        validate_cell(cell, &config.settings)?;
    }

    let jobs: Vec<(usize, u64)> = config
        .cells
        .iter()
        .enumerate()
        .flat_map(|(c, cell)| (0..cell.iterations as u64).map(move |k| (c, k)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| HurstError::InvalidSpec(format!("thread pool: {e}")))?;

    // collect() keeps job order, which is (cell, iteration) order
    let estimates = pool.install(|| {
        jobs.par_iter()
            .map(|&(c, k)| simulate_iteration(&config.cells[c], config.master_seed, k, &config.settings))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut cells = Vec::with_capacity(config.cells.len());
    let mut offset = 0;
    for cell in &config.cells {
        let slice = &estimates[offset..offset + cell.iterations];
        offset += cell.iterations;
        cells.push(summarize(cell, slice)?);
    }

    Ok(SimulationReport {
        metadata: ReportMetadata {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed: config.master_seed,
            generator: GENERATOR_NAME.to_string(),
            true_hurst: TRUE_HURST,
            settings: config.settings,
            duration_secs: None,
        },
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[0.5, 0.5], 0.5).unwrap(), 0.0);
        assert!((mse(&[0.4, 0.6], 0.5).unwrap() - 0.01).abs() < 1e-15);
        assert!((mse(&[0.55], 0.5).unwrap() - 0.0025).abs() < 1e-15);
        assert_eq!(mse(&[], 0.5), Err(HurstError::EmptyEstimates));
    }

    #[test]
    fn default_grid_has_72_cells() {
        let cells = default_grid();
        assert_eq!(cells.len(), 72);
        assert_eq!(
            cells[0],
            SimulationCell { lambda: 0.1, series_length: 128, iterations: 100 }
        );
        assert_eq!(cells[2].iterations, 1000);
        assert_eq!(cells[3].series_length, 256);
        let mut ids: Vec<u64> = cells.iter().map(|c| c.id()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 72);
    }

    #[test]
    fn empty_grid_is_error() {
        let config = GridConfig {
            cells: vec![],
            master_seed: 1,
            settings: EstimatorSettings::default(),
            threads: 1,
        };
        assert_eq!(run_grid(&config), Err(HurstError::EmptyGrid));
    }

    #[test]
    fn short_series_rejected_before_running() {
        let config = GridConfig {
            cells: grid(&[1.0], &[12], &[10]),
            master_seed: 1,
            settings: EstimatorSettings::default(),
            threads: 1,
        };
        assert_eq!(
            run_grid(&config),
            Err(HurstError::SeriesTooShortForEstimation { len: 12, min: 16 })
        );
    }

    #[test]
    fn cell_rerun_is_identical() {
        let cell = SimulationCell { lambda: 1.5, series_length: 128, iterations: 100 };
        let settings = EstimatorSettings::default();
        let a = run_cell(&cell, 7, &settings).unwrap();
        let b = run_cell(&cell, 7, &settings).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn single_cell_grid_matches_run_cell() {
        let cell = SimulationCell { lambda: 3.0, series_length: 256, iterations: 40 };
        let settings = EstimatorSettings::default();
        let config = GridConfig { cells: vec![cell], master_seed: 11, settings, threads: 2 };
        let report = run_grid(&config).unwrap();
        assert_eq!(report.cells.len(), 1);
        assert_eq!(report.cells[0], run_cell(&cell, 11, &settings).unwrap());
    }

    #[test]
    fn all_failures_name_the_cell() {
        let cell = SimulationCell { lambda: 2.0, series_length: 64, iterations: 3 };
        let estimates = vec![[Some(0.5), None, Some(0.5)]; 3];
        assert_eq!(
            summarize(&cell, &estimates),
            Err(HurstError::CellFailed {
                lambda: 2.0,
                series_length: 64,
                iterations: 3,
                method: "DFA".into(),
            })
        );
    }

    #[test]
    fn failures_are_counted_and_excluded() {
        let cell = SimulationCell { lambda: 2.0, series_length: 64, iterations: 3 };
        let estimates = vec![
            [Some(0.4), Some(0.6), None],
            [None, Some(0.6), Some(0.5)],
            [Some(0.6), Some(0.6), None],
        ];
        let r = summarize(&cell, &estimates).unwrap();
        assert_eq!(r.rsal.failure_count, 1);
        assert!((r.rsal.mean_hurst - 0.5).abs() < 1e-15);
        assert!((r.rsal.mse - 0.01).abs() < 1e-15);
        assert_eq!(r.vtp.failure_count, 2);
        assert_eq!(r.vtp.mse, 0.0);
    }
}

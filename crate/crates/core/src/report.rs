//! Serialisation of simulation reports and single-series estimates.
//!
//! JSON carries full double precision and parses back to an equal report.
//! CSV tables put one row per (method, lambda, iterations) with the mean
//! estimates for every series length followed by the MSEs, rounded to four
//! decimals. Plot files hold mean H against lambda, one column per length.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::estimate::{EstimatorResult, Method};
use crate::montecarlo::{CellReport, EstimatorSettings, SimulationReport, COMPARED_METHODS};

pub const TABLE_DECIMALS: usize = 4;
pub const PLOT_DECIMALS: usize = 6;

pub fn to_json(report: &SimulationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report is always serialisable");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<SimulationReport> {
    serde_json::from_str(text)
}

fn distinct<T: PartialEq + Copy>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for item in items {
        if !out.contains(&item) {
            out.push(item);
        }
    }
    out
}

struct Axes {
    lambdas: Vec<f64>,
    sizes: Vec<usize>,
    iterations: Vec<usize>,
}

impl Axes {
    fn of(report: &SimulationReport) -> Self {
        Self {
            lambdas: distinct(report.cells.iter().map(|c| c.cell.lambda)),
            sizes: distinct(report.cells.iter().map(|c| c.cell.series_length)),
            iterations: distinct(report.cells.iter().map(|c| c.cell.iterations)),
        }
    }
}

fn find(report: &SimulationReport, lambda: f64, size: usize, iterations: usize) -> Option<&CellReport> {
    report.cells.iter().find(|c| {
        c.cell.lambda == lambda && c.cell.series_length == size && c.cell.iterations == iterations
    })
}

pub fn format_lambda(lambda: f64) -> String {
    format!("{lambda:?}")
}

/// Method-by-lambda-by-iterations table; cells absent from the grid are empty.
pub fn table_csv(report: &SimulationReport) -> String {
    let axes = Axes::of(report);
    let mut out = String::from("method,lambda,iterations");
    for prefix in ["mean", "mse"] {
        for size in &axes.sizes {
            let _ = write!(out, ",{prefix}_N{size}");
        }
    }
    out.push('\n');

    for method in COMPARED_METHODS {
        for &lambda in &axes.lambdas {
            for &iterations in &axes.iterations {
                let _ = write!(out, "{method},{},{iterations}", format_lambda(lambda));
                for pick_mse in [false, true] {
                    for &size in &axes.sizes {
                        out.push(',');
                        if let Some(s) = find(report, lambda, size, iterations).and_then(|c| c.summary(method)) {
                            let v = if pick_mse { s.mse } else { s.mean_hurst };
                            let _ = write!(out, "{v:.prec$}", prec = TABLE_DECIMALS);
                        }
                    }
                }
                out.push('\n');
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub method: Method,
    pub iterations: usize,
    pub csv: String,
}

impl PlotData {
    pub fn file_name(&self, stem: &str) -> String {
        format!("{stem}.plot.{}.iter{}.csv", self.method.as_str().to_lowercase(), self.iterations)
    }
}

/// Mean H against lambda, one series per length; one file per method and
/// iteration count.
pub fn plot_data(report: &SimulationReport) -> Vec<PlotData> {
    let axes = Axes::of(report);
    let mut files = Vec::new();
    for method in COMPARED_METHODS {
        for &iterations in &axes.iterations {
            let mut csv = String::from("lambda");
            for size in &axes.sizes {
                let _ = write!(csv, ",N{size}");
            }
            csv.push('\n');
            for &lambda in &axes.lambdas {
                csv.push_str(&format_lambda(lambda));
                for &size in &axes.sizes {
                    csv.push(',');
                    if let Some(s) = find(report, lambda, size, iterations).and_then(|c| c.summary(method)) {
                        let _ = write!(csv, "{:.prec$}", s.mean_hurst, prec = PLOT_DECIMALS);
                    }
                }
                csv.push('\n');
            }
            files.push(PlotData {
                method,
                iterations,
                csv,
            });
        }
    }
    files
}

/// Output of a single-file estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateDocument {
    pub input: String,
    pub length: usize,
    pub settings: EstimatorSettings,
    pub results: Vec<EstimatorResult>,
}

impl EstimateDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document is always serialisable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "input: {} (N = {})", self.input, self.length);
        for r in &self.results {
            let _ = writeln!(out);
            let _ = writeln!(out, "{}  H = {:.6}", r.method, r.hurst);
            let _ = writeln!(
                out,
                "  fit: slope = {:.6}, intercept = {:.6}, points = {}, residual_rms = {:.6}",
                r.fit.slope, r.fit.intercept, r.fit.n_points, r.fit.residual_rms
            );
            let label = if r.method == Method::Vtp { "w" } else { "n" };
            let _ = writeln!(out, "  {label:>6}  statistic");
            for p in &r.points {
                let _ = writeln!(out, "  {:>6}  {:.6}", p.scale, p.statistic);
            }
            for w in &r.warnings {
                let _ = writeln!(out, "  warning: {w}");
            }
        }
        out
    }
}

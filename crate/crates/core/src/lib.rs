//! Hurst exponent estimation by adjusted rescaled range, detrended
//! fluctuation analysis and variance-time plot, plus a seeded Monte Carlo
//! harness that compares the three on independent exponential data.

pub mod cli;
pub mod dfa;
pub mod error;
pub mod estimate;
pub mod montecarlo;
pub mod regression;
pub mod report;
pub mod rescaled_range;
pub mod sampling;
pub mod series;
pub mod vtp;

pub use error::{HurstError, Result};
pub use estimate::{EstimatorResult, MaxWindowRule, Method, ScalePoint, Warning, WindowPolicy};
pub use regression::RegressionFit;
pub use series::{SdMode, TimeSeries};

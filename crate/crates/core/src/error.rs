use thiserror::Error;

pub type Result<T> = std::result::Result<T, HurstError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HurstError {
    #[error("time series needs at least 2 observations, got {0}")]
    SeriesTooShort(usize),

    #[error("observation {index} is not finite ({value})")]
    NonFiniteValue { index: usize, value: f64 },

    #[error("window length {window} does not divide series length {len}")]
    NonDivisorWindow { window: usize, len: usize },

    #[error("window length {window} is below the minimum of {min}")]
    WindowTooSmall { window: usize, min: usize },

    #[error("series length {len} is below the estimation minimum of {min}")]
    SeriesTooShortForEstimation { len: usize, min: usize },

    #[error("invalid window length {0}: must be at least 2")]
    InvalidWindow(usize),

    #[error("invalid window policy: {0}")]
    InvalidPolicy(String),

    #[error("regression needs at least 2 points with distinct x values")]
    DegenerateDesign,

    #[error("every subseries of length {window} has zero standard deviation")]
    AllSubseriesDegenerate { window: usize },

    #[error("adjusted R/S statistic is non-positive at window lengths {windows:?}")]
    NonPositiveStatistic { windows: Vec<usize> },

    #[error("mean detrended fluctuation is zero at window length {window}")]
    ZeroFluctuation { window: usize },

    #[error("aggregated variance is zero at block size {scale}")]
    ZeroVariance { scale: usize },

    #[error("aggregation scale {scale} exceeds half the series length {len}")]
    ScaleTooLarge { scale: usize, len: usize },

    #[error("need at least 2 distinct window lengths for series length {len}, found {found}")]
    InsufficientWindows { len: usize, found: usize },

    #[error("need at least 2 distinct aggregation scales, found {0}")]
    InsufficientScales(usize),

    #[error("invalid exponential parameters: {0}")]
    InvalidSpec(String),

    #[error("cannot compute MSE of an empty estimate list")]
    EmptyEstimates,

    #[error("simulation grid is empty")]
    EmptyGrid,

    #[error("cell (lambda={lambda}, N={series_length}, iterations={iterations}): every {method} estimate failed")]
    CellFailed {
        lambda: f64,
        series_length: usize,
        iterations: usize,
        method: String,
    },
}

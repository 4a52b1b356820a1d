//! Error types shared across the toolkit.

use thiserror::Error;

/// Configuration loading and validation failures.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("unknown config key `{0}` (pass --lenient to ignore)")]
    UnknownKey(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// CSV ingestion and alignment failures.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("line {line}: duplicate timestamp {timestamp}")]
    DuplicateTimestamp { line: u64, timestamp: String },
    #[error("line {line}: {field} out of range: {message}")]
    RangeError {
        line: u64,
        field: String,
        message: String,
    },
    #[error("generation and weather series have no overlap")]
    NoOverlap,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Failures in the economic/environmental calculations.
#[derive(Debug, Error)]
pub enum ImpactError {
    #[error("discount rate must be greater than -1, got {0}")]
    InvalidRate(f64),
    #[error("capital cost must be positive, got {0}")]
    NonPositiveCapital(f64),
    #[error("discounted lifetime energy is zero")]
    ZeroEnergy,
    #[error("lifetime must be positive")]
    ZeroLifetime,
}

/// Failures in the synthetic data generator.
#[derive(Debug, Error)]
pub enum SynthError {
    #[error("transition matrix row {0} sums to {1}, expected 1")]
    BadTransitionRow(usize, f64),
    #[error("per-class daily target for {0} must be positive")]
    BadTarget(String),
}

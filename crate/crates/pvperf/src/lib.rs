//! Performance, economic, and environmental analysis of rooftop
//! grid-tied PV systems.
//!
//! The pipeline: CSV ingestion ([`ingest`]) joins hourly generation and
//! weather series, [`solar`] supplies sun position and plane-of-array
//! transposition where measured POA is missing, [`metrics`] computes
//! yields, losses, PR, CUF, and efficiencies, [`weather`] classifies days
//! and correlates output with irradiance, and [`impact`] evaluates NPV,
//! LCOE, ROI, payback, savings, and the CO2 balance. [`report`] assembles
//! everything into deterministic JSON/CSV/Markdown reports, and [`synth`]
//! generates seeded synthetic datasets for end-to-end testing.

pub mod config;
pub mod error;
pub mod impact;
pub mod ingest;
pub mod metrics;
pub mod report;
pub mod solar;
pub mod synth;
pub mod weather;

pub use config::{Config, EmissionConfig, FinanceConfig, SystemConfig};
pub use report::{analyze, AnalyzeOptions, Report};

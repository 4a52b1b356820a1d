//! Report assembly, the embedded cross-study benchmark table, and the
//! JSON/CSV/Markdown emitters.
//!
//! Reports are deterministic: struct field order fixes the JSON key order
//! and every float is rounded half-even to four significant digits before
//! serialization (full precision is kept internally).

use std::io::Read;

use serde::Serialize;
use thiserror::Error;

use crate::config::Config;
use crate::error::{ImpactError, IngestError};
use crate::impact::{self, ImpactResult};
use crate::ingest::{self, ValidityPolicy};
use crate::metrics::{self, AnnualMetrics, MonthlyMetrics};
use crate::weather::{self, ClassifyThresholds, CorrelationReport, PlotPoint};

pub const REPORT_SCHEMA_VERSION: &str = "1";

/// PR point value or published range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueOrRange {
    Point(f64),
    Range(f64, f64),
}

impl ValueOrRange {
    /// Point value, or range midpoint, used for ranking.
    pub fn representative(&self) -> f64 {
        match self {
            ValueOrRange::Point(v) => *v,
            ValueOrRange::Range(lo, hi) => (lo + hi) / 2.0,
        }
    }

    pub fn point(&self) -> Option<f64> {
        match self {
            ValueOrRange::Point(v) => Some(*v),
            ValueOrRange::Range(..) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleType {
    MonoSi,
    PolySi,
    Mixed,
}

/// One row of the embedded cross-study comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkEntry {
    pub location: &'static str,
    pub capacity_kwp: f64,
    pub pr_pct: ValueOrRange,
    pub cuf_pct: Option<ValueOrRange>,
    pub module_type: ModuleType,
    pub eta_sys_pct: Option<ValueOrRange>,
    /// Bibliography index in the source study; 0 for the study itself.
    pub citation: u32,
}

use ValueOrRange::{Point, Range};

/// Published rooftop grid-tied PV benchmarks, including the reference
/// study's own row.
pub const BENCHMARK_TABLE: [BenchmarkEntry; 15] = [
    BenchmarkEntry {
        location: "Kuala Terengganu, Malaysia",
        capacity_kwp: 7.8,
        pr_pct: Point(75.72),
        cuf_pct: Some(Range(13.0, 16.0)),
        module_type: ModuleType::MonoSi,
        eta_sys_pct: Some(Range(10.0, 12.0)),
        citation: 38,
    },
    BenchmarkEntry {
        location: "Jakarta, Indonesia",
        capacity_kwp: 5.0,
        pr_pct: Point(76.07),
        cuf_pct: Some(Point(11.13)),
        module_type: ModuleType::PolySi,
        eta_sys_pct: None,
        citation: 39,
    },
    BenchmarkEntry {
        location: "Hue, Vietnam",
        capacity_kwp: 1.32,
        pr_pct: Point(78.11),
        cuf_pct: Some(Point(15.07)),
        module_type: ModuleType::PolySi,
        eta_sys_pct: Some(Point(12.89)),
        citation: 40,
    },
    BenchmarkEntry {
        location: "Cebu, Philippines",
        capacity_kwp: 8.36,
        pr_pct: Range(40.1, 77.8),
        cuf_pct: Some(Point(18.96)),
        module_type: ModuleType::PolySi,
        eta_sys_pct: None,
        citation: 41,
    },
    BenchmarkEntry {
        location: "Tak province, Thailand",
        capacity_kwp: 3.5,
        pr_pct: Range(59.0, 76.4),
        cuf_pct: None,
        module_type: ModuleType::PolySi,
        eta_sys_pct: None,
        citation: 42,
    },
    BenchmarkEntry {
        location: "Northern India",
        capacity_kwp: 5.0,
        pr_pct: Point(76.97),
        cuf_pct: Some(Point(16.39)),
        module_type: ModuleType::PolySi,
        eta_sys_pct: Some(Point(10.02)),
        citation: 43,
    },
    BenchmarkEntry {
        location: "Male, Maldives",
        capacity_kwp: 6.6,
        pr_pct: Point(81.56),
        cuf_pct: Some(Point(18.89)),
        module_type: ModuleType::PolySi,
        eta_sys_pct: Some(Point(13.87)),
        citation: 44,
    },
    BenchmarkEntry {
        location: "Central Java, Indonesia",
        capacity_kwp: 30.0,
        pr_pct: Point(79.40),
        cuf_pct: None,
        module_type: ModuleType::PolySi,
        eta_sys_pct: None,
        citation: 45,
    },
    BenchmarkEntry {
        location: "Mae Hong Son, Thailand",
        capacity_kwp: 11.0,
        pr_pct: Point(73.45),
        cuf_pct: Some(Point(14.0)),
        module_type: ModuleType::Mixed,
        eta_sys_pct: Some(Point(10.41)),
        citation: 46,
    },
    BenchmarkEntry {
        location: "Singapore",
        capacity_kwp: 142.5,
        pr_pct: Point(81.00),
        cuf_pct: Some(Point(15.70)),
        module_type: ModuleType::PolySi,
        eta_sys_pct: Some(Point(11.20)),
        citation: 47,
    },
    BenchmarkEntry {
        location: "Norway",
        capacity_kwp: 2.07,
        pr_pct: Point(83.03),
        cuf_pct: Some(Point(10.58)),
        module_type: ModuleType::Mixed,
        eta_sys_pct: Some(Point(11.60)),
        citation: 48,
    },
    BenchmarkEntry {
        location: "Port Elizabeth, South Africa",
        capacity_kwp: 3.2,
        pr_pct: Point(64.30),
        cuf_pct: Some(Point(20.41)),
        module_type: ModuleType::PolySi,
        eta_sys_pct: None,
        citation: 49,
    },
    BenchmarkEntry {
        location: "Turkey",
        capacity_kwp: 2.73,
        pr_pct: Point(72.0),
        cuf_pct: Some(Point(15.69)),
        module_type: ModuleType::PolySi,
        eta_sys_pct: None,
        citation: 50,
    },
    BenchmarkEntry {
        location: "Ireland",
        capacity_kwp: 1.72,
        pr_pct: Point(81.50),
        cuf_pct: Some(Point(10.10)),
        module_type: ModuleType::MonoSi,
        eta_sys_pct: Some(Point(13.30)),
        citation: 51,
    },
    BenchmarkEntry {
        location: "Present Study",
        capacity_kwp: 2.72,
        pr_pct: Point(77.10),
        cuf_pct: Some(Point(15.52)),
        module_type: ModuleType::PolySi,
        eta_sys_pct: Some(Point(13.00)),
        citation: 0,
    },
];

/// Where one metric lands within the benchmark distribution.
#[derive(Debug, Clone, Serialize)]
pub struct PercentileStat {
    pub value: f64,
    /// Entries (by representative value) at or below `value`.
    pub rank: u32,
    pub n_entries: u32,
    /// Distribution over entries carrying point values.
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

fn percentile_stat(value: f64, values: &[ValueOrRange]) -> PercentileStat {
    let rank = values
        .iter()
        .filter(|v| v.representative() <= value)
        .count() as u32;
    let mut points: Vec<f64> = values.iter().filter_map(|v| v.point()).collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if points.is_empty() {
        f64::NAN
    } else if points.len() % 2 == 1 {
        points[points.len() / 2]
    } else {
        (points[points.len() / 2 - 1] + points[points.len() / 2]) / 2.0
    };
    PercentileStat {
        value,
        rank,
        n_entries: values.len() as u32,
        min: points.first().copied().unwrap_or(f64::NAN),
        median,
        max: points.last().copied().unwrap_or(f64::NAN),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkBlock {
    pub pr: PercentileStat,
    pub cuf: PercentileStat,
    pub eta_sys: PercentileStat,
}

/// Ranks the system's annual PR, CUF, and system efficiency within the
/// embedded benchmark table.
pub fn benchmark_compare(annual: &AnnualMetrics) -> BenchmarkBlock {
    let prs: Vec<ValueOrRange> = BENCHMARK_TABLE.iter().map(|e| e.pr_pct).collect();
    let cufs: Vec<ValueOrRange> = BENCHMARK_TABLE.iter().filter_map(|e| e.cuf_pct).collect();
    let etas: Vec<ValueOrRange> = BENCHMARK_TABLE.iter().filter_map(|e| e.eta_sys_pct).collect();
    BenchmarkBlock {
        pr: percentile_stat(annual.mean_pr_pct, &prs),
        cuf: percentile_stat(annual.cuf_pct, &cufs),
        eta_sys: percentile_stat(annual.mean_eta_sys_pct, &etas),
    }
}

/// Data-quality summary carried in every report.
#[derive(Debug, Clone, Serialize)]
pub struct DataQualityBlock {
    pub n_joined_hours: u32,
    pub n_unmatched_generation: u32,
    pub n_unmatched_weather: u32,
    pub n_gaps: u32,
    pub n_days: u32,
    pub n_valid_days: u32,
    pub n_months: u32,
    pub n_valid_months: u32,
    pub poa_transposed_hours: u32,
    /// "measured", "transposed", or "mixed".
    pub poa_provenance: String,
}

/// Basis used for the impact block's annual figures.
#[derive(Debug, Clone, Serialize)]
pub struct ImpactInputs {
    pub annual_energy_kwh: f64,
    pub annual_grid_export_kwh: f64,
    pub export_basis: String,
}

/// The full analysis report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub toolkit_version: &'static str,
    pub config: Config,
    pub data_quality: DataQualityBlock,
    pub monthly: Vec<MonthlyMetrics>,
    pub annual: Option<AnnualMetrics>,
    pub correlation: CorrelationReport,
    pub impact_inputs: Option<ImpactInputs>,
    pub impact: Option<ImpactResult>,
    pub benchmark: Option<BenchmarkBlock>,
}

/// Pipeline failure with the originating stage attached.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("ingestion ({file}): {source}")]
    Ingest {
        file: String,
        #[source]
        source: IngestError,
    },
    #[error("impact: {0}")]
    Impact(#[from] ImpactError),
}

/// Options for the end-to-end analysis.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub policy: ValidityPolicy,
    pub thresholds: ClassifyThresholds,
    pub degradation_rate: f64,
    /// Explicit annual grid export; when absent, export is estimated from
    /// the default export share of generation.
    pub annual_export_kwh: Option<f64>,
}

/// Default export share of generation (the reference system exported
/// 2380 of 3699 kWh).
pub const DEFAULT_EXPORT_SHARE: f64 = 2380.0 / 3699.0;

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            policy: ValidityPolicy::default(),
            thresholds: ClassifyThresholds::default(),
            degradation_rate: 0.0,
            annual_export_kwh: None,
        }
    }
}

/// Runs ingest -> align -> metrics -> correlation -> impact and assembles
/// the report plus the plot-data points.
pub fn analyze<G: Read, W: Read>(
    cfg: &Config,
    generation: G,
    weather_stream: W,
    opts: &AnalyzeOptions,
) -> Result<(Report, Vec<PlotPoint>), PipelineError> {
    let gen = ingest::parse_generation_csv(generation).map_err(|source| PipelineError::Ingest {
        file: "generation.csv".into(),
        source,
    })?;
    let wx = ingest::parse_weather_csv(weather_stream).map_err(|source| PipelineError::Ingest {
        file: "weather.csv".into(),
        source,
    })?;
    let mut gaps = gen.gaps;
    gaps.extend(wx.gaps);
    let series = ingest::align(&gen.records, &wx.records, &cfg.system, opts.policy, gaps)
        .map_err(|source| PipelineError::Ingest {
            file: "generation.csv + weather.csv".into(),
            source,
        })?;

    let monthly_summaries = ingest::aggregate_monthly(&series, &cfg.system);
    let monthly = metrics::compute_monthly(&monthly_summaries, &cfg.system);
    let annual = metrics::compute_annual(&monthly, &cfg.system);
    let (correlation, plot) = weather::correlation_report(&series, &cfg.system, &opts.thresholds);

    let transposed = series.transposed_hours() as u32;
    let n_joined = series.records.len() as u32;
    let poa_provenance = if transposed == 0 {
        "measured"
    } else if transposed == n_joined {
        "transposed"
    } else {
        "mixed"
    };
    let data_quality = DataQualityBlock {
        n_joined_hours: n_joined,
        n_unmatched_generation: series.unmatched_generation.len() as u32,
        n_unmatched_weather: series.unmatched_weather.len() as u32,
        n_gaps: series.gaps.len() as u32,
        n_days: series.day_validity.len() as u32,
        n_valid_days: series.day_validity.values().filter(|v| v.valid).count() as u32,
        n_months: monthly.len() as u32,
        n_valid_months: monthly.iter().filter(|m| m.valid).count() as u32,
        poa_transposed_hours: transposed,
        poa_provenance: poa_provenance.into(),
    };

    let (impact_inputs, impact_block, benchmark) = match &annual {
        Some(a) if a.e_ac_total_kwh > 0.0 => {
            let annual_energy_kwh = a.e_ac_total_kwh * 8760.0 / a.cuf_hours_basis;
            let (export, basis) = match opts.annual_export_kwh {
                Some(e) => (e, "explicit --export-kwh".to_string()),
                None => (
                    annual_energy_kwh * DEFAULT_EXPORT_SHARE,
                    format!("estimated as {DEFAULT_EXPORT_SHARE:.4} of annual generation"),
                ),
            };
            let result = impact::evaluate(
                &cfg.finance,
                &cfg.emissions,
                annual_energy_kwh,
                export,
                cfg.system.p_rated_kwp,
                opts.degradation_rate,
            )?;
            (
                Some(ImpactInputs {
                    annual_energy_kwh,
                    annual_grid_export_kwh: export,
                    export_basis: basis,
                }),
                Some(result),
                Some(benchmark_compare(a)),
            )
        }
        _ => (None, None, None),
    };

    Ok((
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            toolkit_version: env!("CARGO_PKG_VERSION"),
            config: cfg.clone(),
            data_quality,
            monthly,
            annual,
            correlation,
            impact_inputs,
            impact: impact_block,
            benchmark,
        },
        plot,
    ))
}

/// Rounds half-even to four significant digits.
pub fn round_sig4(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(3 - magnitude);
    round_ties_even(x * factor) / factor
}

fn round_ties_even(x: f64) -> f64 {
    let floor = x.floor();
    let diff = x - floor;
    if (diff - 0.5).abs() < 1e-9 {
        if (floor as i64) % 2 == 0 {
            floor
        } else {
            floor + 1.0
        }
    } else {
        x.round()
    }
}

/// Applies [`round_sig4`] to every number in a JSON tree.
fn round_json(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_sig4(f)) {
                        *n = rounded;
                    }
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Any serializable value as pretty JSON with all floats rounded to four
/// significant digits. Deterministic for identical inputs.
pub fn to_rounded_json<T: Serialize>(value: &T) -> String {
    let mut value = serde_json::to_value(value).expect("value serializes");
    round_json(&mut value);
    serde_json::to_string_pretty(&value).expect("json renders")
}

/// Report as rounded pretty JSON.
pub fn to_json(report: &Report) -> String {
    to_rounded_json(report)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| round_sig4(v).to_string()).unwrap_or_default()
}

fn fmt(v: f64) -> String {
    round_sig4(v).to_string()
}

/// Monthly table as CSV, mirroring the yield/loss and efficiency columns.
pub fn monthly_csv(report: &Report) -> String {
    let mut out = String::from(
        "year,month,valid,cell_temp_c,e_ac_kwh,e_dc_kwh,y_a,y_r,y_f,l_c,l_s,\
         eta_array_pct,eta_inv_pct,capacity_factor_pct,pr_pct,eta_sys_pct,e_ac_month_kwh\n",
    );
    for m in &report.monthly {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            m.year,
            m.month,
            m.valid,
            fmt(m.cell_temp_c),
            fmt(m.e_ac_kwh),
            fmt(m.e_dc_kwh),
            fmt_opt(m.y_a),
            fmt_opt(m.y_r),
            fmt_opt(m.y_f),
            fmt_opt(m.l_c),
            fmt_opt(m.l_s),
            fmt_opt(m.eta_array_pct),
            fmt_opt(m.eta_inv_pct),
            fmt_opt(m.capacity_factor_pct),
            fmt_opt(m.pr_pct),
            fmt_opt(m.eta_sys_pct),
            fmt(m.e_ac_month_kwh),
        ));
    }
    out
}

/// Report as Markdown: the two monthly tables plus annual, impact, and
/// benchmark summaries.
pub fn to_markdown(report: &Report) -> String {
    let mut out = String::new();
    out.push_str("# PV system analysis report\n\n");
    out.push_str("## Monthly yield and losses\n\n");
    out.push_str("| Year | Month | Cell T (C) | E_AC (kWh) | E_DC (kWh) | Y_A | Y_R | Y_F | L_C | L_S |\n");
    out.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
    for m in &report.monthly {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
            m.year,
            m.month,
            fmt(m.cell_temp_c),
            fmt(m.e_ac_kwh),
            fmt(m.e_dc_kwh),
            fmt_opt(m.y_a),
            fmt_opt(m.y_r),
            fmt_opt(m.y_f),
            fmt_opt(m.l_c),
            fmt_opt(m.l_s),
        ));
    }
    out.push_str("\n## Monthly efficiencies\n\n");
    out.push_str("| Year | Month | eta_array % | eta_inv % | CF % | PR % | eta_sys % |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for m in &report.monthly {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            m.year,
            m.month,
            fmt_opt(m.eta_array_pct),
            fmt_opt(m.eta_inv_pct),
            fmt_opt(m.capacity_factor_pct),
            fmt_opt(m.pr_pct),
            fmt_opt(m.eta_sys_pct),
        ));
    }
    if let Some(a) = &report.annual {
        out.push_str("\n## Annual\n\n");
        out.push_str(&format!(
            "- E_AC total: {} kWh over {} valid months\n- CUF: {} %\n- mean PR: {} %\n",
            fmt(a.e_ac_total_kwh),
            a.n_valid_months,
            fmt(a.cuf_pct),
            fmt(a.mean_pr_pct),
        ));
    }
    if let Some(i) = &report.impact {
        out.push_str("\n## Impact\n\n");
        out.push_str(&format!(
            "- NPV: {} {}\n- LCOE: {} {}/kWh\n- ROI: {} %\n- simple payback: {} yr\n- monthly savings: {} {}\n- net CO2 avoided: {} t/kWp/yr\n",
            fmt(i.npv_benefits),
            i.currency_label,
            fmt(i.lcoe),
            i.currency_label,
            fmt(i.roi_pct),
            fmt_opt(i.payback_simple_years),
            fmt(i.monthly_savings),
            i.currency_label,
            fmt(i.net_co2_avoided_t_per_kwp_yr),
        ));
    }
    if let Some(b) = &report.benchmark {
        out.push_str("\n## Benchmark\n\n");
        out.push_str(&format!(
            "- PR rank {}/{} (min {}, median {}, max {})\n",
            b.pr.rank,
            b.pr.n_entries,
            fmt(b.pr.min),
            fmt(b.pr.median),
            fmt(b.pr.max)
        ));
        out.push_str(&format!(
            "- CUF rank {}/{} (median {})\n",
            b.cuf.rank,
            b.cuf.n_entries,
            fmt(b.cuf.median)
        ));
        out.push_str(&format!(
            "- eta_sys rank {}/{} (median {})\n",
            b.eta_sys.rank,
            b.eta_sys.n_entries,
            fmt(b.eta_sys.median)
        ));
    }
    out
}

/// Plot-data CSV for the hourly correlation figures.
pub fn plot_csv(points: &[PlotPoint]) -> String {
    let mut out = String::from("hour,e_ac_kwh,irradiance_w_m2,class\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.timestamp,
            fmt(p.e_ac_kwh),
            fmt(p.irradiance_w_m2),
            p.class
        ));
    }
    out
}

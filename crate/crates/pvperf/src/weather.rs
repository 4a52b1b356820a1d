//! Weather-class assignment and generation/irradiance correlation.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::SystemConfig;
use crate::ingest::{AlignedRecord, AlignedSeries, WeatherLabel};
use crate::solar;

/// How a day's class was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassProvenance {
    /// Majority logger label over the day's daylight hours.
    Labeled,
    /// Derived from the mean daytime clearness index.
    DerivedFromClearness,
}

/// A day's weather class plus where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DayClass {
    pub class: WeatherLabel,
    pub provenance: ClassProvenance,
    pub mean_clearness: Option<f64>,
}

/// Clearness-index thresholds for the label-free fallback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyThresholds {
    pub clear_min: f64,
    pub partly_min: f64,
    pub overcast_min: f64,
    /// Minimum labeled fraction of daylight hours for the majority path.
    pub label_fraction: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        ClassifyThresholds {
            clear_min: 0.65,
            partly_min: 0.45,
            overcast_min: 0.25,
            label_fraction: 0.5,
        }
    }
}

/// Classifies one day from its daylight records.
///
/// When at least `label_fraction` of daylight hours carry logger labels the
/// majority label wins; otherwise the mean daytime clearness index decides.
/// `None` when the day has no daylight records.
pub fn classify_day(
    hours: &[AlignedRecord],
    cfg: &SystemConfig,
    thresholds: &ClassifyThresholds,
) -> Option<DayClass> {
    let daylight: Vec<&AlignedRecord> = hours.iter().filter(|r| r.is_daylight).collect();
    if daylight.is_empty() {
        return None;
    }
    let labeled: Vec<WeatherLabel> = daylight.iter().filter_map(|r| r.weather_label).collect();
    if labeled.len() as f64 >= thresholds.label_fraction * daylight.len() as f64 {
        let mut counts: BTreeMap<WeatherLabel, usize> = BTreeMap::new();
        for l in &labeled {
            *counts.entry(*l).or_default() += 1;
        }
        let class = counts.into_iter().max_by_key(|&(_, c)| c).map(|(l, _)| l)?;
        return Some(DayClass {
            class,
            provenance: ClassProvenance::Labeled,
            mean_clearness: None,
        });
    }
    // Clearness fallback: mean k_t over daylight hours with a defined index.
    let kts: Vec<f64> = daylight
        .iter()
        .filter_map(|r| {
            let mid = r.timestamp.with_timezone(&chrono::Utc) - chrono::Duration::minutes(30);
            let sun = solar::sun_position(cfg, mid);
            solar::clearness_index(r.ghi_w_m2, &sun)
        })
        .collect();
    if kts.is_empty() {
        return None;
    }
    let mean_kt = kts.iter().sum::<f64>() / kts.len() as f64;
    let class = if mean_kt >= thresholds.clear_min {
        WeatherLabel::Clear
    } else if mean_kt >= thresholds.partly_min {
        WeatherLabel::PartlyCloudy
    } else if mean_kt >= thresholds.overcast_min {
        WeatherLabel::Overcast
    } else {
        WeatherLabel::Rain
    };
    Some(DayClass {
        class,
        provenance: ClassProvenance::DerivedFromClearness,
        mean_clearness: Some(mean_kt),
    })
}

/// Sample Pearson correlation coefficient.
///
/// `None` when either argument has zero variance.
///
/// # Panics
/// Panics on length mismatch or fewer than two samples.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len(), "pearson: length mismatch");
    assert!(xs.len() >= 2, "pearson: need at least two samples");
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    // Rounding can land a hair outside [-1, 1] (e.g. two-point inputs).
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Per-class statistics.
#[derive(Debug, Clone, Serialize)]
pub struct WeatherClassStats {
    pub class: WeatherLabel,
    pub n_days: u32,
    pub mean_daily_e_ac_kwh: f64,
    /// Pooled over the hourly (e_ac, gpoa) daylight pairs of the class's days.
    pub pearson_r_hourly: Option<f64>,
    pub n_hour_pairs: u32,
}

/// Reference values from the source study, carried for side-by-side
/// display only (never asserted against computed data).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReferenceCorrelation {
    pub class: &'static str,
    pub pearson_r: f64,
    pub mean_daily_e_ac_kwh: f64,
}

pub const REFERENCE_CORRELATIONS: [ReferenceCorrelation; 4] = [
    ReferenceCorrelation {
        class: "clear",
        pearson_r: 0.784,
        mean_daily_e_ac_kwh: 14.8,
    },
    ReferenceCorrelation {
        class: "partly_cloudy",
        pearson_r: 0.728,
        mean_daily_e_ac_kwh: 11.9,
    },
    ReferenceCorrelation {
        class: "overcast",
        pearson_r: 0.636,
        mean_daily_e_ac_kwh: 9.2,
    },
    ReferenceCorrelation {
        class: "rain",
        pearson_r: 0.445,
        mean_daily_e_ac_kwh: 2.1,
    },
];

/// Reference overall daily correlation from the source study.
pub const REFERENCE_OVERALL_R: f64 = 0.679;

/// Correlation report: per-class stats plus the overall daily correlation.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationReport {
    pub per_class: Vec<WeatherClassStats>,
    /// r over (daily e_ac, daily insolation) pairs across all valid days.
    pub overall_daily_r: Option<f64>,
    pub n_valid_days: u32,
    pub reference: Vec<ReferenceCorrelation>,
    pub reference_overall_r: f64,
}

/// One row of the plot-data CSV behind the hourly profile figures.
#[derive(Debug, Clone, Serialize)]
pub struct PlotPoint {
    pub timestamp: String,
    pub e_ac_kwh: f64,
    pub irradiance_w_m2: f64,
    pub class: &'static str,
}

/// Computes per-class and overall correlations over the aligned series.
///
/// Hourly pairs pool the daylight hours of all days in a class; classes
/// with fewer than two days are omitted. Deterministic and independent of
/// day ordering.
pub fn correlation_report(
    series: &AlignedSeries,
    cfg: &SystemConfig,
    thresholds: &ClassifyThresholds,
) -> (CorrelationReport, Vec<PlotPoint>) {
    let mut by_day: BTreeMap<chrono::NaiveDate, Vec<AlignedRecord>> = BTreeMap::new();
    let offset =
        chrono::FixedOffset::east_opt((cfg.utc_offset_h * 3600.0) as i32).unwrap();
    for r in &series.records {
        let date = r.timestamp.with_timezone(&offset).date_naive();
        by_day.entry(date).or_default().push(*r);
    }

    let mut class_days: BTreeMap<WeatherLabel, Vec<&Vec<AlignedRecord>>> = BTreeMap::new();
    let mut plot = Vec::new();
    let mut daily_pairs: Vec<(f64, f64)> = Vec::new();
    for (date, hours) in &by_day {
        let valid = series
            .day_validity
            .get(date)
            .map(|v| v.valid)
            .unwrap_or(false);
        if !valid {
            continue;
        }
        let Some(day_class) = classify_day(hours, cfg, thresholds) else {
            continue;
        };
        class_days.entry(day_class.class).or_default().push(hours);
        let e_ac: f64 = hours.iter().map(|r| r.e_ac_kwh).sum();
        let insolation: f64 = hours.iter().map(|r| r.gpoa_w_m2).sum::<f64>() / 1000.0;
        daily_pairs.push((e_ac, insolation));
        for r in hours.iter().filter(|r| r.is_daylight) {
            plot.push(PlotPoint {
                timestamp: r.timestamp.to_rfc3339(),
                e_ac_kwh: r.e_ac_kwh,
                irradiance_w_m2: r.gpoa_w_m2,
                class: day_class.class.as_str(),
            });
        }
    }

    let per_class = WeatherLabel::ALL
        .iter()
        .filter_map(|class| {
            let days = class_days.get(class)?;
            if days.len() < 2 {
                return None;
            }
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut e_ac_total = 0.0;
            for hours in days {
                e_ac_total += hours.iter().map(|r| r.e_ac_kwh).sum::<f64>();
                for r in hours.iter().filter(|r| r.is_daylight) {
                    xs.push(r.e_ac_kwh);
                    ys.push(r.gpoa_w_m2);
                }
            }
            let r = if xs.len() >= 2 { pearson(&xs, &ys) } else { None };
            Some(WeatherClassStats {
                class: *class,
                n_days: days.len() as u32,
                mean_daily_e_ac_kwh: e_ac_total / days.len() as f64,
                pearson_r_hourly: r,
                n_hour_pairs: xs.len() as u32,
            })
        })
        .collect();

    let overall_daily_r = if daily_pairs.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = daily_pairs.into_iter().unzip();
        pearson(&xs, &ys)
    } else {
        None
    };

    let n_valid_days = by_day
        .keys()
        .filter(|d| series.day_validity.get(d).map(|v| v.valid).unwrap_or(false))
        .count() as u32;

    (
        CorrelationReport {
            per_class,
            overall_daily_r,
            n_valid_days,
            reference: REFERENCE_CORRELATIONS.to_vec(),
            reference_overall_r: REFERENCE_OVERALL_R,
        },
        plot,
    )
}

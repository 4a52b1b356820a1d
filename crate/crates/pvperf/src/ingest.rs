//! CSV ingestion, timestamp alignment, and daily/monthly aggregation.
//!
//! File formats (RFC 4180, `.` decimal separator, ISO 8601 timestamps with
//! a numeric offset):
//!
//! * generation.csv: `timestamp,e_dc_kwh,e_ac_kwh`
//! * weather.csv: `timestamp,ghi_w_m2,dni_w_m2,dhi_w_m2,gpoa_w_m2,temp_c,wind_ms,weather_label`
//!
//! Each hourly value is interval energy (kWh accumulated over the hour
//! ending at the timestamp). Timestamps are compared as instants (UTC);
//! display keeps the file's offset.
//!
//! Validity policy: a day is valid when at least `daylight_fraction`
//! (default 90%) of its daylight hours carry joined records; a month is
//! valid with at least `min_valid_days` (default 25) valid days.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use chrono::{DateTime, Datelike, Duration, FixedOffset, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::IngestError;
use crate::metrics::estimate_cell_temperature;
use crate::solar;

/// Logger weather status label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeatherLabel {
    Clear,
    PartlyCloudy,
    Overcast,
    Rain,
}

impl WeatherLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeatherLabel::Clear => "clear",
            WeatherLabel::PartlyCloudy => "partly_cloudy",
            WeatherLabel::Overcast => "overcast",
            WeatherLabel::Rain => "rain",
        }
    }

    pub fn parse(s: &str) -> Option<WeatherLabel> {
        match s {
            "clear" => Some(WeatherLabel::Clear),
            "partly_cloudy" => Some(WeatherLabel::PartlyCloudy),
            "overcast" => Some(WeatherLabel::Overcast),
            "rain" => Some(WeatherLabel::Rain),
            _ => None,
        }
    }

    pub const ALL: [WeatherLabel; 4] = [
        WeatherLabel::Clear,
        WeatherLabel::PartlyCloudy,
        WeatherLabel::Overcast,
        WeatherLabel::Rain,
    ];
}

/// One hour of inverter output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationRecord {
    pub timestamp: DateTime<FixedOffset>,
    pub e_dc_kwh: f64,
    pub e_ac_kwh: f64,
}

/// One hour of meteorological data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherRecord {
    pub timestamp: DateTime<FixedOffset>,
    pub ghi_w_m2: f64,
    pub dni_w_m2: f64,
    pub dhi_w_m2: f64,
    pub gpoa_w_m2: Option<f64>,
    pub temp_c: f64,
    pub wind_ms: f64,
    pub weather_label: Option<WeatherLabel>,
}

/// A non-hourly step between consecutive records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gap {
    pub after: String,
    pub before: String,
    pub missing_hours: i64,
}

/// Parse output: the records plus any non-hourly gaps encountered.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub records: Vec<T>,
    pub gaps: Vec<Gap>,
}

impl<T> Default for Parsed<T> {
    fn default() -> Self {
        Parsed {
            records: Vec::new(),
            gaps: Vec::new(),
        }
    }
}

const GENERATION_HEADER: &[&str] = &["timestamp", "e_dc_kwh", "e_ac_kwh"];
const WEATHER_HEADER: &[&str] = &[
    "timestamp",
    "ghi_w_m2",
    "dni_w_m2",
    "dhi_w_m2",
    "gpoa_w_m2",
    "temp_c",
    "wind_ms",
    "weather_label",
];

fn check_header(got: &csv::StringRecord, want: &[&str]) -> Result<(), IngestError> {
    let got: Vec<&str> = got.iter().collect();
    if got != want {
        return Err(IngestError::MalformedRow {
            line: 1,
            message: format!("expected header `{}`, got `{}`", want.join(","), got.join(",")),
        });
    }
    Ok(())
}

fn parse_timestamp(s: &str, line: u64) -> Result<DateTime<FixedOffset>, IngestError> {
    DateTime::parse_from_rfc3339(s).map_err(|e| IngestError::MalformedRow {
        line,
        message: format!("bad timestamp `{s}`: {e}"),
    })
}

fn parse_f64(s: &str, field: &str, line: u64) -> Result<f64, IngestError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| IngestError::MalformedRow {
            line,
            message: format!("bad {field} value `{s}`"),
        })
}

/// Checks strict time ordering against the previous record, recording
/// non-hourly steps in the gap report.
fn check_sequence(
    prev: Option<DateTime<FixedOffset>>,
    current: DateTime<FixedOffset>,
    line: u64,
    gaps: &mut Vec<Gap>,
) -> Result<(), IngestError> {
    if let Some(prev) = prev {
        if current == prev {
            return Err(IngestError::DuplicateTimestamp {
                line,
                timestamp: current.to_rfc3339(),
            });
        }
        if current < prev {
            return Err(IngestError::MalformedRow {
                line,
                message: format!(
                    "timestamps must be strictly increasing ({} after {})",
                    current.to_rfc3339(),
                    prev.to_rfc3339()
                ),
            });
        }
        let step = current.signed_duration_since(prev);
        if step != Duration::hours(1) {
            gaps.push(Gap {
                after: prev.to_rfc3339(),
                before: current.to_rfc3339(),
                missing_hours: step.num_hours() - 1,
            });
        }
    }
    Ok(())
}

/// Parses a generation CSV stream.
pub fn parse_generation_csv<R: Read>(reader: R) -> Result<Parsed<GenerationRecord>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    check_header(rdr.headers()?, GENERATION_HEADER)?;
    let mut out = Parsed::default();
    let mut prev = None;
    for (i, row) in rdr.records().enumerate() {
        let line = i as u64 + 2;
        let row = row?;
        if row.len() != 3 {
            return Err(IngestError::MalformedRow {
                line,
                message: format!("expected 3 fields, got {}", row.len()),
            });
        }
        let timestamp = parse_timestamp(&row[0], line)?;
        let e_dc_kwh = parse_f64(&row[1], "e_dc_kwh", line)?;
        let e_ac_kwh = parse_f64(&row[2], "e_ac_kwh", line)?;
        for (field, v) in [("e_dc_kwh", e_dc_kwh), ("e_ac_kwh", e_ac_kwh)] {
            if v < 0.0 {
                return Err(IngestError::RangeError {
                    line,
                    field: field.into(),
                    message: format!("{v} is negative"),
                });
            }
        }
        check_sequence(prev, timestamp, line, &mut out.gaps)?;
        prev = Some(timestamp);
        out.records.push(GenerationRecord {
            timestamp,
            e_dc_kwh,
            e_ac_kwh,
        });
    }
    Ok(out)
}

/// Parses a weather CSV stream. Empty `gpoa_w_m2`/`weather_label` cells
/// mean absent.
pub fn parse_weather_csv<R: Read>(reader: R) -> Result<Parsed<WeatherRecord>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    check_header(rdr.headers()?, WEATHER_HEADER)?;
    let mut out = Parsed::default();
    let mut prev = None;
    for (i, row) in rdr.records().enumerate() {
        let line = i as u64 + 2;
        let row = row?;
        if row.len() != 8 {
            return Err(IngestError::MalformedRow {
                line,
                message: format!("expected 8 fields, got {}", row.len()),
            });
        }
        let timestamp = parse_timestamp(&row[0], line)?;
        let ghi_w_m2 = parse_f64(&row[1], "ghi_w_m2", line)?;
        let dni_w_m2 = parse_f64(&row[2], "dni_w_m2", line)?;
        let dhi_w_m2 = parse_f64(&row[3], "dhi_w_m2", line)?;
        let gpoa_w_m2 = if row[4].trim().is_empty() {
            None
        } else {
            Some(parse_f64(&row[4], "gpoa_w_m2", line)?)
        };
        let temp_c = parse_f64(&row[5], "temp_c", line)?;
        let wind_ms = parse_f64(&row[6], "wind_ms", line)?;
        let weather_label = if row[7].trim().is_empty() {
            None
        } else {
            Some(
                WeatherLabel::parse(row[7].trim()).ok_or_else(|| IngestError::MalformedRow {
                    line,
                    message: format!("unknown weather label `{}`", &row[7]),
                })?,
            )
        };
        for (field, v) in [
            ("ghi_w_m2", ghi_w_m2),
            ("dni_w_m2", dni_w_m2),
            ("dhi_w_m2", dhi_w_m2),
        ] {
            if v < 0.0 {
                return Err(IngestError::RangeError {
                    line,
                    field: field.into(),
                    message: format!("{v} is negative"),
                });
            }
        }
        if ghi_w_m2 > 1500.0 {
            return Err(IngestError::RangeError {
                line,
                field: "ghi_w_m2".into(),
                message: format!("{ghi_w_m2} exceeds 1500 W/m2"),
            });
        }
        if let Some(g) = gpoa_w_m2 {
            if !(0.0..=1500.0).contains(&g) {
                return Err(IngestError::RangeError {
                    line,
                    field: "gpoa_w_m2".into(),
                    message: format!("{g} outside [0, 1500] W/m2"),
                });
            }
        }
        check_sequence(prev, timestamp, line, &mut out.gaps)?;
        prev = Some(timestamp);
        out.records.push(WeatherRecord {
            timestamp,
            ghi_w_m2,
            dni_w_m2,
            dhi_w_m2,
            gpoa_w_m2,
            temp_c,
            wind_ms,
            weather_label,
        });
    }
    Ok(out)
}

/// Canonical timestamp formatting used by all writers.
pub fn format_timestamp(t: &DateTime<FixedOffset>) -> String {
    t.format("%Y-%m-%dT%H:%M:%S%:z").to_string()
}

/// Writes generation records in the canonical format (shortest-round-trip
/// floats, ISO 8601 timestamps). `serialize(parse(x))` is byte-identical
/// for files already in this format.
pub fn write_generation_csv<W: Write>(
    records: &[GenerationRecord],
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "{}", GENERATION_HEADER.join(","))?;
    for r in records {
        writeln!(
            w,
            "{},{},{}",
            format_timestamp(&r.timestamp),
            r.e_dc_kwh,
            r.e_ac_kwh
        )?;
    }
    Ok(())
}

/// Writes weather records in the canonical format.
pub fn write_weather_csv<W: Write>(records: &[WeatherRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{}", WEATHER_HEADER.join(","))?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            format_timestamp(&r.timestamp),
            r.ghi_w_m2,
            r.dni_w_m2,
            r.dhi_w_m2,
            r.gpoa_w_m2.map(|g| g.to_string()).unwrap_or_default(),
            r.temp_c,
            r.wind_ms,
            r.weather_label.map(|l| l.as_str()).unwrap_or_default()
        )?;
    }
    Ok(())
}

/// Where an hour's plane-of-array irradiance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoaSource {
    Measured,
    Transposed,
}

/// One joined generation+weather hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedRecord {
    pub timestamp: DateTime<FixedOffset>,
    pub e_dc_kwh: f64,
    pub e_ac_kwh: f64,
    pub ghi_w_m2: f64,
    pub dni_w_m2: f64,
    pub dhi_w_m2: f64,
    pub gpoa_w_m2: f64,
    pub poa_source: PoaSource,
    pub temp_c: f64,
    pub wind_ms: f64,
    pub weather_label: Option<WeatherLabel>,
    pub is_daylight: bool,
}

/// Per-day validity bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DayValidity {
    pub daylight_hours: u32,
    pub joined_daylight_hours: u32,
    pub valid: bool,
}

/// Tunable thresholds of the data-quality policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityPolicy {
    /// Minimum fraction of daylight hours that must carry joined records.
    pub daylight_fraction: f64,
    /// Minimum valid days for a valid month.
    pub min_valid_days: u32,
}

impl Default for ValidityPolicy {
    fn default() -> Self {
        ValidityPolicy {
            daylight_fraction: 0.9,
            min_valid_days: 25,
        }
    }
}

/// Hourly joined series with validity flags and the gap report.
#[derive(Debug, Clone)]
pub struct AlignedSeries {
    pub records: Vec<AlignedRecord>,
    pub day_validity: BTreeMap<NaiveDate, DayValidity>,
    pub month_validity: BTreeMap<(i32, u32), bool>,
    /// Timestamps present on only one side of the join.
    pub unmatched_generation: Vec<String>,
    pub unmatched_weather: Vec<String>,
    pub gaps: Vec<Gap>,
    pub policy: ValidityPolicy,
}

impl AlignedSeries {
    pub fn transposed_hours(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.poa_source == PoaSource::Transposed)
            .count()
    }
}

/// Local civil date of an hourly interval's midpoint.
fn local_date(t: &DateTime<FixedOffset>, cfg: &SystemConfig) -> NaiveDate {
    let offset = FixedOffset::east_opt((cfg.utc_offset_h * 3600.0) as i32).unwrap();
    t.with_timezone(&offset).date_naive()
}

/// Sun position at the interval midpoint (the stamp marks the hour's end).
fn midpoint_sun(cfg: &SystemConfig, t: &DateTime<FixedOffset>) -> solar::SunPosition {
    let mid = t.with_timezone(&Utc) - Duration::minutes(30);
    solar::sun_position(cfg, mid)
}

/// Inner-joins generation and weather on timestamp and applies the
/// validity policy.
pub fn align(
    gen: &[GenerationRecord],
    weather: &[WeatherRecord],
    cfg: &SystemConfig,
    policy: ValidityPolicy,
    gaps: Vec<Gap>,
) -> Result<AlignedSeries, IngestError> {
    let weather_by_instant: HashMap<DateTime<Utc>, &WeatherRecord> = weather
        .iter()
        .map(|w| (w.timestamp.with_timezone(&Utc), w))
        .collect();
    let gen_instants: std::collections::HashSet<DateTime<Utc>> = gen
        .iter()
        .map(|g| g.timestamp.with_timezone(&Utc))
        .collect();

    let mut records = Vec::new();
    let mut unmatched_generation = Vec::new();
    for g in gen {
        let instant = g.timestamp.with_timezone(&Utc);
        let Some(w) = weather_by_instant.get(&instant) else {
            unmatched_generation.push(g.timestamp.to_rfc3339());
            continue;
        };
        let sun = midpoint_sun(cfg, &g.timestamp);
        let (gpoa_w_m2, poa_source) = match w.gpoa_w_m2 {
            Some(g) => (g, PoaSource::Measured),
            None => (
                solar::transpose_poa(w.ghi_w_m2, w.dni_w_m2, w.dhi_w_m2, &sun, cfg),
                PoaSource::Transposed,
            ),
        };
        records.push(AlignedRecord {
            timestamp: g.timestamp,
            e_dc_kwh: g.e_dc_kwh,
            e_ac_kwh: g.e_ac_kwh,
            ghi_w_m2: w.ghi_w_m2,
            dni_w_m2: w.dni_w_m2,
            dhi_w_m2: w.dhi_w_m2,
            gpoa_w_m2,
            poa_source,
            temp_c: w.temp_c,
            wind_ms: w.wind_ms,
            weather_label: w.weather_label,
            is_daylight: sun.is_daylight(),
        });
    }
    if records.is_empty() {
        return Err(IngestError::NoOverlap);
    }
    // Canonical chronological order regardless of input ordering.
    records.sort_by_key(|r| r.timestamp.with_timezone(&Utc));
    let unmatched_weather: Vec<String> = weather
        .iter()
        .filter(|w| !gen_instants.contains(&w.timestamp.with_timezone(&Utc)))
        .map(|w| w.timestamp.to_rfc3339())
        .collect();

    // Daylight census per local day: count candidate daylight hours from
    // the full 24-hour grid, then how many carry joined records.
    let offset = FixedOffset::east_opt((cfg.utc_offset_h * 3600.0) as i32).unwrap();
    let joined_days: std::collections::BTreeSet<NaiveDate> =
        records.iter().map(|r| local_date(&r.timestamp, cfg)).collect();
    let joined_instants: std::collections::HashSet<DateTime<Utc>> = records
        .iter()
        .map(|r| r.timestamp.with_timezone(&Utc))
        .collect();

    let mut day_validity = BTreeMap::new();
    for date in joined_days {
        let mut daylight = 0u32;
        let mut joined = 0u32;
        for hour in 0..24u32 {
            // Stamp marks the end of the interval [hour, hour+1).
            let Some(naive) = date
                .and_hms_opt(hour, 0, 0)
                .and_then(|n| n.checked_add_signed(Duration::hours(1)))
            else {
                continue;
            };
            let Some(stamp) = naive.and_local_timezone(offset).single() else {
                continue;
            };
            let sun = midpoint_sun(cfg, &stamp);
            if sun.is_daylight() {
                daylight += 1;
                if joined_instants.contains(&stamp.with_timezone(&Utc)) {
                    joined += 1;
                }
            }
        }
        let valid = daylight > 0 && (joined as f64) >= policy.daylight_fraction * daylight as f64;
        day_validity.insert(
            date,
            DayValidity {
                daylight_hours: daylight,
                joined_daylight_hours: joined,
                valid,
            },
        );
    }

    let mut month_valid_days: BTreeMap<(i32, u32), u32> = BTreeMap::new();
    for (date, v) in &day_validity {
        let entry = month_valid_days.entry((date.year(), date.month())).or_default();
        if v.valid {
            *entry += 1;
        }
    }
    let month_validity = month_valid_days
        .into_iter()
        .map(|(k, n)| (k, n >= policy.min_valid_days))
        .collect();

    Ok(AlignedSeries {
        records,
        day_validity,
        month_validity,
        unmatched_generation,
        unmatched_weather,
        gaps,
        policy,
    })
}

/// One day's aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct DailySummary {
    pub date: NaiveDate,
    pub e_dc_kwh: f64,
    pub e_ac_kwh: f64,
    /// Sum of gpoa x 1 h / 1000, kWh/m2.
    pub h_poa_kwh_m2: f64,
    pub mean_temp_c: f64,
    pub mean_wind_ms: f64,
    pub mean_cell_temp_c: f64,
    pub dominant_weather_label: Option<WeatherLabel>,
    pub poa_transposed_hours: u32,
    pub valid: bool,
}

/// One month's aggregate over its valid days.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlySummary {
    pub year: i32,
    pub month: u32,
    pub n_days: u32,
    pub n_valid_days: u32,
    pub e_dc_kwh_sum: f64,
    pub e_ac_kwh_sum: f64,
    pub h_poa_kwh_m2_sum: f64,
    pub e_dc_kwh_daily_mean: f64,
    pub e_ac_kwh_daily_mean: f64,
    pub h_poa_kwh_m2_daily_mean: f64,
    pub mean_temp_c: f64,
    pub mean_wind_ms: f64,
    pub mean_cell_temp_c: f64,
    pub dominant_weather_label: Option<WeatherLabel>,
    pub poa_transposed_hours: u32,
    pub valid: bool,
}

/// Aggregates the aligned series into per-day summaries (all days, each
/// carrying its validity flag).
pub fn aggregate_daily(series: &AlignedSeries, cfg: &SystemConfig) -> Vec<DailySummary> {
    let mut by_day: BTreeMap<NaiveDate, Vec<&AlignedRecord>> = BTreeMap::new();
    for r in &series.records {
        by_day.entry(local_date(&r.timestamp, cfg)).or_default().push(r);
    }
    by_day
        .into_iter()
        .map(|(date, rows)| {
            let n = rows.len() as f64;
            let e_dc_kwh = rows.iter().map(|r| r.e_dc_kwh).sum();
            let e_ac_kwh = rows.iter().map(|r| r.e_ac_kwh).sum();
            let h_poa_kwh_m2 = rows.iter().map(|r| r.gpoa_w_m2).sum::<f64>() / 1000.0;
            let mean_temp_c = rows.iter().map(|r| r.temp_c).sum::<f64>() / n;
            let mean_wind_ms = rows.iter().map(|r| r.wind_ms).sum::<f64>() / n;
            // Cell temperature is only meaningful under irradiance; average
            // over daylight hours when any exist.
            let day_rows: Vec<&AlignedRecord> =
                rows.iter().filter(|r| r.is_daylight).copied().collect();
            let cell_rows: &[&AlignedRecord] = if day_rows.is_empty() { &rows } else { &day_rows };
            let mean_cell_temp_c = cell_rows
                .iter()
                .map(|r| estimate_cell_temperature(r.temp_c, r.gpoa_w_m2, cfg.noct_c))
                .sum::<f64>()
                / cell_rows.len() as f64;
            let mut label_counts: BTreeMap<WeatherLabel, u32> = BTreeMap::new();
            for r in &rows {
                if r.is_daylight {
                    if let Some(l) = r.weather_label {
                        *label_counts.entry(l).or_default() += 1;
                    }
                }
            }
            let dominant_weather_label = label_counts
                .into_iter()
                .max_by_key(|&(_, c)| c)
                .map(|(l, _)| l);
            let poa_transposed_hours = rows
                .iter()
                .filter(|r| r.poa_source == PoaSource::Transposed)
                .count() as u32;
            let valid = series
                .day_validity
                .get(&date)
                .map(|v| v.valid)
                .unwrap_or(false);
            DailySummary {
                date,
                e_dc_kwh,
                e_ac_kwh,
                h_poa_kwh_m2,
                mean_temp_c,
                mean_wind_ms,
                mean_cell_temp_c,
                dominant_weather_label,
                poa_transposed_hours,
                valid,
            }
        })
        .collect()
}

/// Rolls daily summaries up into months. Sums and means cover valid days
/// only; a month with fewer than the policy minimum of valid days is
/// flagged invalid.
pub fn aggregate_monthly(series: &AlignedSeries, cfg: &SystemConfig) -> Vec<MonthlySummary> {
    let daily = aggregate_daily(series, cfg);
    let mut by_month: BTreeMap<(i32, u32), Vec<&DailySummary>> = BTreeMap::new();
    for d in &daily {
        by_month
            .entry((d.date.year(), d.date.month()))
            .or_default()
            .push(d);
    }
    by_month
        .into_iter()
        .map(|((year, month), days)| {
            let valid_days: Vec<_> = days.iter().filter(|d| d.valid).collect();
            let n_valid = valid_days.len() as u32;
            let valid = n_valid >= series.policy.min_valid_days;
            let n = valid_days.len().max(1) as f64;
            let sum = |f: &dyn Fn(&DailySummary) -> f64| -> f64 {
                valid_days.iter().map(|d| f(d)).sum()
            };
            let e_dc_kwh_sum = sum(&|d| d.e_dc_kwh);
            let e_ac_kwh_sum = sum(&|d| d.e_ac_kwh);
            let h_poa_kwh_m2_sum = sum(&|d| d.h_poa_kwh_m2);
            let mut label_counts: BTreeMap<WeatherLabel, u32> = BTreeMap::new();
            for d in &valid_days {
                if let Some(l) = d.dominant_weather_label {
                    *label_counts.entry(l).or_default() += 1;
                }
            }
            MonthlySummary {
                year,
                month,
                n_days: days.len() as u32,
                n_valid_days: n_valid,
                e_dc_kwh_sum,
                e_ac_kwh_sum,
                h_poa_kwh_m2_sum,
                e_dc_kwh_daily_mean: e_dc_kwh_sum / n,
                e_ac_kwh_daily_mean: e_ac_kwh_sum / n,
                h_poa_kwh_m2_daily_mean: h_poa_kwh_m2_sum / n,
                mean_temp_c: sum(&|d| d.mean_temp_c) / n,
                mean_wind_ms: sum(&|d| d.mean_wind_ms) / n,
                mean_cell_temp_c: sum(&|d| d.mean_cell_temp_c) / n,
                dominant_weather_label: label_counts
                    .into_iter()
                    .max_by_key(|&(_, c)| c)
                    .map(|(l, _)| l),
                poa_transposed_hours: valid_days.iter().map(|d| d.poa_transposed_hours).sum(),
                valid,
            }
        })
        .collect()
}

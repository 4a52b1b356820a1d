//! Yield, loss, efficiency, and capacity-factor calculations.
//!
//! Conventions:
//! * Yields (Y_A, Y_R, Y_F) and losses are daily quantities, kWh/kWp/day
//!   (Y_R numerically in hours/day).
//! * PR is Y_F / Y_R x 100. The ratio is oriented so that a lossy system
//!   reads below 100%.
//! * Efficiency denominators use the plane-of-array insolation H_poa over
//!   the gross array area.

use serde::Serialize;

use crate::config::SystemConfig;
use crate::ingest::{MonthlySummary, WeatherLabel};

/// Relative metering tolerance: E_AC exceeding E_DC by more than this is
/// flagged as a metering error rather than rejected.
pub const EPSILON_METER: f64 = 0.005;

/// Y_A = E_DC / P_rated.
pub fn array_yield(e_dc_kwh: f64, p_rated_kwp: f64) -> f64 {
    assert!(p_rated_kwp > 0.0, "rated power must be positive");
    e_dc_kwh / p_rated_kwp
}

/// Y_F = E_AC / P_rated.
pub fn final_yield(e_ac_kwh: f64, p_rated_kwp: f64) -> f64 {
    assert!(p_rated_kwp > 0.0, "rated power must be positive");
    e_ac_kwh / p_rated_kwp
}

/// Y_R = H_poa / G_o, hours of equivalent reference irradiance.
pub fn reference_yield(h_poa_kwh_m2: f64, g_o_kw_m2: f64) -> f64 {
    h_poa_kwh_m2 / g_o_kw_m2
}

/// PR = Y_F / Y_R x 100. `None` when Y_R is zero.
pub fn performance_ratio(y_f: f64, y_r: f64) -> Option<f64> {
    if y_r <= 0.0 {
        return None;
    }
    Some(y_f / y_r * 100.0)
}

/// L_C = Y_R - Y_A. May be negative; callers flag rather than clamp.
pub fn capture_loss(y_r: f64, y_a: f64) -> f64 {
    y_r - y_a
}

/// L_S = Y_A - Y_F.
pub fn system_loss(y_a: f64, y_f: f64) -> f64 {
    y_a - y_f
}

/// CUF = E_AC / (P_rated x hours) x 100 over an explicit hour window.
pub fn cuf_over_hours(e_ac_kwh: f64, p_rated_kwp: f64, hours: f64) -> f64 {
    e_ac_kwh / (p_rated_kwp * hours) * 100.0
}

/// Annual CUF over the generic 8760-hour year.
pub fn cuf(e_ac_annual_kwh: f64, p_rated_kwp: f64) -> f64 {
    cuf_over_hours(e_ac_annual_kwh, p_rated_kwp, 8760.0)
}

/// eta_array = E_DC / (H_poa x A_g) x 100. `None` on zero insolation.
pub fn array_efficiency(e_dc_kwh: f64, h_poa_kwh_m2: f64, area_m2: f64) -> Option<f64> {
    if h_poa_kwh_m2 <= 0.0 || area_m2 <= 0.0 {
        return None;
    }
    Some(e_dc_kwh / (h_poa_kwh_m2 * area_m2) * 100.0)
}

/// eta_inv = E_AC / E_DC x 100. `None` when E_DC is zero.
pub fn inverter_efficiency(e_ac_kwh: f64, e_dc_kwh: f64) -> Option<f64> {
    if e_dc_kwh <= 0.0 {
        return None;
    }
    Some(e_ac_kwh / e_dc_kwh * 100.0)
}

/// eta_sys = E_AC / (H_poa x A_g) x 100.
pub fn system_efficiency(e_ac_kwh: f64, h_poa_kwh_m2: f64, area_m2: f64) -> Option<f64> {
    array_efficiency(e_ac_kwh, h_poa_kwh_m2, area_m2)
}

/// NOCT cell-temperature model: T_cell = T_amb + G_poa (NOCT - 20)/800.
pub fn estimate_cell_temperature(temp_c: f64, gpoa_w_m2: f64, noct_c: f64) -> f64 {
    temp_c + gpoa_w_m2 * (noct_c - 20.0) / 800.0
}

/// Data-quality flags raised while computing a month's metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricFlag {
    /// Fewer valid days than the policy requires; metrics withheld.
    InvalidMonth,
    /// L_S below -epsilon_meter x Y_A: metering inconsistency.
    NegativeSystemLoss,
    /// Negative capture loss (measured POA likely under-reads).
    NegativeCaptureLoss,
    /// PR above 100%.
    PrAboveHundred,
    /// Inverter efficiency above 100% + epsilon_meter.
    InverterAboveHundred,
    /// Zero insolation; ratio metrics undefined.
    ZeroInsolation,
}

/// One row of the monthly metric table. All per-day fields are daily
/// means over the month's valid days.
#[derive(Debug, Clone, Serialize)]
pub struct MonthlyMetrics {
    pub year: i32,
    pub month: u32,
    pub valid: bool,
    pub n_valid_days: u32,
    pub cell_temp_c: f64,
    pub e_dc_kwh: f64,
    pub e_ac_kwh: f64,
    pub y_a: Option<f64>,
    pub y_r: Option<f64>,
    pub y_f: Option<f64>,
    pub l_c: Option<f64>,
    pub l_s: Option<f64>,
    pub pr_pct: Option<f64>,
    pub eta_array_pct: Option<f64>,
    pub eta_inv_pct: Option<f64>,
    pub eta_sys_pct: Option<f64>,
    /// Monthly capacity factor over the month's calendar hours; not the
    /// annual CUF.
    pub capacity_factor_pct: Option<f64>,
    pub e_ac_month_kwh: f64,
    pub dominant_weather_label: Option<WeatherLabel>,
    pub flags: Vec<MetricFlag>,
}

/// Annual roll-up.
#[derive(Debug, Clone, Serialize)]
pub struct AnnualMetrics {
    pub n_months: u32,
    pub n_valid_months: u32,
    pub e_ac_total_kwh: f64,
    pub e_dc_total_kwh: f64,
    pub h_poa_total_kwh_m2: f64,
    pub cuf_pct: f64,
    /// Hour basis actually used for the CUF (8760, or the series' span).
    pub cuf_hours_basis: f64,
    pub mean_y_a: f64,
    pub mean_y_r: f64,
    pub mean_y_f: f64,
    pub mean_l_c: f64,
    pub mean_l_s: f64,
    pub mean_pr_pct: f64,
    pub mean_eta_array_pct: f64,
    pub mean_eta_inv_pct: f64,
    pub mean_eta_sys_pct: f64,
}

fn days_in_month(year: i32, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            if (year % 4 == 0 && year % 100 != 0) || year % 400 == 0 {
                29
            } else {
                28
            }
        }
        _ => unreachable!("month out of range"),
    }
}

/// Computes the metric row for every monthly summary. Invalid months are
/// carried through with flags and no metric values.
pub fn compute_monthly(summaries: &[MonthlySummary], cfg: &SystemConfig) -> Vec<MonthlyMetrics> {
    summaries
        .iter()
        .map(|s| {
            let mut flags = Vec::new();
            if !s.valid {
                flags.push(MetricFlag::InvalidMonth);
                return MonthlyMetrics {
                    year: s.year,
                    month: s.month,
                    valid: false,
                    n_valid_days: s.n_valid_days,
                    cell_temp_c: s.mean_cell_temp_c,
                    e_dc_kwh: s.e_dc_kwh_daily_mean,
                    e_ac_kwh: s.e_ac_kwh_daily_mean,
                    y_a: None,
                    y_r: None,
                    y_f: None,
                    l_c: None,
                    l_s: None,
                    pr_pct: None,
                    eta_array_pct: None,
                    eta_inv_pct: None,
                    eta_sys_pct: None,
                    capacity_factor_pct: None,
                    e_ac_month_kwh: s.e_ac_kwh_sum,
                    dominant_weather_label: s.dominant_weather_label,
                    flags,
                };
            }
            let y_a = array_yield(s.e_dc_kwh_daily_mean, cfg.p_rated_kwp);
            let y_r = reference_yield(s.h_poa_kwh_m2_daily_mean, cfg.g_o_kw_m2);
            let y_f = final_yield(s.e_ac_kwh_daily_mean, cfg.p_rated_kwp);
            let l_c = capture_loss(y_r, y_a);
            let l_s = system_loss(y_a, y_f);
            let pr_pct = performance_ratio(y_f, y_r);
            let eta_array_pct =
                array_efficiency(s.e_dc_kwh_daily_mean, s.h_poa_kwh_m2_daily_mean, cfg.array_area_m2);
            let eta_inv_pct = inverter_efficiency(s.e_ac_kwh_daily_mean, s.e_dc_kwh_daily_mean);
            let eta_sys_pct =
                system_efficiency(s.e_ac_kwh_daily_mean, s.h_poa_kwh_m2_daily_mean, cfg.array_area_m2);

            if l_s < -EPSILON_METER * y_a.max(f64::EPSILON) {
                flags.push(MetricFlag::NegativeSystemLoss);
            }
            if l_c < 0.0 {
                flags.push(MetricFlag::NegativeCaptureLoss);
            }
            match pr_pct {
                Some(pr) if pr > 100.0 => flags.push(MetricFlag::PrAboveHundred),
                None => flags.push(MetricFlag::ZeroInsolation),
                _ => {}
            }
            if let Some(eta) = eta_inv_pct {
                if eta > 100.0 * (1.0 + EPSILON_METER) {
                    flags.push(MetricFlag::InverterAboveHundred);
                }
            }

            let month_hours = days_in_month(s.year, s.month) as f64 * 24.0;
            MonthlyMetrics {
                year: s.year,
                month: s.month,
                valid: true,
                n_valid_days: s.n_valid_days,
                cell_temp_c: s.mean_cell_temp_c,
                e_dc_kwh: s.e_dc_kwh_daily_mean,
                e_ac_kwh: s.e_ac_kwh_daily_mean,
                y_a: Some(y_a),
                y_r: Some(y_r),
                y_f: Some(y_f),
                l_c: Some(l_c),
                l_s: Some(l_s),
                pr_pct,
                eta_array_pct,
                eta_inv_pct,
                eta_sys_pct,
                capacity_factor_pct: Some(cuf_over_hours(
                    s.e_ac_kwh_sum,
                    cfg.p_rated_kwp,
                    month_hours,
                )),
                e_ac_month_kwh: s.e_ac_kwh_sum,
                dominant_weather_label: s.dominant_weather_label,
                flags,
            }
        })
        .collect()
}

/// Annualizes monthly metrics. The CUF hour basis scales with the number
/// of valid months covered (12 valid months = 8760 h) so multi-year or
/// partial series stay comparable.
pub fn compute_annual(monthly: &[MonthlyMetrics], cfg: &SystemConfig) -> Option<AnnualMetrics> {
    let valid: Vec<&MonthlyMetrics> = monthly.iter().filter(|m| m.valid).collect();
    if valid.is_empty() {
        return None;
    }
    let n = valid.len() as f64;
    let e_ac_total_kwh: f64 = valid.iter().map(|m| m.e_ac_month_kwh).sum();
    let e_dc_total_kwh: f64 = valid
        .iter()
        .map(|m| m.e_dc_kwh * m.n_valid_days as f64)
        .sum();
    let h_poa_total_kwh_m2: f64 = valid
        .iter()
        .map(|m| m.y_r.unwrap_or(0.0) * m.n_valid_days as f64)
        .sum();
    let cuf_hours_basis = valid
        .iter()
        .map(|m| days_in_month(m.year, m.month) as f64 * 24.0)
        .sum();
    let mean = |f: &dyn Fn(&MonthlyMetrics) -> f64| -> f64 {
        valid.iter().map(|m| f(m)).sum::<f64>() / n
    };
    Some(AnnualMetrics {
        n_months: monthly.len() as u32,
        n_valid_months: valid.len() as u32,
        e_ac_total_kwh,
        e_dc_total_kwh,
        h_poa_total_kwh_m2,
        cuf_pct: cuf_over_hours(e_ac_total_kwh, cfg.p_rated_kwp, cuf_hours_basis),
        cuf_hours_basis,
        mean_y_a: mean(&|m| m.y_a.unwrap_or(0.0)),
        mean_y_r: mean(&|m| m.y_r.unwrap_or(0.0)),
        mean_y_f: mean(&|m| m.y_f.unwrap_or(0.0)),
        mean_l_c: mean(&|m| m.l_c.unwrap_or(0.0)),
        mean_l_s: mean(&|m| m.l_s.unwrap_or(0.0)),
        mean_pr_pct: mean(&|m| m.pr_pct.unwrap_or(0.0)),
        mean_eta_array_pct: mean(&|m| m.eta_array_pct.unwrap_or(0.0)),
        mean_eta_inv_pct: mean(&|m| m.eta_inv_pct.unwrap_or(0.0)),
        mean_eta_sys_pct: mean(&|m| m.eta_sys_pct.unwrap_or(0.0)),
    })
}

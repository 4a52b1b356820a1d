//! System, finance, and emission configuration.
//!
//! Every physical or financial constant used anywhere in the toolkit lives
//! in one of the three config types here. Validation reports violations as
//! data rather than failing, so a CLI can show all problems at once.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::ConfigError;

/// Site geometry and array/inverter ratings.
///
/// Azimuth convention: degrees clockwise from true north (0 = N, 90 = E,
/// 180 = S). A surface azimuth of 165 deg therefore faces roughly
/// south-southeast.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SystemConfig {
    pub latitude_deg: f64,
    pub longitude_deg: f64,
    pub elevation_m: f64,
    pub utc_offset_h: f64,
    pub tilt_deg: f64,
    pub surface_azimuth_deg: f64,
    pub albedo: f64,
    pub p_rated_kwp: f64,
    pub inverter_rating_kw: f64,
    pub array_area_m2: f64,
    pub module_count: u32,
    pub module_power_wp: f64,
    pub module_eff: f64,
    #[serde(default = "default_g_o")]
    pub g_o_kw_m2: f64,
    #[serde(default = "default_noct")]
    pub noct_c: f64,
}

fn default_g_o() -> f64 {
    1.0
}

fn default_noct() -> f64 {
    45.0
}

impl Default for SystemConfig {
    /// The 2.72 kWp reference system.
    fn default() -> Self {
        SystemConfig {
            latitude_deg: 15.48,
            longitude_deg: 120.65,
            elevation_m: 10.0,
            utc_offset_h: 8.0,
            tilt_deg: 26.0,
            surface_azimuth_deg: 165.0,
            albedo: 0.2,
            p_rated_kwp: 2.72,
            inverter_rating_kw: 3.0,
            array_area_m2: 16.1,
            module_count: 8,
            module_power_wp: 340.0,
            module_eff: 0.1941,
            g_o_kw_m2: 1.0,
            noct_c: 45.0,
        }
    }
}

/// Financial parameters for the lifetime cash-flow analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FinanceConfig {
    pub capital_cost: f64,
    pub annual_om_cost: f64,
    pub tariff_per_kwh: f64,
    pub discount_rate: f64,
    pub lifetime_years: u32,
    pub currency_label: String,
}

/// Default tariff: annual revenue divided by annual grid export
/// (690.59 / 2380 kWh). The source study states revenue but no tariff.
pub const DEFAULT_TARIFF_PER_KWH: f64 = 0.29016;

/// Default discount rate, fitted by bisection so that a 20-year cash-flow
/// schedule (capital 1762.12, net inflow 514.38/yr) has NPV 4197.26.
/// The corresponding 20-year annuity factor is about 11.586.
pub const DEFAULT_DISCOUNT_RATE: f64 = 0.058767626;

impl Default for FinanceConfig {
    fn default() -> Self {
        FinanceConfig {
            capital_cost: 1762.12,
            annual_om_cost: 176.21,
            tariff_per_kwh: DEFAULT_TARIFF_PER_KWH,
            discount_rate: DEFAULT_DISCOUNT_RATE,
            lifetime_years: 20,
            currency_label: "USD".to_string(),
        }
    }
}

/// Grid emission factor and system life-cycle emissions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmissionConfig {
    pub grid_emission_factor_g_per_kwh: f64,
    pub lce_system_tco2: f64,
    pub lifetime_years: u32,
}

impl Default for EmissionConfig {
    fn default() -> Self {
        EmissionConfig {
            grid_emission_factor_g_per_kwh: 480.0,
            lce_system_tco2: 5.4,
            lifetime_years: 20,
        }
    }
}

/// Top-level config document: `system`, `finance`, `emissions`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Config {
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub finance: FinanceConfig,
    #[serde(default)]
    pub emissions: EmissionConfig,
}

/// One violated invariant: the offending field and what went wrong.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

/// Result of [`validate_config`]; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, field: &str, message: &str) {
        if !ok {
            self.violations.push(Violation {
                field: field.to_string(),
                message: message.to_string(),
            });
        }
    }
}

/// Checks every physical invariant of a [`SystemConfig`].
///
/// Pure and idempotent; violations are returned, never raised.
pub fn validate_config(cfg: &SystemConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    let nameplate = cfg.module_count as f64 * cfg.module_power_wp / 1000.0;
    report.check(
        (cfg.p_rated_kwp - nameplate).abs() <= 1e-9,
        "p_rated_kwp",
        &format!(
            "p_rated_kwp {} inconsistent with module_count x module_power_wp = {nameplate} kWp",
            cfg.p_rated_kwp
        ),
    );
    report.check(
        cfg.albedo > 0.0 && cfg.albedo < 1.0,
        "albedo",
        "albedo must lie in (0, 1)",
    );
    report.check(
        (0.0..=90.0).contains(&cfg.tilt_deg),
        "tilt_deg",
        "tilt must lie in [0, 90] degrees",
    );
    report.check(
        (0.0..360.0).contains(&cfg.surface_azimuth_deg),
        "surface_azimuth_deg",
        "surface azimuth must lie in [0, 360) degrees from north",
    );
    report.check(
        (-90.0..=90.0).contains(&cfg.latitude_deg),
        "latitude_deg",
        "latitude must lie in [-90, 90]",
    );
    report.check(
        cfg.array_area_m2 > 0.0,
        "array_area_m2",
        "array area must be positive",
    );
    report.check(
        cfg.g_o_kw_m2 == 1.0,
        "g_o_kw_m2",
        "reference irradiance is fixed at 1.0 kW/m2",
    );
    report.check(
        cfg.p_rated_kwp > 0.0,
        "p_rated_kwp",
        "rated power must be positive",
    );
    report.check(
        cfg.inverter_rating_kw > 0.0,
        "inverter_rating_kw",
        "inverter rating must be positive",
    );
    report.check(
        cfg.module_eff > 0.0 && cfg.module_eff < 1.0,
        "module_eff",
        "module efficiency must lie in (0, 1)",
    );
    report
}

/// Checks the invariants of a [`FinanceConfig`].
pub fn validate_finance(fin: &FinanceConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.check(
        fin.capital_cost >= 0.0,
        "capital_cost",
        "capital cost must be non-negative",
    );
    report.check(
        fin.annual_om_cost >= 0.0,
        "annual_om_cost",
        "O&M cost must be non-negative",
    );
    report.check(
        fin.tariff_per_kwh >= 0.0,
        "tariff_per_kwh",
        "tariff must be non-negative",
    );
    report.check(
        fin.discount_rate >= 0.0 && fin.discount_rate < 1.0,
        "discount_rate",
        "discount rate must lie in [0, 1)",
    );
    report.check(
        fin.lifetime_years >= 1,
        "lifetime_years",
        "lifetime must be at least one year",
    );
    report
}

/// Checks the invariants of an [`EmissionConfig`].
pub fn validate_emissions(em: &EmissionConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.check(
        em.grid_emission_factor_g_per_kwh > 0.0,
        "grid_emission_factor_g_per_kwh",
        "grid emission factor must be positive",
    );
    report.check(
        em.lce_system_tco2 > 0.0,
        "lce_system_tco2",
        "system life-cycle emissions must be positive",
    );
    report.check(
        em.lifetime_years > 0,
        "lifetime_years",
        "lifetime must be positive",
    );
    report
}

/// Validates all three sections at once; fields are prefixed by section.
pub fn validate_all(cfg: &Config) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (prefix, sub) in [
        ("system", validate_config(&cfg.system)),
        ("finance", validate_finance(&cfg.finance)),
        ("emissions", validate_emissions(&cfg.emissions)),
    ] {
        for v in sub.violations {
            report.violations.push(Violation {
                field: format!("{prefix}.{}", v.field),
                message: v.message,
            });
        }
    }
    report
}

const SYSTEM_KEYS: &[&str] = &[
    "latitude_deg",
    "longitude_deg",
    "elevation_m",
    "utc_offset_h",
    "tilt_deg",
    "surface_azimuth_deg",
    "albedo",
    "p_rated_kwp",
    "inverter_rating_kw",
    "array_area_m2",
    "module_count",
    "module_power_wp",
    "module_eff",
    "g_o_kw_m2",
    "noct_c",
];

const FINANCE_KEYS: &[&str] = &[
    "capital_cost",
    "annual_om_cost",
    "tariff_per_kwh",
    "discount_rate",
    "lifetime_years",
    "currency_label",
];

const EMISSION_KEYS: &[&str] = &[
    "grid_emission_factor_g_per_kwh",
    "lce_system_tco2",
    "lifetime_years",
];

/// Parses the JSON config document.
///
/// In strict mode (the default) unknown keys anywhere in the document are
/// an error; `lenient` ignores them.
pub fn parse_config(json: &str, lenient: bool) -> Result<Config, ConfigError> {
    let value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| ConfigError::Parse(e.to_string()))?;
    if !lenient {
        let obj = value
            .as_object()
            .ok_or_else(|| ConfigError::Parse("config root must be a JSON object".into()))?;
        let top: BTreeSet<&str> = ["system", "finance", "emissions"].into();
        for key in obj.keys() {
            if !top.contains(key.as_str()) {
                return Err(ConfigError::UnknownKey(key.clone()));
            }
        }
        for (section, allowed) in [
            ("system", SYSTEM_KEYS),
            ("finance", FINANCE_KEYS),
            ("emissions", EMISSION_KEYS),
        ] {
            if let Some(sec) = obj.get(section) {
                let sec = sec.as_object().ok_or_else(|| {
                    ConfigError::Parse(format!("`{section}` must be a JSON object"))
                })?;
                for key in sec.keys() {
                    if !allowed.contains(&key.as_str()) {
                        return Err(ConfigError::UnknownKey(format!("{section}.{key}")));
                    }
                }
            }
        }
    }
    serde_json::from_value(value).map_err(|e| ConfigError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_constants_validate_clean() {
        let report = validate_config(&SystemConfig::default());
        assert!(report.is_valid(), "violations: {:?}", report.violations);
        assert!(validate_finance(&FinanceConfig::default()).is_valid());
        assert!(validate_emissions(&EmissionConfig::default()).is_valid());
    }

    #[test]
    fn bad_albedo_is_flagged() {
        let cfg = SystemConfig {
            albedo: 1.5,
            ..SystemConfig::default()
        };
        let report = validate_config(&cfg);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].field, "albedo");
    }

    #[test]
    fn nameplate_consistency_is_flagged() {
        let cfg = SystemConfig {
            p_rated_kwp: 2.5,
            ..SystemConfig::default()
        };
        let report = validate_config(&cfg);
        assert!(report
            .violations
            .iter()
            .any(|v| v.field == "p_rated_kwp" && v.message.contains("inconsistent")));
    }

    #[test]
    fn validation_is_idempotent() {
        let cfg = SystemConfig {
            albedo: -0.1,
            tilt_deg: 120.0,
            ..SystemConfig::default()
        };
        assert_eq!(validate_config(&cfg), validate_config(&cfg));
    }

    #[test]
    fn json_round_trip_validates_identically() {
        let cfg = Config::default();
        let json = serde_json::to_string(&cfg).unwrap();
        let back = parse_config(&json, false).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(validate_all(&cfg), validate_all(&back));
    }

    #[test]
    fn strict_mode_rejects_unknown_keys() {
        let json = r#"{"system": {"latitude_deg": 1.0, "wat": 3}}"#;
        match parse_config(json, false) {
            Err(ConfigError::UnknownKey(k)) => assert_eq!(k, "system.wat"),
            other => panic!("expected unknown-key error, got {other:?}"),
        }
    }

    #[test]
    fn lenient_mode_ignores_unknown_keys() {
        let json = r#"{"finance": {"tariff_per_kwh": 0.3}, "extra": {}}"#;
        let cfg = parse_config(json, true).unwrap();
        assert_eq!(cfg.finance.tariff_per_kwh, 0.3);
    }

    #[test]
    fn missing_sections_take_defaults() {
        let cfg = parse_config("{}", false).unwrap();
        assert_eq!(cfg, Config::default());
    }
}

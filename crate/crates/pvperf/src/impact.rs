//! Economic (NPV, LCOE, ROI, payback, savings) and environmental (CO2
//! balance) evaluation of the system over its lifetime.
//!
//! Revenue follows the net-metering basis: grid export times tariff,
//! credited against the consumer's bill. Self-consumption value is out of
//! scope.

use serde::Serialize;

use crate::config::{EmissionConfig, FinanceConfig};
use crate::error::ImpactError;

/// One year of the lifetime cash flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CashFlowYear {
    pub year: u32,
    pub outflow: f64,
    pub inflow: f64,
    pub net: f64,
}

/// Year-indexed schedule, year 0 carrying the capital outlay.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CashFlowSchedule {
    pub years: Vec<CashFlowYear>,
}

impl CashFlowSchedule {
    pub fn nets(&self) -> Vec<f64> {
        self.years.iter().map(|y| y.net).collect()
    }
}

/// Builds the lifetime schedule: capital at year 0, then constant O&M
/// against export revenue, optionally degraded by `(1 - d)^t`.
pub fn build_schedule(
    fin: &FinanceConfig,
    annual_grid_export_kwh: f64,
    degradation_rate: f64,
) -> CashFlowSchedule {
    let mut years = Vec::with_capacity(fin.lifetime_years as usize + 1);
    years.push(CashFlowYear {
        year: 0,
        outflow: fin.capital_cost,
        inflow: 0.0,
        net: -fin.capital_cost,
    });
    for t in 1..=fin.lifetime_years {
        let energy = annual_grid_export_kwh * (1.0 - degradation_rate).powi(t as i32);
        let inflow = energy * fin.tariff_per_kwh;
        years.push(CashFlowYear {
            year: t,
            outflow: fin.annual_om_cost,
            inflow,
            net: inflow - fin.annual_om_cost,
        });
    }
    CashFlowSchedule { years }
}

/// NPV of the schedule: sum of net_t / (1 + rate)^t.
pub fn npv(schedule: &CashFlowSchedule, rate: f64) -> Result<f64, ImpactError> {
    if rate <= -1.0 {
        return Err(ImpactError::InvalidRate(rate));
    }
    Ok(schedule
        .years
        .iter()
        .map(|y| y.net / (1.0 + rate).powi(y.year as i32))
        .sum())
}

/// LCOE: discounted lifetime cost over discounted lifetime energy.
pub fn lcoe(
    fin: &FinanceConfig,
    annual_energy_kwh: f64,
    rate: f64,
) -> Result<f64, ImpactError> {
    if rate <= -1.0 {
        return Err(ImpactError::InvalidRate(rate));
    }
    let mut cost = fin.capital_cost;
    let mut energy = 0.0;
    for t in 1..=fin.lifetime_years {
        let df = (1.0 + rate).powi(t as i32);
        cost += fin.annual_om_cost / df;
        energy += annual_energy_kwh / df;
    }
    if energy <= 0.0 {
        return Err(ImpactError::ZeroEnergy);
    }
    Ok(cost / energy)
}

/// ROI = NPV benefits over capital, percent.
pub fn roi(npv_benefits: f64, capital: f64) -> Result<f64, ImpactError> {
    if capital <= 0.0 {
        return Err(ImpactError::NonPositiveCapital(capital));
    }
    Ok(npv_benefits / capital * 100.0)
}

/// Fractional payback in years, or `None` when the cumulative discounted
/// net never reaches zero within the schedule.
///
/// The crossing year is linearly interpolated; rate 0 gives simple payback.
pub fn payback(schedule: &CashFlowSchedule, rate: f64) -> Result<Option<f64>, ImpactError> {
    if rate <= -1.0 {
        return Err(ImpactError::InvalidRate(rate));
    }
    let mut cumulative = 0.0;
    for y in &schedule.years {
        let prev = cumulative;
        cumulative += y.net / (1.0 + rate).powi(y.year as i32);
        if cumulative >= 0.0 {
            if y.year == 0 {
                return Ok(Some(0.0));
            }
            let step = cumulative - prev;
            let fraction = if step > 0.0 { -prev / step } else { 0.0 };
            return Ok(Some(y.year as f64 - 1.0 + fraction));
        }
    }
    Ok(None)
}

/// Monthly net-metering credit: export times tariff.
pub fn monthly_savings(monthly_export_kwh: f64, tariff: f64) -> f64 {
    monthly_export_kwh * tariff
}

/// CO2 balance: gross avoided emissions per year and the net figure per
/// kWp-year after amortizing the system's life-cycle emissions.
pub fn co2_balance(
    em: &EmissionConfig,
    annual_energy_kwh: f64,
    p_rated_kwp: f64,
) -> Result<(f64, f64), ImpactError> {
    if em.lifetime_years == 0 {
        return Err(ImpactError::ZeroLifetime);
    }
    let gross_t_per_yr = annual_energy_kwh * em.grid_emission_factor_g_per_kwh / 1e6;
    let net_t_per_kwp_yr =
        (gross_t_per_yr - em.lce_system_tco2 / em.lifetime_years as f64) / p_rated_kwp;
    Ok((gross_t_per_yr, net_t_per_kwp_yr))
}

/// Full economic + environmental result block.
#[derive(Debug, Clone, Serialize)]
pub struct ImpactResult {
    pub npv_benefits: f64,
    pub lcoe: f64,
    pub roi_pct: f64,
    pub payback_simple_years: Option<f64>,
    pub payback_discounted_years: Option<f64>,
    pub monthly_savings: f64,
    pub annual_revenue: f64,
    pub gross_co2_avoided_t_per_yr: f64,
    pub net_co2_avoided_t_per_kwp_yr: f64,
    pub discount_rate: f64,
    pub tariff_per_kwh: f64,
    pub currency_label: String,
    /// Values reported by the source study; its 6-year payback and
    /// 0.379 tCO2/kWp/yr are not derivable from its stated inputs and are
    /// shown for comparison only.
    pub reference: ReferenceImpact,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReferenceImpact {
    pub npv: f64,
    pub lcoe: f64,
    pub roi_pct: f64,
    pub payback_years: f64,
    pub monthly_savings: f64,
    pub net_co2_t_per_kwp_yr: f64,
}

pub const REFERENCE_IMPACT: ReferenceImpact = ReferenceImpact {
    npv: 4197.26,
    lcoe: 0.088,
    roi_pct: 238.2,
    payback_years: 6.0,
    monthly_savings: 57.55,
    net_co2_t_per_kwp_yr: 0.379,
};

/// Computes the whole impact block from annual figures.
pub fn evaluate(
    fin: &FinanceConfig,
    em: &EmissionConfig,
    annual_energy_kwh: f64,
    annual_grid_export_kwh: f64,
    p_rated_kwp: f64,
    degradation_rate: f64,
) -> Result<ImpactResult, ImpactError> {
    let schedule = build_schedule(fin, annual_grid_export_kwh, degradation_rate);
    let npv_benefits = npv(&schedule, fin.discount_rate)?;
    let lcoe_value = lcoe(fin, annual_energy_kwh, fin.discount_rate)?;
    let roi_pct = roi(npv_benefits, fin.capital_cost)?;
    let payback_simple_years = payback(&schedule, 0.0)?;
    let payback_discounted_years = payback(&schedule, fin.discount_rate)?;
    let monthly = monthly_savings(annual_grid_export_kwh / 12.0, fin.tariff_per_kwh);
    let (gross, net) = co2_balance(em, annual_energy_kwh, p_rated_kwp)?;
    Ok(ImpactResult {
        npv_benefits,
        lcoe: lcoe_value,
        roi_pct,
        payback_simple_years,
        payback_discounted_years,
        monthly_savings: monthly,
        annual_revenue: annual_grid_export_kwh * fin.tariff_per_kwh,
        gross_co2_avoided_t_per_yr: gross,
        net_co2_avoided_t_per_kwp_yr: net,
        discount_rate: fin.discount_rate,
        tariff_per_kwh: fin.tariff_per_kwh,
        currency_label: fin.currency_label.clone(),
        reference: REFERENCE_IMPACT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DEFAULT_DISCOUNT_RATE;

    fn fin() -> FinanceConfig {
        FinanceConfig::default()
    }

    #[test]
    fn schedule_shape_and_revenue() {
        let s = build_schedule(&fin(), 2380.0, 0.0);
        assert_eq!(s.years.len(), 21);
        assert_eq!(s.years[0].net, -1762.12);
        let revenue = s.years[1].inflow;
        assert!((revenue - 690.58).abs() < 0.01, "revenue {revenue}");
    }

    #[test]
    fn zero_export_means_zero_inflows() {
        let s = build_schedule(&fin(), 0.0, 0.0);
        assert!(s.years.iter().all(|y| y.inflow == 0.0));
    }

    #[test]
    fn full_degradation_kills_inflows_after_year_one() {
        let s = build_schedule(&fin(), 2380.0, 1.0);
        assert!(s.years.iter().skip(1).all(|y| y.inflow == 0.0));
    }

    fn hand_schedule(nets: &[f64]) -> CashFlowSchedule {
        CashFlowSchedule {
            years: nets
                .iter()
                .enumerate()
                .map(|(i, &net)| CashFlowYear {
                    year: i as u32,
                    outflow: if net < 0.0 { -net } else { 0.0 },
                    inflow: if net > 0.0 { net } else { 0.0 },
                    net,
                })
                .collect(),
        }
    }

    #[test]
    fn npv_rate_zero_is_plain_sum() {
        let s = hand_schedule(&[-100.0, 60.0, 60.0]);
        assert_eq!(npv(&s, 0.0).unwrap(), 20.0);
    }

    #[test]
    fn npv_rejects_rate_at_or_below_minus_one() {
        let s = hand_schedule(&[-100.0, 60.0]);
        assert!(npv(&s, -1.0).is_err());
    }

    #[test]
    fn reference_cashflow_reproduces_npv_and_lcoe() {
        let s = build_schedule(&fin(), 2380.0, 0.0);
        let value = npv(&s, DEFAULT_DISCOUNT_RATE).unwrap();
        assert!((value - 4197.26).abs() < 25.0, "npv {value}");
        let l = lcoe(&fin(), 3699.0, DEFAULT_DISCOUNT_RATE).unwrap();
        assert!((l - 0.088).abs() < 0.003, "lcoe {l}");
    }

    #[test]
    fn lcoe_degenerate_and_homogeneity() {
        let free = FinanceConfig {
            capital_cost: 0.0,
            annual_om_cost: 0.0,
            ..fin()
        };
        assert_eq!(lcoe(&free, 1000.0, 0.0).unwrap(), 0.0);
        let base = lcoe(&fin(), 3699.0, 0.05).unwrap();
        let doubled = FinanceConfig {
            capital_cost: fin().capital_cost * 2.0,
            annual_om_cost: fin().annual_om_cost * 2.0,
            ..fin()
        };
        assert!((lcoe(&doubled, 3699.0, 0.05).unwrap() - 2.0 * base).abs() < 1e-12);
        assert!(lcoe(&fin(), 0.0, 0.05).is_err());
    }

    #[test]
    fn roi_identities() {
        assert!((roi(4197.26, 1762.12).unwrap() - 238.19).abs() < 0.05);
        assert_eq!(roi(0.0, 100.0).unwrap(), 0.0);
        assert_eq!(roi(50.0, 50.0).unwrap(), 100.0);
        assert!(roi(100.0, 0.0).is_err());
    }

    #[test]
    fn payback_interpolation() {
        let s = hand_schedule(&[-100.0, 50.0, 50.0, 50.0]);
        assert_eq!(payback(&s, 0.0).unwrap(), Some(2.0));
        let s = hand_schedule(&[-100.0, 40.0, 80.0]);
        // Crosses during year 2: 60 remaining over an 80 inflow.
        assert_eq!(payback(&s, 0.0).unwrap(), Some(1.75));
        let s = hand_schedule(&[-100.0, -10.0, -5.0]);
        assert_eq!(payback(&s, 0.0).unwrap(), None);
    }

    #[test]
    fn simple_payback_not_later_than_discounted() {
        let s = build_schedule(&fin(), 2380.0, 0.0);
        let simple = payback(&s, 0.0).unwrap().unwrap();
        let discounted = payback(&s, DEFAULT_DISCOUNT_RATE).unwrap().unwrap();
        assert!(simple <= discounted);
    }

    #[test]
    fn monthly_savings_examples() {
        let v = monthly_savings(198.33, 0.29016);
        assert!((v - 57.55).abs() < 0.01, "savings {v}");
        assert_eq!(monthly_savings(0.0, 0.29016), 0.0);
        assert_eq!(monthly_savings(2.0 * 198.33, 0.29016), 2.0 * v);
    }

    #[test]
    fn co2_balance_examples() {
        let em = EmissionConfig::default();
        let (gross, net) = co2_balance(&em, 3699.0, 2.72).unwrap();
        assert!((gross - 1.776).abs() < 0.001, "gross {gross}");
        assert!((net - 0.553).abs() < 0.001, "net {net}");
        let (gross0, net0) = co2_balance(&em, 0.0, 2.72).unwrap();
        assert_eq!(gross0, 0.0);
        assert!((net0 - (-5.4 / 20.0 / 2.72)).abs() < 1e-12);
        let bad = EmissionConfig {
            lifetime_years: 0,
            ..em
        };
        assert!(co2_balance(&bad, 3699.0, 2.72).is_err());
    }
}

//! Property-based invariants across the library's pure functions.

use chrono::{TimeZone, Utc};
use proptest::prelude::*;

use pvperf::config::{FinanceConfig, SystemConfig};
use pvperf::{impact, metrics, report, solar, weather};

fn arb_sun() -> impl Strategy<Value = solar::SunPosition> {
    (0.0..180.0f64, 0.0..360.0f64).prop_map(|(zenith, azimuth)| solar::SunPosition {
        zenith_deg: zenith,
        azimuth_deg: azimuth,
        declination_deg: 0.0,
        hour_angle_deg: 0.0,
        extraterrestrial_normal_w_m2: 1367.0,
    })
}

proptest! {
    /// Transposition is degree-1 homogeneous in (GHI, DNI, DHI).
    #[test]
    fn transpose_homogeneous(
        sun in arb_sun(),
        ghi in 0.0..1200.0f64,
        dni in 0.0..1100.0f64,
        dhi in 0.0..600.0f64,
        k in 0.0..8.0f64,
    ) {
        let cfg = SystemConfig::default();
        let base = solar::transpose_poa(ghi, dni, dhi, &sun, &cfg);
        let scaled = solar::transpose_poa(k * ghi, k * dni, k * dhi, &sun, &cfg);
        prop_assert!((scaled - k * base).abs() <= 1e-9 * (1.0 + k * base.abs()));
    }

    /// All transposition coefficients are non-negative, so POA is
    /// monotone in every irradiance component.
    #[test]
    fn transpose_monotone(
        sun in arb_sun(),
        ghi in 0.0..1200.0f64,
        dni in 0.0..1100.0f64,
        dhi in 0.0..600.0f64,
        bump in 0.0..300.0f64,
    ) {
        let cfg = SystemConfig::default();
        let base = solar::transpose_poa(ghi, dni, dhi, &sun, &cfg);
        prop_assert!(solar::transpose_poa(ghi + bump, dni, dhi, &sun, &cfg) >= base);
        prop_assert!(solar::transpose_poa(ghi, dni + bump, dhi, &sun, &cfg) >= base);
        prop_assert!(solar::transpose_poa(ghi, dni, dhi + bump, &sun, &cfg) >= base);
    }

    /// Solar position always lands in its documented ranges, and the
    /// declination stays within the tropics.
    #[test]
    fn sun_position_ranges(
        lat in -89.0..89.0f64,
        lon in -180.0..180.0f64,
        minutes in 0i64..(3660 * 24 * 60),
    ) {
        let t = Utc.with_ymd_and_hms(2018, 1, 1, 0, 0, 0).unwrap()
            + chrono::Duration::minutes(minutes);
        let sun = solar::sun_position_at(lat, lon, t);
        prop_assert!((0.0..=180.0).contains(&sun.zenith_deg));
        prop_assert!((0.0..360.0).contains(&sun.azimuth_deg));
        prop_assert!(sun.declination_deg.abs() <= 23.55);
        prop_assert!((-180.0..=180.0).contains(&sun.hour_angle_deg));
    }

    /// Clearness index is clamped to [0, 1.2] whenever defined.
    #[test]
    fn clearness_index_bounded(sun in arb_sun(), ghi in 0.0..1500.0f64) {
        if let Some(kt) = solar::clearness_index(ghi, &sun) {
            prop_assert!((0.0..=1.2).contains(&kt));
        }
    }

    /// Pearson r lies in [-1, 1] and is symmetric in its arguments.
    #[test]
    fn pearson_bounded_and_symmetric(
        pairs in proptest::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 2..60),
    ) {
        let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        if let Some(r) = weather::pearson(&xs, &ys) {
            prop_assert!((-1.0..=1.0).contains(&r), "r = {r}");
            let flipped = weather::pearson(&ys, &xs).unwrap();
            prop_assert!((r - flipped).abs() <= 1e-12);
        }
    }

    /// PR is invariant when both yields scale together, and the loss
    /// chain closes: L_C + L_S = Y_R - Y_F.
    #[test]
    fn yield_identities(
        e_dc in 0.1..20.0f64,
        inv_eff in 0.5..1.0f64,
        y_r in 0.5..8.0f64,
        alpha in 0.1..10.0f64,
    ) {
        let p = 2.72;
        let e_ac = e_dc * inv_eff;
        let y_a = metrics::array_yield(e_dc, p);
        let y_f = metrics::final_yield(e_ac, p);
        let pr = metrics::performance_ratio(y_f, y_r).unwrap();
        let pr_scaled = metrics::performance_ratio(alpha * y_f, alpha * y_r).unwrap();
        prop_assert!((pr - pr_scaled).abs() <= 1e-9 * pr.abs());

        let l_c = metrics::capture_loss(y_r, y_a);
        let l_s = metrics::system_loss(y_a, y_f);
        prop_assert!((l_c + l_s - (y_r - y_f)).abs() <= 1e-12);
    }

    /// The annual CUF is the 8760-hour special case of the general form.
    #[test]
    fn cuf_special_case(e in 0.0..1e5f64, p in 0.5..10.0f64) {
        let a = metrics::cuf(e, p);
        let b = metrics::cuf_over_hours(e, p, 8760.0);
        prop_assert!((a - b).abs() <= 1e-12);
    }

    /// Cell temperature equals ambient at zero irradiance and rises
    /// linearly with it.
    #[test]
    fn cell_temperature_monotone(
        t_amb in -10.0..45.0f64,
        g in 0.0..1200.0f64,
        bump in 0.0..300.0f64,
    ) {
        prop_assert_eq!(metrics::estimate_cell_temperature(t_amb, 0.0, 45.0), t_amb);
        let low = metrics::estimate_cell_temperature(t_amb, g, 45.0);
        let high = metrics::estimate_cell_temperature(t_amb, g + bump, 45.0);
        prop_assert!(high >= low);
    }

    /// NPV at rate zero is the plain sum of nets; raising the rate never
    /// raises the NPV of a capital-first schedule.
    #[test]
    fn npv_properties(
        export in 100.0..5000.0f64,
        r1 in 0.0..0.3f64,
        r2 in 0.0..0.3f64,
    ) {
        let fin = FinanceConfig::default();
        let schedule = impact::build_schedule(&fin, export, 0.0);
        let npv0 = impact::npv(&schedule, 0.0).unwrap();
        let sum: f64 = schedule.nets().iter().sum();
        prop_assert!((npv0 - sum).abs() <= 1e-6);

        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let net = export * fin.tariff_per_kwh - fin.annual_om_cost;
        if net > 0.0 {
            let v_lo = impact::npv(&schedule, lo).unwrap();
            let v_hi = impact::npv(&schedule, hi).unwrap();
            prop_assert!(v_hi <= v_lo + 1e-9);
        }
    }

    /// Any payback the schedule reports lies inside the lifetime, and a
    /// schedule with no positive nets reports none.
    #[test]
    fn payback_in_range(export in 100.0..5000.0f64, rate in 0.0..0.3f64) {
        let fin = FinanceConfig::default();
        let schedule = impact::build_schedule(&fin, export, 0.0);
        if let Some(years) = impact::payback(&schedule, rate).unwrap() {
            prop_assert!((0.0..=fin.lifetime_years as f64).contains(&years));
        }
    }

    /// Four-significant-digit rounding is idempotent, sign-preserving,
    /// and within half a unit in the fourth digit.
    #[test]
    fn round_sig4_contract(x in -1e9..1e9f64) {
        let r = report::round_sig4(x);
        prop_assert_eq!(report::round_sig4(r), r);
        prop_assert!(r.signum() == x.signum() || x == 0.0 || r == 0.0);
        if x != 0.0 {
            let ulp4 = 10f64.powf(x.abs().log10().floor() - 3.0);
            prop_assert!((r - x).abs() <= 0.5 * ulp4 + 1e-12 * x.abs());
        }
    }
}

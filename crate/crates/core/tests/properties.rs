use fdsat::duplexing::Breakeven;
use fdsat::geometry::{cartesian_to_geodetic, geodetic_to_cartesian, GeodeticPosition};
use fdsat::linkbudget::fspl_db;
use fdsat::scenario::{assess, compare_at, resolve_geometry, sweep_sic_with_threads, Scenario};
use fdsat::usecases::{default_scenario, UseCaseId};
use proptest::prelude::*;

fn fu_ud() -> Scenario {
    default_scenario(UseCaseId::FuUd).load().unwrap()
}

proptest! {
    #[test]
    fn fspl_scales_twenty_db_per_decade(d in 1.0f64..40_000.0, f in 0.1f64..300.0) {
        let base = fspl_db(d, f).unwrap();
        prop_assert!((fspl_db(10.0 * d, f).unwrap() - base - 20.0).abs() < 1e-9);
        prop_assert!((fspl_db(d, 10.0 * f).unwrap() - base - 20.0).abs() < 1e-9);
        prop_assert!(fspl_db(d * 1.01, f).unwrap() > base);
    }

    #[test]
    fn geodetic_round_trip(lat in -89.9f64..89.9, lon in -179.9f64..179.9, alt in 0.0f64..2000.0) {
        let p = GeodeticPosition::new(lat, lon, alt).unwrap();
        let back = cartesian_to_geodetic(&geodetic_to_cartesian(&p).unwrap());
        prop_assert!((back.lat_deg - lat).abs() < 1e-9);
        prop_assert!((back.lon_deg - lon).abs() < 1e-9);
        prop_assert!((back.alt_km - alt).abs() < 1e-9);
    }

    #[test]
    fn scenario_toml_round_trip(sic in 0.0f64..150.0, bw in 1e5f64..1e9, t in 100.0f64..1000.0) {
        let mut s = fu_ud().with_sic(sic);
        s.env.bandwidth_hz = bw;
        s.env.temperature_k = t;
        let again = Scenario::from_toml_str(&s.to_toml_string()).unwrap();
        prop_assert_eq!(s, again);
    }

    #[test]
    fn gain_non_decreasing_in_sic(a in 0.0f64..150.0, b in 0.0f64..150.0) {
        let s = fu_ud();
        let g = resolve_geometry(&s).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let glo = compare_at(&s, &g, lo).unwrap().gain_percent;
        let ghi = compare_at(&s, &g, hi).unwrap().gain_percent;
        prop_assert!(ghi >= glo);
    }
}

#[test]
fn breakeven_brackets_zero_gain() {
    for id in [UseCaseId::FuUd, UseCaseId::UuFd, UseCaseId::Satl] {
        let s = default_scenario(id).load().unwrap();
        let r = assess(&s).unwrap();
        let Breakeven::Db(x) = r.sic_breakeven_db else {
            panic!("{id}: break-even expected within range")
        };
        let g = &r.geometry;
        assert!(compare_at(&s, g, x).unwrap().gain_percent >= 0.0, "{id}");
        assert!(
            compare_at(&s, g, x - 0.02).unwrap().gain_percent < 0.0,
            "{id}"
        );
    }
}

#[test]
fn sweep_independent_of_thread_count() {
    let s = fu_ud();
    let values: Vec<f64> = (0..64).map(|i| i as f64 * 2.5).collect();
    let one = sweep_sic_with_threads(&s, &values, 1).unwrap();
    let many = sweep_sic_with_threads(&s, &values, 4).unwrap();
    let auto = sweep_sic_with_threads(&s, &values, 0).unwrap();
    assert_eq!(one, many);
    assert_eq!(one, auto);
}

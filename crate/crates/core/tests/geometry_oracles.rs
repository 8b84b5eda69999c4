use fdsat::geometry::{
    best_pass, elevation_and_range, passes, ConstellationSpec, GeodeticPosition, Propagator,
    ScanWindow,
};

fn lux() -> GeodeticPosition {
    GeodeticPosition::new(49.6266, 6.15898, 0.0).unwrap()
}

fn vigo() -> GeodeticPosition {
    GeodeticPosition::new(42.16951, -8.68318, 0.0).unwrap()
}

/// Exhaustive 1 s search for the satellite and epoch maximising the lower of
/// the two elevations.
fn brute_force(
    spec: &ConstellationSpec,
    obs: &[GeodeticPosition],
    seconds: usize,
) -> (usize, f64, f64) {
    let prop = Propagator::new(spec).unwrap();
    let mut best = (usize::MAX, f64::NAN, f64::NEG_INFINITY);
    for t in 0..=seconds {
        for id in 0..prop.len() {
            let p = prop.earth_fixed(id, t as f64);
            let m = obs
                .iter()
                .map(|o| elevation_and_range(o, &p).unwrap().elevation_deg)
                .fold(f64::INFINITY, f64::min);
            if m > best.2 {
                best = (id, t as f64, m);
            }
        }
    }
    best
}

#[test]
fn best_pass_matches_one_second_brute_force() {
    let spec = ConstellationSpec::iridium();
    let obs = [lux(), vigo()];
    let (id, t, m) = brute_force(&spec, &obs, 3 * 3600);
    let w = ScanWindow::new(0.0, 3.0 * 3600.0, 10.0).unwrap();
    let bp = best_pass(&spec, &obs, &w, 10.0).unwrap();
    assert_eq!(bp[0].satellite_id, id);
    assert_eq!(bp[0].epoch_s, t);
    let got = bp
        .iter()
        .map(|p| p.elevation_deg)
        .fold(f64::INFINITY, f64::min);
    assert!((got - m).abs() < 1e-12);
}

#[test]
fn best_pass_day_reference() {
    // frozen from an independent 1 s scan of the full day
    let spec = ConstellationSpec::iridium();
    let w = ScanWindow::new(0.0, 86_400.0, 10.0).unwrap();
    let bp = best_pass(&spec, &[lux(), vigo()], &w, 10.0).unwrap();
    assert_eq!(bp[0].satellite_id, 49);
    assert_eq!(bp[0].epoch_s, 71_351.0);
    assert!((bp[0].elevation_deg - 42.9683522258489).abs() < 1e-6);
    assert!((bp[0].slant_range_km - 1080.1010275743595).abs() < 1e-6);
    assert!((bp[1].elevation_deg - 42.89166021528452).abs() < 1e-6);
    assert!((bp[1].slant_range_km - 1081.3460262073559).abs() < 1e-6);
}

#[test]
fn passes_cover_every_visible_sample() {
    let spec = ConstellationSpec::iridium();
    let w = ScanWindow::new(0.0, 7200.0, 30.0).unwrap();
    let list = passes(&spec, &lux(), &w, 10.0).unwrap();
    let prop = Propagator::new(&spec).unwrap();
    let site = lux();
    for k in 0..=240 {
        let t = k as f64 * 30.0;
        for id in 0..prop.len() {
            let el = elevation_and_range(&site, &prop.earth_fixed(id, t))
                .unwrap()
                .elevation_deg;
            let covered = list
                .iter()
                .any(|p| p.satellite_id == id && p.start_s <= t && t <= p.end_s);
            assert_eq!(el >= 10.0, covered, "sat {id} at {t}");
        }
    }
}

//! Circular-orbit constellation geometry on a spherical Earth.
//!
//! Positions are Earth-centred. [`propagate`] returns Earth-fixed coordinates
//! (the frame rotates at the sidereal rate and coincides with the inertial
//! frame at the constellation epoch). [`Propagator::inertial`] exposes the
//! non-rotating positions.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};

/// Mean spherical Earth radius.
pub const EARTH_RADIUS_KM: f64 = 6371.0;
/// Geocentric gravitational constant.
pub const MU_EARTH_KM3_S2: f64 = 398600.4418;
/// Length of the sidereal day.
pub const SIDEREAL_DAY_S: f64 = 86164.0905;
/// Earth rotation rate in degrees per second.
pub const EARTH_ROTATION_DEG_S: f64 = 360.0 / SIDEREAL_DAY_S;

/// Iridium-like default inclination.
pub const DEFAULT_INCLINATION_DEG: f64 = 86.4;
/// Default right-ascension span across all planes (star pattern).
pub const DEFAULT_RAAN_SPREAD_DEG: f64 = 180.0;

/// Orbital shell definition: `planes` equally spaced circular planes with
/// `sats_per_plane` equally spaced slots each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstellationSpec {
    pub altitude_km: f64,
    pub planes: usize,
    pub sats_per_plane: usize,
    pub inclination_deg: f64,
    /// Total right-ascension span; plane `k` sits at `k * raan_spread_deg / planes`.
    pub raan_spread_deg: f64,
    /// Anomaly stagger between consecutive planes.
    pub phase_offset_deg: f64,
    /// Time origin of the constellation.
    pub epoch_s: f64,
}

impl ConstellationSpec {
    /// A shell with the Iridium-like defaults for inclination, RAAN spread and
    /// inter-plane phasing.
    pub fn new(altitude_km: f64, planes: usize, sats_per_plane: usize) -> Self {
        ConstellationSpec {
            altitude_km,
            planes,
            sats_per_plane,
            inclination_deg: DEFAULT_INCLINATION_DEG,
            raan_spread_deg: DEFAULT_RAAN_SPREAD_DEG,
            phase_offset_deg: default_phase_offset_deg(planes, sats_per_plane),
            epoch_s: 0.0,
        }
    }

    /// 66 satellites in 6 planes at 780 km.
    pub fn iridium() -> Self {
        ConstellationSpec::new(780.0, 6, 11)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("constellation.altitude_km", self.altitude_km)?;
        if self.planes == 0 {
            return Err(Error::validation("constellation.planes", "must be >= 1"));
        }
        if self.sats_per_plane == 0 {
            return Err(Error::validation(
                "constellation.sats_per_plane",
                "must be >= 1",
            ));
        }
        if !(0.0..=180.0).contains(&self.inclination_deg) {
            return Err(Error::validation(
                "constellation.inclination_deg",
                format!("must be within [0, 180], got {}", self.inclination_deg),
            ));
        }
        ensure_finite("constellation.raan_spread_deg", self.raan_spread_deg)?;
        ensure_finite("constellation.phase_offset_deg", self.phase_offset_deg)?;
        ensure_finite("constellation.epoch_s", self.epoch_s)?;
        Ok(())
    }

    pub fn total_satellites(&self) -> usize {
        self.planes * self.sats_per_plane
    }

    pub fn orbit_radius_km(&self) -> f64 {
        EARTH_RADIUS_KM + self.altitude_km
    }

    /// Mean motion from Kepler's third law, rad/s.
    pub fn mean_motion_rad_s(&self) -> f64 {
        (MU_EARTH_KM3_S2 / self.orbit_radius_km().powi(3)).sqrt()
    }

    pub fn period_s(&self) -> f64 {
        TAU / self.mean_motion_rad_s()
    }
}

/// One slot of stagger per plane: `360 / (planes * sats_per_plane)`.
pub fn default_phase_offset_deg(planes: usize, sats_per_plane: usize) -> f64 {
    360.0 / (planes.max(1) * sats_per_plane.max(1)) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodeticPosition {
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub alt_km: f64,
}

impl GeodeticPosition {
    /// Validated constructor. Longitudes of exactly ±180 are accepted as given.
    pub fn new(lat_deg: f64, lon_deg: f64, alt_km: f64) -> Result<Self> {
        let pos = GeodeticPosition {
            lat_deg,
            lon_deg,
            alt_km,
        };
        pos.validate()?;
        Ok(pos)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lat_deg.is_finite() && (-90.0..=90.0).contains(&self.lat_deg)) {
            return Err(Error::validation(
                "lat_deg",
                format!("must be within [-90, 90], got {}", self.lat_deg),
            ));
        }
        if !(self.lon_deg.is_finite() && (-180.0..=180.0).contains(&self.lon_deg)) {
            return Err(Error::validation(
                "lon_deg",
                format!("must be within [-180, 180], got {}", self.lon_deg),
            ));
        }
        ensure_non_negative("alt_km", self.alt_km)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianPosition {
    pub x_km: f64,
    pub y_km: f64,
    pub z_km: f64,
}

impl CartesianPosition {
    pub const fn new(x_km: f64, y_km: f64, z_km: f64) -> Self {
        CartesianPosition { x_km, y_km, z_km }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &CartesianPosition) -> f64 {
        self.x_km * other.x_km + self.y_km * other.y_km + self.z_km * other.z_km
    }

    pub fn sub(&self, other: &CartesianPosition) -> CartesianPosition {
        CartesianPosition::new(
            self.x_km - other.x_km,
            self.y_km - other.y_km,
            self.z_km - other.z_km,
        )
    }

    pub fn distance_to(&self, other: &CartesianPosition) -> f64 {
        self.sub(other).norm()
    }
}

pub fn geodetic_to_cartesian(pos: &GeodeticPosition) -> Result<CartesianPosition> {
    pos.validate()?;
    let r = EARTH_RADIUS_KM + pos.alt_km;
    let (lat, lon) = (pos.lat_deg.to_radians(), pos.lon_deg.to_radians());
    Ok(CartesianPosition::new(
        r * lat.cos() * lon.cos(),
        r * lat.cos() * lon.sin(),
        r * lat.sin(),
    ))
}

/// Inverse of [`geodetic_to_cartesian`] on the sphere. Altitude may come
/// out negative for points below the surface.
pub fn cartesian_to_geodetic(pos: &CartesianPosition) -> GeodeticPosition {
    let r = pos.norm();
    GeodeticPosition {
        lat_deg: (pos.z_km / r).clamp(-1.0, 1.0).asin().to_degrees(),
        lon_deg: pos.y_km.atan2(pos.x_km).to_degrees(),
        alt_km: r - EARTH_RADIUS_KM,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SatelliteState {
    /// `plane * sats_per_plane + slot`.
    pub id: usize,
    pub plane: usize,
    pub slot: usize,
    pub position: CartesianPosition,
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    cos_raan: f64,
    sin_raan: f64,
    anomaly0: f64,
}

/// Precomputed per-satellite orbital constants for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Propagator {
    spec: ConstellationSpec,
    radius_km: f64,
    mean_motion: f64,
    cos_inc: f64,
    sin_inc: f64,
    slots: Vec<Slot>,
}

impl Propagator {
    pub fn new(spec: &ConstellationSpec) -> Result<Self> {
        spec.validate()?;
        let inc = spec.inclination_deg.to_radians();
        let slots = (0..spec.planes)
            .flat_map(|k| {
                let raan = (k as f64 * spec.raan_spread_deg / spec.planes as f64).to_radians();
                (0..spec.sats_per_plane).map(move |j| {
                    let anomaly = j as f64 * 360.0 / spec.sats_per_plane as f64
                        + k as f64 * spec.phase_offset_deg;
                    Slot {
                        cos_raan: raan.cos(),
                        sin_raan: raan.sin(),
                        anomaly0: anomaly.to_radians(),
                    }
                })
            })
            .collect();
        Ok(Propagator {
            spec: *spec,
            radius_km: spec.orbit_radius_km(),
            mean_motion: spec.mean_motion_rad_s(),
            cos_inc: inc.cos(),
            sin_inc: inc.sin(),
            slots,
        })
    }

    pub fn spec(&self) -> &ConstellationSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Non-rotating position of satellite `id` at time `t_s`.
    pub fn inertial(&self, id: usize, t_s: f64) -> CartesianPosition {
        let slot = &self.slots[id];
        let u = slot.anomaly0 + self.mean_motion * (t_s - self.spec.epoch_s);
        let (sin_u, cos_u) = u.sin_cos();
        let r = self.radius_km;
        CartesianPosition::new(
            r * (slot.cos_raan * cos_u - slot.sin_raan * sin_u * self.cos_inc),
            r * (slot.sin_raan * cos_u + slot.cos_raan * sin_u * self.cos_inc),
            r * sin_u * self.sin_inc,
        )
    }

    /// Earth-fixed position of satellite `id` at time `t_s`.
    pub fn earth_fixed(&self, id: usize, t_s: f64) -> CartesianPosition {
        let p = self.inertial(id, t_s);
        let theta = (EARTH_ROTATION_DEG_S * (t_s - self.spec.epoch_s)).to_radians();
        let (s, c) = theta.sin_cos();
        CartesianPosition::new(c * p.x_km + s * p.y_km, -s * p.x_km + c * p.y_km, p.z_km)
    }

    pub fn states(&self, t_s: f64) -> Vec<SatelliteState> {
        (0..self.len())
            .map(|id| SatelliteState {
                id,
                plane: id / self.spec.sats_per_plane,
                slot: id % self.spec.sats_per_plane,
                position: self.earth_fixed(id, t_s),
            })
            .collect()
    }
}

/// Earth-fixed states of every satellite at `t_s`.
pub fn propagate(spec: &ConstellationSpec, t_s: f64) -> Result<Vec<SatelliteState>> {
    ensure_finite("t", t_s)?;
    Ok(Propagator::new(spec)?.states(t_s))
}

/// Elevation above the local horizon and slant range from an observer to a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Look {
    pub elevation_deg: f64,
    pub slant_range_km: f64,
}

/// Observer prepared for repeated look-angle evaluation.
#[derive(Debug, Clone, Copy)]
struct Site {
    position: CartesianPosition,
    up: CartesianPosition,
}

impl Site {
    fn new(observer: &GeodeticPosition) -> Result<Self> {
        let position = geodetic_to_cartesian(observer)?;
        let n = position.norm();
        Ok(Site {
            position,
            up: CartesianPosition::new(position.x_km / n, position.y_km / n, position.z_km / n),
        })
    }

    fn look(&self, target: &CartesianPosition) -> Look {
        let d = target.sub(&self.position);
        let range = d.norm();
        if range == 0.0 {
            return Look {
                elevation_deg: 90.0,
                slant_range_km: 0.0,
            };
        }
        let sin_el = (d.dot(&self.up) / range).clamp(-1.0, 1.0);
        Look {
            elevation_deg: sin_el.asin().to_degrees(),
            slant_range_km: range,
        }
    }
}

pub fn elevation_and_range(
    observer: &GeodeticPosition,
    target: &CartesianPosition,
) -> Result<Look> {
    Ok(Site::new(observer)?.look(target))
}

/// Closed-form slant range from an observer at `observer_alt_km` to a shell at
/// `shell_alt_km` seen at `elevation_deg`.
pub fn slant_range_at_elevation_km(
    observer_alt_km: f64,
    shell_alt_km: f64,
    elevation_deg: f64,
) -> f64 {
    let ro = EARTH_RADIUS_KM + observer_alt_km;
    let rs = EARTH_RADIUS_KM + shell_alt_km;
    let e = elevation_deg.to_radians();
    (rs * rs - ro * ro * e.cos().powi(2)).sqrt() - ro * e.sin()
}

/// Earth central angle between an observer and the sub-satellite point of a
/// satellite seen at exactly `elevation_deg`.
pub fn coverage_half_angle_deg(observer_alt_km: f64, shell_alt_km: f64, elevation_deg: f64) -> f64 {
    let ro = EARTH_RADIUS_KM + observer_alt_km;
    let rs = EARTH_RADIUS_KM + shell_alt_km;
    let e = elevation_deg.to_radians();
    let nadir = (ro * e.cos() / rs).clamp(-1.0, 1.0).asin();
    90.0 - elevation_deg - nadir.to_degrees()
}

/// Great-circle central angle between two positions.
pub fn central_angle_deg(a: &GeodeticPosition, b: &GeodeticPosition) -> Result<f64> {
    let (pa, pb) = (geodetic_to_cartesian(a)?, geodetic_to_cartesian(b)?);
    let cross = CartesianPosition::new(
        pa.y_km * pb.z_km - pa.z_km * pb.y_km,
        pa.z_km * pb.x_km - pa.x_km * pb.z_km,
        pa.x_km * pb.y_km - pa.y_km * pb.x_km,
    );
    Ok(cross.norm().atan2(pa.dot(&pb)).to_degrees())
}

/// Geometry of one observer at a chosen epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PassGeometry {
    pub satellite_id: usize,
    pub epoch_s: f64,
    pub elevation_deg: f64,
    pub slant_range_km: f64,
}

/// Time grid for pass searches: `start_s ..= start_s + duration_s` in
/// `step_s` increments, refined at `refine_step_s` around coarse candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanWindow {
    pub start_s: f64,
    pub duration_s: f64,
    pub step_s: f64,
    pub refine_step_s: f64,
}

impl ScanWindow {
    pub fn new(start_s: f64, duration_s: f64, step_s: f64) -> Result<Self> {
        let w = ScanWindow {
            start_s,
            duration_s,
            step_s,
            refine_step_s: 1.0_f64.min(step_s),
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("window start", self.start_s)?;
        ensure_positive("window_s", self.duration_s)?;
        ensure_positive("step_s", self.step_s)?;
        ensure_positive("refine step", self.refine_step_s)
    }

    pub fn end_s(&self) -> f64 {
        self.start_s + self.duration_s
    }

    fn coarse_times(&self) -> Vec<f64> {
        let n = (self.duration_s / self.step_s + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| self.start_s + i as f64 * self.step_s)
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    score: f64,
    epoch_s: f64,
    satellite_id: usize,
}

impl Candidate {
    /// Higher minimum elevation wins, then earlier epoch, then lower id.
    fn beats(&self, other: &Candidate) -> bool {
        if self.score != other.score {
            return self.score > other.score;
        }
        if self.epoch_s != other.epoch_s {
            return self.epoch_s < other.epoch_s;
        }
        self.satellite_id < other.satellite_id
    }
}

fn min_elevation(sites: &[Site], target: &CartesianPosition) -> f64 {
    sites
        .iter()
        .map(|s| s.look(target).elevation_deg)
        .fold(f64::INFINITY, f64::min)
}

fn check_min_elevation(min_elev_deg: f64) -> Result<()> {
    if !(min_elev_deg.is_finite() && (-90.0..=90.0).contains(&min_elev_deg)) {
        return Err(Error::validation(
            "min_elevation_deg",
            format!("must be within [-90, 90], got {min_elev_deg}"),
        ));
    }
    Ok(())
}

/// Finds the single satellite and epoch that maximise the minimum elevation
/// over all observers, with every observer at or above `min_elev_deg`.
///
/// The window is scanned at `step_s`; every per-satellite local maximum of the
/// coarse curve is then refined at `refine_step_s` over one coarse step either
/// side. Returns one [`PassGeometry`] per observer, in input order.
pub fn best_pass(
    spec: &ConstellationSpec,
    observers: &[GeodeticPosition],
    window: &ScanWindow,
    min_elev_deg: f64,
) -> Result<Vec<PassGeometry>> {
    window.validate()?;
    check_min_elevation(min_elev_deg)?;
    if observers.is_empty() {
        return Err(Error::validation(
            "observers",
            "at least one observer is required",
        ));
    }
    let prop = Propagator::new(spec)?;
    let sites = observers
        .iter()
        .map(Site::new)
        .collect::<Result<Vec<_>>>()?;
    let times = window.coarse_times();
    let nsat = prop.len();

    let score_at = |id: usize, t: f64| -> f64 {
        let m = min_elevation(&sites, &prop.earth_fixed(id, t));
        if m >= min_elev_deg {
            m
        } else {
            f64::NEG_INFINITY
        }
    };

    let grid: Vec<Vec<f64>> = times
        .iter()
        .map(|&t| (0..nsat).map(|id| score_at(id, t)).collect())
        .collect();

    let mut best: Option<Candidate> = None;
    let mut offer = |c: Candidate| {
        if c.score.is_finite() && best.as_ref().is_none_or(|b| c.beats(b)) {
            best = Some(c);
        }
    };
    let end = window.end_s();
    for id in 0..nsat {
        for i in 0..times.len() {
            let here = grid[i][id];
            if !here.is_finite() {
                continue;
            }
            let prev = if i > 0 {
                grid[i - 1][id]
            } else {
                f64::NEG_INFINITY
            };
            let next = grid.get(i + 1).map_or(f64::NEG_INFINITY, |row| row[id]);
            if here < prev || here < next {
                continue;
            }
            offer(Candidate {
                score: here,
                epoch_s: times[i],
                satellite_id: id,
            });
            let lo = (times[i] - window.step_s).max(window.start_s);
            let hi = (times[i] + window.step_s).min(end);
            let n = ((hi - lo) / window.refine_step_s + 1e-9).floor() as usize;
            for k in 0..=n {
                let t = lo + k as f64 * window.refine_step_s;
                offer(Candidate {
                    score: score_at(id, t),
                    epoch_s: t,
                    satellite_id: id,
                });
            }
        }
    }

    let best = best.ok_or_else(|| {
        Error::NoCommonVisibility(format!(
            "no satellite is at or above {min_elev_deg} deg for all {} observer(s) at any epoch in [{}, {}] s",
            observers.len(),
            window.start_s,
            end
        ))
    })?;
    let target = prop.earth_fixed(best.satellite_id, best.epoch_s);
    Ok(sites
        .iter()
        .map(|s| {
            let look = s.look(&target);
            PassGeometry {
                satellite_id: best.satellite_id,
                epoch_s: best.epoch_s,
                elevation_deg: look.elevation_deg,
                slant_range_km: look.slant_range_km,
            }
        })
        .collect())
}

/// The satellite with the highest minimum elevation over all observers at a
/// single epoch. Ties go to the lower id.
pub fn best_satellite_at(
    spec: &ConstellationSpec,
    observers: &[GeodeticPosition],
    t_s: f64,
    min_elev_deg: f64,
) -> Result<Vec<PassGeometry>> {
    ensure_finite("t", t_s)?;
    check_min_elevation(min_elev_deg)?;
    if observers.is_empty() {
        return Err(Error::validation(
            "observers",
            "at least one observer is required",
        ));
    }
    let prop = Propagator::new(spec)?;
    let sites = observers
        .iter()
        .map(Site::new)
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(usize, f64)> = None;
    for id in 0..prop.len() {
        let m = min_elevation(&sites, &prop.earth_fixed(id, t_s));
        if m >= min_elev_deg && best.is_none_or(|(_, b)| m > b) {
            best = Some((id, m));
        }
    }
    let (id, _) = best.ok_or_else(|| {
        Error::NoCommonVisibility(format!(
            "no satellite is at or above {min_elev_deg} deg for all {} observer(s) at t = {t_s} s",
            observers.len()
        ))
    })?;
    let target = prop.earth_fixed(id, t_s);
    Ok(sites
        .iter()
        .map(|s| {
            let look = s.look(&target);
            PassGeometry {
                satellite_id: id,
                epoch_s: t_s,
                elevation_deg: look.elevation_deg,
                slant_range_km: look.slant_range_km,
            }
        })
        .collect())
}

/// Worst-case geometry: every observer sees the serving satellite at exactly
/// `min_elev_deg`.
///
/// A single satellite can only do that when each pair of observers is within
/// the sum of their coverage half-angles; otherwise this fails with
/// [`Error::NoCommonVisibility`]. The pairwise test is necessary, and for two
/// observers also sufficient.
pub fn edge_of_coverage(
    shell_alt_km: f64,
    observers: &[GeodeticPosition],
    min_elev_deg: f64,
) -> Result<Vec<Look>> {
    ensure_positive("constellation.altitude_km", shell_alt_km)?;
    if !(min_elev_deg.is_finite() && (0.0..=90.0).contains(&min_elev_deg)) {
        return Err(Error::validation(
            "min_elevation_deg",
            format!("must be within [0, 90] for edge-of-coverage geometry, got {min_elev_deg}"),
        ));
    }
    for obs in observers {
        obs.validate()?;
        if obs.alt_km >= shell_alt_km {
            return Err(Error::validation(
                "alt_km",
                format!(
                    "observer altitude {} km is not below the shell at {shell_alt_km} km",
                    obs.alt_km
                ),
            ));
        }
    }
    for (i, a) in observers.iter().enumerate() {
        for b in &observers[i + 1..] {
            let sep = central_angle_deg(a, b)?;
            let reach = coverage_half_angle_deg(a.alt_km, shell_alt_km, min_elev_deg)
                + coverage_half_angle_deg(b.alt_km, shell_alt_km, min_elev_deg);
            if sep > reach + 1e-12 {
                return Err(Error::NoCommonVisibility(format!(
                    "observers {sep:.3} deg apart cannot both see one satellite at {min_elev_deg} deg (coverage reach {reach:.3} deg)"
                )));
            }
        }
    }
    Ok(observers
        .iter()
        .map(|o| Look {
            elevation_deg: min_elev_deg,
            slant_range_km: slant_range_at_elevation_km(o.alt_km, shell_alt_km, min_elev_deg),
        })
        .collect())
}

/// A contiguous run of samples with one satellite at or above the mask.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pass {
    pub satellite_id: usize,
    pub start_s: f64,
    pub end_s: f64,
    pub max_elevation_epoch_s: f64,
    pub max_elevation_deg: f64,
    pub min_slant_range_km: f64,
    /// Sample count times the scan step.
    pub duration_s: f64,
}

/// Every pass of every satellite over `observer` within the window, ordered
/// by start time then satellite id.
pub fn passes(
    spec: &ConstellationSpec,
    observer: &GeodeticPosition,
    window: &ScanWindow,
    min_elev_deg: f64,
) -> Result<Vec<Pass>> {
    window.validate()?;
    check_min_elevation(min_elev_deg)?;
    let prop = Propagator::new(spec)?;
    let site = Site::new(observer)?;
    let times = window.coarse_times();
    let mut open: Vec<Option<Pass>> = vec![None; prop.len()];
    let mut done = Vec::new();
    for &t in &times {
        for (id, slot) in open.iter_mut().enumerate() {
            let look = site.look(&prop.earth_fixed(id, t));
            if look.elevation_deg >= min_elev_deg {
                let p = slot.get_or_insert(Pass {
                    satellite_id: id,
                    start_s: t,
                    end_s: t,
                    max_elevation_epoch_s: t,
                    max_elevation_deg: look.elevation_deg,
                    min_slant_range_km: look.slant_range_km,
                    duration_s: 0.0,
                });
                p.end_s = t;
                p.duration_s += window.step_s;
                if look.elevation_deg > p.max_elevation_deg {
                    p.max_elevation_deg = look.elevation_deg;
                    p.max_elevation_epoch_s = t;
                }
                p.min_slant_range_km = p.min_slant_range_km.min(look.slant_range_km);
            } else if let Some(p) = slot.take() {
                done.push(p);
            }
        }
    }
    done.extend(open.into_iter().flatten());
    done.sort_by(|a, b| {
        a.start_s
            .total_cmp(&b.start_s)
            .then(a.satellite_id.cmp(&b.satellite_id))
    });
    Ok(done)
}

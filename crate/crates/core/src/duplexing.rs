//! Self-interference and FD-vs-FDD spectral efficiency.
//!
//! A link pair has two directions sharing one carrier. The full-duplex node
//! receives one of them (the *FD receive link*) while transmitting the other,
//! and only that receiver suffers residual self-interference. Remote
//! endpoints are half-duplex and interference-free.
//!
//! The FDD baseline spends the same total bandwidth `B`: the FD receive link
//! gets `fdd_split * B`, the other direction the rest, and each sees noise
//! over its own share only. Spectral efficiencies are Shannon bounds per Hz of
//! the total band.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::linkbudget::{db_to_linear, LinkBudget, NoiseEnvironment, RfChain};

/// Upper SIC bound for the break-even search.
pub const BREAKEVEN_SEARCH_MAX_DB: f64 = 200.0;
/// Bisection resolution of the break-even search.
pub const BREAKEVEN_TOLERANCE_DB: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SicConfig {
    /// Cancellation depth; `+inf` means perfect cancellation.
    pub sic_db: f64,
    /// Circulator isolation at the FD node.
    pub isolation_db: f64,
}

impl SicConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sic_db.is_nan() || self.sic_db < 0.0 {
            return Err(Error::validation(
                "sic_db",
                format!("must be >= 0, got {}", self.sic_db),
            ));
        }
        if self.isolation_db.is_nan() || self.isolation_db < 0.0 {
            return Err(Error::validation(
                "isolation_db",
                format!("must be >= 0, got {}", self.isolation_db),
            ));
        }
        Ok(())
    }
}

/// Leakage into the FD node's own receiver after isolation and cancellation.
pub fn residual_si_dbw(tx_power_dbw: f64, cfg: &SicConfig) -> f64 {
    tx_power_dbw - cfg.isolation_db - cfg.sic_db
}

/// Signal over noise plus interference, combined in watts.
pub fn sinr_db(snr_db: f64, residual_si_dbw: f64, noise_dbw: f64) -> f64 {
    if residual_si_dbw == f64::NEG_INFINITY {
        return snr_db;
    }
    snr_db - 10.0 * (db_to_linear(residual_si_dbw - noise_dbw)).ln_1p() / std::f64::consts::LN_10
}

/// Echo-loop margin of a bent-pipe FD node: positive means the loop
/// attenuates on every round trip.
pub fn loop_stability_margin_db(amplification_db: f64, cfg: &SicConfig) -> Result<f64> {
    if amplification_db.is_nan() || amplification_db < 0.0 {
        return Err(Error::validation(
            "amplification_db",
            format!("must be >= 0, got {amplification_db}"),
        ));
    }
    Ok(cfg.isolation_db + cfg.sic_db - amplification_db)
}

/// What power leaks into the FD node's receiver before isolation and SIC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SiReference {
    /// The FD node's EIRP.
    Eirp,
    /// An explicit transmit power.
    Fixed { tx_power_dbw: f64 },
    /// The carrier received on the FD receive link, re-amplified by the
    /// bent-pipe gain and transmitted on the other direction.
    RelayedSignal { amplification_db: f64 },
}

/// Which directions the headline spectral efficiencies count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeMetric {
    /// Only the link received at the FD node, the one exposed to SI.
    #[default]
    FdReceiveLink,
    /// Sum over both directions.
    BothDirections,
}

impl SeMetric {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeMetric::FdReceiveLink => "fd_receive_link",
            SeMetric::BothDirections => "both_directions",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DuplexOptions {
    /// Share of the total band the FDD baseline gives to the FD receive link.
    pub fdd_split: f64,
    pub metric: SeMetric,
    /// Extra loss applied to both directions.
    pub additional_loss_db: f64,
}

impl Default for DuplexOptions {
    fn default() -> Self {
        DuplexOptions {
            fdd_split: 0.5,
            metric: SeMetric::default(),
            additional_loss_db: 0.0,
        }
    }
}

impl DuplexOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.fdd_split > 0.0 && self.fdd_split < 1.0) {
            return Err(Error::validation(
                "fdd_split",
                format!("must be strictly between 0 and 1, got {}", self.fdd_split),
            ));
        }
        crate::error::ensure_non_negative("additional_loss_db", self.additional_loss_db)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Direction {
    pub tx: String,
    pub rx: String,
    pub distance_km: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdLinkPair {
    pub a: Direction,
    pub b: Direction,
    /// Shared in-band carrier.
    pub carrier_ghz: f64,
    pub fd_node: String,
    pub si_reference: SiReference,
}

impl FdLinkPair {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("carrier_ghz", self.carrier_ghz)?;
        for (name, d) in [("a", &self.a), ("b", &self.b)] {
            if d.tx == d.rx {
                return Err(Error::validation(
                    format!("link.{name}"),
                    format!("tx and rx are both `{}`", d.tx),
                ));
            }
            ensure_positive(&format!("link.{name}.distance_km"), d.distance_km)?;
        }
        self.split().map(|_| ())
    }

    /// `(into the FD node, out of the FD node)`.
    pub fn split(&self) -> Result<(&Direction, &Direction)> {
        let fd = &self.fd_node;
        if self.a.rx == *fd && self.b.tx == *fd && self.a.tx != *fd {
            Ok((&self.a, &self.b))
        } else if self.b.rx == *fd && self.a.tx == *fd && self.b.tx != *fd {
            Ok((&self.b, &self.a))
        } else {
            Err(Error::validation(
                "link.fd_node",
                format!("`{fd}` must receive one direction and transmit the other"),
            ))
        }
    }

    pub fn with_directions_swapped(&self) -> FdLinkPair {
        FdLinkPair {
            a: self.b.clone(),
            b: self.a.clone(),
            ..self.clone()
        }
    }
}

/// Per-direction breakdown of one comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionEfficiency {
    pub snr_full_band_db: f64,
    pub fdd_bandwidth_share: f64,
    /// SNR with noise over the FDD share only.
    pub snr_fdd_db: f64,
    /// Share-weighted FDD contribution, bps per Hz of total band.
    pub se_fdd_bps_hz: f64,
    pub sinr_fd_db: f64,
    pub se_fd_bps_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralEfficiency {
    pub metric: SeMetric,
    pub se_fdd_bps_hz: f64,
    pub se_fd_bps_hz: f64,
    pub gain_percent: f64,
    pub fd_receive: DirectionEfficiency,
    pub other: DirectionEfficiency,
}

fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

fn direction(snr_db: f64, share: f64, sinr_fd: f64) -> DirectionEfficiency {
    let snr_fdd = snr_db - 10.0 * share.log10();
    DirectionEfficiency {
        snr_full_band_db: snr_db,
        fdd_bandwidth_share: share,
        snr_fdd_db: snr_fdd,
        se_fdd_bps_hz: share * log2_1p(db_to_linear(snr_fdd)),
        sinr_fd_db: sinr_fd,
        se_fd_bps_hz: log2_1p(db_to_linear(sinr_fd)),
    }
}

/// FD-vs-FDD comparison from full-band SNRs and the interference-to-noise
/// ratio at the FD node (`-inf` for perfect cancellation).
pub fn spectral_efficiency(
    fd_receive_snr_db: f64,
    other_snr_db: f64,
    si_to_noise_db: f64,
    opts: &DuplexOptions,
) -> Result<SpectralEfficiency> {
    opts.validate()?;
    if fd_receive_snr_db.is_nan() || other_snr_db.is_nan() || si_to_noise_db.is_nan() {
        return Err(Error::Domain("NaN in spectral efficiency inputs".into()));
    }
    let rho = opts.fdd_split;
    let fd_receive = direction(
        fd_receive_snr_db,
        rho,
        sinr_db(fd_receive_snr_db, si_to_noise_db, 0.0),
    );
    let other = direction(other_snr_db, 1.0 - rho, other_snr_db);
    let (se_fdd, se_fd) = match opts.metric {
        SeMetric::FdReceiveLink => (fd_receive.se_fdd_bps_hz, fd_receive.se_fd_bps_hz),
        SeMetric::BothDirections => (
            fd_receive.se_fdd_bps_hz + other.se_fdd_bps_hz,
            fd_receive.se_fd_bps_hz + other.se_fd_bps_hz,
        ),
    };
    if !(se_fdd.is_finite() && se_fdd > 0.0) {
        return Err(Error::DegenerateSpectralEfficiency(format!(
            "FDD baseline spectral efficiency is {se_fdd}; gain is undefined"
        )));
    }
    Ok(SpectralEfficiency {
        metric: opts.metric,
        se_fdd_bps_hz: se_fdd,
        se_fd_bps_hz: se_fd,
        gain_percent: 100.0 * (se_fd - se_fdd) / se_fdd,
        fd_receive,
        other,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionReport {
    pub tx: String,
    pub rx: String,
    pub receives_at_fd_node: bool,
    pub budget: LinkBudget,
    pub efficiency: DirectionEfficiency,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DuplexComparison {
    pub metric: SeMetric,
    pub se_fdd_bps_hz: f64,
    pub se_fd_bps_hz: f64,
    pub gain_percent: f64,
    /// Power leaking into the FD node receiver before isolation and SIC.
    pub si_reference_power_dbw: f64,
    pub residual_si_dbw: f64,
    /// Full-band noise at the FD node receiver.
    pub noise_dbw: f64,
    pub si_to_noise_db: f64,
    pub sic: SicConfig,
    /// FD receive link first.
    pub directions: [DirectionReport; 2],
}

fn chain_for(chains: &BTreeMap<String, RfChain>, name: &str) -> Result<RfChain> {
    chains
        .get(name)
        .copied()
        .ok_or_else(|| Error::validation(format!("nodes.{name}"), "no RF chain for node"))
}

/// Closes both directional budgets at the shared carrier and compares FD with
/// the FDD baseline.
pub fn compare_duplex(
    pair: &FdLinkPair,
    chains: &BTreeMap<String, RfChain>,
    env: &NoiseEnvironment,
    cfg: &SicConfig,
    opts: &DuplexOptions,
) -> Result<DuplexComparison> {
    pair.validate()?;
    cfg.validate()?;
    opts.validate()?;
    let (into_fd, out_of_fd) = pair.split()?;
    let budget = |d: &Direction| -> Result<LinkBudget> {
        let tx = chain_for(chains, &d.tx)?.with_carrier(pair.carrier_ghz);
        let rx = chain_for(chains, &d.rx)?.with_carrier(pair.carrier_ghz);
        LinkBudget::evaluate(&tx, &rx, d.distance_km, env, opts.additional_loss_db)
    };
    let rx_budget = budget(into_fd)?;
    let other_budget = budget(out_of_fd)?;

    let si_ref = match pair.si_reference {
        SiReference::Eirp => chain_for(chains, &pair.fd_node)?.eirp_dbw,
        SiReference::Fixed { tx_power_dbw } => {
            ensure_finite("fd_tx_power_dbw", tx_power_dbw)?;
            tx_power_dbw
        }
        SiReference::RelayedSignal { amplification_db } => {
            ensure_finite("amplification_db", amplification_db)?;
            rx_budget.signal_dbw() + amplification_db
        }
    };
    let residual = residual_si_dbw(si_ref, cfg);
    let noise = rx_budget.noise_dbw;
    let si_to_noise = residual - noise;
    let se = spectral_efficiency(rx_budget.snr_db, other_budget.snr_db, si_to_noise, opts)?;

    Ok(DuplexComparison {
        metric: se.metric,
        se_fdd_bps_hz: se.se_fdd_bps_hz,
        se_fd_bps_hz: se.se_fd_bps_hz,
        gain_percent: se.gain_percent,
        si_reference_power_dbw: si_ref,
        residual_si_dbw: residual,
        noise_dbw: noise,
        si_to_noise_db: si_to_noise,
        sic: *cfg,
        directions: [
            DirectionReport {
                tx: into_fd.tx.clone(),
                rx: into_fd.rx.clone(),
                receives_at_fd_node: true,
                budget: rx_budget,
                efficiency: se.fd_receive,
            },
            DirectionReport {
                tx: out_of_fd.tx.clone(),
                rx: out_of_fd.rx.clone(),
                receives_at_fd_node: false,
                budget: other_budget,
                efficiency: se.other,
            },
        ],
    })
}

/// Smallest SIC at which FD is at least as efficient as FDD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Breakeven {
    Db(f64),
    /// FD stays below FDD up to [`BREAKEVEN_SEARCH_MAX_DB`].
    Unreachable,
}

impl Serialize for Breakeven {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Breakeven::Db(v) => s.serialize_f64(*v),
            Breakeven::Unreachable => s.serialize_str("unreachable"),
        }
    }
}

impl std::fmt::Display for Breakeven {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Breakeven::Db(v) => write!(f, "{v:.2} dB"),
            Breakeven::Unreachable => f.write_str("unreachable"),
        }
    }
}

/// Bisection on `advantage(sic) = SE_fd - SE_fdd`, which is non-decreasing in SIC.
pub fn bisect_breakeven<F>(mut advantage: F) -> Result<Breakeven>
where
    F: FnMut(f64) -> Result<f64>,
{
    if advantage(0.0)? >= 0.0 {
        return Ok(Breakeven::Db(0.0));
    }
    if advantage(BREAKEVEN_SEARCH_MAX_DB)? < 0.0 {
        return Ok(Breakeven::Unreachable);
    }
    let (mut lo, mut hi) = (0.0, BREAKEVEN_SEARCH_MAX_DB);
    while hi - lo > BREAKEVEN_TOLERANCE_DB {
        let mid = 0.5 * (lo + hi);
        if advantage(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Breakeven::Db(hi))
}

pub fn sic_breakeven_db(
    pair: &FdLinkPair,
    chains: &BTreeMap<String, RfChain>,
    env: &NoiseEnvironment,
    isolation_db: f64,
    opts: &DuplexOptions,
) -> Result<Breakeven> {
    bisect_breakeven(|sic_db| {
        let c = compare_duplex(
            pair,
            chains,
            env,
            &SicConfig {
                sic_db,
                isolation_db,
            },
            opts,
        )?;
        Ok(c.se_fd_bps_hz - c.se_fdd_bps_hz)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_si_cases() {
        let cfg = SicConfig {
            sic_db: 70.0,
            isolation_db: 25.0,
        };
        assert_eq!(residual_si_dbw(65.0, &cfg), -30.0);
        let none = SicConfig {
            sic_db: 0.0,
            isolation_db: 0.0,
        };
        assert_eq!(residual_si_dbw(12.5, &none), 12.5);
        let perfect = SicConfig {
            sic_db: f64::INFINITY,
            isolation_db: 25.0,
        };
        assert_eq!(residual_si_dbw(65.0, &perfect), f64::NEG_INFINITY);
    }

    #[test]
    fn sinr_cases() {
        assert_eq!(sinr_db(12.0, f64::NEG_INFINITY, -120.0), 12.0);
        // SI equal to noise doubles the denominator
        assert!((sinr_db(12.0, -120.0, -120.0) - (12.0 - 3.010299956639812)).abs() < 1e-12);
        // 10 log10(1 + 100)
        assert!((sinr_db(12.0, -100.0, -120.0) - (12.0 - 20.043213737826427)).abs() < 1e-12);
    }

    #[test]
    fn stability_margin() {
        let cfg = SicConfig {
            sic_db: 70.0,
            isolation_db: 25.0,
        };
        assert_eq!(loop_stability_margin_db(60.0, &cfg).unwrap(), 35.0);
        let zero = SicConfig {
            sic_db: 0.0,
            isolation_db: 0.0,
        };
        assert_eq!(loop_stability_margin_db(0.0, &zero).unwrap(), 0.0);
        assert!(loop_stability_margin_db(30.0, &zero).unwrap() < 0.0);
        assert!(loop_stability_margin_db(-1.0, &zero).is_err());
    }

    #[test]
    fn both_directions_at_zero_db_and_perfect_cancellation() {
        // FD: 2 * log2(1 + 1); FDD: 1/2 * 2 * log2(1 + 2)
        let opts = DuplexOptions {
            metric: SeMetric::BothDirections,
            ..DuplexOptions::default()
        };
        let se = spectral_efficiency(0.0, 0.0, f64::NEG_INFINITY, &opts).unwrap();
        assert!((se.se_fd_bps_hz - 2.0).abs() < 1e-12);
        assert!((se.se_fdd_bps_hz - 1.584962500721156).abs() < 1e-12);
    }

    #[test]
    fn fd_receive_link_metric_counts_one_direction() {
        let se =
            spectral_efficiency(0.0, 40.0, f64::NEG_INFINITY, &DuplexOptions::default()).unwrap();
        assert!((se.se_fd_bps_hz - 1.0).abs() < 1e-12);
        assert!((se.se_fdd_bps_hz - 0.5 * 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_baseline() {
        let err = spectral_efficiency(-1e6, -1e6, 0.0, &DuplexOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpectralEfficiency(_)));
    }

    #[test]
    fn split_must_be_interior() {
        let opts = DuplexOptions {
            fdd_split: 1.0,
            ..DuplexOptions::default()
        };
        assert!(spectral_efficiency(10.0, 10.0, 0.0, &opts).is_err());
    }

    fn pair(fd: &str) -> FdLinkPair {
        FdLinkPair {
            a: Direction {
                tx: "gw".into(),
                rx: "sat".into(),
                distance_km: 2000.0,
            },
            b: Direction {
                tx: "sat".into(),
                rx: "ut".into(),
                distance_km: 1500.0,
            },
            carrier_ghz: 37.5,
            fd_node: fd.into(),
            si_reference: SiReference::RelayedSignal {
                amplification_db: 60.0,
            },
        }
    }

    #[test]
    fn fd_node_must_relay() {
        assert!(pair("sat").validate().is_ok());
        assert!(pair("gw").validate().is_err());
        assert!(pair("nobody").validate().is_err());
    }

    #[test]
    fn bisection_clamps_and_gives_up() {
        assert_eq!(
            bisect_breakeven(|s| Ok(s + 1.0)).unwrap(),
            Breakeven::Db(0.0)
        );
        assert_eq!(
            bisect_breakeven(|_| Ok(-1.0)).unwrap(),
            Breakeven::Unreachable
        );
        let Breakeven::Db(b) = bisect_breakeven(|s| Ok(s - 42.123)).unwrap() else {
            panic!("expected a value")
        };
        assert!(b >= 42.123 && b - 42.123 <= BREAKEVEN_TOLERANCE_DB);
    }
}

//! One-directional carrier evaluation from EIRP and G/T.
//!
//! EIRP and G/T are the whole RF characterisation: there are no separate
//! antenna gains, pointing or atmospheric losses. `additional_loss_db` on
//! [`LinkBudget::evaluate`] is the single extension point.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};

/// Boltzmann constant, J/K.
pub const BOLTZMANN_J_K: f64 = 1.380649e-23;
/// `-10 log10(k_B)` as used in link-budget arithmetic, dBW/(K·Hz).
pub const BOLTZMANN_DB: f64 = 228.6;
/// FSPL constant for km and GHz.
pub const FSPL_CONSTANT_DB: f64 = 92.45;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfChain {
    pub eirp_dbw: f64,
    pub g_over_t_dbk: f64,
    /// Circulator Tx/Rx isolation.
    pub isolation_db: f64,
    pub carrier_ghz: f64,
}

impl RfChain {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("eirp_dbw", self.eirp_dbw)?;
        ensure_finite("g_over_t_dbk", self.g_over_t_dbk)?;
        ensure_non_negative("isolation_db", self.isolation_db)?;
        ensure_positive("carrier_ghz", self.carrier_ghz)
    }

    pub fn with_carrier(mut self, carrier_ghz: f64) -> Self {
        self.carrier_ghz = carrier_ghz;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseEnvironment {
    pub temperature_k: f64,
    pub bandwidth_hz: f64,
}

impl NoiseEnvironment {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature_k.is_finite() && self.temperature_k > 0.0) {
            return Err(Error::validation(
                "temperature_k",
                "temperature must be positive",
            ));
        }
        if !(self.bandwidth_hz.is_finite() && self.bandwidth_hz > 0.0) {
            return Err(Error::validation(
                "bandwidth_hz",
                "bandwidth must be positive",
            ));
        }
        Ok(())
    }

    pub fn with_bandwidth(mut self, bandwidth_hz: f64) -> Self {
        self.bandwidth_hz = bandwidth_hz;
        self
    }
}

/// `92.45 + 20 log10(d_km) + 20 log10(f_GHz)`.
pub fn fspl_db(distance_km: f64, carrier_ghz: f64) -> Result<f64> {
    ensure_positive("distance_km", distance_km)?;
    ensure_positive("carrier_ghz", carrier_ghz)?;
    Ok(FSPL_CONSTANT_DB + 20.0 * distance_km.log10() + 20.0 * carrier_ghz.log10())
}

/// Thermal noise `10 log10(k_B T B)`, dBW.
pub fn noise_power_dbw(env: &NoiseEnvironment) -> Result<f64> {
    env.validate()?;
    Ok(10.0 * (BOLTZMANN_J_K * env.temperature_k * env.bandwidth_hz).log10())
}

/// Carrier-to-noise ratio over `env.bandwidth_hz` at the transmitter's carrier.
pub fn snr_db(tx: &RfChain, rx: &RfChain, distance_km: f64, env: &NoiseEnvironment) -> Result<f64> {
    Ok(LinkBudget::evaluate(tx, rx, distance_km, env, 0.0)?.snr_db)
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(10.0 * x.log10())
    } else {
        Err(Error::Domain(format!(
            "linear_to_db requires a positive ratio, got {x}"
        )))
    }
}

/// A closed one-directional budget. Inputs are kept so the SNR can be
/// recomputed from its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudget {
    pub eirp_dbw: f64,
    pub g_over_t_dbk: f64,
    pub additional_loss_db: f64,
    pub bandwidth_hz: f64,
    pub fspl_db: f64,
    /// `k T B` at the receiver over `bandwidth_hz`.
    pub noise_dbw: f64,
    pub snr_db: f64,
    pub slant_range_km: f64,
    pub carrier_ghz: f64,
}

impl LinkBudget {
    pub fn evaluate(
        tx: &RfChain,
        rx: &RfChain,
        distance_km: f64,
        env: &NoiseEnvironment,
        additional_loss_db: f64,
    ) -> Result<Self> {
        tx.validate()?;
        rx.validate()?;
        ensure_non_negative("additional_loss_db", additional_loss_db)?;
        let fspl = fspl_db(distance_km, tx.carrier_ghz)?;
        let noise = noise_power_dbw(env)?;
        let snr = tx.eirp_dbw - fspl - additional_loss_db + rx.g_over_t_dbk + BOLTZMANN_DB
            - 10.0 * env.bandwidth_hz.log10();
        Ok(LinkBudget {
            eirp_dbw: tx.eirp_dbw,
            g_over_t_dbk: rx.g_over_t_dbk,
            additional_loss_db,
            bandwidth_hz: env.bandwidth_hz,
            fspl_db: fspl,
            noise_dbw: noise,
            snr_db: snr,
            slant_range_km: distance_km,
            carrier_ghz: tx.carrier_ghz,
        })
    }

    pub fn recomputed_snr_db(&self) -> f64 {
        self.eirp_dbw - self.fspl_db - self.additional_loss_db + self.g_over_t_dbk + BOLTZMANN_DB
            - 10.0 * self.bandwidth_hz.log10()
    }

    /// Received carrier power referred to the same point as `noise_dbw`.
    pub fn signal_dbw(&self) -> f64 {
        self.snr_db + self.noise_dbw
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(eirp: f64, ghz: f64) -> RfChain {
        RfChain {
            eirp_dbw: eirp,
            g_over_t_dbk: 31.5,
            isolation_db: 25.0,
            carrier_ghz: ghz,
        }
    }

    const ENV: NoiseEnvironment = NoiseEnvironment {
        temperature_k: 290.0,
        bandwidth_hz: 50e6,
    };

    #[test]
    fn fspl_reference_values() {
        assert_eq!(fspl_db(1.0, 1.0).unwrap(), 92.45);
        assert!((fspl_db(780.0, 29.3).unwrap() - 179.6292444608918).abs() < 1e-9);
        assert!((fspl_db(2325.0, 37.5).unwrap() - 191.25908449907382).abs() < 1e-9);
    }

    #[test]
    fn fspl_rejects_non_positive() {
        assert!(fspl_db(0.0, 1.0).is_err());
        assert!(fspl_db(1.0, -2.0).is_err());
        assert!(fspl_db(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn ktb_reference() {
        let n = noise_power_dbw(&ENV).unwrap();
        // 10 log10(1.380649e-23 * 290 * 5e7)
        assert!((n - (-126.98548715086793)).abs() < 1e-9);
        let half = noise_power_dbw(&ENV.with_bandwidth(25e6)).unwrap();
        assert!((n - half - 3.0103).abs() < 1e-4);
        let hot = NoiseEnvironment {
            temperature_k: 2900.0,
            ..ENV
        };
        assert!((noise_power_dbw(&hot).unwrap() - n - 10.0).abs() < 1e-12);
    }

    #[test]
    fn noise_rejects_zero_bandwidth() {
        let err = noise_power_dbw(&ENV.with_bandwidth(0.0)).unwrap_err();
        assert!(err.to_string().contains("bandwidth must be positive"));
    }

    #[test]
    fn snr_chain() {
        // 43 - 179.63 + 31.5 + 228.6 - 76.99
        let s = snr_db(&chain(43.0, 29.3), &chain(65.0, 29.3), 780.0, &ENV).unwrap();
        assert!((s - 46.481055495747995).abs() < 1e-9);
        let louder = snr_db(&chain(53.0, 29.3), &chain(65.0, 29.3), 780.0, &ENV).unwrap();
        assert!((louder - s - 10.0).abs() < 1e-12);
        let far = snr_db(&chain(43.0, 29.3), &chain(65.0, 29.3), 7800.0, &ENV).unwrap();
        assert!((s - far - 20.0).abs() < 1e-9);
    }

    #[test]
    fn additional_loss_subtracts() {
        let b0 =
            LinkBudget::evaluate(&chain(43.0, 29.3), &chain(65.0, 29.3), 900.0, &ENV, 0.0).unwrap();
        let b3 =
            LinkBudget::evaluate(&chain(43.0, 29.3), &chain(65.0, 29.3), 900.0, &ENV, 3.0).unwrap();
        assert!((b0.snr_db - b3.snr_db - 3.0).abs() < 1e-12);
        assert!((b3.recomputed_snr_db() - b3.snr_db).abs() < 1e-12);
    }

    #[test]
    fn db_linear_basics() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(30.0) - 1000.0).abs() < 1e-9);
        assert!(linear_to_db(0.0).is_err());
        assert!(linear_to_db(-1.0).is_err());
    }
}

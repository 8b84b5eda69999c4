//! Scenario files, validation, the assessment driver and SIC sweeps.
//!
//! A scenario is a TOML document with the sections `[constellation]`,
//! `[nodes.<name>]`, `[link]`, `[env]` and `[duplex]`. Unknown keys are
//! rejected. Optional keys keep their "unset" state after loading so the
//! assumption ledger can list exactly which defaults were applied, and so a
//! scenario re-serializes to an equivalent document.
//!
//! Geometry is resolved once per scenario; SIC sweeps reuse it, so every row
//! of a sweep shares the same slant ranges.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duplexing::{
    compare_duplex, loop_stability_margin_db, sic_breakeven_db, Breakeven, Direction,
    DuplexComparison, DuplexOptions, FdLinkPair, SeMetric, SiReference, SicConfig,
};
use crate::error::{ensure_finite, ensure_non_negative, Error, Result};
use crate::geometry::{
    self, default_phase_offset_deg, ConstellationSpec, GeodeticPosition, ScanWindow,
    DEFAULT_INCLINATION_DEG, DEFAULT_RAAN_SPREAD_DEG,
};
use crate::linkbudget::{NoiseEnvironment, RfChain};
use crate::usecases::UseCaseId;

pub const DEFAULT_MIN_ELEVATION_DEG: f64 = 10.0;
pub const DEFAULT_WINDOW_S: f64 = 86_400.0;
pub const DEFAULT_STEP_S: f64 = 10.0;
pub const DEFAULT_AMPLIFICATION_DB: f64 = 60.0;
pub const DEFAULT_FDD_SPLIT: f64 = 0.5;

/// How the evaluation geometry is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpochPolicy {
    /// Every ground/air node at exactly the minimum elevation.
    #[default]
    EdgeOfCoverage,
    /// Scan a window for the satellite and epoch maximising the minimum elevation.
    BestPass,
    /// Best satellite at `eval_epoch_s`.
    Fixed,
}

impl EpochPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            EpochPolicy::EdgeOfCoverage => "edge_of_coverage",
            EpochPolicy::BestPass => "best_pass",
            EpochPolicy::Fixed => "fixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiReferenceKind {
    #[default]
    RelayedSignal,
    Eirp,
    Fixed,
}

impl SiReferenceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SiReferenceKind::RelayedSignal => "relayed_signal",
            SiReferenceKind::Eirp => "eirp",
            SiReferenceKind::Fixed => "fixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeRole {
    Ground,
    Air,
    Satellite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationConfig {
    pub altitude_km: f64,
    pub planes: usize,
    pub sats_per_plane: usize,
    pub inclination_deg: Option<f64>,
    pub raan_spread_deg: Option<f64>,
    pub phase_offset_deg: Option<f64>,
    pub epoch_s: Option<f64>,
    pub min_elevation_deg: Option<f64>,
    pub epoch_policy: Option<EpochPolicy>,
    pub eval_epoch_s: Option<f64>,
    pub window_s: Option<f64>,
    pub step_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeRf {
    pub eirp_dbw: f64,
    pub g_over_t_dbk: f64,
    pub isolation_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub role: NodeRole,
    pub lat_deg: Option<f64>,
    pub lon_deg: Option<f64>,
    pub alt_km: Option<f64>,
    pub rf: NodeRf,
}

impl Node {
    /// Geodetic position of ground and air nodes.
    pub fn position(&self) -> Option<GeodeticPosition> {
        Some(GeodeticPosition {
            lat_deg: self.lat_deg?,
            lon_deg: self.lon_deg?,
            alt_km: self.alt_km.unwrap_or(0.0),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionConfig {
    pub tx: String,
    pub rx: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub fd_node: String,
    pub a: DirectionConfig,
    pub b: DirectionConfig,
    pub carrier_ghz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DuplexConfig {
    pub sic_db: f64,
    pub amplification_db: Option<f64>,
    pub si_reference: Option<SiReferenceKind>,
    pub fd_tx_power_dbw: Option<f64>,
    pub fdd_split: Option<f64>,
    pub se_metric: Option<SeMetric>,
    pub additional_loss_db: Option<f64>,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub use_case: UseCaseId,
    pub constellation: ConstellationConfig,
    pub nodes: BTreeMap<String, Node>,
    pub link: LinkConfig,
    pub env: NoiseEnvironment,
    pub duplex: DuplexConfig,
}

/// One default that was applied to the scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assumption {
    pub key: String,
    pub value: String,
    pub note: String,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} ({})", self.key, self.value, self.note)
    }
}

// ---------------------------------------------------------------------------
// File representation
// ---------------------------------------------------------------------------

mod file {
    use super::*;

    #[derive(Debug, Default, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct ScenarioFile {
        #[serde(skip_serializing_if = "Option::is_none")]
        pub use_case: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub constellation: Option<ConstellationFile>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub nodes: Option<BTreeMap<String, NodeFile>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub link: Option<LinkFile>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub env: Option<EnvFile>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub duplex: Option<DuplexFile>,
    }

    #[derive(Debug, Default, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct ConstellationFile {
        #[serde(skip_serializing_if = "Option::is_none")]
        pub altitude_km: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub planes: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub sats_per_plane: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub inclination_deg: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub raan_spread_deg: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub phase_offset_deg: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub epoch_s: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub min_elevation_deg: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub epoch_policy: Option<EpochPolicy>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub eval_epoch_s: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub window_s: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub step_s: Option<f64>,
    }

    #[derive(Debug, Default, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct NodeFile {
        #[serde(skip_serializing_if = "Option::is_none")]
        pub role: Option<NodeRole>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub lat_deg: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub lon_deg: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub alt_km: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub eirp_dbw: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub g_over_t_dbk: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub isolation_db: Option<f64>,
    }

    #[derive(Debug, Default, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct LinkFile {
        #[serde(skip_serializing_if = "Option::is_none")]
        pub fd_node: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub carrier_ghz: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub a: Option<DirectionConfig>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub b: Option<DirectionConfig>,
    }

    #[derive(Debug, Default, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct EnvFile {
        #[serde(skip_serializing_if = "Option::is_none")]
        pub temperature_k: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub bandwidth_hz: Option<f64>,
    }

    #[derive(Debug, Default, Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct DuplexFile {
        #[serde(skip_serializing_if = "Option::is_none")]
        pub sic_db: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub amplification_db: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub si_reference: Option<SiReferenceKind>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub fd_tx_power_dbw: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub fdd_split: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub se_metric: Option<SeMetric>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub additional_loss_db: Option<f64>,
    }
}

use file::*;

fn required<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| Error::validation(field, "missing required field"))
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, column)
}

/// Name of the table header that precedes `offset`, or `top level`.
fn enclosing_section(text: &str, offset: usize) -> String {
    text[..offset.min(text.len())]
        .lines()
        .rev()
        .map(str::trim)
        .find(|l| l.starts_with('['))
        .map(|l| l.trim_matches(|c| c == '[' || c == ']').trim().to_string())
        .unwrap_or_else(|| "top level".to_string())
}

fn map_toml_error(text: &str, err: toml::de::Error) -> Error {
    let offset = err.span().map_or(0, |s| s.start);
    let message = err.message().to_string();
    if let Some(rest) = message.strip_prefix("unknown field `") {
        if let Some(key) = rest.split('`').next() {
            return Error::UnknownKey {
                section: enclosing_section(text, offset),
                key: key.to_string(),
            };
        }
    }
    let (line, column) = line_col(text, offset);
    Error::Parse {
        line,
        column,
        message,
    }
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        let raw: ScenarioFile = toml::from_str(text).map_err(|e| map_toml_error(text, e))?;
        Scenario::from_file(raw)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Scenario::from_toml_str(&text)
    }

    fn from_file(raw: ScenarioFile) -> Result<Scenario> {
        let use_case: UseCaseId = required(raw.use_case, "use_case")?.parse()?;

        let c = required(raw.constellation, "constellation")?;
        let constellation = ConstellationConfig {
            altitude_km: required(c.altitude_km, "constellation.altitude_km")?,
            planes: required(c.planes, "constellation.planes")?,
            sats_per_plane: required(c.sats_per_plane, "constellation.sats_per_plane")?,
            inclination_deg: c.inclination_deg,
            raan_spread_deg: c.raan_spread_deg,
            phase_offset_deg: c.phase_offset_deg,
            epoch_s: c.epoch_s,
            min_elevation_deg: c.min_elevation_deg,
            epoch_policy: c.epoch_policy,
            eval_epoch_s: c.eval_epoch_s,
            window_s: c.window_s,
            step_s: c.step_s,
        };

        let raw_nodes = required(raw.nodes, "nodes")?;
        let mut nodes = BTreeMap::new();
        for (name, n) in raw_nodes {
            let field = |f: &str| format!("nodes.{name}.{f}");
            let node = Node {
                role: required(n.role, &field("role"))?,
                lat_deg: n.lat_deg,
                lon_deg: n.lon_deg,
                alt_km: n.alt_km,
                rf: NodeRf {
                    eirp_dbw: required(n.eirp_dbw, &field("eirp_dbw"))?,
                    g_over_t_dbk: required(n.g_over_t_dbk, &field("g_over_t_dbk"))?,
                    isolation_db: required(n.isolation_db, &field("isolation_db"))?,
                },
            };
            nodes.insert(name, node);
        }

        let l = required(raw.link, "link")?;
        let link = LinkConfig {
            fd_node: required(l.fd_node, "link.fd_node")?,
            a: required(l.a, "link.a")?,
            b: required(l.b, "link.b")?,
            carrier_ghz: l.carrier_ghz,
        };

        let e = required(raw.env, "env")?;
        let env = NoiseEnvironment {
            temperature_k: required(e.temperature_k, "env.temperature_k")?,
            bandwidth_hz: required(e.bandwidth_hz, "env.bandwidth_hz")?,
        };

        let d = required(raw.duplex, "duplex")?;
        let duplex = DuplexConfig {
            sic_db: required(d.sic_db, "duplex.sic_db")?,
            amplification_db: d.amplification_db,
            si_reference: d.si_reference,
            fd_tx_power_dbw: d.fd_tx_power_dbw,
            fdd_split: d.fdd_split,
            se_metric: d.se_metric,
            additional_loss_db: d.additional_loss_db,
        };

        let s = Scenario {
            use_case,
            constellation,
            nodes,
            link,
            env,
            duplex,
        };
        s.validate()?;
        Ok(s)
    }

    fn to_file(&self) -> ScenarioFile {
        let c = &self.constellation;
        let d = &self.duplex;
        ScenarioFile {
            use_case: Some(self.use_case.to_string()),
            constellation: Some(ConstellationFile {
                altitude_km: Some(c.altitude_km),
                planes: Some(c.planes),
                sats_per_plane: Some(c.sats_per_plane),
                inclination_deg: c.inclination_deg,
                raan_spread_deg: c.raan_spread_deg,
                phase_offset_deg: c.phase_offset_deg,
                epoch_s: c.epoch_s,
                min_elevation_deg: c.min_elevation_deg,
                epoch_policy: c.epoch_policy,
                eval_epoch_s: c.eval_epoch_s,
                window_s: c.window_s,
                step_s: c.step_s,
            }),
            nodes: Some(
                self.nodes
                    .iter()
                    .map(|(name, n)| {
                        (
                            name.clone(),
                            NodeFile {
                                role: Some(n.role),
                                lat_deg: n.lat_deg,
                                lon_deg: n.lon_deg,
                                alt_km: n.alt_km,
                                eirp_dbw: Some(n.rf.eirp_dbw),
                                g_over_t_dbk: Some(n.rf.g_over_t_dbk),
                                isolation_db: Some(n.rf.isolation_db),
                            },
                        )
                    })
                    .collect(),
            ),
            link: Some(LinkFile {
                fd_node: Some(self.link.fd_node.clone()),
                carrier_ghz: self.link.carrier_ghz,
                a: Some(self.link.a.clone()),
                b: Some(self.link.b.clone()),
            }),
            env: Some(EnvFile {
                temperature_k: Some(self.env.temperature_k),
                bandwidth_hz: Some(self.env.bandwidth_hz),
            }),
            duplex: Some(DuplexFile {
                sic_db: Some(d.sic_db),
                amplification_db: d.amplification_db,
                si_reference: d.si_reference,
                fd_tx_power_dbw: d.fd_tx_power_dbw,
                fdd_split: d.fdd_split,
                se_metric: d.se_metric,
                additional_loss_db: d.additional_loss_db,
            }),
        }
    }

    /// Scenario file text; [`Scenario::from_toml_str`] reads it back unchanged.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_file()).expect("scenario serializes to TOML")
    }

    /// The scenario as it would appear in its file, as JSON.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("scenario serializes to JSON")
    }

    pub fn with_sic(&self, sic_db: f64) -> Scenario {
        let mut s = self.clone();
        s.duplex.sic_db = sic_db;
        s
    }

    pub fn validate(&self) -> Result<()> {
        self.constellation_spec().validate()?;
        let c = &self.constellation;
        let min_el = self.min_elevation_deg();
        if !(min_el.is_finite() && (0.0..=90.0).contains(&min_el)) {
            return Err(Error::validation(
                "constellation.min_elevation_deg",
                format!("must be within [0, 90], got {min_el}"),
            ));
        }
        match self.epoch_policy() {
            EpochPolicy::Fixed => {
                let t = required(c.eval_epoch_s, "constellation.eval_epoch_s")?;
                ensure_finite("constellation.eval_epoch_s", t)?;
            }
            EpochPolicy::BestPass => {
                self.scan_window()?;
            }
            EpochPolicy::EdgeOfCoverage => {}
        }
        if let Some(w) = c.window_s {
            crate::error::ensure_positive("constellation.window_s", w)?;
        }
        if let Some(st) = c.step_s {
            crate::error::ensure_positive("constellation.step_s", st)?;
        }

        if self.nodes.is_empty() {
            return Err(Error::validation("nodes", "at least one node is required"));
        }
        for (name, n) in &self.nodes {
            let field = |f: &str| format!("nodes.{name}.{f}");
            ensure_finite(&field("eirp_dbw"), n.rf.eirp_dbw)?;
            ensure_finite(&field("g_over_t_dbk"), n.rf.g_over_t_dbk)?;
            ensure_non_negative(&field("isolation_db"), n.rf.isolation_db)?;
            match n.role {
                NodeRole::Satellite => {
                    for (key, v) in [
                        ("lat_deg", n.lat_deg),
                        ("lon_deg", n.lon_deg),
                        ("alt_km", n.alt_km),
                    ] {
                        if v.is_some() {
                            return Err(Error::validation(
                                field(key),
                                "satellite nodes take their position from the constellation",
                            ));
                        }
                    }
                }
                NodeRole::Ground | NodeRole::Air => {
                    required(n.lat_deg, &field("lat_deg"))?;
                    required(n.lon_deg, &field("lon_deg"))?;
                    if n.role == NodeRole::Air {
                        required(n.alt_km, &field("alt_km"))?;
                    }
                    let pos = n.position().expect("checked above");
                    pos.validate().map_err(|e| match e {
                        Error::Validation { field: f, reason } => {
                            Error::validation(field(&f), reason)
                        }
                        other => other,
                    })?;
                    if pos.alt_km >= c.altitude_km {
                        return Err(Error::validation(
                            field("alt_km"),
                            "must be below the constellation altitude",
                        ));
                    }
                }
            }
        }

        for (label, d) in [("link.a", &self.link.a), ("link.b", &self.link.b)] {
            let tx = self.node(&d.tx, &format!("{label}.tx"))?;
            let rx = self.node(&d.rx, &format!("{label}.rx"))?;
            let sats = [tx, rx]
                .iter()
                .filter(|n| n.role == NodeRole::Satellite)
                .count();
            if sats != 1 {
                return Err(Error::validation(
                    label,
                    "each direction must join the serving satellite to a ground or air node",
                ));
            }
        }
        self.node(&self.link.fd_node, "link.fd_node")?;
        let sat_a = self.link_satellite(&self.link.a);
        let sat_b = self.link_satellite(&self.link.b);
        if sat_a != sat_b {
            return Err(Error::validation(
                "link",
                "both directions must use the same satellite node",
            ));
        }
        self.carrier_ghz()?;

        self.env.validate().map_err(|e| match e {
            Error::Validation { field, reason } => {
                Error::validation(format!("env.{field}"), reason)
            }
            other => other,
        })?;

        let d = &self.duplex;
        ensure_non_negative("duplex.sic_db", d.sic_db)?;
        ensure_non_negative("duplex.amplification_db", self.amplification_db())?;
        match (self.si_reference_kind(), d.fd_tx_power_dbw) {
            (SiReferenceKind::Fixed, None) => {
                return Err(Error::validation(
                    "duplex.fd_tx_power_dbw",
                    "required when si_reference = \"fixed\"",
                ))
            }
            (SiReferenceKind::Fixed, Some(p)) => ensure_finite("duplex.fd_tx_power_dbw", p)?,
            (_, Some(_)) => {
                return Err(Error::validation(
                    "duplex.fd_tx_power_dbw",
                    "only valid with si_reference = \"fixed\"",
                ))
            }
            (_, None) => {}
        }
        self.duplex_options().validate().map_err(|e| match e {
            Error::Validation { field, reason } => {
                Error::validation(format!("duplex.{field}"), reason)
            }
            other => other,
        })?;
        self.link_pair(1.0, 1.0)?.validate()
    }

    fn node(&self, name: &str, field: &str) -> Result<&Node> {
        self.nodes
            .get(name)
            .ok_or_else(|| Error::validation(field, format!("node `{name}` is not defined")))
    }

    fn link_satellite<'a>(&'a self, d: &'a DirectionConfig) -> &'a str {
        if self
            .nodes
            .get(&d.tx)
            .is_some_and(|n| n.role == NodeRole::Satellite)
        {
            &d.tx
        } else {
            &d.rx
        }
    }

    /// Name of the node served by the satellite in this direction.
    fn link_terminal<'a>(&'a self, d: &'a DirectionConfig) -> &'a str {
        if self.link_satellite(d) == d.tx {
            &d.rx
        } else {
            &d.tx
        }
    }

    pub fn constellation_spec(&self) -> ConstellationSpec {
        let c = &self.constellation;
        ConstellationSpec {
            altitude_km: c.altitude_km,
            planes: c.planes,
            sats_per_plane: c.sats_per_plane,
            inclination_deg: c.inclination_deg.unwrap_or(DEFAULT_INCLINATION_DEG),
            raan_spread_deg: c.raan_spread_deg.unwrap_or(DEFAULT_RAAN_SPREAD_DEG),
            phase_offset_deg: c
                .phase_offset_deg
                .unwrap_or_else(|| default_phase_offset_deg(c.planes, c.sats_per_plane)),
            epoch_s: c.epoch_s.unwrap_or(0.0),
        }
    }

    pub fn min_elevation_deg(&self) -> f64 {
        self.constellation
            .min_elevation_deg
            .unwrap_or(DEFAULT_MIN_ELEVATION_DEG)
    }

    pub fn epoch_policy(&self) -> EpochPolicy {
        self.constellation.epoch_policy.unwrap_or_default()
    }

    pub fn scan_window(&self) -> Result<ScanWindow> {
        let c = &self.constellation;
        ScanWindow::new(
            c.epoch_s.unwrap_or(0.0),
            c.window_s.unwrap_or(DEFAULT_WINDOW_S),
            c.step_s.unwrap_or(DEFAULT_STEP_S),
        )
    }

    pub fn carrier_ghz(&self) -> Result<f64> {
        let f = match self.link.carrier_ghz {
            Some(f) => f,
            None => self.use_case.default_carrier_ghz().ok_or_else(|| {
                Error::validation(
                    "link.carrier_ghz",
                    format!(
                        "required: use case {} has no default carrier",
                        self.use_case
                    ),
                )
            })?,
        };
        crate::error::ensure_positive("link.carrier_ghz", f)?;
        Ok(f)
    }

    pub fn amplification_db(&self) -> f64 {
        self.duplex
            .amplification_db
            .unwrap_or(DEFAULT_AMPLIFICATION_DB)
    }

    pub fn si_reference_kind(&self) -> SiReferenceKind {
        self.duplex.si_reference.unwrap_or_default()
    }

    pub fn si_reference(&self) -> SiReference {
        match self.si_reference_kind() {
            SiReferenceKind::RelayedSignal => SiReference::RelayedSignal {
                amplification_db: self.amplification_db(),
            },
            SiReferenceKind::Eirp => SiReference::Eirp,
            SiReferenceKind::Fixed => SiReference::Fixed {
                tx_power_dbw: self.duplex.fd_tx_power_dbw.unwrap_or(f64::NAN),
            },
        }
    }

    pub fn duplex_options(&self) -> DuplexOptions {
        let d = &self.duplex;
        DuplexOptions {
            fdd_split: d.fdd_split.unwrap_or(DEFAULT_FDD_SPLIT),
            metric: d.se_metric.unwrap_or_default(),
            additional_loss_db: d.additional_loss_db.unwrap_or(0.0),
        }
    }

    pub fn sic_config(&self) -> SicConfig {
        SicConfig {
            sic_db: self.duplex.sic_db,
            isolation_db: self.nodes[&self.link.fd_node].rf.isolation_db,
        }
    }

    /// RF chains of every node at the shared carrier.
    pub fn chains(&self) -> Result<BTreeMap<String, RfChain>> {
        let carrier = self.carrier_ghz()?;
        Ok(self
            .nodes
            .iter()
            .map(|(name, n)| {
                (
                    name.clone(),
                    RfChain {
                        eirp_dbw: n.rf.eirp_dbw,
                        g_over_t_dbk: n.rf.g_over_t_dbk,
                        isolation_db: n.rf.isolation_db,
                        carrier_ghz: carrier,
                    },
                )
            })
            .collect())
    }

    fn link_pair(&self, distance_a_km: f64, distance_b_km: f64) -> Result<FdLinkPair> {
        Ok(FdLinkPair {
            a: Direction {
                tx: self.link.a.tx.clone(),
                rx: self.link.a.rx.clone(),
                distance_km: distance_a_km,
            },
            b: Direction {
                tx: self.link.b.tx.clone(),
                rx: self.link.b.rx.clone(),
                distance_km: distance_b_km,
            },
            carrier_ghz: self.carrier_ghz()?,
            fd_node: self.link.fd_node.clone(),
            si_reference: self.si_reference(),
        })
    }

    /// Ground and air nodes served by the link, in name order.
    pub fn observers(&self) -> Vec<(&str, GeodeticPosition)> {
        let mut names: Vec<&str> = vec![
            self.link_terminal(&self.link.a),
            self.link_terminal(&self.link.b),
        ];
        names.sort_unstable();
        names.dedup();
        names
            .into_iter()
            .map(|n| {
                (
                    n,
                    self.nodes[n].position().expect("validated ground/air node"),
                )
            })
            .collect()
    }

    /// Every default that affects this scenario's results.
    pub fn assumptions(&self) -> Vec<Assumption> {
        let mut out = Vec::new();
        let mut push = |key: &str, value: String, note: &str| {
            out.push(Assumption {
                key: key.to_string(),
                value,
                note: note.to_string(),
            })
        };
        let c = &self.constellation;
        let policy = self.epoch_policy();
        if c.epoch_policy.is_none() {
            push(
                "constellation.epoch_policy",
                policy.as_str().into(),
                "evaluation instant unstated; worst-case geometry with every node at the minimum elevation",
            );
        }
        if c.min_elevation_deg.is_none() {
            push(
                "constellation.min_elevation_deg",
                fmt_num(DEFAULT_MIN_ELEVATION_DEG),
                "default elevation mask",
            );
        }
        if policy != EpochPolicy::EdgeOfCoverage {
            let spec = self.constellation_spec();
            if c.inclination_deg.is_none() {
                push(
                    "constellation.inclination_deg",
                    fmt_num(spec.inclination_deg),
                    "Iridium-like inclination",
                );
            }
            if c.raan_spread_deg.is_none() {
                push(
                    "constellation.raan_spread_deg",
                    fmt_num(spec.raan_spread_deg),
                    "star pattern RAAN span",
                );
            }
            if c.phase_offset_deg.is_none() {
                push(
                    "constellation.phase_offset_deg",
                    fmt_num(spec.phase_offset_deg),
                    "one slot of stagger per plane, 360/(planes*sats_per_plane)",
                );
            }
            if c.epoch_s.is_none() {
                push("constellation.epoch_s", "0".into(), "time origin");
            }
        }
        if policy == EpochPolicy::BestPass {
            if c.window_s.is_none() {
                push(
                    "constellation.window_s",
                    fmt_num(DEFAULT_WINDOW_S),
                    "24 h pass-search window",
                );
            }
            if c.step_s.is_none() {
                push(
                    "constellation.step_s",
                    fmt_num(DEFAULT_STEP_S),
                    "coarse scan step, refined at 1 s around each local maximum",
                );
            }
        }
        let observers: Vec<String> = self
            .observers()
            .iter()
            .map(|(n, _)| n.to_string())
            .collect();
        for name in observers {
            let n = &self.nodes[&name];
            if n.role == NodeRole::Ground && n.alt_km.is_none() {
                push(
                    &format!("nodes.{name}.alt_km"),
                    "0".into(),
                    "ground node at sea level",
                );
            }
        }
        if self.link.carrier_ghz.is_none() {
            if let Some(f) = self.use_case.default_carrier_ghz() {
                push(
                    "link.carrier_ghz",
                    fmt_num(f),
                    "shared in-band carrier of the link that operates full duplex",
                );
            }
        }
        let d = &self.duplex;
        if d.si_reference.is_none() {
            push(
                "duplex.si_reference",
                SiReferenceKind::default().as_str().into(),
                "leakage is the relayed carrier: received power plus amplification",
            );
        }
        if d.amplification_db.is_none() {
            push(
                "duplex.amplification_db",
                fmt_num(DEFAULT_AMPLIFICATION_DB),
                "bent-pipe gain at the FD node",
            );
        }
        if d.fdd_split.is_none() {
            push(
                "duplex.fdd_split",
                fmt_num(DEFAULT_FDD_SPLIT),
                "FDD baseline splits the band equally",
            );
        }
        if d.se_metric.is_none() {
            push(
                "duplex.se_metric",
                SeMetric::default().as_str().into(),
                "spectral efficiency of the link received at the FD node",
            );
        }
        if d.additional_loss_db.is_none() {
            push(
                "duplex.additional_loss_db",
                "0".into(),
                "no losses beyond free space",
            );
        }
        out
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

// ---------------------------------------------------------------------------
// Assessment
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeGeometry {
    pub node: String,
    pub elevation_deg: f64,
    pub slant_range_km: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedGeometry {
    pub policy: EpochPolicy,
    pub satellite_node: String,
    /// Serving satellite; absent for edge-of-coverage geometry.
    pub satellite_id: Option<usize>,
    pub epoch_s: Option<f64>,
    pub nodes: Vec<NodeGeometry>,
}

impl ResolvedGeometry {
    pub fn slant_range_km(&self, node: &str) -> Option<f64> {
        self.nodes
            .iter()
            .find(|n| n.node == node)
            .map(|n| n.slant_range_km)
    }
}

pub fn resolve_geometry(s: &Scenario) -> Result<ResolvedGeometry> {
    let observers = s.observers();
    let positions: Vec<GeodeticPosition> = observers.iter().map(|(_, p)| *p).collect();
    let min_el = s.min_elevation_deg();
    let spec = s.constellation_spec();
    let policy = s.epoch_policy();
    let (satellite_id, epoch_s, looks) = match policy {
        EpochPolicy::EdgeOfCoverage => {
            let looks = geometry::edge_of_coverage(spec.altitude_km, &positions, min_el)?;
            (
                None,
                None,
                looks
                    .iter()
                    .map(|l| (l.elevation_deg, l.slant_range_km))
                    .collect::<Vec<_>>(),
            )
        }
        EpochPolicy::BestPass | EpochPolicy::Fixed => {
            let passes = if policy == EpochPolicy::BestPass {
                geometry::best_pass(&spec, &positions, &s.scan_window()?, min_el)?
            } else {
                let t = required(s.constellation.eval_epoch_s, "constellation.eval_epoch_s")?;
                geometry::best_satellite_at(&spec, &positions, t, min_el)?
            };
            (
                Some(passes[0].satellite_id),
                Some(passes[0].epoch_s),
                passes
                    .iter()
                    .map(|p| (p.elevation_deg, p.slant_range_km))
                    .collect(),
            )
        }
    };
    Ok(ResolvedGeometry {
        policy,
        satellite_node: s.link_satellite(&s.link.a).to_string(),
        satellite_id,
        epoch_s,
        nodes: observers
            .iter()
            .zip(looks)
            .map(
                |((name, _), (elevation_deg, slant_range_km))| NodeGeometry {
                    node: name.to_string(),
                    elevation_deg,
                    slant_range_km,
                },
            )
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssessmentResult {
    pub use_case: UseCaseId,
    pub geometry: ResolvedGeometry,
    pub comparison: DuplexComparison,
    pub stability_margin_db: f64,
    /// Set when the bent-pipe echo loop has non-positive margin.
    pub stability_warning: bool,
    pub sic_breakeven_db: Breakeven,
    pub assumptions: Vec<Assumption>,
}

fn pair_for(s: &Scenario, g: &ResolvedGeometry) -> Result<FdLinkPair> {
    let range = |d: &DirectionConfig| {
        let node = s.link_terminal(d);
        g.slant_range_km(node)
            .ok_or_else(|| Error::validation("geometry", format!("no geometry for `{node}`")))
    };
    s.link_pair(range(&s.link.a)?, range(&s.link.b)?)
}

/// Duplex comparison at a given SIC using already-resolved geometry.
pub fn compare_at(s: &Scenario, g: &ResolvedGeometry, sic_db: f64) -> Result<DuplexComparison> {
    let pair = pair_for(s, g)?;
    let cfg = SicConfig {
        sic_db,
        ..s.sic_config()
    };
    compare_duplex(&pair, &s.chains()?, &s.env, &cfg, &s.duplex_options())
}

pub fn assess(s: &Scenario) -> Result<AssessmentResult> {
    s.validate()?;
    let geometry = resolve_geometry(s)?;
    assess_with_geometry(s, geometry)
}

fn assess_with_geometry(s: &Scenario, geometry: ResolvedGeometry) -> Result<AssessmentResult> {
    let comparison = compare_at(s, &geometry, s.duplex.sic_db)?;
    let cfg = s.sic_config();
    let margin = loop_stability_margin_db(s.amplification_db(), &cfg)?;
    let breakeven = sic_breakeven_db(
        &pair_for(s, &geometry)?,
        &s.chains()?,
        &s.env,
        cfg.isolation_db,
        &s.duplex_options(),
    )?;
    Ok(AssessmentResult {
        use_case: s.use_case,
        geometry,
        comparison,
        stability_margin_db: margin,
        stability_warning: margin <= 0.0,
        sic_breakeven_db: breakeven,
        assumptions: s.assumptions(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub sic_db: f64,
    pub comparison: DuplexComparison,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub geometry: ResolvedGeometry,
    pub points: Vec<SweepPoint>,
    pub assumptions: Vec<Assumption>,
}

/// One comparison per SIC value, in input order. `threads == 0` uses the
/// global rayon pool.
pub fn sweep_sic_with_threads(
    s: &Scenario,
    sic_values: &[f64],
    threads: usize,
) -> Result<SweepResult> {
    s.validate()?;
    if sic_values.is_empty() {
        return Err(Error::validation(
            "sic values",
            "at least one SIC value is required",
        ));
    }
    for &v in sic_values {
        ensure_non_negative("sic_db", v)?;
    }
    let geometry = resolve_geometry(s)?;
    let run = || -> Result<Vec<SweepPoint>> {
        sic_values
            .par_iter()
            .map(|&sic_db| {
                Ok(SweepPoint {
                    sic_db,
                    comparison: compare_at(s, &geometry, sic_db)?,
                })
            })
            .collect()
    };
    let points = if threads == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::validation("threads", e.to_string()))?
            .install(run)?
    };
    Ok(SweepResult {
        geometry,
        points,
        assumptions: s.assumptions(),
    })
}

pub fn sweep_sic(s: &Scenario, sic_values: &[f64]) -> Result<SweepResult> {
    sweep_sic_with_threads(s, sic_values, 0)
}

/// Inclusive `start:stop:step` grid of SIC values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SicRange {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl SicRange {
    pub fn len(&self) -> usize {
        ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.start_db + i as f64 * self.step_db)
            .collect()
    }
}

impl FromStr for SicRange {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Range(text.to_string());
        let parts: Vec<&str> = text.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(bad());
        };
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
        let r = SicRange {
            start_db: num(a)?,
            stop_db: num(b)?,
            step_db: num(c)?,
        };
        let finite = r.start_db.is_finite() && r.stop_db.is_finite() && r.step_db.is_finite();
        if !finite || r.start_db > r.stop_db || r.step_db <= 0.0 {
            return Err(bad());
        }
        Ok(r)
    }
}

pub fn sweep_grid(s: &Scenario, range: &str) -> Result<SweepResult> {
    let r: SicRange = range.parse()?;
    sweep_sic(s, &r.values())
}

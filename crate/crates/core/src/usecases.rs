//! Catalog of the eight full-duplex use cases with their applications,
//! bands, advantages and priority tiers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum UseCaseId {
    #[serde(rename = "UL")]
    Ul,
    #[serde(rename = "FL")]
    Fl,
    #[serde(rename = "CTRL")]
    Ctrl,
    #[serde(rename = "FU-UD")]
    FuUd,
    #[serde(rename = "UU-FD")]
    UuFd,
    #[serde(rename = "ISL-SO")]
    IslSo,
    #[serde(rename = "ISL-ML")]
    IslMl,
    #[serde(rename = "SATL")]
    Satl,
}

impl UseCaseId {
    pub const ALL: [UseCaseId; 8] = [
        UseCaseId::Ul,
        UseCaseId::Fl,
        UseCaseId::Ctrl,
        UseCaseId::FuUd,
        UseCaseId::UuFd,
        UseCaseId::IslSo,
        UseCaseId::IslMl,
        UseCaseId::Satl,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            UseCaseId::Ul => "UL",
            UseCaseId::Fl => "FL",
            UseCaseId::Ctrl => "CTRL",
            UseCaseId::FuUd => "FU-UD",
            UseCaseId::UuFd => "UU-FD",
            UseCaseId::IslSo => "ISL-SO",
            UseCaseId::IslMl => "ISL-ML",
            UseCaseId::Satl => "SATL",
        }
    }

    /// Shared in-band carrier used when a scenario does not set one.
    pub fn default_carrier_ghz(&self) -> Option<f64> {
        match self {
            UseCaseId::FuUd | UseCaseId::Fl => Some(FEEDER_CARRIER_GHZ),
            UseCaseId::UuFd | UseCaseId::Ul | UseCaseId::Satl => Some(USER_CARRIER_GHZ),
            _ => None,
        }
    }
}

/// Ka-band user-link carrier.
pub const USER_CARRIER_GHZ: f64 = 29.3;
/// Q/V-band feeder-link carrier.
pub const FEEDER_CARRIER_GHZ: f64 = 37.5;

impl fmt::Display for UseCaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UseCaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        if up == "SA-TL" {
            return Ok(UseCaseId::Satl);
        }
        UseCaseId::ALL
            .into_iter()
            .find(|id| id.as_str() == up)
            .ok_or_else(|| Error::UnknownUseCase(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Band {
    L,
    S,
    C,
    Ku,
    K,
    Ka,
    #[serde(rename = "Q/V")]
    QV,
    W,
    #[serde(rename = "optical")]
    Optical,
}

impl Band {
    pub fn as_str(&self) -> &'static str {
        match self {
            Band::L => "L",
            Band::S => "S",
            Band::C => "C",
            Band::Ku => "Ku",
            Band::K => "K",
            Band::Ka => "Ka",
            Band::QV => "Q/V",
            Band::W => "W",
            Band::Optical => "optical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PriorityTier {
    MostPromising,
    Promising,
    LessPromising,
}

impl fmt::Display for PriorityTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PriorityTier::MostPromising => "MostPromising",
            PriorityTier::Promising => "Promising",
            PriorityTier::LessPromising => "LessPromising",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Gateway,
    UserTerminal,
    TtcStation,
    Satellite,
    PeerSatellite,
    Haps,
}

/// Default FD arrangement: `into_fd_from -> fd_node -> out_of_fd_to` on one carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LinkTopology {
    pub fd_node: NodeKind,
    pub into_fd_from: NodeKind,
    pub out_of_fd_to: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UseCase {
    pub id: UseCaseId,
    pub name: &'static str,
    pub application: &'static str,
    pub bands: &'static [Band],
    pub advantages: &'static [&'static str],
    pub priority_tier: PriorityTier,
    pub fd_topology: LinkTopology,
}

const fn topo(into: NodeKind, out: NodeKind) -> LinkTopology {
    LinkTopology {
        fd_node: NodeKind::Satellite,
        into_fd_from: into,
        out_of_fd_to: out,
    }
}

use Band::*;
use NodeKind::*;

static CATALOG: [UseCase; 8] = [
    UseCase {
        id: UseCaseId::Ul,
        name: "User link",
        application: "5G over satellite, hot spot scenarios, relaying, integrated access, and backhauling (IAB), satellite-aided M2M and D2D",
        bands: &[Ku, Ka],
        advantages: &[
            "Doubling the spectrum (increasing data rate or number of served users)",
            "reducing latency by up to 50%",
            "reducing power imbalance between terrestrial and satellite networks",
            "reducing interference between the bands",
        ],
        priority_tier: PriorityTier::Promising,
        fd_topology: topo(UserTerminal, UserTerminal),
    },
    UseCase {
        id: UseCaseId::Fl,
        name: "Feeder link",
        application: "Broadband",
        bands: &[QV, Optical],
        advantages: &[
            "Doubling the spectrum (especially useful for feeder links. This can help to reduce the required number of feeder links to satisfy the demand)",
            "reducing interference between adjacent bands",
            "reducing latency by up to 50%",
        ],
        priority_tier: PriorityTier::Promising,
        fd_topology: topo(Gateway, Gateway),
    },
    UseCase {
        id: UseCaseId::Ctrl,
        name: "Control links",
        application: "Transmission of telemetry data to the satellite",
        bands: &[C, Ku],
        advantages: &[
            "Reduction of the orbital arc between adjacent satellites",
            "reduction of latency by up to 50%",
        ],
        priority_tier: PriorityTier::LessPromising,
        fd_topology: topo(TtcStation, TtcStation),
    },
    UseCase {
        id: UseCaseId::FuUd,
        name: "Feeder uplink and user downlink",
        application: "Broadcast/multicast/unicast.",
        bands: &[QV, Optical, Ku, Ka],
        advantages: &[
            "Reduction of the interference between very close bands",
            "overhead reduction",
            "doubling of spectrum",
        ],
        priority_tier: PriorityTier::LessPromising,
        fd_topology: topo(Gateway, UserTerminal),
    },
    UseCase {
        id: UseCaseId::UuFd,
        name: "User uplink and feeder downlink",
        application: "Backhauling",
        bands: &[QV, Optical, Ku, Ka],
        advantages: &[
            "Reduction of the interference between very close bands",
            "overhead reduction",
            "doubling of spectrum",
        ],
        priority_tier: PriorityTier::LessPromising,
        fd_topology: topo(UserTerminal, Gateway),
    },
    UseCase {
        id: UseCaseId::IslSo,
        name: "Inter-Satellite Link (ISL) for a single orbital plane",
        application: "Relaying, data offloading, exchange of parameters, e.g., telemetry, machine learning model, etc.",
        bands: &[L, S, Ka, W, Optical],
        advantages: &[
            "Doubling the spectrum",
            "reducing the power imbalance between terrestrial and satellite networks",
            "reduction of latency by up to 50%",
        ],
        priority_tier: PriorityTier::MostPromising,
        fd_topology: topo(PeerSatellite, PeerSatellite),
    },
    UseCase {
        id: UseCaseId::IslMl,
        name: "Inter-satellite and inter-orbital links in multi-layer satellite constellations",
        application: "Relaying, data offloading, edge computing, exchange of parameters, e.g., telemetry, machine learning model, etc.",
        bands: &[L, S, Ka, W, Optical],
        advantages: &[
            "Doubling the spectrum (e.g., to increase the number of simultaneously inter-connected satellites)",
            "reducing the orbital arc between the satellites",
            "reduction of power imbalance between terrestrial and satellite networks",
            "reduction of latency by up to 50%",
        ],
        priority_tier: PriorityTier::MostPromising,
        fd_topology: topo(PeerSatellite, PeerSatellite),
    },
    UseCase {
        id: UseCaseId::Satl,
        name: "Satellite-aerial-terrestrial links",
        application: "Satellite-aerial terrestrial integration, data offloading, edge computing",
        bands: &[K],
        advantages: &[
            "Doubling the spectrum (e.g. increasing the number of supported airplanes and HAPS)",
            "reducing of power imbalance between terrestrial and satellite networks",
        ],
        priority_tier: PriorityTier::LessPromising,
        fd_topology: topo(Haps, Haps),
    },
];

pub fn catalog() -> &'static [UseCase] {
    &CATALOG
}

pub fn lookup(id: UseCaseId) -> &'static UseCase {
    CATALOG
        .iter()
        .find(|u| u.id == id)
        .expect("catalog covers every id")
}

pub fn priority(id: UseCaseId) -> PriorityTier {
    lookup(id).priority_tier
}

/// String-keyed variant of [`priority`].
pub fn priority_by_name(id: &str) -> Result<PriorityTier> {
    Ok(priority(id.parse()?))
}

const FU_UD_REFERENCE: &str = include_str!("../scenarios/fu_ud_reference.toml");
const UU_FD_REFERENCE: &str = include_str!("../scenarios/uu_fd_reference.toml");
const SATL_REFERENCE: &str = include_str!("../scenarios/satl_reference.toml");

/// Starting point for a scenario of a given use case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioTemplate {
    pub use_case: UseCaseId,
    /// `false` when no RF parameters are available for this use case.
    pub parameters_specified: bool,
    /// Scenario file text, present only when `parameters_specified`.
    pub document: Option<&'static str>,
    pub topology: LinkTopology,
}

impl ScenarioTemplate {
    pub fn load(&self) -> Result<Scenario> {
        match self.document {
            Some(doc) => Scenario::from_toml_str(doc),
            None => Err(Error::validation(
                format!("use case {}", self.use_case),
                "parameters not specified; no quantitative template",
            )),
        }
    }
}

pub fn default_scenario(id: UseCaseId) -> ScenarioTemplate {
    let document = match id {
        UseCaseId::FuUd => Some(FU_UD_REFERENCE),
        UseCaseId::UuFd => Some(UU_FD_REFERENCE),
        UseCaseId::Satl => Some(SATL_REFERENCE),
        _ => None,
    };
    ScenarioTemplate {
        use_case: id,
        parameters_specified: document.is_some(),
        document,
        topology: lookup(id).fd_topology,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_unique_entries() {
        let c = catalog();
        assert_eq!(c.len(), 8);
        for (i, u) in c.iter().enumerate() {
            assert!(c[i + 1..].iter().all(|v| v.id != u.id));
            assert!(!u.bands.is_empty() && !u.advantages.is_empty());
        }
    }

    #[test]
    fn user_link_entry() {
        let ul = lookup(UseCaseId::Ul);
        assert_eq!(ul.bands, &[Band::Ku, Band::Ka]);
        assert!(ul.application.contains("satellite-aided M2M and D2D"));
    }

    #[test]
    fn isl_ml_advantages() {
        let adv = lookup(UseCaseId::IslMl).advantages;
        assert!(adv.iter().any(|a| a.starts_with("Doubling the spectrum")));
        assert!(adv.iter().any(|a| a.contains("latency by up to 50%")));
    }

    #[test]
    fn tiers() {
        use PriorityTier::*;
        let expect = [
            ("ISL-SO", MostPromising),
            ("ISL-ML", MostPromising),
            ("FL", Promising),
            ("UL", Promising),
            ("SATL", LessPromising),
            ("CTRL", LessPromising),
            ("FU-UD", LessPromising),
            ("UU-FD", LessPromising),
        ];
        for (id, tier) in expect {
            assert_eq!(priority_by_name(id).unwrap(), tier, "{id}");
        }
        assert!(matches!(
            priority_by_name("XX"),
            Err(Error::UnknownUseCase(_))
        ));
    }

    #[test]
    fn id_parsing() {
        assert_eq!("fu-ud".parse::<UseCaseId>().unwrap(), UseCaseId::FuUd);
        assert_eq!("SA-TL".parse::<UseCaseId>().unwrap(), UseCaseId::Satl);
        for id in UseCaseId::ALL {
            assert_eq!(id.as_str().parse::<UseCaseId>().unwrap(), id);
        }
    }

    #[test]
    fn templates() {
        let fu = default_scenario(UseCaseId::FuUd).load().unwrap();
        assert_eq!(fu.nodes["gateway"].rf.eirp_dbw, 43.0);
        assert_eq!(fu.nodes["satellite"].rf.eirp_dbw, 65.0);
        assert_eq!(fu.nodes["satellite"].rf.g_over_t_dbk, 31.5);

        let isl = default_scenario(UseCaseId::IslSo);
        assert!(!isl.parameters_specified);
        assert!(isl.load().is_err());

        let satl = default_scenario(UseCaseId::Satl).load().unwrap();
        assert_eq!(satl.nodes[&satl.link.fd_node].rf.isolation_db, 25.0);

        for id in [UseCaseId::FuUd, UseCaseId::UuFd, UseCaseId::Satl] {
            let s = default_scenario(id).load().unwrap();
            assert_eq!(s.use_case, id);
        }
    }
}

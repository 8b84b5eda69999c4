//! Single-channel full-duplex (in-band FD) trade studies for LEO satellite links.
//!
//! The crate propagates a circular-orbit constellation, closes one-directional
//! link budgets from EIRP and G/T, models the residual self-interference left
//! after isolation and cancellation at the full-duplex node, and compares the
//! resulting spectral efficiency against an FDD baseline that splits the same
//! total bandwidth.
//!
//! Module map:
//!
//! - [`geometry`]: constellation propagation, geodetic conversion, look angles, pass search
//! - [`linkbudget`]: free-space loss, thermal noise, SNR
//! - [`duplexing`]: residual SI, SINR, FD-vs-FDD comparison, SIC break-even
//! - [`usecases`]: the eight-entry use-case catalog and reference templates
//! - [`scenario`]: scenario files, assessment driver, SIC sweeps
//! - [`report`]: table / JSON / CSV / SVG emission
//! - [`cli`]: the `fdsat` command line

pub mod cli;
pub mod duplexing;
pub mod error;
pub mod geometry;
pub mod linkbudget;
pub mod report;
pub mod scenario;
pub mod usecases;

pub use error::{Error, Result};

/// Tool version recorded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

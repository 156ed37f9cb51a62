//! Degrees-of-freedom regions for order-(K-1) messages in the K-user MIMO
//! broadcast channel, and a two-phase delayed-CSIT transmission scheme that
//! attains them.
//!
//! * [`region`]: exact no-CSIT and delayed-CSIT regions, redundancy
//!   elimination, vertices, inclusion tests.
//! * [`plan`]: scheme parameters (antenna counts, slot counts, truncation)
//!   and the per-receiver decoding conditions.
//! * [`sim`]: Monte-Carlo execution of the scheme over random channels with
//!   per-receiver linear decoding.

pub mod config;
pub mod curve;
pub mod error;
pub mod plan;
mod polytope;
pub mod region;
pub mod report;
pub mod sim;

pub use config::{AntennaConfig, ConfigSpec, DoFPoint, Rational};
pub use error::{Error, Result};
pub use plan::SchemePlan;
pub use region::{symmetric_sum_dof, CsitMode, DoFRegion, HalfSpace};

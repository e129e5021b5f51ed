//! Secrecy performance of large-array relay links.
//!
//! A source reaches a destination through a relay with many antennas while a
//! single-antenna eavesdropper listens to the relay. The relay combines with
//! MRC and transmits with MRT steered by an imperfect estimate of the
//! destination channel, and either amplifies-and-forwards (AF) or
//! decodes-and-forwards (DF).
//!
//! - [`params`]: the shared link description.
//! - [`channel`]: random channel draws and their sufficient statistics.
//! - [`analytic`]: closed-form capacities, secrecy outage capacities,
//!   interception probabilities and high-power limits.
//! - [`montecarlo`]: simulation estimates of the same quantities.
//! - [`decision`]: AF/DF comparison, switching points and relay power
//!   optimization.
//! - [`cli`]: config files, sweeps and CSV/JSON reports.

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod decision;
pub mod error;
pub mod montecarlo;
pub mod params;

pub use analytic::{Interception, Regime, Scheme, SchemeReport};
pub use error::{Error, Result};
pub use montecarlo::{McEstimate, McOutcome};
pub use params::SystemParams;

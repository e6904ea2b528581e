//! Secrecy performance of CSI ratio-based transmitter selection (RTS) in a
//! multi-transmitter wiretap network whose transmitters are fed by unreliable
//! wireless backhaul links.
//!
//! The crate is split the same way the analysis is:
//!
//! - [`model`]: parameters, dB helpers and the secrecy-rate primitive.
//! - [`special`]: integer-order incomplete gamma, `Ei`, exact binomials.
//! - [`quadrature`]: adaptive Gauss–Kronrod integration.
//! - [`distributions`]: exponential gains, zero-atom mixtures, max-ratio laws.
//! - [`analytics`]: closed-form NZR/SOP, quadrature oracles, asymptotes and
//!   closed-form adjudication.
//! - [`simulator`]: seeded, shard-independent Monte Carlo of all selection
//!   schemes.

// `!(x >= 0.0)` is used on purpose so NaN is rejected with the bad values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod distributions;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod simulator;
pub mod special;

pub use analytics::{Metric, MetricSource, MetricValue};
pub use error::{Error, Result};
pub use model::{db_to_linear, linear_to_db, secrecy_rate, KnowledgeMode, SchemeId, SystemParams};
pub use simulator::MetricEstimate;

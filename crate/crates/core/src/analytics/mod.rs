//! NZR and SOP of the RTS scheme: closed forms, quadrature oracles, high-SNR
//! asymptotes and the adjudication between closed forms and oracles.
//!
//! The oracle is ground truth. The closed forms are evaluated term by term
//! as derived and are trusted only where [`validation`] finds them within
//! [`validation::MATCH_TOLERANCE`] of the oracle.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::model::KnowledgeMode;

mod asymptote;
mod closed_form;
mod oracle;
pub mod validation;

pub use asymptote::asymptote;
pub use closed_form::{
    nzr_closed_form, sop_closed_form, sop_closed_form_with, AConstant, ClosedFormContext, GammaTerm, SopReading,
};
pub use oracle::{nzr_oracle, nzr_oracle_with, sop_oracle, sop_oracle_with, zero_secrecy_oracle, OracleSettings};

/// Values outside `[−OUT_OF_RANGE_SLACK, 1 + OUT_OF_RANGE_SLACK]` are flagged.
pub const OUT_OF_RANGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    /// Probability of a strictly positive secrecy rate.
    Nzr,
    /// Probability that the secrecy rate falls below `R_th`.
    Sop,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::Nzr, Metric::Sop];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Nzr => "NZR",
            Metric::Sop => "SOP",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "nzr" => Ok(Metric::Nzr),
            "sop" => Ok(Metric::Sop),
            _ => Err(Error::param("metric", format!("unknown metric `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricSource {
    ClosedForm,
    Oracle,
    Asymptote,
}

/// An analytic probability together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub metric: Metric,
    pub mode: KnowledgeMode,
    pub value: f64,
    pub source: MetricSource,
    /// Absolute error bound (quadrature estimate for oracles, 0 otherwise).
    pub error_bound: f64,
}

impl MetricValue {
    pub(crate) fn new(metric: Metric, mode: KnowledgeMode, value: f64, source: MetricSource) -> Self {
        Self {
            metric,
            mode,
            value,
            source,
            error_bound: 0.0,
        }
    }

    /// False when the raw value is not a probability. Closed forms are never
    /// clamped, so this is how a broken expression shows up.
    pub fn in_range(&self) -> bool {
        self.value.is_finite() && self.value >= -OUT_OF_RANGE_SLACK && self.value <= 1.0 + OUT_OF_RANGE_SLACK
    }
}

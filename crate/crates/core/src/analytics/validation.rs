//! Closed form vs. oracle adjudication, with the registry of confirmed
//! closed-form deviations.
//!
//! A comparison that is not a [`Verdict::Match`] is acceptable only when a
//! [`KnownDeviation`] covers it. Each registry entry is backed by tests that
//! reproduce the disagreement.

use std::fmt;

use super::{nzr_closed_form, sop_closed_form_with, Metric, MetricValue, SopReading};
use crate::error::Error;
use crate::model::{KnowledgeMode, SystemParams};

/// Closed forms within this absolute distance of the oracle are a match.
pub const MATCH_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Match,
    Mismatch,
    /// The closed form is not a probability (or could not be evaluated).
    OutOfRange,
    /// The oracle itself failed; nothing to compare against.
    Unresolved,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
            Verdict::OutOfRange => "OUT_OF_RANGE",
            Verdict::Unresolved => "UNRESOLVED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A confirmed disagreement between a closed form and the oracle.
#[derive(Debug)]
pub struct KnownDeviation {
    pub id: &'static str,
    pub metric: Metric,
    pub mode: KnowledgeMode,
    pub summary: &'static str,
    scope: fn(&SystemParams) -> bool,
}

impl KnownDeviation {
    pub fn covers(&self, metric: Metric, mode: KnowledgeMode, p: &SystemParams) -> bool {
        self.metric == metric && self.mode == mode && (self.scope)(p)
    }
}

pub static KNOWN_DEVIATIONS: &[KnownDeviation] = &[
    KnownDeviation {
        id: "nzr-available-k3plus",
        metric: Metric::Nzr,
        mode: KnowledgeMode::Available,
        summary: "double sum over active-set sizes departs from the oracle once K >= 3; \
                  exact for K <= 2",
        scope: |p| p.k() >= 3,
    },
    KnownDeviation {
        id: "nzr-unavailable-k1",
        metric: Metric::Nzr,
        mode: KnowledgeMode::Unavailable,
        summary: "with one transmitter the competitor sum is empty and the expression \
                  collapses to Delta instead of Delta*s/(s+d)",
        scope: |p| p.k() == 1,
    },
    KnownDeviation {
        id: "sop-available-k2plus",
        metric: Metric::Sop,
        mode: KnowledgeMode::Available,
        summary: "incomplete-gamma bracket diverges from the oracle (often far outside [0,1]) \
                  for K >= 2 under every reading of a and gamma(n+1); undefined at R_th = 0",
        scope: |p| p.k() >= 2,
    },
    KnownDeviation {
        id: "sop-unavailable",
        metric: Metric::Sop,
        mode: KnowledgeMode::Unavailable,
        summary: "K = 1 yields 1-Delta (the single-link outage term is missing); K >= 2 \
                  diverges like the available-knowledge bracket",
        scope: |_| true,
    },
];

pub fn find_deviation(metric: Metric, mode: KnowledgeMode, p: &SystemParams) -> Option<&'static KnownDeviation> {
    KNOWN_DEVIATIONS.iter().find(|d| d.covers(metric, mode, p))
}

/// Outcome of comparing one closed form against the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjudication {
    pub metric: Metric,
    pub mode: KnowledgeMode,
    /// `None` for NZR, which has no ambiguous constants.
    pub reading: Option<SopReading>,
    pub closed_form: Result<f64, Error>,
    pub oracle: Result<MetricValue, Error>,
    pub abs_diff: Option<f64>,
    pub verdict: Verdict,
    pub deviation: Option<&'static str>,
}

impl Adjudication {
    /// True when the row needs no further explanation.
    pub fn is_documented(&self) -> bool {
        self.verdict == Verdict::Match || self.deviation.is_some()
    }
}

fn classify(closed: &Result<MetricValue, Error>, oracle: &Result<MetricValue, Error>) -> (Verdict, Option<f64>) {
    let Ok(o) = oracle else {
        return (Verdict::Unresolved, None);
    };
    match closed {
        Err(_) => (Verdict::OutOfRange, None),
        Ok(c) => {
            let diff = (c.value - o.value).abs();
            let diff = if diff.is_nan() { f64::INFINITY } else { diff };
            if !c.in_range() {
                (Verdict::OutOfRange, Some(diff))
            } else if diff <= MATCH_TOLERANCE {
                (Verdict::Match, Some(diff))
            } else {
                (Verdict::Mismatch, Some(diff))
            }
        }
    }
}

/// Evaluates the closed form for `(metric, mode)` and adjudicates it against
/// a precomputed oracle value.
pub fn adjudicate(
    p: &SystemParams,
    metric: Metric,
    mode: KnowledgeMode,
    reading: Option<SopReading>,
    oracle: Result<MetricValue, Error>,
) -> Adjudication {
    let closed = match metric {
        Metric::Nzr => nzr_closed_form(p, mode),
        Metric::Sop => sop_closed_form_with(p, mode, reading.unwrap_or_default()),
    };
    let reading = match metric {
        Metric::Nzr => None,
        Metric::Sop => Some(reading.unwrap_or_default()),
    };
    let (verdict, abs_diff) = classify(&closed, &oracle);
    let deviation = match verdict {
        Verdict::Match => None,
        _ => find_deviation(metric, mode, p).map(|d| d.id),
    };
    Adjudication {
        metric,
        mode,
        reading,
        closed_form: closed.map(|c| c.value),
        oracle,
        abs_diff,
        verdict,
        deviation,
    }
}

//! Closed-form versus oracle adjudication report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rts_core::analytics::validation::{adjudicate, Adjudication, Verdict};
use rts_core::analytics::{asymptote, nzr_oracle, sop_oracle, SopReading};
use rts_core::simulator::simulate;
use rts_core::{KnowledgeMode, Metric, SchemeId};

use crate::config::{parse_u64, Profile, Settings};
use crate::error::{CliError, Result};
use crate::grid::{parse_counts, parse_names, parse_reals};
use crate::sweep::{read_fixed, FixedParams};

pub const REPORT_HEADER: &str = "metric,mode,k,delta,snr_db,lambda_e_db,sigma_d_db,sigma_e_db,rth,reading,closed_form,oracle,oracle_err,asymptote,simulated,std_err,abs_diff,verdict,deviation";

pub const VALIDATE_PROFILE: Profile = Profile {
    command: "validate",
    defaults: &[
        ("k", "1:5"),
        ("delta", "0.2,0.5,0.9"),
        ("snr-db", "0,20,40"),
        ("lambda-e-db", "8"),
        ("sigma-d-db", "1"),
        ("sigma-e-db", "10"),
        ("rth", "1"),
        ("mode", "available,unavailable"),
        ("trials", "1000000"),
        ("seed", "1"),
        ("check", "false"),
        ("threads", ""),
        ("out", ""),
    ],
};

/// Grid for the adjudication run.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidateSpec {
    pub k_values: Vec<u32>,
    pub delta_values: Vec<f64>,
    pub snr_db_grid: Vec<f64>,
    pub modes: Vec<KnowledgeMode>,
    pub fixed: FixedParams,
    pub trials: u64,
    pub seed: u64,
}

impl ValidateSpec {
    pub fn from_settings(s: &Settings) -> Result<Self> {
        let spec = Self {
            k_values: s.parse("k", parse_counts)?,
            delta_values: s.parse("delta", parse_reals)?,
            snr_db_grid: s.parse("snr-db", parse_reals)?,
            modes: s.parse("mode", |v| parse_names(v, &KnowledgeMode::ALL))?,
            fixed: read_fixed(s)?,
            trials: s.parse("trials", parse_u64)?,
            seed: s.parse("seed", parse_u64)?,
        };
        if spec.trials < 1 {
            return Err(CliError::Usage("trials must be >= 1".into()));
        }
        for &k in &spec.k_values {
            for &d in &spec.delta_values {
                for &snr in &spec.snr_db_grid {
                    spec.fixed.params(k, d, snr)?;
                }
            }
        }
        Ok(spec)
    }

    pub fn point_count(&self) -> usize {
        self.k_values.len() * self.delta_values.len() * self.snr_db_grid.len()
    }
}

/// One adjudicated row with its coordinates and the simulated RTS value.
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub k: u32,
    pub delta: f64,
    pub snr_db: f64,
    pub adjudication: Adjudication,
    pub asymptote: f64,
    pub simulated: f64,
    pub std_err: f64,
}

/// Adjudicates NZR once and SOP under every reading of its ambiguous
/// constants, at each grid point and mode.
pub fn run_validate(spec: &ValidateSpec) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for &k in &spec.k_values {
        for &delta in &spec.delta_values {
            for &snr_db in &spec.snr_db_grid {
                let p = spec.fixed.params(k, delta, snr_db)?;
                for &mode in &spec.modes {
                    let counts = simulate(&p, mode, &[SchemeId::Rts], spec.trials, spec.seed)?[0];
                    let mut push = |metric, adjudication| {
                        let est = counts.estimate(metric, spec.seed);
                        rows.push(ReportRow {
                            k,
                            delta,
                            snr_db,
                            adjudication,
                            asymptote: asymptote(metric, mode, delta, k).map(|a| a.value).unwrap_or(f64::NAN),
                            simulated: est.value,
                            std_err: est.std_err,
                        });
                    };
                    push(
                        Metric::Nzr,
                        adjudicate(&p, Metric::Nzr, mode, None, nzr_oracle(&p, mode)),
                    );
                    let sop = sop_oracle(&p, mode);
                    for reading in SopReading::ALL {
                        push(
                            Metric::Sop,
                            adjudicate(&p, Metric::Sop, mode, Some(reading), sop.clone()),
                        );
                    }
                }
            }
        }
    }
    Ok(rows)
}

impl ReportRow {
    fn to_csv(&self, fixed: &FixedParams) -> String {
        let a = &self.adjudication;
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            a.metric,
            a.mode,
            self.k,
            self.delta,
            self.snr_db,
            fixed.lambda_e_db,
            fixed.sigma_d_db,
            fixed.sigma_e_db,
            fixed.r_th,
            a.reading.map(|r| r.tag()).unwrap_or("-"),
            num(a.closed_form.as_ref().ok().copied()),
            num(a.oracle.as_ref().ok().map(|o| o.value)),
            num(a.oracle.as_ref().ok().map(|o| o.error_bound)),
            self.asymptote,
            self.simulated,
            self.std_err,
            num(a.abs_diff),
            a.verdict.as_str(),
            a.deviation.unwrap_or(if a.verdict == Verdict::Match {
                ""
            } else {
                "UNDOCUMENTED"
            }),
        )
    }
}

/// Verdict counts plus the number of rows without an explanation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub by_verdict: BTreeMap<&'static str, usize>,
    pub undocumented: usize,
    pub rows: usize,
}

pub fn summarize(rows: &[ReportRow]) -> Summary {
    let mut s = Summary {
        rows: rows.len(),
        ..Summary::default()
    };
    for r in rows {
        *s.by_verdict.entry(r.adjudication.verdict.as_str()).or_default() += 1;
        s.undocumented += !r.adjudication.is_documented() as usize;
    }
    s
}

pub fn render_report(echo: &[String], fixed: &FixedParams, rows: &[ReportRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# rts validate");
    for line in echo {
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out, "{REPORT_HEADER}");
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv(fixed));
    }
    let s = summarize(rows);
    let _ = writeln!(out, "# rows = {}", s.rows);
    for (verdict, n) in &s.by_verdict {
        let _ = writeln!(out, "# {verdict} = {n}");
    }
    let _ = writeln!(out, "# undocumented = {}", s.undocumented);
    out
}

//! Parameter sweeps and the scheme comparison.

use std::fmt::Write as _;

use rts_core::analytics::validation::find_deviation;
use rts_core::analytics::{asymptote, nzr_closed_form, nzr_oracle, sop_closed_form, sop_oracle};
use rts_core::simulator::{count_outage_inversions, simulate, SchemeCounts};
use rts_core::{KnowledgeMode, Metric, MetricValue, SchemeId, SystemParams};

use crate::config::{parse_u64, Profile, Settings};
use crate::error::{CliError, Result};
use crate::grid::{parse_counts, parse_names, parse_reals};

/// Bumped whenever the column set or order changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "snr_db,k,delta,scheme,mode,metric,analytic,asymptote,simulated,std_err,trials,seed,flags";

pub const SWEEP_PROFILE: Profile = Profile {
    command: "sweep",
    defaults: &[
        ("k", "3,5"),
        ("delta", "0.9,0.2"),
        ("snr-db", "0:60:5"),
        ("lambda-e-db", "8"),
        ("sigma-d-db", "1"),
        ("sigma-e-db", "10"),
        ("rth", "1"),
        ("scheme", "RTS"),
        ("mode", "available,unavailable"),
        ("metric", "NZR,SOP"),
        ("trials", "1000000"),
        ("seed", "1"),
        ("analytic", "oracle"),
        ("check", "false"),
        ("threads", ""),
        ("out", ""),
    ],
};

pub const COMPARE_PROFILE: Profile = Profile {
    command: "compare",
    defaults: &[
        ("k", "5"),
        ("delta", "0.9"),
        ("snr-db", "0:60:5"),
        ("lambda-e-db", "8"),
        ("sigma-d-db", "1"),
        ("sigma-e-db", "10"),
        ("rth", "1"),
        ("scheme", "RTS,TTS,MIN-ES,OPTIMAL"),
        ("mode", "available"),
        ("metric", "SOP"),
        ("trials", "1000000"),
        ("seed", "1"),
        ("analytic", "oracle"),
        ("check", "false"),
        ("threads", ""),
        ("out", ""),
    ],
};

/// Source of the `analytic` column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticSource {
    /// Quadrature of the defining probabilities.
    Oracle,
    /// The published closed-form expressions, reported raw.
    ClosedForm,
}

impl AnalyticSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnalyticSource::Oracle => "oracle",
            AnalyticSource::ClosedForm => "closed",
        }
    }

    fn parse(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oracle" => Ok(AnalyticSource::Oracle),
            "closed" | "closed-form" => Ok(AnalyticSource::ClosedForm),
            other => Err(format!("`{other}` is not one of oracle, closed")),
        }
    }
}

/// Parameters held fixed across a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub lambda_e_db: f64,
    pub sigma_d_db: f64,
    pub sigma_e_db: f64,
    pub r_th: f64,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            lambda_e_db: 8.0,
            sigma_d_db: 1.0,
            sigma_e_db: 10.0,
            r_th: 1.0,
        }
    }
}

impl FixedParams {
    pub fn params(&self, k: u32, delta: f64, snr_db: f64) -> rts_core::Result<SystemParams> {
        SystemParams::from_db(
            k,
            delta,
            snr_db,
            self.lambda_e_db,
            self.sigma_d_db,
            self.sigma_e_db,
            self.r_th,
        )
    }
}

fn single_real(s: &str) -> std::result::Result<f64, String> {
    match parse_reals(s)?.as_slice() {
        [v] => Ok(*v),
        _ => Err("expected a single value".into()),
    }
}

pub(crate) fn read_fixed(s: &Settings) -> Result<FixedParams> {
    Ok(FixedParams {
        lambda_e_db: s.parse("lambda-e-db", single_real)?,
        sigma_d_db: s.parse("sigma-d-db", single_real)?,
        sigma_e_db: s.parse("sigma-e-db", single_real)?,
        r_th: s.parse("rth", single_real)?,
    })
}

/// A full sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub snr_db_grid: Vec<f64>,
    pub k_values: Vec<u32>,
    pub delta_values: Vec<f64>,
    pub schemes: Vec<SchemeId>,
    pub modes: Vec<KnowledgeMode>,
    pub metrics: Vec<Metric>,
    pub trials: u64,
    pub seed: u64,
    pub fixed: FixedParams,
    pub analytic: AnalyticSource,
}

impl SweepSpec {
    pub fn from_settings(s: &Settings) -> Result<Self> {
        let spec = Self {
            snr_db_grid: s.parse("snr-db", parse_reals)?,
            k_values: s.parse("k", parse_counts)?,
            delta_values: s.parse("delta", parse_reals)?,
            schemes: s.parse("scheme", |v| parse_names(v, &SchemeId::ALL))?,
            modes: s.parse("mode", |v| parse_names(v, &KnowledgeMode::ALL))?,
            metrics: s.parse("metric", |v| parse_names(v, &Metric::ALL))?,
            trials: s.parse("trials", parse_u64)?,
            seed: s.parse("seed", parse_u64)?,
            fixed: read_fixed(s)?,
            analytic: s.parse("analytic", AnalyticSource::parse)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Grid non-emptiness, `trials >= 1`, and parameter validity at every
    /// grid point.
    pub fn validate(&self) -> Result<()> {
        let empty = |name: &str, n: usize| {
            if n == 0 {
                Err(CliError::Usage(format!("{name} list is empty")))
            } else {
                Ok(())
            }
        };
        empty("snr-db", self.snr_db_grid.len())?;
        empty("k", self.k_values.len())?;
        empty("delta", self.delta_values.len())?;
        empty("scheme", self.schemes.len())?;
        empty("mode", self.modes.len())?;
        empty("metric", self.metrics.len())?;
        if self.trials < 1 {
            return Err(CliError::Usage("trials must be >= 1".into()));
        }
        for &k in &self.k_values {
            for &delta in &self.delta_values {
                for &snr in &self.snr_db_grid {
                    self.fixed.params(k, delta, snr)?;
                }
            }
        }
        Ok(())
    }
}

/// One output record.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub k: u32,
    pub delta: f64,
    pub scheme: SchemeId,
    pub mode: KnowledgeMode,
    pub metric: Metric,
    pub analytic: Option<f64>,
    pub asymptote: f64,
    pub simulated: f64,
    pub std_err: f64,
    pub trials: u64,
    pub seed: u64,
    pub flags: Vec<String>,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.snr_db,
            self.k,
            self.delta,
            self.scheme,
            self.mode,
            self.metric,
            opt(self.analytic),
            self.asymptote,
            self.simulated,
            self.std_err,
            self.trials,
            self.seed,
            self.flags.join(";")
        )
    }
}

fn analytic_value(
    p: &SystemParams,
    metric: Metric,
    mode: KnowledgeMode,
    source: AnalyticSource,
    flags: &mut Vec<String>,
) -> Option<f64> {
    flags.push(format!("analytic={}", source.as_str()));
    let value: rts_core::Result<MetricValue> = match (source, metric) {
        (AnalyticSource::Oracle, Metric::Nzr) => nzr_oracle(p, mode),
        (AnalyticSource::Oracle, Metric::Sop) => sop_oracle(p, mode),
        (AnalyticSource::ClosedForm, Metric::Nzr) => nzr_closed_form(p, mode),
        (AnalyticSource::ClosedForm, Metric::Sop) => sop_closed_form(p, mode),
    };
    if source == AnalyticSource::ClosedForm {
        if let Some(d) = find_deviation(metric, mode, p) {
            flags.push(format!("known_deviation={}", d.id));
        }
    }
    match value {
        Ok(v) if v.in_range() => Some(v.value),
        Ok(_) => {
            flags.push("analytic_out_of_range".into());
            None
        }
        Err(_) => {
            flags.push("analytic_failed".into());
            None
        }
    }
}

/// Evaluates every grid point. Rows come out in the order
/// K → Δ → mode → SNR → scheme → metric. All schemes at one point share the
/// same realizations.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &k in &spec.k_values {
        for &delta in &spec.delta_values {
            for &mode in &spec.modes {
                for &snr_db in &spec.snr_db_grid {
                    let p = spec.fixed.params(k, delta, snr_db)?;
                    let counts = simulate(&p, mode, &spec.schemes, spec.trials, spec.seed)?;
                    for (&scheme, c) in spec.schemes.iter().zip(&counts) {
                        for &metric in &spec.metrics {
                            rows.push(make_row(spec, &p, snr_db, scheme, mode, metric, c));
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn make_row(
    spec: &SweepSpec,
    p: &SystemParams,
    snr_db: f64,
    scheme: SchemeId,
    mode: KnowledgeMode,
    metric: Metric,
    counts: &SchemeCounts,
) -> SweepRow {
    let mut flags = Vec::new();
    let analytic = if scheme == SchemeId::Rts {
        analytic_value(p, metric, mode, spec.analytic, &mut flags)
    } else {
        flags.push("simulation_only".into());
        None
    };
    let est = counts.estimate(metric, spec.seed);
    SweepRow {
        snr_db,
        k: p.k(),
        delta: p.delta(),
        scheme,
        mode,
        metric,
        analytic,
        asymptote: asymptote(metric, mode, p.delta(), p.k())
            .map(|a| a.value)
            .unwrap_or(f64::NAN),
        simulated: est.value,
        std_err: est.std_err,
        trials: est.trials,
        seed: spec.seed,
        flags,
    }
}

/// Renders rows as CSV preceded by `#` provenance lines.
pub fn render_csv(command: &str, echo: &[String], rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# rts {command} schema={CSV_SCHEMA_VERSION}");
    for line in echo {
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out, "{CSV_HEADER}");
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    out
}

/// `|simulated − analytic| <= 4·σ` for every RTS row that has an analytic
/// value, with σ the binomial standard error at the analytic probability.
pub fn check_sweep(rows: &[SweepRow]) -> Vec<String> {
    rows.iter()
        .filter_map(|r| {
            let truth = r.analytic?;
            let sigma = (truth * (1.0 - truth) / r.trials as f64).sqrt();
            let diff = (r.simulated - truth).abs();
            (diff > 4.0 * sigma).then(|| {
                format!(
                    "K={} Δ={} {} dB {} {} {}: simulated {} vs analytic {truth} (|diff| {diff:e} > 4σ = {:e})",
                    r.k,
                    r.delta,
                    r.snr_db,
                    r.scheme,
                    r.mode,
                    r.metric,
                    r.simulated,
                    4.0 * sigma
                )
            })
        })
        .collect()
}

/// Compare-mode assertions at every (K, Δ, SNR):
/// SOP_RTS ≤ SOP_X + 3·sqrt(se_RTS² + se_X²) for X in {TTS, MIN-ES}, and no
/// trial where OPTIMAL is in outage but RTS is not.
pub fn check_compare(spec: &SweepSpec, rows: &[SweepRow]) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let find = |k, delta, snr, scheme| {
        rows.iter()
            .find(|r| r.k == k && r.delta == delta && r.snr_db == snr && r.scheme == scheme && r.metric == Metric::Sop)
    };
    for &k in &spec.k_values {
        for &delta in &spec.delta_values {
            for &snr in &spec.snr_db_grid {
                let Some(rts) = find(k, delta, snr, SchemeId::Rts) else {
                    continue;
                };
                for other in [SchemeId::Tts, SchemeId::MinEs] {
                    if let Some(o) = find(k, delta, snr, other) {
                        let tol = 3.0 * (rts.std_err.powi(2) + o.std_err.powi(2)).sqrt();
                        if rts.simulated > o.simulated + tol {
                            failures.push(format!(
                                "K={k} Δ={delta} {snr} dB: SOP RTS {} exceeds {other} {} by more than {tol:e}",
                                rts.simulated, o.simulated
                            ));
                        }
                    }
                }
                if spec.schemes.contains(&SchemeId::Optimal) {
                    let p = spec.fixed.params(k, delta, snr)?;
                    let n = count_outage_inversions(
                        &p,
                        KnowledgeMode::Available,
                        SchemeId::Optimal,
                        SchemeId::Rts,
                        spec.trials,
                        spec.seed,
                    )?;
                    if n > 0 {
                        failures.push(format!(
                            "K={k} Δ={delta} {snr} dB: OPTIMAL in outage without RTS in {n} trials"
                        ));
                    }
                }
            }
        }
    }
    Ok(failures)
}

/// Applies the compare-mode restrictions (SOP, backhaul knowledge available).
pub fn restrict_to_compare(spec: &SweepSpec) -> Result<()> {
    if spec.metrics != [Metric::Sop] {
        return Err(CliError::Usage("compare reports SOP only".into()));
    }
    if spec.modes != [KnowledgeMode::Available] {
        return Err(CliError::Usage(
            "compare runs with backhaul knowledge available only".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(overrides: &[(&'static str, &str)]) -> Result<SweepSpec> {
        let flags: Vec<_> = overrides.iter().map(|(k, v)| (*k, v.to_string())).collect();
        SweepSpec::from_settings(&Settings::resolve(&SWEEP_PROFILE, None, &flags)?)
    }

    #[test]
    fn defaults_cover_both_metrics_and_modes() {
        let s = spec(&[]).unwrap();
        assert_eq!(s.snr_db_grid.len(), 13);
        assert_eq!(s.k_values, vec![3, 5]);
        assert_eq!(s.modes.len(), 2);
        assert_eq!(s.trials, 1_000_000);
        assert_eq!(s.fixed, FixedParams::default());
    }

    #[test]
    fn row_count_matches_grid() {
        let s = spec(&[("metric", "NZR"), ("trials", "200")]).unwrap();
        let rows = run_sweep(&s).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 13 * 2);
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(spec(&[("scheme", "")]), Err(CliError::Value { .. })));
        assert!(matches!(spec(&[("trials", "0")]), Err(CliError::Usage(_))));
        assert!(spec(&[("delta", "1.5")]).is_err());
        assert!(spec(&[("k", "0")]).is_err());
        assert!(spec(&[("analytic", "guess")]).is_err());
    }

    #[test]
    fn non_rts_rows_have_no_analytic() {
        let s = spec(&[
            ("scheme", "all"),
            ("snr-db", "10"),
            ("k", "2"),
            ("delta", "0.5"),
            ("trials", "1000"),
        ])
        .unwrap();
        for r in run_sweep(&s).unwrap() {
            assert_eq!(r.analytic.is_some(), r.scheme == SchemeId::Rts);
            assert!((0.0..=1.0).contains(&r.simulated));
        }
    }

    #[test]
    fn closed_form_rows_flag_deviations() {
        let s = spec(&[
            ("analytic", "closed"),
            ("snr-db", "20"),
            ("k", "3"),
            ("delta", "0.9"),
            ("trials", "100"),
        ])
        .unwrap();
        let rows = run_sweep(&s).unwrap();
        assert!(rows
            .iter()
            .any(|r| r.flags.iter().any(|f| f.starts_with("known_deviation="))));
    }

    #[test]
    fn csv_layout() {
        let s = spec(&[
            ("snr-db", "10"),
            ("k", "2"),
            ("delta", "0.5"),
            ("trials", "100"),
            ("mode", "a"),
        ])
        .unwrap();
        let rows = run_sweep(&s).unwrap();
        let text = render_csv("sweep", &["# k = 2".into()], &rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# rts sweep schema=1");
        assert_eq!(lines[2], CSV_HEADER);
        assert_eq!(lines.len(), 3 + rows.len());
        for l in &lines[3..] {
            assert_eq!(l.split(',').count(), 13);
        }
    }
}

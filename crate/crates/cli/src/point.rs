//! Every available source at a single parameter set.

use std::fmt::Write as _;

use rts_core::analytics::validation::find_deviation;
use rts_core::analytics::{asymptote, nzr_closed_form, nzr_oracle, sop_closed_form_with, sop_oracle, SopReading};
use rts_core::simulator::simulate;
use rts_core::{KnowledgeMode, Metric, MetricValue, SchemeId};

use crate::config::{parse_u64, Profile, Settings};
use crate::error::Result;
use crate::grid::parse_names;
use crate::sweep::read_fixed;

pub const POINT_HEADER: &str = "mode,metric,source,scheme,reading,value,error,note";

pub const POINT_PROFILE: Profile = Profile {
    command: "point",
    defaults: &[
        ("k", "3"),
        ("delta", "0.9"),
        ("snr-db", "20"),
        ("lambda-e-db", "8"),
        ("sigma-d-db", "1"),
        ("sigma-e-db", "10"),
        ("rth", "1"),
        ("scheme", "all"),
        ("mode", "available,unavailable"),
        ("metric", "NZR,SOP"),
        ("trials", "1000000"),
        ("seed", "1"),
        ("threads", ""),
        ("out", ""),
    ],
};

fn single<T: Copy>(v: Vec<T>, what: &str) -> std::result::Result<T, String> {
    match v.as_slice() {
        [x] => Ok(*x),
        _ => Err(format!("point takes a single {what}")),
    }
}

/// Builds the table for one parameter set.
pub fn run_point(s: &Settings) -> Result<String> {
    let k = s.parse("k", |v| single(crate::grid::parse_counts(v)?, "K"))?;
    let delta = s.parse("delta", |v| single(crate::grid::parse_reals(v)?, "Δ"))?;
    let snr_db = s.parse("snr-db", |v| single(crate::grid::parse_reals(v)?, "SNR"))?;
    let fixed = read_fixed(s)?;
    let schemes = s.parse("scheme", |v| parse_names(v, &SchemeId::ALL))?;
    let modes = s.parse("mode", |v| parse_names(v, &KnowledgeMode::ALL))?;
    let metrics = s.parse("metric", |v| parse_names(v, &Metric::ALL))?;
    let trials = s.parse("trials", parse_u64)?;
    let seed = s.parse("seed", parse_u64)?;
    if trials < 1 {
        return Err(crate::error::CliError::Usage("trials must be >= 1".into()));
    }
    let p = fixed.params(k, delta, snr_db)?;

    let mut out = String::new();
    let _ = writeln!(out, "# rts point");
    for line in s.echo() {
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out, "{POINT_HEADER}");
    for mode in modes {
        let counts = simulate(&p, mode, &schemes, trials, seed)?;
        for &metric in &metrics {
            let mut line = |source: &str, scheme: &str, reading: &str, value: String, error: String, note: &str| {
                let _ = writeln!(
                    out,
                    "{mode},{metric},{source},{scheme},{reading},{value},{error},{note}"
                );
            };
            let note_for = |v: &rts_core::Result<MetricValue>| match v {
                Err(e) => format!("error: {}", e.to_string().replace(',', ";")),
                Ok(v) if !v.in_range() => "out_of_range".to_string(),
                Ok(_) => find_deviation(metric, mode, &p)
                    .map(|d| d.id.to_string())
                    .unwrap_or_default(),
            };
            let shown = |v: &rts_core::Result<MetricValue>| v.as_ref().map(|v| v.value.to_string()).unwrap_or_default();
            match metric {
                Metric::Nzr => {
                    let c = nzr_closed_form(&p, mode);
                    line("closed_form", "RTS", "-", shown(&c), String::new(), &note_for(&c));
                }
                Metric::Sop => {
                    for reading in SopReading::ALL {
                        let c = sop_closed_form_with(&p, mode, reading);
                        line(
                            "closed_form",
                            "RTS",
                            reading.tag(),
                            shown(&c),
                            String::new(),
                            &note_for(&c),
                        );
                    }
                }
            }
            let o = match metric {
                Metric::Nzr => nzr_oracle(&p, mode),
                Metric::Sop => sop_oracle(&p, mode),
            };
            let err = o.as_ref().map(|v| v.error_bound.to_string()).unwrap_or_default();
            let note = o
                .as_ref()
                .err()
                .map(|e| e.to_string().replace(',', ";"))
                .unwrap_or_default();
            line("oracle", "RTS", "-", shown(&o), err, &note);
            let a = asymptote(metric, mode, delta, k);
            line("asymptote", "any", "-", shown(&a), String::new(), "");
            for (scheme, c) in schemes.iter().zip(&counts) {
                let e = c.estimate(metric, seed);
                line(
                    "simulated",
                    scheme.as_str(),
                    "-",
                    e.value.to_string(),
                    e.std_err.to_string(),
                    "",
                );
            }
        }
    }
    Ok(out)
}

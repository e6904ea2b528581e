//! Command dispatch shared by the binary and the tests.

use std::path::PathBuf;

use crate::config::{parse_bool, parse_u64, Profile, Settings};
use crate::error::{CliError, Result};
use crate::point::{run_point, POINT_PROFILE};
use crate::sweep::{
    check_compare, check_sweep, render_csv, restrict_to_compare, run_sweep, SweepSpec, COMPARE_PROFILE, SWEEP_PROFILE,
};
use crate::validate::{render_report, run_validate, ValidateSpec, VALIDATE_PROFILE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Sweep,
    Compare,
    Validate,
    Point,
}

impl Command {
    pub fn profile(&self) -> &'static Profile {
        match self {
            Command::Sweep => &SWEEP_PROFILE,
            Command::Compare => &COMPARE_PROFILE,
            Command::Validate => &VALIDATE_PROFILE,
            Command::Point => &POINT_PROFILE,
        }
    }
}

/// A parsed command line before layering.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub flags: Vec<(&'static str, String)>,
    pub config: Option<PathBuf>,
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    /// Destination file; `None` means standard output.
    pub out: Option<PathBuf>,
    /// Whether assertions were enabled.
    pub checked: bool,
    /// Assertion failures (only populated when checking).
    pub failures: Vec<String>,
}

pub fn execute(inv: &Invocation) -> Result<Output> {
    let settings = Settings::resolve(inv.command.profile(), inv.config.as_deref(), &inv.flags)?;
    let threads = match settings.raw("threads") {
        Some(_) => Some(settings.parse("threads", parse_u64)?),
        None => None,
    };
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n as usize)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))?;
            pool.install(|| dispatch(inv.command, &settings))
        }
        None => dispatch(inv.command, &settings),
    }
}

fn dispatch(command: Command, s: &Settings) -> Result<Output> {
    let checked = match s.raw("check") {
        Some(_) => s.parse("check", parse_bool)?,
        None => false,
    };
    let out = s.raw("out").map(PathBuf::from);
    let (text, failures) = match command {
        Command::Sweep | Command::Compare => {
            let spec = SweepSpec::from_settings(s)?;
            if command == Command::Compare {
                restrict_to_compare(&spec)?;
            }
            let rows = run_sweep(&spec)?;
            let failures = match (checked, command) {
                (false, _) => Vec::new(),
                (true, Command::Compare) => check_compare(&spec, &rows)?,
                (true, _) => check_sweep(&rows),
            };
            (render_csv(s.command(), &s.echo(), &rows), failures)
        }
        Command::Validate => {
            let spec = ValidateSpec::from_settings(s)?;
            let rows = run_validate(&spec)?;
            let failures = if checked {
                rows.iter()
                    .filter(|r| !r.adjudication.is_documented())
                    .map(|r| {
                        let a = &r.adjudication;
                        format!(
                            "undocumented {} for {} {} K={} Δ={} {} dB (|diff| {:?})",
                            a.verdict.as_str(),
                            a.metric,
                            a.mode,
                            r.k,
                            r.delta,
                            r.snr_db,
                            a.abs_diff
                        )
                    })
                    .collect()
            } else {
                Vec::new()
            };
            (render_report(&s.echo(), &spec.fixed, &rows), failures)
        }
        Command::Point => (run_point(s)?, Vec::new()),
    };
    Ok(Output {
        text,
        out,
        checked,
        failures,
    })
}

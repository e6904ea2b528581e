use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rts_cli::run::{execute, Command, Invocation};

/// Secrecy performance of ratio-based transmitter selection with unreliable
/// backhaul.
#[derive(Parser)]
#[command(name = "rts", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// NZR/SOP versus destination SNR: analytic, asymptote and simulation.
    Sweep(Opts),
    /// SOP of RTS, TTS, MIN-ES and OPTIMAL selection, backhaul knowledge available.
    Compare(Opts),
    /// Closed-form expressions versus quadrature oracle, with verdicts.
    Validate(Opts),
    /// Every source at one parameter set.
    Point(Opts),
}

#[derive(Args)]
struct Opts {
    /// Transmitter counts, e.g. `3,5` or `1:5`.
    #[arg(long)]
    k: Option<String>,
    /// Backhaul reliabilities in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Average destination SNR 1/λ_D in dB: list or `lo:hi:step`.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Average eavesdropper SNR 1/λ_E in dB [default: 8].
    #[arg(long = "lambda-e-db", allow_hyphen_values = true)]
    lambda_e_db: Option<String>,
    /// Destination noise power in dB [default: 1].
    #[arg(long = "sigma-d-db", allow_hyphen_values = true)]
    sigma_d_db: Option<String>,
    /// Eavesdropper noise power in dB [default: 10].
    #[arg(long = "sigma-e-db", allow_hyphen_values = true)]
    sigma_e_db: Option<String>,
    /// Secrecy rate threshold in bits/s/Hz [default: 1].
    #[arg(long)]
    rth: Option<String>,
    /// Selection schemes: RTS, TTS, MIN-ES, OPTIMAL or `all`.
    #[arg(long)]
    scheme: Option<String>,
    /// Backhaul knowledge: available, unavailable.
    #[arg(long)]
    mode: Option<String>,
    /// Metrics: NZR, SOP.
    #[arg(long)]
    metric: Option<String>,
    /// Monte Carlo trials per point [default: 1000000].
    #[arg(long)]
    trials: Option<String>,
    /// Root seed of the random streams.
    #[arg(long)]
    seed: Option<String>,
    /// Analytic column source: oracle or closed.
    #[arg(long)]
    analytic: Option<String>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    threads: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<String>,
    /// Flat `key = value` settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Enforce the command's assertions and exit nonzero on failure.
    #[arg(long)]
    check: bool,
}

impl Opts {
    fn into_invocation(self, command: Command) -> Invocation {
        let pairs = [
            ("k", self.k),
            ("delta", self.delta),
            ("snr-db", self.snr_db),
            ("lambda-e-db", self.lambda_e_db),
            ("sigma-d-db", self.sigma_d_db),
            ("sigma-e-db", self.sigma_e_db),
            ("rth", self.rth),
            ("scheme", self.scheme),
            ("mode", self.mode),
            ("metric", self.metric),
            ("trials", self.trials),
            ("seed", self.seed),
            ("analytic", self.analytic),
            ("threads", self.threads),
            ("out", self.out),
            ("check", self.check.then(|| "true".to_string())),
        ];
        Invocation {
            command,
            flags: pairs.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect(),
            config: self.config,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let inv = match cli.command {
        Cmd::Sweep(o) => o.into_invocation(Command::Sweep),
        Cmd::Compare(o) => o.into_invocation(Command::Compare),
        Cmd::Validate(o) => o.into_invocation(Command::Validate),
        Cmd::Point(o) => o.into_invocation(Command::Point),
    };
    let output = match execute(&inv) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &output.out {
        Some(path) => std::fs::write(path, &output.text).with_context(|| format!("writing {}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(output.text.as_bytes())
                .context("writing to stdout")
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if output.checked && !output.failures.is_empty() {
        for f in &output.failures {
            eprintln!("check failed: {f}");
        }
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

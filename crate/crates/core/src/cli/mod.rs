//! Command-line surface: `channel`, `sweep`, `telesim` and `verify`.

mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{parse_gain, ConfigError, GammaStart, Noise, RunConfig, KEYS};

use crate::attacks::{entanglement_lower_bound, gamma_min};
use crate::channels::{classify, effective_channel, is_entanglement_breaking, PROBE_SIG};
use crate::keyrate::{fmt_fixed, sweep};
use crate::teleportation::{
    ao_effective_channel, ao_simulate, bk_effective_channel, AmplifierGain, ResourceState,
    TeleportConfig,
};
use crate::verify::run_checks;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::VerifyFailed => EXIT_VERIFY,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
            CliError::VerifyFailed => f.write_str("verification failed"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error as E;
        match e {
            E::Domain { .. } | E::UnphysicalChannel { .. } | E::Unsupported(_) => {
                CliError::Validation(e.to_string())
            }
            e => CliError::Runtime(e.to_string()),
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "cvqkd", about = "Gaussian CV-QKD attack simulation", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Channel kind and the least entanglement needed to simulate it.
    Channel(Common),
    /// Sweep the resource squeezing and write the key-rate table as CSV.
    Sweep(Common),
    /// Compare the standard and all-optical teleportation channels.
    Telesim(Telesim),
    /// Run the built-in oracle suite.
    Verify(Verify),
}

/// Config file plus per-key overrides.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long, conflicts_with = "v")]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub v: Option<String>,
    #[arg(long)]
    pub zeta: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// `direct` or `reverse`.
    #[arg(long)]
    pub reconciliation: Option<String>,
    /// `asymptotic` or `finite:<g>`.
    #[arg(long)]
    pub g_policy: Option<String>,
    /// `auto` or a value.
    #[arg(long)]
    pub gamma_min: Option<String>,
    #[arg(long)]
    pub gamma_max: Option<String>,
    #[arg(long)]
    pub gamma_count: Option<String>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub precision: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Telesim {
    #[arg(long)]
    pub gamma: f64,
    /// Squeezer gain: a number or `asymptotic`.
    #[arg(long, default_value = "asymptotic")]
    pub g: String,
    /// Teleportation gain; defaults to the channel's `tau`.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Verify {
    /// Multiply every tolerance, e.g. 0 to watch the suite fail.
    #[arg(long, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Common {
    /// The config file (or defaults) with the flags applied on top.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Validation(format!("cannot read config {}: {e}", path.display()))
                })?;
                RunConfig::parse(&text)
                    .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        let output = self.output.as_ref().map(|p| p.display().to_string());
        let flags = [
            ("tau", &self.tau),
            ("epsilon", &self.epsilon),
            ("v", &self.v),
            ("zeta", &self.zeta),
            ("beta", &self.beta),
            ("reconciliation", &self.reconciliation),
            ("g_policy", &self.g_policy),
            ("gamma_min", &self.gamma_min),
            ("gamma_max", &self.gamma_max),
            ("gamma_count", &self.gamma_count),
            ("output", &output),
            ("precision", &self.precision),
        ];
        for (key, value) in flags {
            if let Some(value) = value {
                cfg.set(key, value).map_err(|mut e| {
                    e.field = format!("--{}", key.replace('_', "-"));
                    e
                })?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn cmd_channel(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let ch = cfg.channel()?;
    let p = cfg.precision;
    let f = |x: f64| fmt_fixed(x, p);
    let bound = entanglement_lower_bound(&ch)?;
    writeln!(out, "tau = {}", f(ch.tau())).map_err(io_err)?;
    writeln!(out, "v = {}", f(ch.v())).map_err(io_err)?;
    if let Some(eps) = ch.epsilon() {
        writeln!(out, "epsilon = {}", f(eps)).map_err(io_err)?;
    }
    writeln!(out, "kind: {}", classify(&ch)).map_err(io_err)?;
    writeln!(
        out,
        "entanglement breaking: {}",
        is_entanglement_breaking(&ch)
    )
    .map_err(io_err)?;
    writeln!(out, "gamma_min = {}", f(bound.gamma_min)).map_err(io_err)?;
    writeln!(out, "E(gamma_min) = {:.p$} ebits", bound.ebits).map_err(io_err)?;
    if is_entanglement_breaking(&ch) {
        writeln!(out, "measure-and-prepare suffices, no entanglement needed").map_err(io_err)?;
    } else if !bound.feasible {
        writeln!(out, "no finite resource simulates this channel").map_err(io_err)?;
    }
    Ok(())
}

pub fn cmd_sweep(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let sc = cfg.scenario()?;
    let grid = cfg.gamma_grid()?;
    let table = sweep(&sc, cfg.beta, &grid)?;
    std::fs::write(&cfg.output, table.to_csv(cfg.precision))
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", cfg.output.display())))?;
    let f = |x: f64| fmt_fixed(x, cfg.precision);
    let feasible = table.feasible_rows().count();
    write!(
        out,
        "wrote {} rows ({} feasible) to {}; chi = {}, I(a:b) = {}",
        table.rows.len(),
        feasible,
        cfg.output.display(),
        f(table.holevo_bits),
        f(table.mutual_info_bits)
    )
    .map_err(io_err)?;
    match table.endpoints() {
        Some((first, last)) => writeln!(
            out,
            ", K = {} at gamma = {} .. {} at gamma = {}",
            f(first.key_rate_bits),
            f(first.gamma),
            f(last.key_rate_bits),
            f(last.gamma)
        ),
        None => writeln!(out, ", no feasible rows"),
    }
    .map_err(io_err)?;
    Ok(())
}

pub fn cmd_telesim(
    gamma: f64,
    gain: AmplifierGain,
    lambda: Option<f64>,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let env = cfg.channel()?;
    let lambda = lambda.unwrap_or(env.tau());
    let res = ResourceState::tmsv(gamma)?;
    let tcfg = TeleportConfig::new(lambda, gain, env)?;
    let bk = bk_effective_channel(&res, lambda)?;
    let ao = ao_effective_channel(&res, &tcfg)?;
    let piped = effective_channel(|p| ao_simulate(p, PROBE_SIG, &res, &tcfg))?;
    let f = |x: f64| fmt_fixed(x, cfg.precision);
    writeln!(
        out,
        "resource gamma = {}, gain g = {}, lambda = {}",
        f(gamma),
        gain.value(),
        f(lambda)
    )
    .map_err(io_err)?;
    writeln!(
        out,
        "environment: tau = {}, v = {}",
        f(env.tau()),
        f(env.v())
    )
    .map_err(io_err)?;
    writeln!(out, "{:<14} {:>16} {:>16}", "", "tau_tel", "v_tel").map_err(io_err)?;
    for (name, ch) in [("standard", bk), ("all-optical", ao), ("pipeline", piped)] {
        writeln!(out, "{:<14} {:>16} {:>16}", name, f(ch.tau()), f(ch.v())).map_err(io_err)?;
    }
    writeln!(
        out,
        "v_tel difference (all-optical - standard) = {:.3e}",
        ao.v() - bk.v()
    )
    .map_err(io_err)?;
    let gm = gamma_min(&env);
    if gm.feasible {
        writeln!(out, "gamma_min of the environment = {}", f(gm.gamma)).map_err(io_err)?;
    }
    Ok(())
}

pub fn cmd_verify(tolerance_scale: f64, out: &mut dyn Write) -> Result<(), CliError> {
    if !(tolerance_scale >= 0.0) {
        return Err(CliError::Validation(format!(
            "`--tolerance-scale`: must be non-negative, got {tolerance_scale}"
        )));
    }
    let report = run_checks(tolerance_scale)?;
    writeln!(out, "{report}").map_err(io_err)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

/// Dispatch a parsed command line.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Channel(c) => cmd_channel(&c.resolve()?, out),
        Command::Sweep(c) => cmd_sweep(&c.resolve()?, out),
        Command::Telesim(t) => {
            let gain = parse_gain(&t.g).map_err(|mut e| {
                e.field = "--g".into();
                CliError::from(e)
            })?;
            cmd_telesim(t.gamma, gain, t.lambda, &t.common.resolve()?, out)
        }
        Command::Verify(v) => {
            if let Some(path) = &v.config {
                Common {
                    config: Some(path.clone()),
                    ..Common::default()
                }
                .resolve()?;
            }
            cmd_verify(v.tolerance_scale, out)
        }
    }
}

/// Parse `args`, run, report errors on `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

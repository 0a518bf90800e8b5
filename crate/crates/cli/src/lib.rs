//! Command-line front end of `starwall`: config layering, argument parsing and dispatch.

pub mod args;
pub mod config;
pub mod run;

use std::ffi::OsString;

use clap::Parser;

pub use config::CliConfig;
pub use run::{execute, run, Outcome};

/// Bad flags, bad config keys or values; exit status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug)]
pub enum ArgError {
    /// Includes `--help` and `--version`, which clap reports as errors.
    Clap(clap::Error),
    Usage(UsageError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub config: CliConfig,
    pub emit_config: bool,
}

/// Reads the config file if one is named, lays the flags over it and resolves defaults.
pub fn parse_args<I, T>(argv: I) -> Result<Invocation, ArgError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = args::Cli::try_parse_from(argv).map_err(ArgError::Clap)?.into_parsed();
    let file = match &parsed.config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ArgError::Usage(UsageError(format!("cannot read {}: {e}", path.display()))))?;
            config::Layer::from_toml(&text).map_err(ArgError::Usage)?
        }
        None => config::Layer::default(),
    };
    let mut layer = file.overlay(&parsed.flags);
    if let Some(t) = parsed.tol {
        let key = args::tolerance_key(layer.command, layer.equation)
            .ok_or_else(|| ArgError::Usage(UsageError("--tol needs a check, purity or robin command".into())))?;
        layer.tolerances.insert(key.to_string(), t);
    }
    let config = CliConfig::resolve(layer).map_err(ArgError::Usage)?;
    Ok(Invocation { config, emit_config: parsed.emit_config })
}

/// Caps the rayon pool at `STARWALL_THREADS` when set.
pub fn init_threads() -> Result<(), UsageError> {
    let Ok(v) = std::env::var("STARWALL_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| UsageError(format!("STARWALL_THREADS must be a positive integer, got `{v}`")))?;
    if n == 0 {
        return Err(UsageError("STARWALL_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| UsageError(format!("thread pool: {e}")))
}

/// Exit status for the whole invocation.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return 2;
    }
    match parse_args(argv) {
        Err(ArgError::Clap(e)) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
        Err(ArgError::Usage(e)) => {
            eprintln!("error: {e}");
            2
        }
        Ok(inv) if inv.emit_config => {
            print!("{}", inv.config.to_toml());
            0
        }
        Ok(inv) => run(&inv.config),
    }
}

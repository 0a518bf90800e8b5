//! Command-line grammar. Every flag maps onto one key of the config [`Layer`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use starwall::phase_space::Window;
use starwall::star::{DifferenceForm, ShiftBranch, ZerothOrder};
use starwall::states::Family;

use crate::config::{Command, Equation, Format, Layer};

/// Parses a kebab-case name through the type's serde representation.
fn kebab<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn pair(s: &str) -> Result<[f64; 2], String> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    <[f64; 2]>::try_from(v).map_err(|_| format!("expected `re,im`, got `{s}`"))
}

fn window(s: &str) -> Result<Window, String> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c, d] => Window::new(a, b, c, d).map_err(|e| e.to_string()),
        _ => Err(format!("expected `x_min,x_max,p_min,p_max`, got `{s}`")),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "starwall",
    version,
    about = "Wigner functions and star-product residual checks for a particle against a wall",
    allow_negative_numbers = true,
    after_help = "Exit status: 0 when the run passes, 1 when a check fails or the run errors, 2 on usage errors.\n\
                  STARWALL_THREADS caps the number of worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Sub>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Closed-form Wigner function of the state on the grid (wall, robin, free-superposition).
    #[command(allow_negative_numbers = true)]
    RhoBar,
    /// Exponential-wall Wigner function by Mellin-Barnes integration (uses k and alpha).
    #[command(allow_negative_numbers = true)]
    Liouville,
    /// Wigner function of the state's wave function by numerical quadrature.
    #[command(allow_negative_numbers = true)]
    Wigner,
    /// Residual check of one equation; exits 1 when the verdict is fail.
    #[command(allow_negative_numbers = true)]
    Check(CheckArgs),
    /// Distance of the exponential-wall Wigner function to the wall one, per alpha.
    #[command(allow_negative_numbers = true)]
    Converge(StudyArgs),
    /// Right-of-wall suppression of the exponential-wall Wigner function, per alpha.
    #[command(allow_negative_numbers = true)]
    Suppress(StudyArgs),
    /// Pure-state test through the singular values of the position kernel.
    #[command(allow_negative_numbers = true)]
    Purity,
    /// Boundary profile, closed-form distance and fourth-order check per Robin length.
    #[command(allow_negative_numbers = true)]
    Robin(StudyArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub equation: Equation,
    /// Zeroth-order coefficient of the fourth-order equation: expanded | as-printed.
    #[arg(long, value_parser = kebab::<ZerothOrder>)]
    pub zeroth: Option<ZerothOrder>,
    /// Coefficient of the difference equation: derived | as-printed.
    #[arg(long, value_parser = kebab::<DifferenceForm>)]
    pub form: Option<DifferenceForm>,
    /// Coordinate shift of the effective-mass form: complex-shift | real-shift.
    #[arg(long, value_parser = kebab::<ShiftBranch>)]
    pub branch: Option<ShiftBranch>,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    /// Comma-separated steepness values (default 2,4,8,16).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphas: Option<Vec<f64>>,
    /// Position right of the wall for suppress (default 0.5).
    #[arg(long)]
    pub x_pos: Option<f64>,
    /// Comma-separated Robin lengths for robin (default -1,0,1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub l_values: Option<Vec<f64>>,
    /// Study window `x_min,x_max,p_min,p_max` (default -3,-0.5,-3,3).
    #[arg(long, value_parser = window, allow_hyphen_values = true)]
    pub window: Option<Window>,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the resolved config as TOML and exit.
    #[arg(long, global = true)]
    pub emit_config: bool,
    /// Output path (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// State family: wall | robin | liouville | free-superposition (default wall).
    #[arg(long, global = true, value_parser = kebab::<Family>)]
    pub state: Option<Family>,
    /// Wave number, energy k^2 (default 1).
    #[arg(long, global = true)]
    pub k: Option<f64>,
    /// Steepness of the exponential wall (default 1).
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Robin length (default 0).
    #[arg(long = "L", global = true)]
    pub l: Option<f64>,
    /// Momentum width of the regularized deltas (default 0.05).
    #[arg(long, global = true)]
    pub sigma_reg: Option<f64>,
    /// `re,im` amplitude of e^{ikx} (default 1,0).
    #[arg(long, global = true, value_parser = pair, allow_hyphen_values = true)]
    pub amp_plus: Option<[f64; 2]>,
    /// `re,im` amplitude of e^{-ikx} (default 1,0).
    #[arg(long, global = true, value_parser = pair, allow_hyphen_values = true)]
    pub amp_minus: Option<[f64; 2]>,
    /// Grid bounds and sizes (default x in [-6, 1], p in [-6, 6], 512 x 512).
    #[arg(long, global = true)]
    pub x_min: Option<f64>,
    #[arg(long, global = true)]
    pub x_max: Option<f64>,
    #[arg(long, global = true)]
    pub n_x: Option<usize>,
    #[arg(long, global = true)]
    pub p_min: Option<f64>,
    #[arg(long, global = true)]
    pub p_max: Option<f64>,
    #[arg(long, global = true)]
    pub n_p: Option<usize>,
    /// Mellin-Barnes contour abscissa (default -0.25).
    #[arg(long, global = true)]
    pub mb_sigma: Option<f64>,
    /// Mellin-Barnes contour half-length (default 12).
    #[arg(long, global = true)]
    pub mb_t_max: Option<f64>,
    /// Mellin-Barnes nodes per panel (default 64).
    #[arg(long, global = true)]
    pub mb_nodes: Option<usize>,
    /// Tolerance of the check being run.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

/// Result of argument parsing: the flag layer plus where to find the file layer.
#[derive(Debug)]
pub struct Parsed {
    pub config_path: Option<PathBuf>,
    pub emit_config: bool,
    /// Applies to whichever check the merged layers select.
    pub tol: Option<f64>,
    pub flags: Layer,
}

pub fn tolerance_key(command: Option<Command>, equation: Option<Equation>) -> Option<&'static str> {
    match command? {
        Command::Check => equation.map(Equation::id),
        Command::Purity => Some("purity"),
        Command::Robin => Some("robin"),
        _ => None,
    }
}

impl Cli {
    pub fn into_parsed(self) -> Parsed {
        let c = self.common;
        let mut flags = Layer::default();
        let mut study = None;
        match self.command {
            None => {}
            Some(sub) => {
                let (cmd, eq) = match sub {
                    Sub::RhoBar => (Command::RhoBar, None),
                    Sub::Liouville => (Command::Liouville, None),
                    Sub::Wigner => (Command::Wigner, None),
                    Sub::Purity => (Command::Purity, None),
                    Sub::Check(a) => {
                        flags.check.zeroth = a.zeroth;
                        flags.check.form = a.form;
                        flags.check.branch = a.branch;
                        (Command::Check, Some(a.equation))
                    }
                    Sub::Converge(s) => {
                        study = Some(s);
                        (Command::Converge, None)
                    }
                    Sub::Suppress(s) => {
                        study = Some(s);
                        (Command::Suppress, None)
                    }
                    Sub::Robin(s) => {
                        study = Some(s);
                        (Command::Robin, None)
                    }
                };
                flags.command = Some(cmd);
                flags.equation = eq;
            }
        }
        if let Some(s) = study {
            flags.study.alphas = s.alphas;
            flags.study.x_pos = s.x_pos;
            flags.study.l_values = s.l_values;
            flags.study.window = s.window;
        }
        flags.state.family = c.state;
        flags.state.k = c.k;
        flags.state.alpha = c.alpha;
        flags.state.l = c.l;
        flags.state.sigma_reg = c.sigma_reg;
        flags.state.amp_plus = c.amp_plus;
        flags.state.amp_minus = c.amp_minus;
        flags.grid.x_min = c.x_min;
        flags.grid.x_max = c.x_max;
        flags.grid.n_x = c.n_x;
        flags.grid.p_min = c.p_min;
        flags.grid.p_max = c.p_max;
        flags.grid.n_p = c.n_p;
        flags.mb.sigma = c.mb_sigma;
        flags.mb.t_max = c.mb_t_max;
        flags.mb.n_nodes = c.mb_nodes;
        flags.output.path = c.out;
        flags.output.format = c.format;
        Parsed { config_path: c.config, emit_config: c.emit_config, tol: c.tol, flags }
    }
}

//! Config layers and the resolved, canonical `CliConfig`.
//!
//! A config file and the command-line flags both deserialize into a [`Layer`]; flags
//! are laid over the file and the result is resolved into a [`CliConfig`] with every
//! default filled in. Emitting a `CliConfig` and parsing it back gives the same value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use starwall::analysis::aligned_grid;
use starwall::phase_space::{PhaseSpaceGrid, Window};
use starwall::specfun::MellinBarnesSpec;
use starwall::star::{DifferenceForm, ShiftBranch, ZerothOrder};
use starwall::states::{Family, StateSpec};

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    RhoBar,
    Liouville,
    Wigner,
    Check,
    Converge,
    Suppress,
    Purity,
    Robin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    Eq4,
    Eq24,
    Eq25,
    Eq26,
    Eq27,
    Eq30,
}

impl Equation {
    pub fn id(self) -> &'static str {
        match self {
            Equation::Eq4 => "eq4",
            Equation::Eq24 => "eq24",
            Equation::Eq25 => "eq25",
            Equation::Eq26 => "eq26",
            Equation::Eq27 => "eq27",
            Equation::Eq30 => "eq30",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Default tolerance per check id.
pub fn default_tolerances() -> BTreeMap<String, f64> {
    use starwall::star::liouville::{DIFFERENCE_TOLERANCE, EFFECTIVE_MASS_TOLERANCE, PAIR_TOLERANCE};
    use starwall::star::residuals::{DOUBLE_STAR_TOLERANCE, FOURTH_ORDER_TOLERANCE, FREE_TOLERANCE};
    [
        ("eq4", FREE_TOLERANCE),
        ("eq24", PAIR_TOLERANCE),
        ("eq25", DIFFERENCE_TOLERANCE),
        ("eq26", FOURTH_ORDER_TOLERANCE),
        ("eq27", DOUBLE_STAR_TOLERANCE),
        ("eq30", EFFECTIVE_MASS_TOLERANCE),
        ("purity", 1e-8),
        ("robin", FOURTH_ORDER_TOLERANCE),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateLayer {
    pub family: Option<Family>,
    pub k: Option<f64>,
    pub alpha: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub amp_plus: Option<[f64; 2]>,
    pub amp_minus: Option<[f64; 2]>,
    pub sigma_reg: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridLayer {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub n_x: Option<usize>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub n_p: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbLayer {
    pub sigma: Option<f64>,
    pub t_max: Option<f64>,
    pub n_nodes: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckLayer {
    pub zeroth: Option<ZerothOrder>,
    pub form: Option<DifferenceForm>,
    pub branch: Option<ShiftBranch>,
    pub samples: Option<SampleSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyLayer {
    pub alphas: Option<Vec<f64>>,
    pub x_pos: Option<f64>,
    pub l_values: Option<Vec<f64>>,
    pub window: Option<Window>,
    pub n_x: Option<usize>,
    pub n_p: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputLayer {
    pub path: Option<String>,
    pub format: Option<Format>,
}

/// One source of settings: a config file or the flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub command: Option<Command>,
    pub equation: Option<Equation>,
    #[serde(default)]
    pub state: StateLayer,
    #[serde(default)]
    pub grid: GridLayer,
    #[serde(default)]
    pub mb: MbLayer,
    #[serde(default)]
    pub check: CheckLayer,
    #[serde(default)]
    pub study: StudyLayer,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputLayer,
}

macro_rules! over {
    ($base:expr, $top:expr; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl Layer {
    pub fn from_toml(text: &str) -> Result<Self, UsageError> {
        toml::from_str(text).map_err(|e| UsageError(format!("config: {e}")))
    }

    /// `self` with every value set in `top` replaced.
    pub fn overlay(mut self, top: &Layer) -> Self {
        over!(self, top; command, equation);
        over!(self.state, top.state; family, k, alpha, l, amp_plus, amp_minus, sigma_reg);
        over!(self.grid, top.grid; x_min, x_max, n_x, p_min, p_max, n_p);
        over!(self.mb, top.mb; sigma, t_max, n_nodes);
        over!(self.check, top.check; zeroth, form, branch, samples);
        over!(self.study, top.study; alphas, x_pos, l_values, window, n_x, n_p);
        over!(self.output, top.output; path, format);
        self.tolerances.extend(top.tolerances.iter().map(|(k, v)| (k.clone(), *v)));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_x: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub n_p: usize,
}

impl GridSpec {
    pub fn of(g: &PhaseSpaceGrid) -> Self {
        Self { x_min: g.x.min, x_max: g.x.max, n_x: g.x.n, p_min: g.p.min, p_max: g.p.max, n_p: g.p.n }
    }

    pub fn build(&self) -> starwall::Result<PhaseSpaceGrid> {
        starwall::phase_space::make_grid(self.x_min, self.x_max, self.n_x, self.p_min, self.p_max, self.n_p)
    }
}

/// `n × n` Liouville sample points on a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { x_min: -2.0, x_max: 0.5, p_min: -2.0, p_max: 2.0, n: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub zeroth: ZerothOrder,
    pub form: DifferenceForm,
    pub branch: ShiftBranch,
    pub samples: SampleSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub alphas: Vec<f64>,
    /// Distance right of the wall for `suppress`.
    pub x_pos: f64,
    pub l_values: Vec<f64>,
    /// Comparison window of `converge`; its p range also bounds the `suppress` momenta.
    pub window: Window,
    pub n_x: usize,
    pub n_p: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<Equation>,
    pub state: StateSpec,
    pub grid: GridSpec,
    pub mb: MellinBarnesSpec,
    pub check: CheckConfig,
    pub study: StudyConfig,
    pub tolerances: BTreeMap<String, f64>,
    pub output: OutputConfig,
}

/// Default grid for each command. `check eq27` needs room for the cutoff ramps.
fn default_grid(command: Command, equation: Option<Equation>) -> GridSpec {
    match (command, equation) {
        (Command::Check, Some(Equation::Eq27)) => {
            GridSpec { x_min: -10.0, x_max: 0.0, n_x: 256, p_min: -32.0, p_max: 32.0, n_p: 512 }
        }
        (Command::Purity, _) => GridSpec { x_min: -6.0, x_max: 1.0, n_x: 141, p_min: 0.0, p_max: 0.0, n_p: 256 },
        _ => GridSpec::of(&PhaseSpaceGrid::default_checks()),
    }
}

fn default_format(command: Command) -> Format {
    match command {
        Command::Check | Command::Purity | Command::Robin => Format::Json,
        _ => Format::Csv,
    }
}

impl CliConfig {
    /// Fills defaults and validates. Everything wrong here is a usage error.
    pub fn resolve(layer: Layer) -> Result<Self, UsageError> {
        let s = &layer.state;
        let base = StateSpec::new(s.family.unwrap_or(Family::Wall), s.k.unwrap_or(1.0));
        let state = StateSpec {
            alpha: s.alpha.unwrap_or(base.alpha),
            l: s.l.unwrap_or(base.l),
            amp_plus: s.amp_plus.unwrap_or(base.amp_plus),
            amp_minus: s.amp_minus.unwrap_or(base.amp_minus),
            sigma_reg: s.sigma_reg.unwrap_or(base.sigma_reg),
            ..base
        };
        state.validate().map_err(|e| UsageError(e.to_string()))?;

        let command = layer.command.ok_or_else(|| UsageError("no command given".into()))?;
        let equation = match (command, layer.equation) {
            (Command::Check, None) => return Err(UsageError("check needs an equation".into())),
            (Command::Check, e) => e,
            (_, Some(e)) => return Err(UsageError(format!("equation {} only applies to check", e.id()))),
            (_, None) => None,
        };

        let d = default_grid(command, equation);
        let g = &layer.grid;
        let mut grid = GridSpec {
            x_min: g.x_min.unwrap_or(d.x_min),
            x_max: g.x_max.unwrap_or(d.x_max),
            n_x: g.n_x.unwrap_or(d.n_x),
            p_min: g.p_min.unwrap_or(d.p_min),
            p_max: g.p_max.unwrap_or(d.p_max),
            n_p: g.n_p.unwrap_or(d.n_p),
        };
        if command == Command::Purity {
            // the momentum axis is fixed by the x step: n_p dp dx = pi
            grid = GridSpec::of(
                &aligned_grid(grid.x_min, grid.x_max, grid.n_x, grid.n_p, 1).map_err(|e| UsageError(e.to_string()))?,
            );
        }
        grid.build().map_err(|e| UsageError(e.to_string()))?;

        let dm = MellinBarnesSpec::default();
        let mb = MellinBarnesSpec {
            sigma: layer.mb.sigma.unwrap_or(dm.sigma),
            t_max: layer.mb.t_max.unwrap_or(dm.t_max),
            n_nodes: layer.mb.n_nodes.unwrap_or(dm.n_nodes),
        };
        mb.validate().map_err(|e| UsageError(e.to_string()))?;

        let check = CheckConfig {
            zeroth: layer.check.zeroth.unwrap_or_default(),
            form: layer.check.form.unwrap_or_default(),
            branch: layer.check.branch.unwrap_or_default(),
            samples: layer.check.samples.unwrap_or_default(),
        };
        let sm = check.samples;
        if sm.n == 0 || !(sm.x_min <= sm.x_max && sm.p_min <= sm.p_max) {
            return Err(UsageError("check.samples needs n >= 1 and ordered ranges".into()));
        }

        let st = &layer.study;
        let study = StudyConfig {
            alphas: st.alphas.clone().unwrap_or_else(|| vec![2.0, 4.0, 8.0, 16.0]),
            x_pos: st.x_pos.unwrap_or(0.5),
            l_values: st.l_values.clone().unwrap_or_else(|| vec![-1.0, 0.0, 1.0]),
            window: st.window.unwrap_or(Window { x_min: -3.0, x_max: -0.5, p_min: -3.0, p_max: 3.0 }),
            n_x: st.n_x.unwrap_or(26),
            n_p: st.n_p.unwrap_or(31),
        };
        let w = study.window;
        Window::new(w.x_min, w.x_max, w.p_min, w.p_max).map_err(|e| UsageError(e.to_string()))?;
        if study.n_x < 2 || study.n_p < 2 {
            return Err(UsageError("study.n_x and study.n_p must be at least 2".into()));
        }
        if study.alphas.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(UsageError("alphas must be positive".into()));
        }
        if study.l_values.iter().any(|l| !l.is_finite()) {
            return Err(UsageError("L values must be finite".into()));
        }

        let mut tolerances = default_tolerances();
        for (key, v) in &layer.tolerances {
            if !tolerances.contains_key(key) {
                return Err(UsageError(format!("unknown tolerance key `{key}`")));
            }
            if !(*v > 0.0) || !v.is_finite() {
                return Err(UsageError(format!("tolerance `{key}` must be positive, got {v}")));
            }
            tolerances.insert(key.clone(), *v);
        }

        let output = OutputConfig {
            path: layer.output.path.clone(),
            format: layer.output.format.unwrap_or(default_format(command)),
        };
        Ok(Self { command, equation, state, grid, mb, check, study, tolerances, output })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn tolerance(&self, key: &str) -> f64 {
        self.tolerances[key]
    }
}

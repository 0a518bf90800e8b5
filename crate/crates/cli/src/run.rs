//! Dispatch of a resolved config to the library, and rendering of the artifacts.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use starwall::analysis::{convergence_study, purity_check, robin_scan, wall_suppression_study, RobinOptions};
use starwall::phase_space::{Field, FieldKind, PhaseSpaceGrid, Window};
use starwall::star::{
    difference_eq_residual, effective_mass_residual, fourth_order_residual, genvalue_residual_free,
    genvalue_residual_liouville, lr_star_residual, sample_rectangle, CheckOptions, LrOptions, ResidualReport,
    StarOperand,
};
use starwall::states::{
    envelope_width_for, fill_rho_bar, rho_free_regularized, rho_robin_closed, robin_phase, wigner_transform_lattice,
    wigner_transform_numeric, AnalyticOperand, ClosedFormOperand, EvalMethod, Family, LiouvilleEvaluator,
    WignerOptions,
};

use crate::config::{CliConfig, Command, Equation, Format};
use crate::UsageError;

fn fmt17(v: f64) -> String {
    starwall::phase_space::field::fmt17(v)
}

#[derive(Debug)]
pub enum RunError {
    Usage(UsageError),
    Lib(starwall::Error),
}

impl From<starwall::Error> for RunError {
    fn from(e: starwall::Error) -> Self {
        RunError::Lib(e)
    }
}

impl From<UsageError> for RunError {
    fn from(e: UsageError) -> Self {
        RunError::Usage(e)
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        use starwall::Error::*;
        match self {
            RunError::Usage(_) | RunError::Lib(Config(_) | Window(_) | UnsupportedGrid(_)) => 2,
            RunError::Lib(_) => 1,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(e) => write!(f, "{e}"),
            RunError::Lib(e) => write!(f, "{e}"),
        }
    }
}

/// What one run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifact: String,
    pub passed: bool,
    /// One line for standard error.
    pub summary: String,
    pub warnings: Vec<String>,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct FieldJson {
    x: Vec<f64>,
    p: Vec<f64>,
    /// Row-major over x then p, `[re, im]`.
    values: Vec<[f64; 2]>,
}

fn render_field(field: &Field, format: Format) -> String {
    match format {
        Format::Csv => field.to_csv_string(),
        Format::Json => json(&FieldJson {
            x: field.grid().x.values(),
            p: field.grid().p.values(),
            values: field.values().iter().map(|v| [v.re, v.im]).collect(),
        }),
    }
}

fn render_report(r: &ResidualReport, format: Format) -> String {
    match format {
        Format::Csv => r.to_csv(),
        Format::Json => {
            let mut s = r.to_json().expect("reports serialize");
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    }
}

fn field_outcome(field: Field, format: Format, what: &str, warnings: Vec<String>) -> Outcome {
    Outcome {
        summary: format!("{what}: {} x {} points, sup {:.6e}", field.grid().x.n, field.grid().p.n, field.sup_norm()),
        artifact: render_field(&field, format),
        passed: true,
        warnings,
    }
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn liouville_evaluator(cfg: &CliConfig) -> starwall::Result<LiouvilleEvaluator> {
    LiouvilleEvaluator::new(cfg.state.alpha, cfg.state.k, cfg.mb, EvalMethod::Auto)
}

/// Closed-form (or Mellin-Barnes) Wigner function of the configured state on `grid`.
fn state_field(cfg: &CliConfig, grid: PhaseSpaceGrid) -> starwall::Result<Field> {
    let s = &cfg.state;
    match s.family {
        Family::Wall => fill_rho_bar(s.k, grid),
        Family::Robin => Field::from_real_fn(grid, |x, p| rho_robin_closed(s.k, s.l, x, p)),
        Family::FreeSuperposition => rho_free_regularized(s, grid),
        Family::Liouville => {
            let ev = liouville_evaluator(cfg)?;
            Field::try_from_fn(grid, FieldKind::RealExpected, |x, p| ev.value(c(x), c(p)))
        }
    }
}

fn quadrature_window(cfg: &CliConfig, grid: &PhaseSpaceGrid) -> f64 {
    let reach = grid.x.min.abs().max(grid.x.max.abs()) + 1.0;
    match cfg.state.family {
        Family::Wall | Family::Robin => reach,
        // the exponential wall decays within a few 1/alpha right of the origin
        Family::Liouville => reach + 40.0 / cfg.state.alpha,
        Family::FreeSuperposition => 8.0 * envelope_width_for(cfg.state.sigma_reg),
    }
}

fn check_verdict(r: &ResidualReport) -> String {
    format!(
        "{}: {} (relative residual {:.3e}, tolerance {:.1e}, {} points)",
        r.equation_id,
        if r.passed() { "pass" } else { "fail" },
        r.relative(),
        r.tolerance,
        r.points.len()
    )
}

fn run_check(cfg: &CliConfig, equation: Equation, grid: PhaseSpaceGrid) -> Result<Outcome, RunError> {
    let s = &cfg.state;
    let tol = cfg.tolerance(equation.id());
    let format = cfg.output.format;
    let report_outcome = |r: ResidualReport| Outcome {
        summary: check_verdict(&r),
        artifact: render_report(&r, format),
        passed: r.passed(),
        warnings: r.warnings.clone(),
    };
    match equation {
        Equation::Eq4 | Equation::Eq26 => {
            let closed;
            let liouville;
            let field;
            let mut opts = CheckOptions::new(tol);
            let operand = match s.family {
                Family::Wall | Family::Robin => {
                    let phi = if s.family == Family::Robin { robin_phase(s.k, s.l) } else { 0.0 };
                    closed = ClosedFormOperand { k: s.k, phi, scale: 1.0 };
                    // the closed form describes the state only left of the wall
                    let x_max = grid.x.max.min(0.0);
                    opts = opts.with_region(Window::new(grid.x.min, x_max, grid.p.min, grid.p.max)?);
                    StarOperand::Analytic { op: &closed as &dyn AnalyticOperand, grid }
                }
                Family::Liouville => {
                    liouville = liouville_evaluator(cfg)?;
                    StarOperand::Analytic { op: &liouville as &dyn AnalyticOperand, grid }
                }
                Family::FreeSuperposition => {
                    field = rho_free_regularized(s, grid)?;
                    StarOperand::Grid(&field)
                }
            };
            let r = if equation == Equation::Eq4 {
                genvalue_residual_free(&operand, s.k, &opts)?
            } else {
                fourth_order_residual(&operand, s.k, cfg.check.zeroth, &opts)?
            };
            Ok(report_outcome(r))
        }
        Equation::Eq27 => {
            let field = state_field(cfg, grid)?;
            let lr = lr_star_residual(&field, s.k * s.k, &LrOptions { tolerance: tol, ..LrOptions::default() })?;
            let passed = lr.interior_points > 0 && lr.lr.passed() && lr.agreement < tol;
            let summary = format!(
                "eq27: {} (relative residual {:.3e}, agreement with the differential route {:.3e}, tolerance {:.1e}, {} interior points)",
                if passed { "pass" } else { "fail" },
                lr.lr.relative(),
                lr.agreement,
                tol,
                lr.interior_points
            );
            let artifact = match format {
                Format::Csv => lr.lr.to_csv(),
                Format::Json => json(&lr),
            };
            Ok(Outcome { artifact, passed, summary, warnings: lr.lr.warnings.clone() })
        }
        Equation::Eq24 | Equation::Eq25 | Equation::Eq30 => {
            if s.family != Family::Liouville {
                return Err(UsageError(format!("{} needs --state liouville", equation.id())).into());
            }
            let ev = liouville_evaluator(cfg)?;
            let sm = cfg.check.samples;
            let points = sample_rectangle((sm.x_min, sm.x_max), (sm.p_min, sm.p_max), sm.n);
            match equation {
                Equation::Eq24 => Ok(report_outcome(genvalue_residual_liouville(&ev, s.alpha, s.k, &points, tol)?)),
                Equation::Eq25 => {
                    Ok(report_outcome(difference_eq_residual(&ev, s.alpha, s.k, &points, cfg.check.form, tol)?))
                }
                _ => {
                    let r = effective_mass_residual(&ev, s.alpha, s.k, cfg.check.branch, &points, tol)?;
                    let mut out = report_outcome(r.residual.clone());
                    out.summary.push_str(&format!(", identity defect {:.3e}", r.identity_defect));
                    if format == Format::Json {
                        out.artifact = json(&r);
                    }
                    Ok(out)
                }
            }
        }
    }
}

/// Runs the configured command without touching the output path.
pub fn execute(cfg: &CliConfig) -> Result<Outcome, RunError> {
    let grid = cfg.grid.build()?;
    let format = cfg.output.format;
    let s = &cfg.state;
    match cfg.command {
        Command::RhoBar => {
            if s.family == Family::Liouville {
                return Err(UsageError("rho-bar has no closed form for liouville; use the liouville command".into()).into());
            }
            Ok(field_outcome(state_field(cfg, grid)?, format, "rho-bar", Vec::new()))
        }
        Command::Liouville => {
            let ev = liouville_evaluator(cfg)?;
            let mut warnings = Vec::new();
            let field = {
                use rayon::prelude::*;
                let evals = (0..grid.len())
                    .into_par_iter()
                    .map(|i| {
                        let (x, p) = grid.point(i / grid.p.n, i % grid.p.n);
                        ev.derivatives(c(x), c(p), &[0])
                    })
                    .collect::<starwall::Result<Vec<_>>>()?;
                let flagged = evals.iter().filter(|e| e.warning.is_some()).count();
                if let Some(w) = evals.iter().find_map(|e| e.warning.clone()) {
                    warnings.push(format!("{flagged} points flagged; first: {w}"));
                }
                Field::new(grid, evals.into_iter().map(|e| e.values[0]).collect(), FieldKind::RealExpected)?
            };
            Ok(field_outcome(field, format, "liouville", warnings))
        }
        Command::Wigner => {
            let psi = s.wave_function()?;
            let out = wigner_transform_numeric(psi.as_ref(), grid, WignerOptions::with_window(quadrature_window(cfg, &grid)))?;
            let mut o = field_outcome(out.field, format, "wigner", out.warnings);
            o.summary.push_str(&format!(", quadrature error estimate {:.3e}", out.error_estimate));
            Ok(o)
        }
        Command::Check => {
            let equation = cfg.equation.ok_or_else(|| UsageError("check needs an equation".into()))?;
            run_check(cfg, equation, grid)
        }
        Command::Converge => {
            let st = &cfg.study;
            let sample = st.window.grid(st.n_x, st.n_p)?;
            let r = convergence_study(&st.alphas, s.k, st.window, sample, cfg.mb)?;
            let summary = format!(
                "converge: {} (distances {})",
                if r.monotone { "decreasing" } else { "not decreasing" },
                r.distances.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>().join(", ")
            );
            let artifact = match format {
                Format::Csv => r.to_csv(),
                Format::Json => json(&r),
            };
            Ok(Outcome { artifact, passed: r.monotone, summary, warnings: r.warnings })
        }
        Command::Suppress => {
            let st = &cfg.study;
            let w = st.window;
            let ps: Vec<f64> =
                (0..st.n_p).map(|j| w.p_min + (w.p_max - w.p_min) * j as f64 / (st.n_p - 1) as f64).collect();
            let r = wall_suppression_study(&st.alphas, s.k, st.x_pos, &ps, cfg.mb)?;
            let summary = format!(
                "suppress: {} (ratios {})",
                if r.decreasing { "decreasing" } else { "not decreasing" },
                r.ratios.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>().join(", ")
            );
            let artifact = match format {
                Format::Csv => r.to_csv(),
                Format::Json => json(&r),
            };
            Ok(Outcome { artifact, passed: r.decreasing, summary, warnings: Vec::new() })
        }
        Command::Purity => {
            let psi = s.wave_function()?;
            let rho = wigner_transform_lattice(psi.as_ref(), grid)?;
            let window = Window::new(grid.x.min, grid.x.max, grid.p.min, grid.p.max)?;
            let r = purity_check(&rho, window)?;
            let tol = cfg.tolerance("purity");
            let passed = r.purity_metric < tol;
            let summary = format!(
                "purity: {} (s2/s1 = {:.3e}, tolerance {:.1e}, {} lattice points)",
                if passed { "pure" } else { "not pure" },
                r.purity_metric,
                tol,
                r.lattice.len()
            );
            let artifact = match format {
                Format::Csv => {
                    let mut s = String::from("index,singular_value\n");
                    for (i, v) in r.singular_values.iter().enumerate() {
                        let _ = writeln!(s, "{i},{}", fmt17(*v));
                    }
                    s
                }
                Format::Json => json(&r),
            };
            Ok(Outcome { artifact, passed, summary, warnings: Vec::new() })
        }
        Command::Robin => {
            let opts = RobinOptions { tolerance: cfg.tolerance("robin"), ..RobinOptions::default() };
            let r = robin_scan(&cfg.study.l_values, s.k, grid, opts)?;
            let passed = r.entries.iter().all(|e| e.fourth_order_verdict.passed());
            let summary = format!(
                "robin: fourth-order check {} for L = {}; boundary ratios {}",
                if passed { "passes" } else { "fails" },
                r.entries.iter().map(|e| e.l.to_string()).collect::<Vec<_>>().join(", "),
                r.entries.iter().map(|e| format!("{:.3e}", e.boundary_ratio)).collect::<Vec<_>>().join(", ")
            );
            let warnings = r.entries.iter().flat_map(|e| e.warnings.iter().map(move |w| format!("L = {}: {w}", e.l))).collect();
            let artifact = match format {
                Format::Csv => {
                    let mut s = String::from(
                        "L,phi,boundary_ratio,boundary_slope,field_scale,closed_form_distance,fourth_order_relative,fourth_order_verdict\n",
                    );
                    for e in &r.entries {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{},{}",
                            fmt17(e.l),
                            fmt17(e.phi),
                            fmt17(e.boundary_ratio),
                            fmt17(e.boundary_slope),
                            fmt17(e.field_scale),
                            fmt17(e.closed_form_distance),
                            fmt17(e.fourth_order_relative),
                            if e.fourth_order_verdict.passed() { "pass" } else { "fail" }
                        );
                    }
                    s
                }
                Format::Json => json(&r),
            };
            Ok(Outcome { artifact, passed, summary, warnings })
        }
    }
}

/// Runs, writes the artifact and returns the exit code: 0 pass, 1 fail or error, 2 usage error.
pub fn run(cfg: &CliConfig) -> i32 {
    match execute(cfg) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let written = match &cfg.output.path {
                Some(path) => std::fs::write(path, &out.artifact).map_err(|e| format!("cannot write {path}: {e}")),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(out.artifact.as_bytes()).map_err(|e| e.to_string())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 1;
            }
            eprintln!("{}", out.summary);
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

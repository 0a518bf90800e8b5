//! Numerical Wigner transforms `rho(x, p) = (1/pi) ∫ dy exp(-2ipy) psi(x+y) psi*(x-y)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::wave::{Support, WaveFunction};
use crate::error::{Error, Result};
use crate::phase_space::transform::conjugate_axis;
use crate::phase_space::{inverse_partial_ft_p, Field, FieldKind, KernelField, PhaseSpaceGrid};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerOptions {
    /// Half-width `Y` of the y-integration window.
    pub window_half_width: f64,
    /// Gauss-Legendre nodes per panel.
    pub nodes: usize,
    /// Upper bound on the panel width; the actual width also resolves `exp(-2ipy)`.
    pub max_panel: f64,
}

impl WignerOptions {
    pub fn with_window(window_half_width: f64) -> Self {
        Self { window_half_width, nodes: 20, max_panel: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerOutput {
    pub field: Field,
    /// Largest change between the result and a half-panel-width recomputation.
    pub error_estimate: f64,
    pub warnings: Vec<String>,
}

/// Integration interval `[0, Y]` in y for the row at `x`, or `None` when the integrand vanishes.
fn y_extent(support: Support, x: f64, window: f64) -> (Option<f64>, bool) {
    let edge = match support {
        Support::Line => return (Some(window), false),
        Support::Below(e) | Support::EffectivelyBelow(e) => e,
    };
    let reach = edge - x;
    if reach <= 0.0 {
        return (None, false);
    }
    (Some(reach.min(window)), window < reach)
}

fn integrate_row(
    psi: &dyn WaveFunction,
    x: f64,
    y_max: f64,
    panel: f64,
    rule: &GaussLegendre,
    ps: &[f64],
) -> (Vec<f64>, f64) {
    let panels = (y_max / panel).ceil().max(1.0) as usize;
    let h = y_max / panels as f64;
    let mut ys = Vec::with_capacity(panels * rule.len());
    let mut ws = Vec::with_capacity(panels * rule.len());
    for j in 0..panels {
        let c = (j as f64 + 0.5) * h;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            ys.push(c + 0.5 * h * t);
            ws.push(0.5 * h * w);
        }
    }
    let g: Vec<Complex64> = ys.iter().map(|&y| psi.eval(x + y) * psi.eval(x - y).conj()).collect();
    let g_max = g.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    // g(-y) = conj g(y), so the integral over [-Y, Y] is twice the real part over [0, Y]
    let row = ps
        .iter()
        .map(|&p| {
            let mut acc = 0.0;
            for i in 0..ys.len() {
                let (s, c) = (2.0 * p * ys[i]).sin_cos();
                acc += ws[i] * (g[i].re * c + g[i].im * s);
            }
            2.0 * acc / PI
        })
        .collect();
    (row, g_max)
}

/// Gauss-Legendre evaluation of the Wigner integral at every lattice point, with the
/// error estimated by repeating the computation at half the panel width.
pub fn wigner_transform_numeric(psi: &dyn WaveFunction, grid: PhaseSpaceGrid, opts: WignerOptions) -> Result<WignerOutput> {
    if !(opts.window_half_width > 0.0) || opts.nodes < 2 || !(opts.max_panel > 0.0) {
        return Err(Error::Config("wigner window, node count and panel width must be positive".into()));
    }
    let ps = grid.p.values();
    let p_max = ps.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    let panel = opts.max_panel.min(PI / (2.0 * p_max + 1.0));
    let rule = GaussLegendre::cached(opts.nodes);
    let support = psi.support();
    let rows: Vec<(Vec<f64>, f64, bool, f64)> = (0..grid.x.n)
        .into_par_iter()
        .map(|ix| {
            let x = grid.x.value(ix);
            let (extent, clipped) = y_extent(support, x, opts.window_half_width);
            let Some(y_max) = extent else {
                return (vec![0.0; ps.len()], 0.0, false, 0.0);
            };
            let (coarse, g_max) = integrate_row(psi, x, y_max, panel, &rule, &ps);
            let (fine, _) = integrate_row(psi, x, y_max, 0.5 * panel, &rule, &ps);
            let err = coarse.iter().zip(&fine).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            let edge = if support == Support::Line {
                (psi.eval(x + y_max) * psi.eval(x - y_max).conj()).norm() / g_max.max(f64::MIN_POSITIVE)
            } else {
                0.0
            };
            (fine, err, clipped, edge)
        })
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    let mut error_estimate: f64 = 0.0;
    let mut clipped_rows = 0;
    let mut worst_edge: f64 = 0.0;
    for (row, err, clipped, edge) in rows {
        values.extend(row.into_iter().map(|v| Complex64::new(v, 0.0)));
        error_estimate = error_estimate.max(err);
        clipped_rows += clipped as usize;
        worst_edge = worst_edge.max(edge);
    }
    let mut warnings = Vec::new();
    if clipped_rows > 0 {
        warnings.push(format!(
            "window half-width {} is smaller than the state support on {clipped_rows} rows",
            opts.window_half_width
        ));
    }
    if worst_edge > 1e-12 {
        warnings.push(format!("integrand at the window edge is {worst_edge:.3e} of its maximum"));
    }
    let field = Field::new(grid, values, FieldKind::RealExpected)?;
    if error_estimate > 1e-8 * field.sup_norm().max(f64::MIN_POSITIVE) {
        warnings.push(format!("quadrature error estimate {error_estimate:.3e} exceeds 1e-8 relative"));
    }
    Ok(WignerOutput { field, error_estimate, warnings })
}

/// Discrete Wigner transform: samples `psi(x+y) psi*(x-y)` on the lattice conjugate to
/// the momentum axis and inverts the partial Fourier transform. The kernel of the
/// result is exactly the sampled product, so any single state gives a rank-one kernel.
pub fn wigner_transform_lattice(psi: &dyn WaveFunction, grid: PhaseSpaceGrid) -> Result<Field> {
    let mut kernel = match lattice_ratio(&grid) {
        Some(q) => {
            // x_i ± y_m = x_min + (q i ± m) dy: evaluate once per lattice point so that
            // coinciding arguments get bit-identical values, even across a jump of psi
            let dy = conjugate_axis(&grid.p).step;
            let half = (grid.p.n / 2) as i64;
            let lo = -half;
            let hi = q * (grid.x.n as i64 - 1) + half;
            let vals: Vec<Complex64> =
                (lo..=hi).into_par_iter().map(|n| psi.eval(grid.x.min + n as f64 * dy)).collect();
            let at = |n: i64| vals[(n - lo) as usize];
            let ny = grid.p.n;
            let values = (0..grid.x.n)
                .flat_map(|ix| {
                    let c = q * ix as i64;
                    (0..ny).map(move |iy| (c, iy as i64 - half))
                })
                .map(|(c, m)| at(c + m) * at(c - m).conj())
                .collect();
            KernelField { x: grid.x, y: conjugate_axis(&grid.p), p: grid.p, values }
        }
        None => KernelField::from_fn(grid.x, grid.p, |x, y| psi.eval(x + y) * psi.eval(x - y).conj()),
    };
    // the unpaired most-negative lattice point has no conjugate partner
    let ny = kernel.y.n;
    if ny % 2 == 0 {
        for ix in 0..kernel.x.n {
            let v = &mut kernel.values[ix * ny];
            *v = Complex64::new(0.0, 0.0);
        }
    }
    inverse_partial_ft_p(&kernel, FieldKind::RealExpected)
}

/// `dx / dy` when it is a positive integer (within `1e-9`).
fn lattice_ratio(grid: &PhaseSpaceGrid) -> Option<i64> {
    if grid.x.n < 2 {
        return None;
    }
    let r = grid.dx() / conjugate_axis(&grid.p).step;
    let q = r.round();
    (q >= 1.0 && (r - q).abs() < 1e-9).then_some(q as i64)
}

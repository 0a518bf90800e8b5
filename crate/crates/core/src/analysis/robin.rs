//! The Robin family `psi(0) + L psi'(0) = 0` on the half-line `x < 0`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{fit_scale, make_grid, Field, PhaseSpaceGrid};
use crate::star::{fourth_order_residual, CheckOptions, StarOperand, Verdict, ZerothOrder};
use crate::states::{
    robin_phase, rho_robin_closed, wigner_transform_numeric, ClosedFormOperand, RobinState, WallState, WignerOptions,
};

pub const BOUNDARY_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobinOptions {
    /// Distance from the wall of the first sample of the boundary extrapolation.
    pub boundary_step: f64,
    pub tolerance: f64,
}

impl Default for RobinOptions {
    fn default() -> Self {
        Self { boundary_step: BOUNDARY_STEP, tolerance: crate::star::residuals::FOURTH_ORDER_TOLERANCE }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobinEntry {
    pub l: f64,
    pub phi: f64,
    /// `rho_L(0^-, p)` on the grid momenta, extrapolated from `x = -h, -h/2, -h/4`.
    pub boundary_profile: Vec<f64>,
    /// `max_p |rho_L(0^-, p)| / sup |rho_L|`.
    pub boundary_ratio: f64,
    /// `max_p |d_x rho_L(0^-, p)|`.
    pub boundary_slope: f64,
    pub field_scale: f64,
    /// Sup distance of the quadrature result to `-rho_bar_phi / (2 pi)`, relative.
    pub closed_form_distance: f64,
    pub fourth_order_verdict: Verdict,
    pub fourth_order_relative: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobinScanReport {
    pub k: f64,
    pub entries: Vec<RobinEntry>,
}

fn window_for(grid: &PhaseSpaceGrid) -> WignerOptions {
    WignerOptions::with_window(grid.x.max.abs().max(grid.x.min.abs()) + 1.0)
}

/// Quadrature Wigner function of the Robin state on `grid`.
pub fn robin_field(k: f64, l: f64, grid: PhaseSpaceGrid) -> Result<(Field, Vec<String>)> {
    let out = wigner_transform_numeric(&RobinState { k, l }, grid, window_for(&grid))?;
    Ok((out.field, out.warnings))
}

pub fn robin_scan(l_values: &[f64], k: f64, grid: PhaseSpaceGrid, opts: RobinOptions) -> Result<RobinScanReport> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Config(format!("k must be positive, got {k}")));
    }
    let h = opts.boundary_step;
    let near = make_grid(-h, -0.25 * h, 4, grid.p.min, grid.p.max, grid.p.n)?;
    let entries = l_values
        .par_iter()
        .map(|&l| -> Result<RobinEntry> {
            let phi = robin_phase(k, l);
            let (field, mut warnings) = robin_field(k, l, grid)?;
            let scale = field.sup_norm();
            let (edge, w2) = robin_field(k, l, near)?;
            warnings.extend(w2);
            // rows sit at -h, -3h/4, -h/2, -h/4; quadratic extrapolation through -h, -h/2, -h/4
            let f = |ix: usize, ip: usize| edge.get(ix, ip).re;
            let profile: Vec<f64> =
                (0..grid.p.n).map(|ip| (8.0 * f(3, ip) - 6.0 * f(2, ip) + f(0, ip)) / 3.0).collect();
            let slope: Vec<f64> =
                (0..grid.p.n).map(|ip| (8.0 * f(3, ip) - 10.0 * f(2, ip) + 2.0 * f(0, ip)) / h).collect();
            let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let closed = Field::from_real_fn(grid, |x, p| rho_robin_closed(k, l, x, p))?;
            let closed_form_distance = if closed.sup_norm() > 0.0 {
                let fit = fit_scale(&closed, &field)?;
                (fit.residual_sup / fit.scale.norm()).max((fit.scale - Complex64::new(1.0, 0.0)).norm())
            } else {
                field.sup_norm()
            };
            let op = ClosedFormOperand { k, phi, scale: -1.0 / (2.0 * std::f64::consts::PI) };
            let fourth = fourth_order_residual(
                &StarOperand::Analytic { op: &op, grid },
                k,
                ZerothOrder::Expanded,
                &CheckOptions::new(opts.tolerance),
            )?;
            let denom = if scale > 0.0 { scale } else { 1.0 };
            Ok(RobinEntry {
                l,
                phi,
                boundary_ratio: sup(&profile) / denom,
                boundary_slope: sup(&slope),
                boundary_profile: profile,
                field_scale: scale,
                closed_form_distance,
                fourth_order_verdict: fourth.verdict,
                fourth_order_relative: fourth.relative(),
                warnings,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RobinScanReport { k, entries })
}

/// `sup |rho_{L=0} - rho_wall| / sup |rho_wall|` on the grid.
pub fn dirichlet_vs_wall(k: f64, grid: PhaseSpaceGrid) -> Result<f64> {
    let (robin, _) = robin_field(k, 0.0, grid)?;
    let wall = wigner_transform_numeric(&WallState { k }, grid, window_for(&grid))?.field;
    let d = robin.values().iter().zip(wall.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    Ok(if d == 0.0 { 0.0 } else { d / wall.sup_norm() })
}

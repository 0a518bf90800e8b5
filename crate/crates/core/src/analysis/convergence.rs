//! The steep-wall limit of the exponential potential.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{fit_scale_values, PhaseSpaceGrid, Window};
use crate::specfun::MellinBarnesSpec;
use crate::states::{rho_bar_closed, AnalyticOperand, EvalMethod, LiouvilleEvaluator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub alphas: Vec<f64>,
    /// `sup |rho_alpha / c - rho_bar| / sup |rho_bar|` with `c` the least-squares scale.
    pub distances: Vec<f64>,
    /// Fitted scale per alpha.
    pub scales: Vec<f64>,
    pub window: Window,
    pub monotone: bool,
    /// Evaluator warnings, tagged with their alpha.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("alpha,distance,scale\n");
        for ((a, d), c) in self.alphas.iter().zip(&self.distances).zip(&self.scales) {
            s.push_str(&format!(
                "{},{},{}\n",
                crate::phase_space::field::fmt17(*a),
                crate::phase_space::field::fmt17(*d),
                crate::phase_space::field::fmt17(*c)
            ));
        }
        s
    }
}

pub(crate) fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Grid points inside `window`, in row-major order.
pub fn window_points(grid: &PhaseSpaceGrid, window: &Window) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for ix in 0..grid.x.n {
        for ip in 0..grid.p.n {
            let (x, p) = grid.point(ix, ip);
            if window.contains(x, p) {
                out.push((x, p));
            }
        }
    }
    out
}

/// Fits `rho_alpha` to `rho_bar` on the window points for each alpha.
pub fn convergence_study(
    alphas: &[f64],
    k: f64,
    window: Window,
    grid: PhaseSpaceGrid,
    mb: MellinBarnesSpec,
) -> Result<ConvergenceReport> {
    if window.x_max >= 0.0 {
        return Err(Error::Window(format!("window must lie in x < 0, got x_max = {}", window.x_max)));
    }
    if alphas.is_empty() {
        return Err(Error::Config("no alpha values".into()));
    }
    if alphas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config("alphas must be non-decreasing".into()));
    }
    let points = window_points(&grid, &window);
    if points.len() < 2 {
        return Err(Error::Window("fewer than two grid points inside the window".into()));
    }
    let reference: Vec<Complex64> = points.iter().map(|&(x, p)| Complex64::new(rho_bar_closed(k, x, p), 0.0)).collect();
    let per_alpha: Vec<(f64, f64, Vec<String>)> = alphas
        .par_iter()
        .map(|&alpha| -> Result<_> {
            let ev = LiouvilleEvaluator::new(alpha, k, mb, EvalMethod::Auto)?;
            let evals: Vec<_> = points
                .par_iter()
                .map(|&(x, p)| ev.derivatives(Complex64::new(x, 0.0), Complex64::new(p, 0.0), &[0]))
                .collect::<Result<Vec<_>>>()?;
            let mut warnings: Vec<String> =
                evals.iter().filter_map(|e| e.warning.as_ref().map(|w| format!("alpha = {alpha}: {w}"))).collect();
            warnings.dedup();
            let target: Vec<Complex64> = evals.iter().map(|e| Complex64::new(e.values[0].re, 0.0)).collect();
            let fit = fit_scale_values(&reference, &target)?;
            let c = fit.scale.re;
            if c == 0.0 {
                return Err(Error::DegenerateReference);
            }
            Ok((fit.residual_sup / c.abs(), c, warnings))
        })
        .collect::<Result<Vec<_>>>()?;
    let distances: Vec<f64> = per_alpha.iter().map(|t| t.0).collect();
    Ok(ConvergenceReport {
        alphas: alphas.to_vec(),
        monotone: strictly_decreasing(&distances),
        distances,
        scales: per_alpha.iter().map(|t| t.1).collect(),
        window,
        warnings: per_alpha.into_iter().flat_map(|t| t.2).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuppressionReport {
    pub alphas: Vec<f64>,
    pub x_pos: f64,
    /// `max_p |rho(x_pos, p)| / max_p |rho(-x_pos, p)|`.
    pub ratios: Vec<f64>,
    /// Set where the numerator underflowed; the ratio is then reported as 0.
    pub underflow: Vec<bool>,
    pub decreasing: bool,
}

impl SuppressionReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("alpha,ratio,underflow\n");
        for ((a, r), u) in self.alphas.iter().zip(&self.ratios).zip(&self.underflow) {
            s.push_str(&format!(
                "{},{},{}\n",
                crate::phase_space::field::fmt17(*a),
                crate::phase_space::field::fmt17(*r),
                u
            ));
        }
        s
    }
}

pub fn wall_suppression_study(
    alphas: &[f64],
    k: f64,
    x_pos: f64,
    p_samples: &[f64],
    mb: MellinBarnesSpec,
) -> Result<SuppressionReport> {
    if !(x_pos > 0.0) {
        return Err(Error::Config(format!("x_pos must be positive, got {x_pos}")));
    }
    if p_samples.is_empty() {
        return Err(Error::Config("no momentum samples".into()));
    }
    let rows: Vec<(f64, bool)> = alphas
        .par_iter()
        .map(|&alpha| -> Result<_> {
            let ev = LiouvilleEvaluator::new(alpha, k, mb, EvalMethod::Auto)?;
            let sup = |x: f64| -> Result<(f64, bool)> {
                let vals = p_samples
                    .par_iter()
                    .map(|&p| ev.evaluate(Complex64::new(x, 0.0), Complex64::new(p, 0.0)))
                    .collect::<Result<Vec<_>>>()?;
                let m = vals.iter().fold(0.0f64, |m, v| m.max(v.value.norm()));
                Ok((m, vals.iter().any(|v| v.meta.underflow)))
            };
            let (outside, under) = sup(x_pos)?;
            let (inside, _) = sup(-x_pos)?;
            if inside == 0.0 {
                return Err(Error::DegenerateReference);
            }
            Ok((outside / inside, under && outside == 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.0).collect();
    Ok(SuppressionReport {
        alphas: alphas.to_vec(),
        x_pos,
        decreasing: strictly_decreasing(&ratios),
        ratios,
        underflow: rows.iter().map(|r| r.1).collect(),
    })
}

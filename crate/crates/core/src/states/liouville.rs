//! Wigner function of the exponential wall `V = e^{2 alpha x}`:
//!
//! ```text
//! rho_alpha(x, p) = G^{4,0}_{0,4}( e^{4 alpha x} / (2 alpha)^4 | b )
//! b = { i(p-k), i(p+k), -i(p-k), -i(p+k) } / (2 alpha)
//! ```
//!
//! up to a constant. `d/dx` multiplies the Mellin-Barnes integrand by `4 alpha s`,
//! so x-derivatives are moments of the same integral.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AnalyticOperand, Evaluated};
use crate::error::{Error, Result};
use crate::specfun::meijer::{contour_moments, series_moments, GMeta, GMethod, GParams, GValue, MellinBarnesSpec};

/// Below this `|w|` the residue series is preferred.
pub const SERIES_W_MAX: f64 = 0.3;
/// Contour cancellation (relative) above which the perturbed series takes over.
pub const CANCELLATION_LIMIT: f64 = 1e-9;
/// Momentum offset of the perturbed series.
pub const PERTURBATION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMethod {
    Contour,
    Series,
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleEvaluator {
    pub alpha: f64,
    pub k: f64,
    pub mb: MellinBarnesSpec,
    pub method: EvalMethod,
}

impl LiouvilleEvaluator {
    pub fn new(alpha: f64, k: f64, mb: MellinBarnesSpec, method: EvalMethod) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Config(format!("k must be positive, got {k}")));
        }
        mb.validate()?;
        Ok(Self { alpha, k, mb, method })
    }

    pub fn auto(alpha: f64, k: f64) -> Result<Self> {
        Self::new(alpha, k, MellinBarnesSpec::default(), EvalMethod::Auto)
    }

    /// `ln w = 4 alpha x - 4 ln(2 alpha)`, continuous in complex `x`.
    pub fn log_w(&self, x: Complex64) -> Complex64 {
        4.0 * self.alpha * x - 4.0 * (2.0 * self.alpha).ln()
    }

    pub fn params(&self, p: Complex64) -> GParams {
        GParams::wigner(self.alpha, self.k, p)
    }

    pub fn evaluate(&self, x: Complex64, p: Complex64) -> Result<GValue> {
        Ok(self.derivatives_meta(x, p, &[0])?[0])
    }

    /// `d^m rho / dx^m` for each order, with per-value accuracy metadata.
    pub fn derivatives_meta(&self, x: Complex64, p: Complex64, orders: &[u32]) -> Result<Vec<GValue>> {
        let lw = self.log_w(x);
        let params = self.params(p);
        let mut out = match self.method {
            EvalMethod::Contour => contour_moments(lw, &params, &self.mb, orders)?,
            EvalMethod::Series => series_moments(lw, &params, orders)?,
            EvalMethod::Auto => self.auto_moments(lw, p, &params, orders)?,
        };
        for (v, &m) in out.iter_mut().zip(orders) {
            let f = (4.0 * self.alpha).powi(m as i32);
            v.value *= f;
            v.meta.tail_bound *= f;
            v.meta.roundoff_bound *= f;
        }
        Ok(out)
    }

    fn auto_moments(&self, lw: Complex64, p: Complex64, params: &GParams, orders: &[u32]) -> Result<Vec<GValue>> {
        let w_abs = lw.re.exp();
        let degenerate = params.degeneracy().is_some();
        let on_strip_edge = lw.im.abs() >= 2.0 * PI - 1e-9;
        if on_strip_edge {
            if w_abs >= 1.0 {
                return Err(Error::BranchDomain(format!(
                    "|Im ln w| = {} needs the residue series, but |w| = {w_abs} >= 1",
                    lw.im.abs()
                )));
            }
            return if degenerate {
                self.perturbed_series(lw, p, orders)
            } else {
                series_moments(lw, params, orders)
            };
        }
        if w_abs < SERIES_W_MAX && !degenerate {
            return series_moments(lw, params, orders);
        }
        let contour = contour_moments(lw, params, &self.mb, orders)?;
        let poor = contour
            .iter()
            .any(|v| v.meta.roundoff_bound > CANCELLATION_LIMIT * v.value.norm().max(f64::MIN_POSITIVE));
        if poor && w_abs < SERIES_W_MAX {
            return self.perturbed_series(lw, p, orders);
        }
        Ok(contour)
    }

    /// Symmetric average over `p ± h`, Richardson-extrapolated from `h` and `h/2`.
    fn perturbed_series(&self, lw: Complex64, p: Complex64, orders: &[u32]) -> Result<Vec<GValue>> {
        let avg = |h: f64| -> Result<Vec<GValue>> {
            let a = series_moments(lw, &self.params(p + h), orders)?;
            let b = series_moments(lw, &self.params(p - h), orders)?;
            Ok(a.into_iter()
                .zip(b)
                .map(|(a, b)| GValue {
                    value: 0.5 * (a.value + b.value),
                    meta: GMeta {
                        roundoff_bound: 0.5 * (a.meta.roundoff_bound + b.meta.roundoff_bound),
                        tail_bound: 0.5 * (a.meta.tail_bound + b.meta.tail_bound),
                        terms: a.meta.terms + b.meta.terms,
                        ..a.meta
                    },
                })
                .collect())
        };
        let coarse = avg(PERTURBATION)?;
        let fine = avg(0.5 * PERTURBATION)?;
        Ok(coarse
            .into_iter()
            .zip(fine)
            .map(|(c, f)| {
                let value = (4.0 * f.value - c.value) / 3.0;
                // the extrapolation step itself is a proxy for the O(h^4) remainder
                let step = (value - f.value).norm();
                GValue {
                    value,
                    meta: GMeta {
                        method: GMethod::PerturbedSeries,
                        tail_bound: f.meta.tail_bound + 0.1 * step,
                        roundoff_bound: (5.0 * f.meta.roundoff_bound + c.meta.roundoff_bound) / 3.0,
                        terms: c.meta.terms + f.meta.terms,
                        underflow: c.meta.underflow || f.meta.underflow,
                        accuracy_warning: c.meta.accuracy_warning || f.meta.accuracy_warning,
                    },
                }
            })
            .collect())
    }
}

pub fn rho_liouville(ev: &LiouvilleEvaluator, x: Complex64, p: Complex64) -> Result<Complex64> {
    Ok(ev.evaluate(x, p)?.value)
}

impl AnalyticOperand for LiouvilleEvaluator {
    fn derivatives(&self, x: Complex64, p: Complex64, orders: &[u32]) -> Result<Evaluated> {
        let vals = self.derivatives_meta(x, p, orders)?;
        let warning = vals.iter().find(|v| v.meta.accuracy_warning).map(|v| {
            format!("G-function accuracy warning at x = {x}, p = {p} (tail bound {:.3e})", v.meta.tail_bound)
        });
        Ok(Evaluated { values: vals.iter().map(|v| v.value).collect(), warning })
    }
}

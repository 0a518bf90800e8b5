//! Pointwise residuals of the exponential-wall equations.
//!
//! Operands are analytic in both arguments: momentum shifts `p -> p ± i alpha` and
//! x-derivatives are evaluated exactly, never by differencing.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ResidualPoint, ResidualReport};
use crate::error::{Error, Result};
use crate::states::AnalyticOperand;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub const PAIR_TOLERANCE: f64 = 1e-6;
pub const DIFFERENCE_TOLERANCE: f64 = 1e-6;
pub const EFFECTIVE_MASS_TOLERANCE: f64 = 1e-6;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn exclude_zero_p(points: &[(f64, f64)]) -> Result<()> {
    if let Some(&(x, p)) = points.iter().find(|q| q.1 == 0.0) {
        return Err(Error::ExcludedSample { x, p, reason: "the equation divides by p".into() });
    }
    Ok(())
}

fn warnings_of(ws: impl Iterator<Item = Option<String>>) -> Vec<String> {
    let mut v: Vec<String> = ws.flatten().collect();
    v.dedup();
    v
}

/// Both lines of the stationary equation for `V = e^{2 alpha x}`, multiplied through:
///
/// ```text
/// R1 = d_x rho + (i e^{2 alpha x} / (2p)) [rho(p + i alpha) - rho(p - i alpha)]
/// R2 = (p^2 - k^2 - d_x^2/4) rho + (e^{2 alpha x}/2) [rho(p + i alpha) + rho(p - i alpha)]
/// ```
///
/// Points lists all `R1` values first, then all `R2` values, in sample order.
pub fn genvalue_residual_liouville(
    op: &dyn AnalyticOperand,
    alpha: f64,
    k: f64,
    points: &[(f64, f64)],
    tolerance: f64,
) -> Result<ResidualReport> {
    exclude_zero_p(points)?;
    let evals: Vec<_> = points
        .par_iter()
        .map(|&(x, p)| -> Result<_> {
            let (xc, pc) = (c(x), c(p));
            let d = op.derivatives(xc, pc, &[0, 1, 2])?;
            let up = op.derivatives(xc, pc + I * alpha, &[0])?;
            let dn = op.derivatives(xc, pc - I * alpha, &[0])?;
            let e = (2.0 * alpha * x).exp();
            let (rp, rm) = (up.values[0], dn.values[0]);
            let r1 = d.values[1] + I * e / (2.0 * p) * (rp - rm);
            let r2 = (p * p - k * k) * d.values[0] - 0.25 * d.values[2] + 0.5 * e * (rp + rm);
            let warn = d.warning.or(up.warning).or(dn.warning);
            Ok((r1, r2, d.values[0].norm(), warn))
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = evals.iter().fold(0.0f64, |m, e| m.max(e.2));
    let mut pts: Vec<ResidualPoint> = points.iter().zip(&evals).map(|(&(x, p), e)| ResidualPoint::new(x, p, e.0)).collect();
    pts.extend(points.iter().zip(&evals).map(|(&(x, p), e)| ResidualPoint::new(x, p, e.1)));
    Ok(ResidualReport::from_points("eq24", pts, scale, tolerance)
        .with_warnings(warnings_of(evals.into_iter().map(|e| e.3))))
}

/// Coefficient of the `rho(p + i alpha) - rho(p - i alpha)` term of the difference equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DifferenceForm {
    /// `+ i alpha e^{2 alpha x} / (4p)`, obtained by eliminating `d_x` between the two lines.
    #[default]
    Derived,
    /// `- i e^{2 alpha x} / (4p)`.
    AsPrinted,
}

/// Residual of the x-derivative-free difference equation
///
/// ```text
/// (p^2 - k^2) rho + (1/p)(e^{2 alpha x}/4)^2 [ (rho(p + 2i alpha) - rho)/(p + i alpha)
///                                             + (rho(p - 2i alpha) - rho)/(p - i alpha) ]
///     + c(p) [rho(p + i alpha) - rho(p - i alpha)] + (e^{2 alpha x}/2)[rho(p + i alpha) + rho(p - i alpha)]
/// ```
pub fn difference_eq_residual(
    op: &dyn AnalyticOperand,
    alpha: f64,
    k: f64,
    points: &[(f64, f64)],
    form: DifferenceForm,
    tolerance: f64,
) -> Result<ResidualReport> {
    exclude_zero_p(points)?;
    let evals: Vec<_> = points
        .par_iter()
        .map(|&(x, p)| -> Result<_> {
            let (xc, pc) = (c(x), c(p));
            let at = |s: f64| op.derivatives(xc, pc + I * (s * alpha), &[0]);
            let (r0, p1, m1, p2, m2) = (at(0.0)?, at(1.0)?, at(-1.0)?, at(2.0)?, at(-2.0)?);
            let (v0, vp1, vm1, vp2, vm2) = (r0.values[0], p1.values[0], m1.values[0], p2.values[0], m2.values[0]);
            let e = (2.0 * alpha * x).exp();
            let q = (e / 4.0).powi(2) / p;
            let lin = match form {
                DifferenceForm::Derived => I * alpha * e / (4.0 * p),
                DifferenceForm::AsPrinted => -I * e / (4.0 * p),
            };
            let r = (p * p - k * k) * v0
                + q * ((vp2 - v0) / (pc + I * alpha) + (vm2 - v0) / (pc - I * alpha))
                + lin * (vp1 - vm1)
                + 0.5 * e * (vp1 + vm1);
            let warn = [r0.warning, p1.warning, m1.warning, p2.warning, m2.warning].into_iter().flatten().next();
            Ok((r, v0.norm(), warn))
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = evals.iter().fold(0.0f64, |m, e| m.max(e.1));
    let pts = points.iter().zip(&evals).map(|(&(x, p), e)| ResidualPoint::new(x, p, e.0)).collect();
    let id = match form {
        DifferenceForm::Derived => "eq25",
        DifferenceForm::AsPrinted => "eq25-as-printed",
    };
    Ok(ResidualReport::from_points(id, pts, scale, tolerance).with_warnings(warnings_of(evals.into_iter().map(|e| e.2))))
}

/// Branch of `log(-1/k^2)` in the coordinate shift of the effective-mass form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftBranch {
    /// `Delta = (-ln k^2 + i pi) / (2 alpha)`.
    #[default]
    ComplexShift,
    /// `Delta = -ln k^2 / (2 alpha)`.
    RealShift,
}

pub fn effective_mass_shift(alpha: f64, k: f64, branch: ShiftBranch) -> Complex64 {
    let im = match branch {
        ShiftBranch::ComplexShift => std::f64::consts::PI,
        ShiftBranch::RealShift => 0.0,
    };
    Complex64::new(-(k * k).ln(), im) / (2.0 * alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveMassReport {
    /// Residual of `(p - i d/2)^2 rho' - k^2 (1 + e^{2 alpha x'} S) rho'` with `rho'(x') = rho(x' - Delta)`.
    pub residual: ResidualReport,
    /// `sup |R' - R| / reference_scale`, `R` the unshifted form at `x = x' - Delta`.
    pub identity_defect: f64,
    pub shift: [f64; 2],
}

/// `S` shifts `p -> p + i alpha`. Sample points are `(x', p)`.
pub fn effective_mass_residual(
    op: &dyn AnalyticOperand,
    alpha: f64,
    k: f64,
    branch: ShiftBranch,
    points: &[(f64, f64)],
    tolerance: f64,
) -> Result<EffectiveMassReport> {
    let delta = effective_mass_shift(alpha, k, branch);
    let evals: Vec<_> = points
        .par_iter()
        .map(|&(xs, p)| -> Result<_> {
            let x = c(xs) - delta;
            let pc = c(p);
            let d = op.derivatives(x, pc, &[0, 1, 2])?;
            let up = op.derivatives(x, pc + I * alpha, &[0])?;
            let bulk = (p * p - k * k) * d.values[0] - I * p * d.values[1] - 0.25 * d.values[2];
            let shifted = bulk - k * k * (2.0 * alpha * xs).exp() * up.values[0];
            let unshifted = bulk + (2.0 * alpha * x).exp() * up.values[0];
            Ok((shifted, unshifted, d.values[0].norm(), d.warning.or(up.warning)))
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = evals.iter().fold(0.0f64, |m, e| m.max(e.2));
    let defect = evals.iter().fold(0.0f64, |m, e| m.max((e.0 - e.1).norm()));
    let pts = points.iter().zip(&evals).map(|(&(x, p), e)| ResidualPoint::new(x, p, e.0)).collect();
    let id = match branch {
        ShiftBranch::ComplexShift => "eq30",
        ShiftBranch::RealShift => "eq30-real-shift",
    };
    let residual =
        ResidualReport::from_points(id, pts, scale, tolerance).with_warnings(warnings_of(evals.into_iter().map(|e| e.3)));
    Ok(EffectiveMassReport {
        residual,
        identity_defect: if defect == 0.0 { 0.0 } else { defect / scale.max(f64::MIN_POSITIVE) },
        shift: [delta.re, delta.im],
    })
}

/// `n × n` sample points on a rectangle, skipping `p = 0` by half a step when it lands on a node.
pub fn sample_rectangle(x: (f64, f64), p: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    let lin = |(a, b): (f64, f64), i: usize| if n == 1 { 0.5 * (a + b) } else { a + (b - a) * i as f64 / (n - 1) as f64 };
    let dp = if n > 1 { (p.1 - p.0) / (n - 1) as f64 } else { 1.0 };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut pv = lin(p, j);
            if pv.abs() < 1e-12 {
                pv = 0.5 * dp;
            }
            out.push((lin(x, i), pv));
        }
    }
    out
}

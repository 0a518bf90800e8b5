//! The Meijer function `G^{4,0}_{0,4}(w | b1, b2, b3, b4)`:
//!
//! ```text
//! G(w) = (1/2 pi i) ∫_C w^s Γ(b1 - s) Γ(b2 - s) Γ(b3 - s) Γ(b4 - s) ds
//! ```
//!
//! with `C` a vertical line left of every pole `s = b_j + n`. Two evaluators are
//! provided: Gauss-Legendre quadrature along the line, and the sum of residues
//! over the four right-going pole strings. Both accept `ln w` instead of `w` so
//! that the branch of `w^s` can be chosen by the caller, and both return the
//! moments `∫ s^m (...)`, i.e. `(w d/dw)^m G`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::{log_gamma, log_gamma_mod};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

const EXP_GUARD: f64 = 700.0;
const DEGENERACY: f64 = 1e-6;
const CONJUGATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MellinBarnesSpec {
    /// Contour abscissa relative to the leftmost parameter real part.
    pub sigma: f64,
    /// Minimum half-length of the contour in `Im s`.
    pub t_max: f64,
    /// Gauss-Legendre nodes per unit-length panel.
    pub n_nodes: usize,
}

impl Default for MellinBarnesSpec {
    fn default() -> Self {
        Self { sigma: -0.25, t_max: 12.0, n_nodes: 64 }
    }
}

impl MellinBarnesSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma < 0.0) || !self.sigma.is_finite() {
            return Err(Error::Config(format!("mb.sigma must be negative, got {}", self.sigma)));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::Config(format!("mb.t_max must be positive, got {}", self.t_max)));
        }
        if self.n_nodes < 64 {
            return Err(Error::Config(format!("mb.n_nodes must be at least 64, got {}", self.n_nodes)));
        }
        Ok(())
    }

    pub fn doubled(&self) -> Self {
        Self { sigma: self.sigma, t_max: 2.0 * self.t_max, n_nodes: 2 * self.n_nodes }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GParams {
    pub b: [Complex64; 4],
}

impl GParams {
    /// With `real_output`, the parameters must form conjugate pairs.
    pub fn new(b: [Complex64; 4], real_output: bool) -> Result<Self> {
        if b.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain("non-finite Meijer G parameter".into()));
        }
        let p = Self { b };
        if real_output && !p.is_conjugate_closed() {
            return Err(Error::Domain(format!("parameters {b:?} are not closed under conjugation")));
        }
        Ok(p)
    }

    /// `{ i(p-k), i(p+k), -i(p-k), -i(p+k) } / (2 alpha)` at possibly complex `p`.
    pub fn wigner(alpha: f64, k: f64, p: Complex64) -> Self {
        let i = Complex64::i();
        let s = 1.0 / (2.0 * alpha);
        Self { b: [i * (p - k) * s, i * (p + k) * s, -i * (p - k) * s, -i * (p + k) * s] }
    }

    pub fn is_conjugate_closed(&self) -> bool {
        let mut used = [false; 4];
        for a in &self.b {
            let scale = 1.0 + a.norm();
            let hit = (0..4).find(|&j| !used[j] && (self.b[j].conj() - a).norm() <= CONJUGATE_TOL * scale);
            match hit {
                Some(j) => used[j] = true,
                None => return false,
            }
        }
        true
    }

    pub fn min_re(&self) -> f64 {
        self.b.iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_im(&self) -> f64 {
        self.b.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// First pair whose difference lies within `DEGENERACY` of an integer, with that distance.
    pub fn degeneracy(&self) -> Option<(usize, usize, f64)> {
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = self.b[i] - self.b[j];
                let sep = Complex64::new(d.re - d.re.round(), d.im).norm();
                if sep < DEGENERACY {
                    return Some((i, j, sep));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GMethod {
    Contour,
    Series,
    /// Series averaged over `p ± h` and Richardson-extrapolated to `h -> 0`.
    PerturbedSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GMeta {
    pub method: GMethod,
    /// Estimated truncation error (contour tails or dropped series terms).
    pub tail_bound: f64,
    /// Floating-point cancellation estimate `eps * Σ|contributions|`.
    pub roundoff_bound: f64,
    /// Quadrature nodes or series terms used.
    pub terms: usize,
    pub underflow: bool,
    pub accuracy_warning: bool,
}

impl GMeta {
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + self.roundoff_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GValue {
    pub value: Complex64,
    pub meta: GMeta,
}

fn principal_log(w: Complex64) -> Result<Complex64> {
    if w == Complex64::new(0.0, 0.0) || !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::Domain(format!("Meijer G argument must be finite and nonzero, got {w}")));
    }
    Ok(w.ln())
}

/// Scales `exp(log_scale) * sum`, guarding the exponent.
fn rescale(log_scale: f64, sum: Complex64) -> Result<(Complex64, bool)> {
    if log_scale > EXP_GUARD {
        return Err(Error::Overflow(log_scale));
    }
    if log_scale < -EXP_GUARD {
        return Ok((Complex64::new(0.0, 0.0), sum != Complex64::new(0.0, 0.0)));
    }
    Ok((sum * log_scale.exp(), false))
}

fn exp_bound(log_scale: f64, x: f64) -> f64 {
    if log_scale < -EXP_GUARD {
        0.0
    } else {
        x * log_scale.min(EXP_GUARD).exp()
    }
}

pub fn meijer_g04_contour(w: Complex64, params: &GParams, spec: &MellinBarnesSpec) -> Result<GValue> {
    Ok(contour_moments(principal_log(w)?, params, spec, &[0])?[0])
}

pub fn meijer_g04_series(w: Complex64, params: &GParams) -> Result<GValue> {
    Ok(series_moments(principal_log(w)?, params, &[0])?[0])
}

/// Contour abscissa and half-length used for a given `ln w`.
pub fn contour_geometry(log_w: Complex64, params: &GParams, spec: &MellinBarnesSpec) -> (f64, f64) {
    let shift = ((log_w.re / 4.0).exp() - 1.0).max(0.0);
    let sigma = params.min_re() + spec.sigma - shift;
    let stretch = 2.0 * PI / (2.0 * PI - log_w.im.abs());
    let half = (spec.t_max.max(params.max_abs_im() + 8.0) + 5.0 * shift.sqrt()) * stretch;
    (sigma, half.ceil())
}

/// `(1/2 pi) ∫ s^m Γ(b-s)... exp(s ln w) dt` along `s = sigma + i t` for each order `m`.
pub fn contour_moments(
    log_w: Complex64,
    params: &GParams,
    spec: &MellinBarnesSpec,
    orders: &[u32],
) -> Result<Vec<GValue>> {
    spec.validate()?;
    if !log_w.re.is_finite() || !log_w.im.is_finite() {
        return Err(Error::Domain(format!("non-finite ln w = {log_w}")));
    }
    if log_w.im.abs() >= 2.0 * PI - 1e-9 {
        return Err(Error::BranchDomain(format!(
            "|Im ln w| = {} is outside the contour's convergence strip (< 2 pi)",
            log_w.im.abs()
        )));
    }
    let (sigma, half) = contour_geometry(log_w, params, spec);
    for b in &params.b {
        if b.re - sigma <= 0.0 {
            return Err(Error::Contour(format!("contour Re s = {sigma} does not pass left of pole {b}")));
        }
    }
    let rule = GaussLegendre::cached(spec.n_nodes);
    let panels = 2 * half as usize;
    let n = panels * rule.len();
    let mut s_nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut logs = Vec::with_capacity(n);
    for k in 0..panels {
        let lo = -half + k as f64;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let s = Complex64::new(sigma, lo + 0.5 + 0.5 * t);
            let mut lf = s * log_w;
            for b in &params.b {
                lf += log_gamma_mod(b - s);
            }
            s_nodes.push(s);
            weights.push(0.5 * w);
            logs.push(lf);
        }
    }
    let m = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let end_log = |s: Complex64| {
        let mut lf = s * log_w;
        for b in &params.b {
            lf += log_gamma_mod(b - s);
        }
        lf.re
    };
    let edge = [end_log(Complex64::new(sigma, half)), end_log(Complex64::new(sigma, -half))];
    let rate = 2.0 * PI - log_w.im.abs();
    let mut out = Vec::with_capacity(orders.len());
    for &order in orders {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        for i in 0..n {
            let f = (logs[i] - m).exp() * s_nodes[i].powu(order) * weights[i];
            sum += f;
            abs_sum += f.norm();
        }
        let tail_rel: f64 = edge
            .iter()
            .map(|&e| (e - m).exp() * (sigma * sigma + half * half).sqrt().powi(order as i32) / rate)
            .sum();
        let inv = 1.0 / (2.0 * PI);
        let (value, underflow) = rescale(m, sum * inv)?;
        let tail_bound = exp_bound(m, tail_rel * inv);
        let roundoff_bound = exp_bound(m, 8.0 * f64::EPSILON * abs_sum * inv);
        let accuracy_warning = tail_bound > 1e-12 * exp_bound(m, abs_sum * inv).max(f64::MIN_POSITIVE);
        out.push(GValue {
            value,
            meta: GMeta {
                method: GMethod::Contour,
                tail_bound,
                roundoff_bound,
                terms: n,
                underflow,
                accuracy_warning,
            },
        });
    }
    Ok(out)
}

const SERIES_MAX_TERMS: usize = 10_000;

/// Residue sum `Σ_j Σ_n (-1)^n / n! w^{b_j+n} (b_j+n)^m Π_{i≠j} Γ(b_i - b_j - n)`.
pub fn series_moments(log_w: Complex64, params: &GParams, orders: &[u32]) -> Result<Vec<GValue>> {
    if !log_w.re.is_finite() || !log_w.im.is_finite() {
        return Err(Error::Domain(format!("non-finite ln w = {log_w}")));
    }
    if log_w.re >= 0.0 {
        return Err(Error::SeriesOutOfRange(log_w.re.exp()));
    }
    if let Some((i, j, separation)) = params.degeneracy() {
        return Err(Error::DegenerateParameters { i, j, separation });
    }
    let w = log_w.exp();
    // per string: log of leading term, then relative partial sums per order
    let mut strings = Vec::with_capacity(4);
    let mut terms_used = 0;
    for j in 0..4 {
        let bj = params.b[j];
        let c: Vec<Complex64> = (0..4).filter(|&i| i != j).map(|i| params.b[i] - bj).collect();
        let mut lead = bj * log_w;
        for ci in &c {
            lead += log_gamma(*ci)?;
        }
        let mut sums = vec![Complex64::new(0.0, 0.0); orders.len()];
        let mut abs_sums = vec![0.0; orders.len()];
        let mut r = Complex64::new(1.0, 0.0);
        let mut last = 0.0;
        let mut n = 0usize;
        loop {
            let sn = bj + n as f64;
            for (o, &order) in orders.iter().enumerate() {
                let t = r * sn.powu(order);
                sums[o] += t;
                abs_sums[o] += t.norm();
            }
            let partial = sums[0].norm().max(abs_sums[0] * f64::EPSILON);
            let mag = r.norm() * (1.0 + sn.norm()).powi(orders.iter().copied().max().unwrap_or(0) as i32);
            if n > 0 && mag < 1e-16 * partial && last < 1e-14 * partial {
                break;
            }
            last = mag;
            n += 1;
            if n > SERIES_MAX_TERMS {
                return Err(Error::SeriesOutOfRange(w.norm()));
            }
            let mut denom = Complex64::new(n as f64, 0.0);
            for ci in &c {
                denom *= ci - n as f64;
            }
            r *= -w / denom;
        }
        terms_used += n + 1;
        strings.push((lead, sums, abs_sums, r.norm()));
    }
    let m = strings.iter().map(|s| s.0.re).fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::with_capacity(orders.len());
    for o in 0..orders.len() {
        let mut total = Complex64::new(0.0, 0.0);
        let mut abs_total = 0.0;
        let mut tail = 0.0;
        for (lead, sums, abs_sums, last) in &strings {
            let f = (lead - m).exp();
            total += f * sums[o];
            abs_total += f.norm() * abs_sums[o];
            tail += f.norm() * last;
        }
        let (value, underflow) = rescale(m, total)?;
        let roundoff_bound = exp_bound(m, 8.0 * f64::EPSILON * abs_total);
        out.push(GValue {
            value,
            meta: GMeta {
                method: GMethod::Series,
                tail_bound: exp_bound(m, tail),
                roundoff_bound,
                terms: terms_used,
                underflow,
                accuracy_warning: false,
            },
        });
    }
    Ok(out)
}

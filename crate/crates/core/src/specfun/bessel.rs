//! Modified Bessel function of the second kind with purely imaginary order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// `exp(-745)` is below the smallest subnormal double.
const CUTOFF: f64 = 745.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselValue {
    pub value: f64,
    /// Absolute error estimate of `value`.
    pub error: f64,
    pub underflow: bool,
}

/// `K_{i mu}(z) = ∫_0^∞ exp(-z cosh t) cos(mu t) dt` for `z > 0`.
pub fn bessel_k_imag_order(mu: f64, z: f64) -> Result<f64> {
    bessel_k_imag_order_ext(mu, z).map(|v| v.value)
}

pub fn bessel_k_imag_order_ext(mu: f64, z: f64) -> Result<BesselValue> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("K_(i mu)(z) requires z > 0, got {z}")));
    }
    if !mu.is_finite() {
        return Err(Error::Domain(format!("order must be finite, got {mu}")));
    }
    if z >= CUTOFF {
        return Ok(BesselValue { value: 0.0, error: 0.0, underflow: true });
    }
    // scaled integrand exp(-z (cosh t - 1)) cos(mu t)
    let t_end = (1.0 + CUTOFF / z).acosh();
    let width = (std::f64::consts::PI / mu.abs().max(1e-300)).min(1.0).min(2.0 / z.sqrt());
    let panels = (t_end / width).ceil().max(1.0) as usize;
    let h = t_end / panels as f64;
    let fine = GaussLegendre::cached(24);
    let coarse = GaussLegendre::cached(16);
    let f = |t: f64| (-z * (t.cosh() - 1.0)).exp() * (mu * t).cos();
    let g = |t: f64| (-z * (t.cosh() - 1.0)).exp();
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut scale = 0.0;
    for i in 0..panels {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        let v = fine.integrate(a, b, f);
        err += (v - coarse.integrate(a, b, f)).abs();
        scale += fine.integrate(a, b, g);
        sum += v;
    }
    let damp = (-z).exp();
    let err = (err + 4.0 * f64::EPSILON * scale) * damp;
    let value = sum * damp;
    Ok(BesselValue { value, error: err, underflow: value == 0.0 && sum != 0.0 })
}

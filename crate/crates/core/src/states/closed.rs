//! Closed-form Wigner functions for the hard wall and its phase-shifted (Robin)
//! generalisation, with exact x-derivatives, plus the Gaussian-regularised free
//! particle.
//!
//! The building block is `T(u) = sin(2xu) / (2u)`. For `x < 0`
//!
//! ```text
//! rho_bar(x, p; k, phi) = T(p + k) + T(p - k) - 2 cos(2kx + 2phi) T(p)
//! ```
//!
//! and zero for `x > 0`. With `phi = 0` this is the wall function; the Wigner
//! transform of `theta(-x) sin(kx + phi)` is `-rho_bar / (2 pi)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{FreeAmplitudes, StateSpec};
use crate::error::Result;
use crate::phase_space::{Field, PhaseSpaceGrid};

const SINC_SWITCH: f64 = 1e-4;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `d^m/dx^m sin(2xu)/(2u)`, stable as `u -> 0`.
pub fn t_derivative(x: Complex64, u: Complex64, m: u32) -> Complex64 {
    if m == 0 {
        let z = 2.0 * x * u;
        if u.norm() < SINC_SWITCH {
            let z2 = z * z;
            // 1 - z^2/3! + z^4/5! - z^6/7! + z^8/9!
            let s = 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0)));
            x * s
        } else {
            z.sin() / (2.0 * u)
        }
    } else {
        (2.0 * u).powu(m - 1) * (2.0 * x * u + m as f64 * FRAC_PI_2).sin()
    }
}

fn binomial(n: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Phase-shifted closed form with its x-derivative of order `m`, at complex arguments.
/// No Heaviside factor is applied.
pub fn rho_bar_phase_derivative(k: f64, phi: f64, x: Complex64, p: Complex64, m: u32) -> Complex64 {
    let mut cross = ZERO;
    for j in 0..=m {
        let c = (2.0 * k).powi(j as i32) * (2.0 * k * x + 2.0 * phi + j as f64 * FRAC_PI_2).cos();
        cross += binomial(m, j) * c * t_derivative(x, p, m - j);
    }
    t_derivative(x, p + k, m) + t_derivative(x, p - k, m) - 2.0 * cross
}

/// The wall function `theta(-x) rho_bar(x, p)`.
pub fn rho_bar_closed(k: f64, x: f64, p: f64) -> f64 {
    rho_bar_phase(k, 0.0, x, p)
}

/// `theta(-x) rho_bar(x, p; k, phi)`.
pub fn rho_bar_phase(k: f64, phi: f64, x: f64, p: f64) -> f64 {
    if x > 0.0 {
        return 0.0;
    }
    rho_bar_phase_derivative(k, phi, x.into(), p.into(), 0).re
}

/// `d^m/dx^m` of [`rho_bar_phase`] on `x <= 0` (left derivative at the wall), zero for `x > 0`.
pub fn rho_bar_derivative(k: f64, phi: f64, x: f64, p: f64, m: u32) -> f64 {
    if x > 0.0 {
        return 0.0;
    }
    rho_bar_phase_derivative(k, phi, x.into(), p.into(), m).re
}

/// Closed form of the Robin state `theta(-x) sin(kx + phi)` with `phi = atan(-Lk)`,
/// normalised as the Wigner transform itself.
pub fn rho_robin_closed(k: f64, l: f64, x: f64, p: f64) -> f64 {
    -rho_bar_phase(k, super::robin_phase(k, l), x, p) / (2.0 * PI)
}

pub fn fill_rho_bar(k: f64, grid: PhaseSpaceGrid) -> Result<Field> {
    Field::from_real_fn(grid, move |x, p| rho_bar_closed(k, x, p))
}

/// Normal density with standard deviation `sigma`.
pub fn delta_sigma(u: f64, sigma: f64) -> f64 {
    (-0.5 * (u / sigma).powi(2)).exp() / ((2.0 * PI).sqrt() * sigma)
}

/// The free superposition `a_plus e^{ikx} + a_minus e^{-ikx}` with each momentum
/// delta replaced by a normal density of width `sigma`:
///
/// ```text
/// |a+|^2 d(p - k) + |a-|^2 d(p + k) + 2 |a+ a-| d(p) cos(2kx + arg(a+ conj(a-)))
/// ```
pub fn rho_free_point(amps: &FreeAmplitudes, k: f64, sigma: f64, x: f64, p: f64) -> f64 {
    rho_free_with_ridge(amps, k, x, p, |u| delta_sigma(u, sigma))
}

/// The free-particle structure with an arbitrary ridge profile in place of the delta.
pub fn rho_free_with_ridge<F: Fn(f64) -> f64>(amps: &FreeAmplitudes, k: f64, x: f64, p: f64, ridge: F) -> f64 {
    let (ap, am) = (amps.plus.norm_sqr(), amps.minus.norm_sqr());
    let cross = amps.plus * amps.minus.conj();
    ap * ridge(p - k) + am * ridge(p + k) + 2.0 * cross.norm() * ridge(p) * (2.0 * k * x + cross.arg()).cos()
}

pub fn rho_free_regularized(spec: &StateSpec, grid: PhaseSpaceGrid) -> Result<Field> {
    spec.validate()?;
    let amps = spec.amplitudes();
    let (k, sigma) = (spec.k, spec.sigma_reg);
    Field::from_real_fn(grid, move |x, p| rho_free_point(&amps, k, sigma, x, p))
}

/// Envelope width whose exact Wigner function carries momentum densities of width `sigma`.
pub fn envelope_width_for(sigma: f64) -> f64 {
    1.0 / (std::f64::consts::SQRT_2 * sigma)
}

//! Position-space eigenfunctions.

use num_complex::Complex64;

use super::{robin_phase, FreeAmplitudes};
use crate::error::Result;
use crate::specfun::{bessel_k_imag_order_ext, BesselValue};

/// Where a wave function is supported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// The whole line.
    Line,
    /// Identically zero for `x > edge`.
    Below(f64),
    /// Negligible (below `1e-20` of its bulk size) for `x > edge`.
    EffectivelyBelow(f64),
}

pub trait WaveFunction: Sync {
    fn eval(&self, x: f64) -> Complex64;
    fn support(&self) -> Support;
}

/// `theta(-x) sin(kx)`.
pub fn psi_wall(k: f64, x: f64) -> f64 {
    if x >= 0.0 {
        0.0
    } else {
        (k * x).sin()
    }
}

/// `theta(-x) sin(kx + phi)` with `phi = atan(-Lk)`; the value at `x = 0` is the left limit.
pub fn psi_robin(k: f64, l: f64, x: f64) -> f64 {
    if x > 0.0 {
        0.0
    } else {
        (k * x + robin_phase(k, l)).sin()
    }
}

pub fn psi_robin_derivative(k: f64, l: f64, x: f64) -> f64 {
    if x > 0.0 {
        0.0
    } else {
        k * (k * x + robin_phase(k, l)).cos()
    }
}

/// `K_{ik/alpha}(e^{alpha x} / alpha)`, unnormalised.
pub fn psi_liouville(alpha: f64, k: f64, x: f64) -> Result<BesselValue> {
    let z = (alpha * x).exp() / alpha;
    if !z.is_finite() {
        return Ok(BesselValue { value: 0.0, error: 0.0, underflow: true });
    }
    bessel_k_imag_order_ext(k / alpha, z)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallState {
    pub k: f64,
}

impl WaveFunction for WallState {
    fn eval(&self, x: f64) -> Complex64 {
        psi_wall(self.k, x).into()
    }

    fn support(&self) -> Support {
        Support::Below(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinState {
    pub k: f64,
    pub l: f64,
}

impl WaveFunction for RobinState {
    fn eval(&self, x: f64) -> Complex64 {
        psi_robin(self.k, self.l, x).into()
    }

    fn support(&self) -> Support {
        Support::Below(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiouvilleState {
    pub alpha: f64,
    pub k: f64,
}

impl LiouvilleState {
    /// Point where the Bessel argument reaches 50.
    pub fn edge(&self) -> f64 {
        (50.0 * self.alpha).ln() / self.alpha
    }
}

impl WaveFunction for LiouvilleState {
    fn eval(&self, x: f64) -> Complex64 {
        psi_liouville(self.alpha, self.k, x).map(|v| v.value).unwrap_or(0.0).into()
    }

    fn support(&self) -> Support {
        Support::EffectivelyBelow(self.edge())
    }
}

/// `(a_plus e^{ikx} + a_minus e^{-ikx}) exp(-x^2 / (2 lambda^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeState {
    pub amps: FreeAmplitudes,
    pub k: f64,
    pub lambda: f64,
}

impl WaveFunction for EnvelopeState {
    fn eval(&self, x: f64) -> Complex64 {
        let phase = Complex64::from_polar(1.0, self.k * x);
        (self.amps.plus * phase + self.amps.minus * phase.conj()) * (-0.5 * (x / self.lambda).powi(2)).exp()
    }

    fn support(&self) -> Support {
        Support::Line
    }
}

/// Wraps a closure as a wave function.
pub struct FnWave<F> {
    pub f: F,
    pub support: Support,
}

impl<F: Fn(f64) -> Complex64 + Sync> WaveFunction for FnWave<F> {
    fn eval(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }

    fn support(&self) -> Support {
        self.support
    }
}

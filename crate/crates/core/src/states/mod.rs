//! Eigenfunction families and their Wigner functions.

pub mod closed;
pub mod liouville;
pub mod wave;
pub mod wigner;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use closed::{
    delta_sigma, envelope_width_for, fill_rho_bar, rho_bar_closed, rho_bar_derivative, rho_bar_phase,
    rho_free_point, rho_free_regularized, rho_robin_closed,
};
pub use liouville::{rho_liouville, EvalMethod, LiouvilleEvaluator};
pub use wave::{
    psi_liouville, psi_robin, psi_robin_derivative, psi_wall, EnvelopeState, FnWave, LiouvilleState,
    RobinState, Support, WallState, WaveFunction,
};
pub use wigner::{wigner_transform_lattice, wigner_transform_numeric, WignerOptions, WignerOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Wall,
    Robin,
    Liouville,
    FreeSuperposition,
}

/// Parameters selecting one eigenfunction. Energy is `k^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub family: Family,
    pub k: f64,
    /// Steepness of the exponential wall (liouville).
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Robin length.
    #[serde(default, rename = "L")]
    pub l: f64,
    /// `[re, im]` of the `e^{ikx}` amplitude (free-superposition).
    #[serde(default = "default_amp_plus")]
    pub amp_plus: [f64; 2],
    /// `[re, im]` of the `e^{-ikx}` amplitude (free-superposition).
    #[serde(default = "default_amp_minus")]
    pub amp_minus: [f64; 2],
    /// Width of the normal density replacing momentum deltas (free-superposition).
    #[serde(default = "default_sigma_reg")]
    pub sigma_reg: f64,
}

fn default_alpha() -> f64 {
    1.0
}
fn default_amp_plus() -> [f64; 2] {
    [1.0, 0.0]
}
fn default_amp_minus() -> [f64; 2] {
    [1.0, 0.0]
}
fn default_sigma_reg() -> f64 {
    0.05
}

impl StateSpec {
    pub fn new(family: Family, k: f64) -> Self {
        Self {
            family,
            k,
            alpha: default_alpha(),
            l: 0.0,
            amp_plus: default_amp_plus(),
            amp_minus: default_amp_minus(),
            sigma_reg: default_sigma_reg(),
        }
    }

    pub fn wall(k: f64) -> Self {
        Self::new(Family::Wall, k)
    }

    pub fn robin(k: f64, l: f64) -> Self {
        Self { l, ..Self::new(Family::Robin, k) }
    }

    pub fn liouville(k: f64, alpha: f64) -> Self {
        Self { alpha, ..Self::new(Family::Liouville, k) }
    }

    pub fn free(k: f64, plus: Complex64, minus: Complex64, sigma_reg: f64) -> Self {
        Self {
            amp_plus: [plus.re, plus.im],
            amp_minus: [minus.re, minus.im],
            sigma_reg,
            ..Self::new(Family::FreeSuperposition, k)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(Error::Config(format!("k must be positive, got {}", self.k)));
        }
        match self.family {
            Family::Liouville if !(self.alpha > 0.0) || !self.alpha.is_finite() => {
                Err(Error::Config(format!("alpha must be positive, got {}", self.alpha)))
            }
            Family::Robin if !self.l.is_finite() => Err(Error::Config(format!("L must be finite, got {}", self.l))),
            Family::FreeSuperposition => {
                if !(self.sigma_reg > 0.0) || !self.sigma_reg.is_finite() {
                    return Err(Error::Config(format!("sigma_reg must be positive, got {}", self.sigma_reg)));
                }
                if self.amp_plus.iter().chain(&self.amp_minus).any(|v| !v.is_finite()) {
                    return Err(Error::Config("amplitudes must be finite".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn amplitudes(&self) -> FreeAmplitudes {
        FreeAmplitudes {
            plus: Complex64::new(self.amp_plus[0], self.amp_plus[1]),
            minus: Complex64::new(self.amp_minus[0], self.amp_minus[1]),
        }
    }

    /// Position-space wave function of the selected family. The free family carries a
    /// Gaussian envelope whose exact Wigner function has momentum width `sigma_reg`.
    pub fn wave_function(&self) -> Result<Box<dyn WaveFunction>> {
        self.validate()?;
        Ok(match self.family {
            Family::Wall => Box::new(WallState { k: self.k }),
            Family::Robin => Box::new(RobinState { k: self.k, l: self.l }),
            Family::Liouville => Box::new(LiouvilleState { alpha: self.alpha, k: self.k }),
            Family::FreeSuperposition => Box::new(EnvelopeState {
                amps: self.amplitudes(),
                k: self.k,
                lambda: envelope_width_for(self.sigma_reg),
            }),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeAmplitudes {
    pub plus: Complex64,
    pub minus: Complex64,
}

/// Robin phase `phi = atan(-L k)`.
pub fn robin_phase(k: f64, l: f64) -> f64 {
    (-l * k).atan()
}

/// A Wigner function known analytically, with exact x-derivatives at complex arguments.
pub trait AnalyticOperand: Sync {
    fn derivatives(&self, x: Complex64, p: Complex64, orders: &[u32]) -> Result<Evaluated>;

    fn value(&self, x: Complex64, p: Complex64) -> Result<Complex64> {
        Ok(self.derivatives(x, p, &[0])?.values[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub values: Vec<Complex64>,
    /// Accuracy concern raised by the evaluator, if any.
    pub warning: Option<String>,
}

impl Evaluated {
    pub fn exact(values: Vec<Complex64>) -> Self {
        Self { values, warning: None }
    }
}

/// `scale * rho_bar(x, p; k, phi)` without the Heaviside factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormOperand {
    pub k: f64,
    pub phi: f64,
    pub scale: f64,
}

impl ClosedFormOperand {
    pub fn wall(k: f64) -> Self {
        Self { k, phi: 0.0, scale: 1.0 }
    }
}

impl AnalyticOperand for ClosedFormOperand {
    fn derivatives(&self, x: Complex64, p: Complex64, orders: &[u32]) -> Result<Evaluated> {
        Ok(Evaluated::exact(
            orders
                .iter()
                .map(|&m| self.scale * closed::rho_bar_phase_derivative(self.k, self.phi, x, p, m))
                .collect(),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ZeroOperand;

impl AnalyticOperand for ZeroOperand {
    fn derivatives(&self, _x: Complex64, _p: Complex64, orders: &[u32]) -> Result<Evaluated> {
        Ok(Evaluated::exact(vec![Complex64::new(0.0, 0.0); orders.len()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(StateSpec::wall(1.0).validate().is_ok());
        assert!(StateSpec::wall(-1.0).validate().is_err());
        assert!(StateSpec::wall(0.0).validate().is_err());
        assert!(StateSpec::liouville(1.0, 0.0).validate().is_err());
        let mut free = StateSpec::free(1.0, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 0.1);
        assert!(free.validate().is_ok());
        free.sigma_reg = 0.0;
        assert!(free.validate().is_err());
    }

    #[test]
    fn serde_round_trip_and_unknown_keys() {
        let s = StateSpec::robin(1.5, -0.25);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"L\":-0.25"));
        assert!(json.contains("\"family\":\"robin\""));
        let back: StateSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<StateSpec>(r#"{"family":"wall","k":1,"q":2}"#).is_err());
        let minimal: StateSpec = serde_json::from_str(r#"{"family":"free-superposition","k":2}"#).unwrap();
        assert_eq!(minimal.sigma_reg, 0.05);
    }

    #[test]
    fn robin_phase_examples() {
        assert_eq!(robin_phase(1.0, 0.0), 0.0);
        let phi = robin_phase(1.0, 1.0);
        assert!((phi + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((phi.sin() + phi.cos()).abs() < 1e-15);
    }
}

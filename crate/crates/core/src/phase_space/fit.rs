use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::error::{Error, Result};

/// Least-squares proportionality `f ~ c r` between two sampled fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFit {
    /// Complex least-squares coefficient `<r, f> / <r, r>`.
    pub scale: Complex64,
    /// `sup |f - c r| / sup |r|`.
    pub residual_sup: f64,
    /// `|Im c| / |c|`.
    pub imag_ratio: f64,
}

impl ScaleFit {
    pub fn real_scale(&self) -> f64 {
        self.scale.re
    }

    /// Fails unless the fitted coefficient is real within `tol`.
    pub fn require_real(&self, tol: f64) -> Result<f64> {
        if self.imag_ratio > tol {
            Err(Error::NotReal { ratio: self.imag_ratio })
        } else {
            Ok(self.scale.re)
        }
    }
}

pub fn fit_scale_values(reference: &[Complex64], target: &[Complex64]) -> Result<ScaleFit> {
    if reference.len() != target.len() {
        return Err(Error::GridMismatch(format!(
            "{} reference samples vs {} target samples",
            reference.len(),
            target.len()
        )));
    }
    let rr: f64 = reference.iter().map(|r| r.norm_sqr()).sum();
    let r_sup = super::field::sup_norm(reference);
    if rr == 0.0 || r_sup == 0.0 || !rr.is_finite() {
        return Err(Error::DegenerateReference);
    }
    let rf: Complex64 = reference.iter().zip(target).map(|(r, f)| r.conj() * f).sum();
    let scale = rf / rr;
    let residual_sup = reference
        .iter()
        .zip(target)
        .map(|(r, f)| (f - scale * r).norm())
        .fold(0.0, f64::max)
        / r_sup;
    let imag_ratio = if scale.norm() == 0.0 { 0.0 } else { scale.im.abs() / scale.norm() };
    Ok(ScaleFit { scale, residual_sup, imag_ratio })
}

/// Fits `target ~ c reference`; the two fields must share a grid.
pub fn fit_scale(reference: &Field, target: &Field) -> Result<ScaleFit> {
    if reference.grid() != target.grid() {
        return Err(Error::GridMismatch("fields live on different grids".into()));
    }
    fit_scale_values(reference.values(), target.values())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_multiple_recovers_scale() {
        let r = vec![c(1.0, 0.0), c(-2.0, 0.5), c(0.25, 3.0)];
        let f: Vec<_> = r.iter().map(|v| v * -2.5).collect();
        let fit = fit_scale_values(&r, &f).unwrap();
        assert!((fit.scale - c(-2.5, 0.0)).norm() < 1e-15);
        assert!(fit.residual_sup < 1e-15);
        assert_eq!(fit.require_real(1e-8).unwrap(), fit.scale.re);
    }

    #[test]
    fn zero_reference_is_degenerate() {
        let r = vec![c(0.0, 0.0); 3];
        assert_eq!(fit_scale_values(&r, &r), Err(Error::DegenerateReference));
    }

    #[test]
    fn imaginary_scale_is_flagged() {
        let r = vec![c(1.0, 0.0), c(2.0, 0.0)];
        let f: Vec<_> = r.iter().map(|v| v * c(0.0, 1.0)).collect();
        let fit = fit_scale_values(&r, &f).unwrap();
        assert!(matches!(fit.require_real(1e-8), Err(Error::NotReal { .. })));
    }

    #[test]
    fn orthogonal_target_leaves_full_residual() {
        let r = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let f = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let fit = fit_scale_values(&r, &f).unwrap();
        assert_eq!(fit.scale, c(0.0, 0.0));
        assert!((fit.residual_sup - 1.0).abs() < 1e-15);
    }
}

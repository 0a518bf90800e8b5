//! Complex log-gamma.

use num_complex::Complex64;

use crate::error::{Error, Result};

const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const SHIFT_TO: f64 = 10.0;

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// Non-positive integer at which `Gamma` has a pole, if `z` is one.
pub fn pole_index(z: Complex64) -> Option<i64> {
    (z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0).then(|| z.re as i64)
}

/// Principal log-gamma, analytic off the negative real axis (matches `loggamma` in
/// common libraries: the imaginary part is continuous in `z`, not reduced mod `2 pi`).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if let Some(n) = pole_index(z) {
        return Err(Error::Pole(n));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite argument {z}")));
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TO {
        acc += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - acc)
}

/// Log-gamma correct modulo `2 pi i`; cheaper for large negative shifts because the
/// recurrence factors are multiplied before taking a single logarithm per block.
pub(crate) fn log_gamma_mod(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    let mut count = 0;
    while w.re < SHIFT_TO {
        prod *= w;
        w += 1.0;
        count += 1;
        if count == 16 {
            acc += prod.ln();
            prod = Complex64::new(1.0, 0.0);
            count = 0;
        }
    }
    if count > 0 {
        acc += prod.ln();
    }
    stirling(w) - acc
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

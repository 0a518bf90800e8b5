//! Pure-state test by the rank of the position kernel `K(a, b) = psi(a) psi*(b)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::transform::conjugate_axis;
use crate::phase_space::{kernel_to_matrix, partial_ft_p, Field, Interpolation, PhaseSpaceGrid, Window};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityReport {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `s2 / s1`.
    pub purity_metric: f64,
    pub window: Window,
    /// Points of the `a` lattice.
    pub lattice: Vec<f64>,
}

/// Grid whose kernel lattice step divides the x step `q` times: `n_p dp dx = q pi`.
///
/// On such grids the `a` lattice (spacing `2 dx`) lands on kernel nodes, so no
/// interpolation enters the purity check.
pub fn aligned_grid(x_min: f64, x_max: f64, n_x: usize, n_p: usize, q: usize) -> Result<PhaseSpaceGrid> {
    if n_x < 2 || n_p < 2 || q == 0 {
        return Err(Error::UnsupportedGrid("aligned grids need n_x, n_p >= 2 and q >= 1".into()));
    }
    let dx = (x_max - x_min) / (n_x - 1) as f64;
    let dp = q as f64 * std::f64::consts::PI / (n_p as f64 * dx);
    let p_min = -((n_p / 2) as f64) * dp;
    crate::phase_space::make_grid(x_min, x_max, n_x, p_min, p_min + (n_p - 1) as f64 * dp, n_p)
}

/// Singular values of `K(a_i, a_j)` over the `a` lattice `x_0 + 2 j dx` inside the window's x-range.
pub fn purity_check(rho: &Field, window: Window) -> Result<PurityReport> {
    let grid = rho.grid();
    if window.x_min < grid.x.min - 1e-12 || window.x_max > grid.x.max + 1e-12 {
        return Err(Error::Window(format!(
            "window x [{}, {}] leaves the grid [{}, {}]",
            window.x_min, window.x_max, grid.x.min, grid.x.max
        )));
    }
    let kernel = partial_ft_p(rho);
    let start = grid.x.position(window.x_min).ceil().max(0.0) as usize;
    let y = conjugate_axis(&grid.p);
    // the most negative kernel row has no conjugate partner; stay strictly inside it
    let y_reach = (y.n / 2) as f64 * y.step - 1e-9 * y.step;
    let mut lattice = Vec::new();
    let mut j = start;
    while j < grid.x.n {
        let a = grid.x.value(j);
        if a > window.x_max + 1e-12 {
            break;
        }
        if let Some(&a0) = lattice.first() {
            if 0.5 * (a - a0) > y_reach {
                break;
            }
        }
        lattice.push(a);
        j += 2;
    }
    if lattice.len() < 2 {
        return Err(Error::Window("window holds fewer than two lattice points".into()));
    }
    let m = kernel_to_matrix(&kernel, &lattice, Interpolation::Bicubic)?;
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let metric = if s[0] > 0.0 { (s[1] / s[0]).clamp(0.0, 1.0) } else { 0.0 };
    Ok(PurityReport { singular_values: s, purity_metric: metric, window, lattice })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceScan {
    pub magnitudes: Vec<f64>,
    pub metrics: Vec<f64>,
    /// Magnitude with the smallest metric.
    pub best: f64,
    /// `sqrt(a_plus a_minus)`.
    pub expected: f64,
}

/// Purity of `e^{-x^2/L^2} [a+ d(p-k) + a- d(p+k) + 2|b| d(p) cos(2kx + phi)]` over `|b|`,
/// with `d` the Gaussian of width `1/(sqrt(2) L)`.
pub fn interference_scan(
    a_plus: f64,
    a_minus: f64,
    phi: f64,
    k: f64,
    envelope: f64,
    grid: PhaseSpaceGrid,
    window: Window,
    magnitudes: &[f64],
) -> Result<InterferenceScan> {
    use rayon::prelude::*;
    let sigma = 1.0 / (std::f64::consts::SQRT_2 * envelope);
    let metrics = magnitudes
        .par_iter()
        .map(|&b| {
            let rho = Field::from_real_fn(grid, |x, p| {
                let d = |u: f64| crate::states::delta_sigma(u, sigma);
                (-(x * x) / (envelope * envelope)).exp()
                    * (a_plus * d(p - k) + a_minus * d(p + k) + 2.0 * b * d(p) * (2.0 * k * x + phi).cos())
            })?;
            Ok(purity_check(&rho, window)?.purity_metric)
        })
        .collect::<Result<Vec<f64>>>()?;
    let best = magnitudes
        .iter()
        .zip(&metrics)
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|t| *t.0)
        .ok_or_else(|| Error::Config("empty magnitude scan".into()))?;
    Ok(InterferenceScan { magnitudes: magnitudes.to_vec(), metrics, best, expected: (a_plus * a_minus).sqrt() })
}

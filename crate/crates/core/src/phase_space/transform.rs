//! Partial Fourier transforms between the Wigner representation `rho(x, p)` and
//! the cross-spectral kernel `W(x, y) = psi(x + y) psi*(x - y)`.
//!
//! Conventions (see `docs/conventions.md`):
//!
//! ```text
//! W(x, y)   = ∫ rho(x, p) exp(+2ipy) dp
//! rho(x, p) = (1/pi) ∫ W(x, y) exp(-2ipy) dy
//! ```
//!
//! On a lattice with `N` momentum samples and spacing `dp`, the kernel lives on
//! `y_m = m * pi / (N dp)` for `m = -N/2 .. N/2 - 1` and the pair of discrete
//! transforms is an exact inverse pair.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::field::{Field, FieldKind};
use super::grid::{Axis, PhaseSpaceGrid};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Symmetric kernel lattice `y_m = m * step`, `m = -n/2 .. n/2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelAxis {
    pub step: f64,
    pub n: usize,
}

impl KernelAxis {
    pub fn offset(&self) -> i64 {
        (self.n / 2) as i64
    }

    pub fn value(&self, i: usize) -> f64 {
        (i as i64 - self.offset()) as f64 * self.step
    }

    /// Storage index of the lattice point `y_m`.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let i = m + self.offset();
        (0..self.n as i64).contains(&i).then_some(i as usize)
    }

    pub fn min(&self) -> f64 {
        self.value(0)
    }

    pub fn max(&self) -> f64 {
        self.value(self.n - 1)
    }
}

/// Samples of `W(x, y)`, row-major over x then y.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelField {
    pub x: Axis,
    pub y: KernelAxis,
    /// Momentum axis of the Wigner function this kernel was taken from.
    pub p: Axis,
    pub values: Vec<Complex64>,
}

impl KernelField {
    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[ix * self.y.n + iy]
    }

    /// Builds a kernel directly from `W(x, y)` on the lattice conjugate to `p`.
    pub fn from_fn<F>(x: Axis, p: Axis, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let y = conjugate_axis(&p);
        let values = (0..x.n)
            .into_par_iter()
            .flat_map_iter(|ix| {
                let xv = x.value(ix);
                let f = &f;
                (0..y.n).map(move |iy| f(xv, y.value(iy)))
            })
            .collect();
        Self { x, y, p, values }
    }

    /// Largest `|W(x, -y) - conj W(x, y)|` relative to `max |W|` over paired lattice points.
    pub fn hermiticity_defect(&self) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        let half = self.y.offset();
        let mut worst: f64 = 0.0;
        for ix in 0..self.x.n {
            for m in 1..half {
                let a = self.get(ix, self.y.index_of(m).unwrap());
                let b = self.get(ix, self.y.index_of(-m).unwrap());
                worst = worst.max((b - a.conj()).norm());
            }
        }
        worst / scale
    }
}

/// Kernel lattice conjugate to a momentum axis.
pub fn conjugate_axis(p: &Axis) -> KernelAxis {
    KernelAxis { step: PI / (p.n as f64 * p.step()), n: p.n }
}

/// `W(x, y_m) = dp * sum_j rho(x, p_j) exp(2 i p_j y_m)`.
pub fn partial_ft_p(rho: &Field) -> KernelField {
    let grid = *rho.grid();
    let n = grid.p.n;
    let y = conjugate_axis(&grid.p);
    let dp = grid.dp();
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(n);
    let phases: Vec<Complex64> =
        (0..n).map(|i| Complex64::from_polar(dp, 2.0 * grid.p.min * y.value(i))).collect();
    let values = (0..grid.x.n)
        .into_par_iter()
        .flat_map_iter(|ix| {
            let mut buf = rho.row(ix).to_vec();
            fft.process(&mut buf);
            let mut out = vec![ZERO; n];
            for (i, o) in out.iter_mut().enumerate() {
                let m = i as i64 - y.offset();
                *o = buf[m.rem_euclid(n as i64) as usize] * phases[i];
            }
            out
        })
        .collect();
    KernelField { x: grid.x, y, p: grid.p, values }
}

/// Exact inverse of [`partial_ft_p`].
pub fn inverse_partial_ft_p(kernel: &KernelField, kind: FieldKind) -> Result<Field> {
    let n = kernel.y.n;
    if kernel.p.n != n {
        return Err(Error::UnsupportedGrid(format!(
            "kernel has {n} y samples but momentum axis has {}",
            kernel.p.n
        )));
    }
    let grid = PhaseSpaceGrid::new(kernel.x, kernel.p);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let norm = 1.0 / (n as f64 * kernel.p.step());
    let phases: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(norm, -2.0 * kernel.p.min * kernel.y.value(i)))
        .collect();
    let values: Vec<Complex64> = (0..kernel.x.n)
        .into_par_iter()
        .flat_map_iter(|ix| {
            let mut buf = vec![ZERO; n];
            for i in 0..n {
                let m = i as i64 - kernel.y.offset();
                buf[m.rem_euclid(n as i64) as usize] = kernel.get(ix, i) * phases[i];
            }
            fft.process(&mut buf);
            buf
        })
        .collect();
    Field::new(grid, values, kind)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    Linear,
    #[default]
    Bicubic,
}

fn cubic_weights(t: f64) -> [f64; 4] {
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

/// Stencil start and weights for fractional position `u` on `n` nodes.
fn stencil(u: f64, n: usize, interp: Interpolation) -> Option<(usize, Vec<f64>)> {
    const SLACK: f64 = 1e-9;
    if !(u >= -SLACK && u <= (n - 1) as f64 + SLACK) {
        return None;
    }
    match interp {
        Interpolation::Linear => {
            let base = (u.floor().max(0.0) as usize).min(n - 2);
            let t = u - base as f64;
            Some((base, vec![1.0 - t, t]))
        }
        Interpolation::Bicubic => {
            if n < 4 {
                return None;
            }
            let base = (u.floor() as i64).clamp(1, n as i64 - 3) as usize;
            let t = u - base as f64;
            Some((base - 1, cubic_weights(t).to_vec()))
        }
    }
}

/// Interpolates `W((a+b)/2, (a-b)/2)` onto the square lattice `a_i`, giving `K(a_i, a_j)`.
pub fn kernel_to_matrix(
    kernel: &KernelField,
    a: &[f64],
    interp: Interpolation,
) -> Result<DMatrix<Complex64>> {
    let n = a.len();
    let y_pos = |y: f64| y / kernel.y.step + kernel.y.offset() as f64;
    let mut m = DMatrix::from_element(n, n, ZERO);
    for i in 0..n {
        for j in 0..n {
            let x = 0.5 * (a[i] + a[j]);
            let y = 0.5 * (a[i] - a[j]);
            let (bx, wx) = stencil(kernel.x.position(x), kernel.x.n, interp).ok_or_else(|| {
                Error::Window(format!("x = {x} outside kernel x-range [{}, {}]", kernel.x.min, kernel.x.max))
            })?;
            let (by, wy) = stencil(y_pos(y), kernel.y.n, interp).ok_or_else(|| {
                Error::Window(format!(
                    "y = {y} outside kernel y-range [{}, {}]",
                    kernel.y.min(),
                    kernel.y.max()
                ))
            })?;
            let mut acc = ZERO;
            for (di, &cx) in wx.iter().enumerate() {
                if cx == 0.0 {
                    continue;
                }
                for (dj, &cy) in wy.iter().enumerate() {
                    if cy == 0.0 {
                        continue;
                    }
                    acc += kernel.get(bx + di, by + dj) * (cx * cy);
                }
            }
            m[(i, j)] = acc;
        }
    }
    Ok(m)
}

/// Angular frequencies of an FFT over an axis treated as periodic with period `n * step`.
pub fn fft_frequencies(axis: &Axis) -> Vec<f64> {
    let n = axis.n;
    let base = 2.0 * PI / axis.period();
    (0..n)
        .map(|i| {
            let m = if i < n.div_ceil(2) { i as i64 } else { i as i64 - n as i64 };
            m as f64 * base
        })
        .collect()
}

/// Spectral x-derivatives `d^m rho / dx^m` for each requested order, periodic in x.
pub fn x_derivatives(rho: &Field, orders: &[u32]) -> Vec<Field> {
    let grid = *rho.grid();
    let (nx, np) = (grid.x.n, grid.p.n);
    let freqs = fft_frequencies(&grid.x);
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(nx);
    let inv = planner.plan_fft_inverse(nx);
    // columns[ip][order_index] -> column of length nx
    let columns: Vec<Vec<Vec<Complex64>>> = (0..np)
        .into_par_iter()
        .map(|ip| {
            let mut col: Vec<Complex64> = (0..nx).map(|ix| rho.get(ix, ip)).collect();
            fwd.process(&mut col);
            orders
                .iter()
                .map(|&order| {
                    let mut spec: Vec<Complex64> = col
                        .iter()
                        .zip(&freqs)
                        .enumerate()
                        .map(|(i, (&c, &w))| {
                            if order % 2 == 1 && nx % 2 == 0 && i == nx / 2 {
                                ZERO
                            } else {
                                c * Complex64::new(0.0, w).powu(order)
                            }
                        })
                        .collect();
                    inv.process(&mut spec);
                    spec.iter().map(|v| v / nx as f64).collect()
                })
                .collect()
        })
        .collect();
    orders
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let mut values = vec![ZERO; grid.len()];
            for (ip, per_order) in columns.iter().enumerate() {
                for (ix, v) in per_order[k].iter().enumerate() {
                    values[grid.index(ix, ip)] = *v;
                }
            }
            Field::new(grid, values, FieldKind::Complex).expect("shape preserved")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::grid::make_grid;

    fn gaussian_wigner(x: f64, p: f64) -> f64 {
        (-(x * x) - p * p).exp() / PI
    }

    #[test]
    fn round_trip_is_identity() {
        let g = make_grid(-3.0, 2.0, 17, -6.0, 6.0, 64).unwrap();
        let rho = Field::from_fn(g, FieldKind::Complex, |x, p| {
            Complex64::new((x * p).sin() + gaussian_wigner(x, p), (x - p).cos())
        })
        .unwrap();
        let back = inverse_partial_ft_p(&partial_ft_p(&rho), FieldKind::Complex).unwrap();
        let scale = rho.sup_norm();
        for (a, b) in rho.values().iter().zip(back.values()) {
            assert!((a - b).norm() / scale < 1e-12);
        }
    }

    #[test]
    fn narrow_gaussian_in_p_gives_flat_kernel() {
        let sigma = 0.05;
        let g = make_grid(-1.0, 1.0, 5, -6.0, 6.0, 512).unwrap();
        let rho = Field::from_real_fn(g, |_, p| {
            (-(p * p) / (2.0 * sigma * sigma)).exp() / ((2.0 * PI).sqrt() * sigma)
        })
        .unwrap();
        let k = partial_ft_p(&rho);
        // W(y) = exp(-2 sigma^2 y^2) ~ 1 for |y| <= 1
        for iy in 0..k.y.n {
            let y = k.y.value(iy);
            if y.abs() <= 1.0 {
                assert!((k.get(2, iy) - Complex64::new(1.0, 0.0)).norm() < 6e-3);
            }
        }
    }

    #[test]
    fn gaussian_state_kernel_factorises() {
        let g = make_grid(-2.0, 2.0, 9, -6.0, 6.0, 256).unwrap();
        let rho = Field::from_real_fn(g, gaussian_wigner).unwrap();
        let k = partial_ft_p(&rho);
        let psi = |x: f64| PI.powf(-0.25) * (-x * x / 2.0).exp();
        let mut worst: f64 = 0.0;
        for ix in 0..k.x.n {
            let x = k.x.value(ix);
            for iy in 0..k.y.n {
                let y = k.y.value(iy);
                worst = worst.max((k.get(ix, iy).re - psi(x + y) * psi(x - y)).abs());
                worst = worst.max(k.get(ix, iy).im.abs());
            }
        }
        assert!(worst < 1e-6, "worst {worst}");
        assert!(k.hermiticity_defect() < 1e-12);
    }

    fn aligned_axes() -> (Axis, Axis) {
        // dx = 0.05 and dy = pi / (n_p dp) = 0.05
        let x = Axis::new(-4.0, 4.0, 161).unwrap();
        let half = 127.0 * PI / (0.1 * 128.0);
        (x, Axis::new(-half, half, 128).unwrap())
    }

    fn psi(x: f64) -> Complex64 {
        Complex64::new((-x * x / 2.0).exp(), 0.3 * x * (-x * x / 2.0).exp())
    }

    #[test]
    fn kernel_matrix_of_product_is_outer_product() {
        let (x, p) = aligned_axes();
        let k = KernelField::from_fn(x, p, |x, y| psi(x + y) * psi(x - y).conj());
        assert!((k.y.step - 0.05).abs() < 1e-14);
        let a: Vec<f64> = (0..21).map(|i| -2.0 + 0.1 * i as f64).collect();
        for interp in [Interpolation::Linear, Interpolation::Bicubic] {
            let m = kernel_to_matrix(&k, &a, interp).unwrap();
            for i in 0..a.len() {
                for j in 0..a.len() {
                    let expect = psi(a[i]) * psi(a[j]).conj();
                    assert!((m[(i, j)] - expect).norm() < 1e-12, "{i} {j}");
                }
            }
        }
    }

    #[test]
    fn bicubic_off_node_accuracy() {
        let (x, p) = aligned_axes();
        let k = KernelField::from_fn(x, p, |x, y| psi(x + y) * psi(x - y).conj());
        let a: Vec<f64> = (0..15).map(|i| -1.37 + 0.173 * i as f64).collect();
        let m = kernel_to_matrix(&k, &a, Interpolation::Bicubic).unwrap();
        for i in 0..a.len() {
            for j in 0..a.len() {
                let expect = psi(a[i]) * psi(a[j]).conj();
                assert!((m[(i, j)] - expect).norm() < 1e-5, "{i} {j}");
            }
        }
    }

    #[test]
    fn zero_kernel_gives_zero_matrix() {
        let x = Axis::new(-1.0, 1.0, 11).unwrap();
        let p = Axis::new(-4.0, 4.0, 32).unwrap();
        let k = KernelField::from_fn(x, p, |_, _| ZERO);
        let m = kernel_to_matrix(&k, &[-0.5, 0.0, 0.5], Interpolation::Bicubic).unwrap();
        assert!(m.iter().all(|v| *v == ZERO));
    }

    #[test]
    fn matrix_outside_kernel_window_is_an_error() {
        let x = Axis::new(-1.0, 1.0, 11).unwrap();
        let p = Axis::new(-4.0, 4.0, 32).unwrap();
        let k = KernelField::from_fn(x, p, |_, _| ZERO);
        assert!(matches!(
            kernel_to_matrix(&k, &[-3.0, 0.0], Interpolation::Bicubic),
            Err(Error::Window(_))
        ));
    }

    #[test]
    fn spectral_derivative_of_periodic_wave() {
        let n = 64;
        let l = 2.0 * PI;
        let g = make_grid(0.0, l * (n - 1) as f64 / n as f64, n, -1.0, 1.0, 3).unwrap();
        let rho = Field::from_fn(g, FieldKind::Complex, |x, p| Complex64::new((3.0 * x).sin() * (1.0 + p), 0.0)).unwrap();
        let d = x_derivatives(&rho, &[1, 4]);
        for ix in 0..n {
            let x = g.x.value(ix);
            assert!((d[0].get(ix, 2).re - 6.0 * (3.0 * x).cos()).abs() < 1e-10);
            assert!((d[1].get(ix, 2).re - 2.0 * 81.0 * (3.0 * x).sin()).abs() < 1e-8);
        }
    }
}

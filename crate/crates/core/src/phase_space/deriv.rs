//! x-derivatives of sampled fields: spectral for fields that decay at the window
//! edges, eighth-order finite differences otherwise.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{Field, FieldKind};
use super::transform::x_derivatives;

/// Edge-to-maximum ratio below which a field is treated as periodic.
pub const EDGE_DECAY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeScheme {
    Spectral,
    FiniteDifference,
    #[default]
    Auto,
}

/// Finite-difference weights for derivatives of order `0..=m` at `z` from nodes `xs`
/// (Fornberg's recursion). `result[d][j]` multiplies `f(xs[j])` for order `d`.
pub fn fornberg_weights(z: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Stencil half-width giving eighth-order accuracy for the given derivative order.
fn half_width(order: u32) -> usize {
    (8 + order as usize + 1) / 2
}

/// Derivatives along x by finite differences; one-sided stencils near the edges.
pub fn fd_x_derivatives(rho: &Field, orders: &[u32]) -> Vec<Field> {
    let grid = *rho.grid();
    let nx = grid.x.n;
    let dx = grid.dx();
    orders
        .iter()
        .map(|&order| {
            let width = (2 * half_width(order) + 1).min(nx);
            // stencil start and weights for each x-row
            let stencils: Vec<(usize, Vec<f64>)> = (0..nx)
                .map(|ix| {
                    let start = ix.saturating_sub(width / 2).min(nx - width);
                    let xs: Vec<f64> = (start..start + width).map(|j| (j as f64 - ix as f64) * dx).collect();
                    let w = fornberg_weights(0.0, &xs, order as usize);
                    (start, w[order as usize].clone())
                })
                .collect();
            let values: Vec<Complex64> = (0..nx)
                .into_par_iter()
                .flat_map_iter(|ix| {
                    let (start, w) = &stencils[ix];
                    (0..grid.p.n).map(move |ip| {
                        w.iter().enumerate().map(|(j, &c)| rho.get(start + j, ip) * c).sum::<Complex64>()
                    })
                })
                .collect();
            Field::new(grid, values, FieldKind::Complex).expect("shape preserved")
        })
        .collect()
}

/// Fraction of the field's maximum found on the first and last x-rows.
pub fn x_edge_ratio(rho: &Field) -> f64 {
    let grid = rho.grid();
    let max = rho.sup_norm();
    if max == 0.0 {
        return 0.0;
    }
    let edge = rho
        .row(0)
        .iter()
        .chain(rho.row(grid.x.n - 1))
        .fold(0.0f64, |m, v| m.max(v.norm()));
    edge / max
}

/// Resolves `Auto` and returns the derivatives with the scheme actually used.
pub fn grid_x_derivatives(rho: &Field, orders: &[u32], scheme: DerivativeScheme) -> (Vec<Field>, DerivativeScheme) {
    let used = match scheme {
        DerivativeScheme::Auto if x_edge_ratio(rho) < EDGE_DECAY => DerivativeScheme::Spectral,
        DerivativeScheme::Auto => DerivativeScheme::FiniteDifference,
        s => s,
    };
    let out = match used {
        DerivativeScheme::Spectral => x_derivatives(rho, orders),
        _ => fd_x_derivatives(rho, orders),
    };
    (out, used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::make_grid;

    #[test]
    fn classic_central_weights() {
        let xs = [-1.0, 0.0, 1.0];
        let w = fornberg_weights(0.0, &xs, 2);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
    }

    #[test]
    fn exact_on_polynomials() {
        let xs: Vec<f64> = (0..9).map(|j| j as f64 * 0.3 - 0.7).collect();
        let w = fornberg_weights(0.1, &xs, 4);
        let f = |x: f64| x.powi(6) - 2.0 * x.powi(3);
        let d4: f64 = w[4].iter().zip(&xs).map(|(c, &x)| c * f(x)).sum();
        let want = 360.0 * 0.1f64.powi(2);
        assert!((d4 - want).abs() < 1e-8);
    }

    #[test]
    fn fd_on_non_periodic_field() {
        let g = make_grid(-3.0, 0.0, 121, -1.0, 1.0, 3).unwrap();
        let rho = Field::from_real_fn(g, |x, p| (2.0 * x * (p + 1.5)).sin()).unwrap();
        let (d, used) = grid_x_derivatives(&rho, &[1, 4], DerivativeScheme::Auto);
        assert_eq!(used, DerivativeScheme::FiniteDifference);
        let mut worst: f64 = 0.0;
        for ix in 0..g.x.n {
            for ip in 0..3 {
                let (x, p) = g.point(ix, ip);
                let u = 2.0 * (p + 1.5);
                worst = worst.max((d[0].get(ix, ip).re - u * (u * x).cos()).abs() / u);
                worst = worst.max((d[1].get(ix, ip).re - u.powi(4) * (u * x).sin()).abs() / u.powi(4));
            }
        }
        assert!(worst < 1e-5, "{worst}");
    }

    #[test]
    fn auto_picks_spectral_for_decaying_fields() {
        let g = make_grid(-8.0, 8.0, 128, -1.0, 1.0, 3).unwrap();
        let rho = Field::from_real_fn(g, |x, _| (-x * x).exp()).unwrap();
        assert_eq!(grid_x_derivatives(&rho, &[2], DerivativeScheme::Auto).1, DerivativeScheme::Spectral);
    }
}

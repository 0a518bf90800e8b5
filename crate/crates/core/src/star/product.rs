//! Grid Moyal product.
//!
//! Writing `f(x, p) = Σ_a e^{iax} f_a(p)` (discrete Fourier series in x, the window
//! treated as one period), the product is
//!
//! ```text
//! (f * g)(x, p) = Σ_{a,c} e^{i(a+c)x} f_a(p + c/2) g_c(p - a/2)
//! ```
//!
//! which is the plane-wave rule `e^{i(ax+bp)} * g = e^{i(ax+bp)} g(x + b/2, p - a/2)`
//! summed over the spectrum of `f`. Momentum translations are applied spectrally,
//! so the result is exact for trigonometric polynomials that fit the grid.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::phase_space::deriv::EDGE_DECAY;
use crate::phase_space::transform::fft_frequencies;
use crate::phase_space::{Field, FieldKind, PhaseSpaceGrid};
use crate::states::AnalyticOperand;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// x-modes weaker than this fraction of the strongest are dropped.
const MODE_CUTOFF: f64 = 1e-14;
const CHUNKS: usize = 16;

/// Operand of the residual checks: sampled data, or an analytic function sampled on a grid.
pub enum StarOperand<'a> {
    Grid(&'a Field),
    Analytic { op: &'a dyn AnalyticOperand, grid: PhaseSpaceGrid },
}

impl StarOperand<'_> {
    pub fn grid(&self) -> PhaseSpaceGrid {
        match self {
            StarOperand::Grid(f) => *f.grid(),
            StarOperand::Analytic { grid, .. } => *grid,
        }
    }
}

/// Largest value on the four window edges relative to the maximum.
pub fn edge_ratio(f: &Field) -> f64 {
    f.edge_ratio()
}

pub fn edge_warning(f: &Field, name: &str) -> Option<String> {
    let r = f.edge_ratio();
    (r >= EDGE_DECAY).then(|| format!("{name} reaches {r:.3e} of its maximum on the window edge"))
}

struct Spectra {
    /// Per x-mode, samples over p.
    modes: Vec<Vec<Complex64>>,
    active: Vec<usize>,
}

fn x_spectra(f: &Field, fft: &Arc<dyn Fft<f64>>) -> Spectra {
    let grid = f.grid();
    let (nx, np) = (grid.x.n, grid.p.n);
    let cols: Vec<Vec<Complex64>> = (0..np)
        .into_par_iter()
        .map(|ip| {
            let mut col: Vec<Complex64> = (0..nx).map(|ix| f.get(ix, ip)).collect();
            fft.process(&mut col);
            col.iter().map(|v| v / nx as f64).collect()
        })
        .collect();
    let mut modes = vec![vec![ZERO; np]; nx];
    for (ip, col) in cols.iter().enumerate() {
        for (m, v) in col.iter().enumerate() {
            modes[m][ip] = *v;
        }
    }
    let peak: Vec<f64> = modes.iter().map(|row| row.iter().fold(0.0f64, |m, v| m.max(v.norm()))).collect();
    let top = peak.iter().copied().fold(0.0, f64::max);
    let active = (0..nx).filter(|&m| top > 0.0 && peak[m] > MODE_CUTOFF * top).collect();
    Spectra { modes, active }
}

struct Shifter {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    omega: Vec<f64>,
}

impl Shifter {
    /// `row(p + s)` by spectral translation along the periodic p-axis.
    fn shift(&self, row: &[Complex64], s: f64) -> Vec<Complex64> {
        if s == 0.0 {
            return row.to_vec();
        }
        let n = row.len();
        let mut buf = row.to_vec();
        self.fwd.process(&mut buf);
        for (i, v) in buf.iter_mut().enumerate() {
            let phase = self.omega[i] * s;
            *v *= if n % 2 == 0 && i == n / 2 {
                Complex64::new(phase.cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, phase)
            };
        }
        self.inv.process(&mut buf);
        buf.iter().map(|v| v / n as f64).collect()
    }
}

/// Moyal product of two fields on a common grid.
pub fn star(f: &Field, g: &Field) -> Result<Field> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch("star operands live on different grids".into()));
    }
    let grid = *f.grid();
    let (nx, np) = (grid.x.n, grid.p.n);
    let mut planner = FftPlanner::<f64>::new();
    let fx = planner.plan_fft_forward(nx);
    let ix_inv = planner.plan_fft_inverse(nx);
    let shifter = Shifter {
        fwd: planner.plan_fft_forward(np),
        inv: planner.plan_fft_inverse(np),
        omega: fft_frequencies(&grid.p),
    };
    let kx = fft_frequencies(&grid.x);
    let fs = x_spectra(f, &fx);
    let gs = x_spectra(g, &fx);
    if fs.active.is_empty() || gs.active.is_empty() {
        return Ok(Field::zeros(grid, FieldKind::Complex));
    }
    let chunk = gs.active.len().div_ceil(CHUNKS).max(1);
    let partials: Vec<Vec<Vec<Complex64>>> = gs
        .active
        .par_chunks(chunk)
        .map(|cs| {
            let mut acc = vec![vec![ZERO; np]; nx];
            for &c in cs {
                for &a in &fs.active {
                    let fa = shifter.shift(&fs.modes[a], 0.5 * kx[c]);
                    let gc = shifter.shift(&gs.modes[c], -0.5 * kx[a]);
                    let out = &mut acc[(a + c) % nx];
                    for ip in 0..np {
                        out[ip] += fa[ip] * gc[ip];
                    }
                }
            }
            acc
        })
        .collect();
    let mut spec = vec![vec![ZERO; np]; nx];
    for part in partials {
        for (m, row) in part.into_iter().enumerate() {
            for (ip, v) in row.into_iter().enumerate() {
                spec[m][ip] += v;
            }
        }
    }
    let cols: Vec<Vec<Complex64>> = (0..np)
        .into_par_iter()
        .map(|ip| {
            let mut col: Vec<Complex64> = (0..nx).map(|m| spec[m][ip]).collect();
            ix_inv.process(&mut col);
            col
        })
        .collect();
    let mut values = vec![ZERO; grid.len()];
    for (ip, col) in cols.into_iter().enumerate() {
        for (ixx, v) in col.into_iter().enumerate() {
            values[grid.index(ixx, ip)] = v;
        }
    }
    Field::new(grid, values, FieldKind::Complex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::make_grid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn periodic_grid(n: usize, m: usize) -> PhaseSpaceGrid {
        let lx = 2.0 * PI;
        let lp = 2.0 * PI;
        make_grid(0.0, lx * (n - 1) as f64 / n as f64, n, 0.0, lp * (m - 1) as f64 / m as f64, m).unwrap()
    }

    fn plane(grid: PhaseSpaceGrid, a: f64, b: f64, c: Complex64) -> Field {
        Field::from_fn(grid, FieldKind::Complex, move |x, p| c * Complex64::from_polar(1.0, a * x + b * p)).unwrap()
    }

    fn sup_diff(a: &Field, b: &Field) -> f64 {
        a.values().iter().zip(b.values()).fold(0.0f64, |m, (u, v)| m.max((u - v).norm()))
    }

    #[test]
    fn unit_is_neutral() {
        let g = periodic_grid(16, 16);
        let one = Field::from_fn(g, FieldKind::Complex, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let h = Field::from_fn(g, FieldKind::Complex, |x, p| Complex64::new((2.0 * x).sin() * p.cos(), (x + 3.0 * p).cos())).unwrap();
        assert!(sup_diff(&star(&one, &h).unwrap(), &h) < 1e-13);
        assert!(sup_diff(&star(&h, &one).unwrap(), &h) < 1e-13);
    }

    #[test]
    fn plane_wave_rule() {
        let g = periodic_grid(16, 16);
        let (a, b, c, d) = (2.0, 1.0, -3.0, 2.0);
        let f = plane(g, a, b, Complex64::new(1.0, 0.0));
        let h = plane(g, c, d, Complex64::new(1.0, 0.0));
        let got = star(&f, &h).unwrap();
        // e^{i(ax+bp)} * e^{i(cx+dp)} = e^{i((a+c)x + (b+d)p)} e^{i(bc - ad)/2}
        let want = plane(g, a + c, b + d, Complex64::from_polar(1.0, 0.5 * (b * c - a * d)));
        assert!(sup_diff(&got, &want) < 1e-12);
    }

    #[test]
    fn windowed_canonical_commutator() {
        let taper = |u: f64, half: f64| 0.5 * (libm_erf((u + half) / 0.7) - libm_erf((u - half) / 0.7));
        let g = make_grid(-12.0, 12.0, 160, -12.0, 12.0, 160).unwrap();
        let xf = Field::from_real_fn(g, |x, p| x * taper(x, 6.0) * taper(p, 8.0)).unwrap();
        let pf = Field::from_real_fn(g, |x, p| p * taper(p, 6.0) * taper(x, 8.0)).unwrap();
        let xp = star(&xf, &pf).unwrap();
        let px = star(&pf, &xf).unwrap();
        let mut worst: f64 = 0.0;
        for ix in 0..g.x.n {
            for ip in 0..g.p.n {
                let (x, p) = g.point(ix, ip);
                if x.abs() < 2.0 && p.abs() < 2.0 {
                    let c = xp.get(ix, ip) - px.get(ix, ip);
                    worst = worst.max((c - Complex64::new(0.0, 1.0)).norm());
                }
            }
        }
        assert!(worst < 1e-6, "{worst}");
    }

    fn libm_erf(x: f64) -> f64 {
        libm::erf(x)
    }

    #[test]
    fn mismatched_grids() {
        let a = Field::zeros(periodic_grid(8, 8), FieldKind::Complex);
        let b = Field::zeros(periodic_grid(8, 10), FieldKind::Complex);
        assert!(matches!(star(&a, &b), Err(Error::GridMismatch(_))));
    }

    fn trig_poly(grid: PhaseSpaceGrid, coeffs: &[(i32, i32, f64, f64)]) -> Field {
        let coeffs = coeffs.to_vec();
        Field::from_fn(grid, FieldKind::Complex, move |x, p| {
            coeffs
                .iter()
                .map(|&(a, b, re, im)| Complex64::new(re, im) * Complex64::from_polar(1.0, a as f64 * x + b as f64 * p))
                .sum()
        })
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn associative_and_bilinear(
            cf in proptest::collection::vec((-2i32..=2, -2i32..=2, -1.0f64..1.0, -1.0f64..1.0), 1..4),
            cg in proptest::collection::vec((-2i32..=2, -2i32..=2, -1.0f64..1.0, -1.0f64..1.0), 1..4),
            ch in proptest::collection::vec((-2i32..=2, -2i32..=2, -1.0f64..1.0, -1.0f64..1.0), 1..4),
            s in -2.0f64..2.0,
        ) {
            let g = periodic_grid(32, 32);
            let (f, gg, h) = (trig_poly(g, &cf), trig_poly(g, &cg), trig_poly(g, &ch));
            let left = star(&star(&f, &gg).unwrap(), &h).unwrap();
            let right = star(&f, &star(&gg, &h).unwrap()).unwrap();
            prop_assert!(sup_diff(&left, &right) < 1e-6);
            let sum = Field::new(g, gg.values().iter().zip(h.values()).map(|(u, v)| u * s + v).collect(), FieldKind::Complex).unwrap();
            let lin = star(&f, &sum).unwrap();
            let parts = star(&f, &gg).unwrap().scaled(s);
            let fh = star(&f, &h).unwrap();
            let rebuilt = Field::new(g, parts.values().iter().zip(fh.values()).map(|(u, v)| u + v).collect(), FieldKind::Complex).unwrap();
            prop_assert!(sup_diff(&lin, &rebuilt) < 1e-10);
        }
    }
}

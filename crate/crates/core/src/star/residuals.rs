//! Residuals of the free-particle equations on grid or analytic operands.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::product::{edge_warning, star, StarOperand};
use super::report::{ResidualPoint, ResidualReport};
use crate::error::Result;
use crate::phase_space::transform::fft_frequencies;
use crate::phase_space::{grid_x_derivatives, DerivativeScheme, Field, FieldKind, PhaseSpaceGrid, Window};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub const FREE_TOLERANCE: f64 = 1e-6;
pub const FOURTH_ORDER_TOLERANCE: f64 = 1e-8;
pub const DOUBLE_STAR_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub tolerance: f64,
    pub scheme: DerivativeScheme,
    /// Restrict the check to this window (inclusive).
    pub region: Option<Window>,
}

impl CheckOptions {
    pub fn new(tolerance: f64) -> Self {
        Self { tolerance, scheme: DerivativeScheme::Auto, region: None }
    }

    pub fn with_region(mut self, region: Window) -> Self {
        self.region = Some(region);
        self
    }
}

/// Zeroth-order coefficient of the fourth-order equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZerothOrder {
    /// `(p^2 - k^2)^2`.
    #[default]
    Expanded,
    /// `p^4 - 2 k^2 p + k^4`, kept for documentation runs.
    AsPrinted,
}

pub(crate) struct Sampled {
    pub points: Vec<(usize, usize)>,
    /// Per point, one value per requested order.
    pub values: Vec<Vec<Complex64>>,
    pub warnings: Vec<String>,
}

impl Sampled {
    pub fn scale(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v[0].norm()))
    }
}

/// Samples `rho` and its x-derivatives (order 0 must come first) at the grid points kept by `keep`.
pub(crate) fn sample_operand<K>(rho: &StarOperand, orders: &[u32], scheme: DerivativeScheme, keep: K) -> Result<Sampled>
where
    K: Fn(f64, f64) -> bool + Sync,
{
    debug_assert_eq!(orders[0], 0);
    let grid = rho.grid();
    let points: Vec<(usize, usize)> = (0..grid.x.n)
        .flat_map(|ix| (0..grid.p.n).map(move |ip| (ix, ip)))
        .filter(|&(ix, ip)| {
            let (x, p) = grid.point(ix, ip);
            keep(x, p)
        })
        .collect();
    match rho {
        StarOperand::Grid(f) => {
            let mut warnings = Vec::new();
            let (d, used) = grid_x_derivatives(f, &orders[1..], scheme);
            if used == DerivativeScheme::FiniteDifference {
                warnings.push("x-derivatives by finite differences: operand does not decay at the x edges".into());
            }
            let values = points
                .iter()
                .map(|&(ix, ip)| std::iter::once(f.get(ix, ip)).chain(d.iter().map(|g| g.get(ix, ip))).collect())
                .collect();
            Ok(Sampled { points, values, warnings })
        }
        StarOperand::Analytic { op, grid } => {
            let evals: Vec<_> = points
                .par_iter()
                .map(|&(ix, ip)| {
                    let (x, p) = grid.point(ix, ip);
                    op.derivatives(Complex64::new(x, 0.0), Complex64::new(p, 0.0), orders)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut warnings: Vec<String> = evals.iter().filter_map(|e| e.warning.clone()).collect();
            warnings.dedup();
            Ok(Sampled { points, values: evals.into_iter().map(|e| e.values).collect(), warnings })
        }
    }
}

fn in_region(region: Option<Window>, x: f64, p: f64) -> bool {
    region.map_or(true, |w| w.contains(x, p))
}

fn assemble(
    id: &str,
    grid: PhaseSpaceGrid,
    s: &Sampled,
    residuals: Vec<Complex64>,
    tolerance: f64,
) -> Result<ResidualReport> {
    let mut field = vec![ZERO; grid.len()];
    let mut pts = Vec::with_capacity(residuals.len());
    for (&(ix, ip), r) in s.points.iter().zip(&residuals) {
        field[grid.index(ix, ip)] = *r;
        let (x, p) = grid.point(ix, ip);
        pts.push(ResidualPoint::new(x, p, *r));
    }
    Ok(ResidualReport::from_points(id, pts, s.scale(), tolerance)
        .with_field(Field::new(grid, field, FieldKind::Complex)?)
        .with_warnings(s.warnings.clone()))
}

/// Residual of `(p - i d_x/2)^2 rho = k^2 rho`, i.e. `(p^2 - k^2 - i p d_x - d_x^2/4) rho`.
pub fn genvalue_residual_free(rho: &StarOperand, k: f64, opts: &CheckOptions) -> Result<ResidualReport> {
    let grid = rho.grid();
    let s = sample_operand(rho, &[0, 1, 2], opts.scheme, |x, p| in_region(opts.region, x, p))?;
    let res = s
        .points
        .iter()
        .zip(&s.values)
        .map(|(&(ix, ip), v)| {
            let p = grid.p.value(ip);
            let _ = ix;
            (p * p - k * k) * v[0] - I * p * v[1] - 0.25 * v[2]
        })
        .collect();
    assemble("eq4", grid, &s, res, opts.tolerance)
}

/// `max |Im R - (-p d_x rho)| / max |p d_x rho|` for the free residual of a real `rho`.
pub fn genvalue_imaginary_defect(rho: &StarOperand, k: f64, opts: &CheckOptions) -> Result<f64> {
    let report = genvalue_residual_free(rho, k, opts)?;
    let grid = rho.grid();
    let s = sample_operand(rho, &[0, 1], opts.scheme, |x, p| in_region(opts.region, x, p))?;
    let mut defect: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for ((&(_, ip), v), q) in s.points.iter().zip(&s.values).zip(&report.points) {
        let want = -grid.p.value(ip) * v[1].re;
        defect = defect.max((q.im - want).abs());
        scale = scale.max(want.abs());
    }
    Ok(if defect == 0.0 { 0.0 } else { defect / scale.max(f64::MIN_POSITIVE) })
}

pub(crate) fn fourth_order_value(v: &[Complex64], p: f64, e: f64, zeroth: ZerothOrder) -> Complex64 {
    let c0 = match zeroth {
        ZerothOrder::Expanded => (p * p - e).powi(2),
        ZerothOrder::AsPrinted => p.powi(4) - 2.0 * e * p + e * e,
    };
    v[2] / 16.0 + 0.5 * (p * p + e) * v[1] + c0 * v[0]
}

fn fourth_order_with_energy(
    rho: &StarOperand,
    e: f64,
    zeroth: ZerothOrder,
    opts: &CheckOptions,
    keep: &(dyn Fn(f64, f64) -> bool + Sync),
) -> Result<ResidualReport> {
    let grid = rho.grid();
    let s = sample_operand(rho, &[0, 2, 4], opts.scheme, |x, p| x < 0.0 && in_region(opts.region, x, p) && keep(x, p))?;
    let res = s
        .points
        .iter()
        .zip(&s.values)
        .map(|(&(_, ip), v)| fourth_order_value(v, grid.p.value(ip), e, zeroth))
        .collect();
    assemble("eq26", grid, &s, res, opts.tolerance)
}

/// Residual of `d^4 rho/16 + (p^2 + k^2) d^2 rho/2 + (p^2 - k^2)^2 rho` on the points with `x < 0`.
pub fn fourth_order_residual(rho: &StarOperand, k: f64, zeroth: ZerothOrder, opts: &CheckOptions) -> Result<ResidualReport> {
    fourth_order_with_energy(rho, k * k, zeroth, opts, &|_, _| true)
}

/// Smooth plateau: 1 on `[lo + ramp, hi - ramp]`, decaying to about `1e-8` at `lo` and `hi`.
pub fn erf_taper(u: f64, lo: f64, hi: f64, ramp: f64) -> f64 {
    let w = ramp / 8.0;
    0.5 * (libm::erf((u - lo - 0.5 * ramp) / w) - libm::erf((u - hi + 0.5 * ramp) / w))
}

const FLAT: f64 = 1e-13;

fn is_flat(u: f64, lo: f64, hi: f64, ramp: f64) -> bool {
    (1.0 - erf_taper(u, lo, hi, ramp)).abs() < FLAT
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrOptions {
    /// Ramp length of the x cutoff on `rho`, as a fraction of the x extent.
    pub x_ramp_fraction: f64,
    /// Ramp length of the p cutoff on `rho` and on `p^2 - E`, as a fraction of the p extent.
    pub p_ramp_fraction: f64,
    /// x-modes below this fraction of the largest do not count toward the local bandwidth.
    pub spectral_cutoff: f64,
    pub tolerance: f64,
}

impl Default for LrOptions {
    fn default() -> Self {
        Self { x_ramp_fraction: 0.25, p_ramp_fraction: 0.1, spectral_cutoff: 1e-13, tolerance: DOUBLE_STAR_TOLERANCE }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrStarReport {
    /// `(p^2 - E) * rho_w * (p^2 - E)` on the interior.
    pub lr: ResidualReport,
    /// Fourth-order residual of the same windowed field on the same points.
    pub differential: ResidualReport,
    /// `sup |lr - differential| / reference_scale`.
    pub agreement: f64,
    pub interior_points: usize,
}

/// The double star product `(p^2 - E) * rho * (p^2 - E)` computed with [`star`].
///
/// `rho` is multiplied by erf cutoffs in x and p and the operand by a cutoff in p. The
/// interior keeps points where both cutoffs are flat and where `p ± c/2` stays on the
/// flat part of the operand for every x-frequency `c` that `rho` carries in that row.
pub fn lr_star_residual(rho: &Field, e: f64, opts: &LrOptions) -> Result<LrStarReport> {
    let grid = *rho.grid();
    let (xl, xh) = (grid.x.min, grid.x.max);
    let (pl, ph) = (grid.p.min, grid.p.max);
    let rx = opts.x_ramp_fraction * (xh - xl);
    let rp = opts.p_ramp_fraction * (ph - pl);
    let windowed = Field::from_fn(grid, FieldKind::Complex, |x, p| {
        Complex64::new(erf_taper(x, xl, xh, rx) * erf_taper(p, pl, ph, rp), 0.0)
    })?;
    let windowed = Field::new(
        grid,
        windowed.values().iter().zip(rho.values()).map(|(w, v)| w * v).collect(),
        FieldKind::Complex,
    )?;
    let op = Field::from_real_fn(grid, |_, p| erf_taper(p, pl, ph, rp) * (p * p - e))?;
    let mut warnings: Vec<String> = edge_warning(&windowed, "windowed rho").into_iter().collect();

    let lr = star(&star(&op, &windowed)?, &op)?;

    let bandwidth = row_bandwidth(&windowed, opts.spectral_cutoff);
    let interior = |x: f64, p: f64| {
        let ip = grid.p.position(p).round() as usize;
        let half = 0.5 * bandwidth[ip.min(grid.p.n - 1)];
        x < 0.0
            && is_flat(x, xl, xh, rx)
            && is_flat(p + half, pl, ph, rp)
            && is_flat(p - half, pl, ph, rp)
    };
    let differential = fourth_order_with_energy(
        &StarOperand::Grid(&windowed),
        e,
        ZerothOrder::Expanded,
        &CheckOptions { tolerance: opts.tolerance, scheme: DerivativeScheme::Spectral, region: None },
        &interior,
    )?;
    warnings.extend(differential.warnings.iter().cloned());
    let pts: Vec<ResidualPoint> = differential
        .points
        .iter()
        .map(|q| {
            let ix = grid.x.position(q.x).round() as usize;
            let ip = grid.p.position(q.p).round() as usize;
            ResidualPoint::new(q.x, q.p, lr.get(ix, ip))
        })
        .collect();
    if pts.is_empty() {
        warnings.push("empty interior: widen the grid or shrink the cutoff ramps".into());
    }
    let scale = windowed.sup_norm();
    let mut lr_field = vec![ZERO; grid.len()];
    let mut diff: f64 = 0.0;
    for (a, b) in pts.iter().zip(&differential.points) {
        let ix = grid.x.position(a.x).round() as usize;
        let ip = grid.p.position(a.p).round() as usize;
        lr_field[grid.index(ix, ip)] = a.value();
        diff = diff.max((a.value() - b.value()).norm());
    }
    let n = pts.len();
    let mut differential = differential;
    differential.reference_scale = scale;
    differential.verdict = if differential.relative() < opts.tolerance {
        super::report::Verdict::Pass
    } else {
        super::report::Verdict::Fail
    };
    let mut report = ResidualReport::from_points("eq27", pts, scale, opts.tolerance)
        .with_field(Field::new(grid, lr_field, FieldKind::Complex)?)
        .with_warnings(warnings);
    if n == 0 {
        report.verdict = super::report::Verdict::Fail;
    }
    Ok(LrStarReport {
        lr: report,
        differential,
        agreement: if diff == 0.0 { 0.0 } else { diff / scale.max(f64::MIN_POSITIVE) },
        interior_points: n,
    })
}

/// Largest |x-frequency| per p-row whose coefficient exceeds `cutoff` times the global maximum.
fn row_bandwidth(f: &Field, cutoff: f64) -> Vec<f64> {
    use rustfft::FftPlanner;
    let grid = f.grid();
    let (nx, np) = (grid.x.n, grid.p.n);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(nx);
    let kx = fft_frequencies(&grid.x);
    let spectra: Vec<Vec<f64>> = (0..np)
        .into_par_iter()
        .map(|ip| {
            let mut col: Vec<Complex64> = (0..nx).map(|ix| f.get(ix, ip)).collect();
            fft.process(&mut col);
            col.iter().map(|v| v.norm() / nx as f64).collect()
        })
        .collect();
    let top = spectra.iter().flatten().copied().fold(0.0, f64::max);
    spectra
        .iter()
        .map(|row| {
            row.iter()
                .zip(&kx)
                .filter(|(a, _)| **a > cutoff * top)
                .fold(0.0f64, |m, (_, k)| m.max(k.abs()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::make_grid;
    use crate::states::closed::{delta_sigma, rho_bar_closed};
    use crate::states::{ClosedFormOperand, ZeroOperand};

    fn analytic_wall(grid: PhaseSpaceGrid, op: &ClosedFormOperand) -> StarOperand<'_> {
        StarOperand::Analytic { op, grid }
    }

    #[test]
    fn free_equation_fails_on_rho_bar() {
        let k = 1.0;
        let grid = make_grid(-1.0, 0.0, 101, -3.0, 3.0, 121).unwrap();
        let op = ClosedFormOperand::wall(k);
        let r = genvalue_residual_free(&analytic_wall(grid, &op), k, &CheckOptions::new(FREE_TOLERANCE)).unwrap();
        assert!(r.relative() > 0.5, "{}", r.relative());
        assert!(!r.passed());
        // the whole residual collapses to -2k sin(2kx) e^{2ipx}
        for q in &r.points {
            let want = -2.0 * k * (2.0 * k * q.x).sin() * Complex64::from_polar(1.0, 2.0 * q.p * q.x);
            assert!((q.value() - want).norm() < 1e-12, "{q:?}");
        }
        // imaginary part at (-1, 2) is -p d_x rho_bar, by finite differences
        let g1 = make_grid(-1.0, -0.5, 2, 2.0, 3.0, 2).unwrap();
        let r1 = genvalue_residual_free(&analytic_wall(g1, &op), k, &CheckOptions::new(FREE_TOLERANCE)).unwrap();
        let h = 1e-5;
        let (x, p) = (-1.0f64, 2.0f64);
        let dx = (rho_bar_closed(k, x + h, p) - rho_bar_closed(k, x - h, p)) / (2.0 * h);
        assert!((r1.points[0].im + p * dx).abs() < 1e-8, "{} {}", r1.points[0].im, -p * dx);
        assert!(dx.abs() > 0.1);
    }

    #[test]
    fn free_equation_imaginary_part_two_paths() {
        let grid = make_grid(-4.0, -0.1, 40, -3.0, 3.0, 31).unwrap();
        let op = ClosedFormOperand { k: 1.3, phi: 0.4, scale: 2.0 };
        let d = genvalue_imaginary_defect(&analytic_wall(grid, &op), 1.3, &CheckOptions::new(1e-8)).unwrap();
        assert!(d < 1e-8, "{d}");
        let f = Field::from_real_fn(make_grid(-8.0, 8.0, 128, -3.0, 3.0, 16).unwrap(), |x, p| (-(x * x)).exp() * (1.0 + p * p)).unwrap();
        let d = genvalue_imaginary_defect(&StarOperand::Grid(&f), 1.0, &CheckOptions::new(1e-8)).unwrap();
        assert!(d < 1e-8, "{d}");
    }

    #[test]
    fn free_equation_smeared_ridge_improves() {
        let mut last = f64::INFINITY;
        for sigma in [0.2, 0.1, 0.05] {
            let grid = make_grid(-2.0, 2.0, 17, -1.0, 3.0, 801).unwrap();
            let f = Field::from_real_fn(grid, |_, p| delta_sigma(p - 1.0, sigma)).unwrap();
            let r = genvalue_residual_free(&StarOperand::Grid(&f), 1.0, &CheckOptions::new(FREE_TOLERANCE)).unwrap();
            assert!(r.relative() < last, "{sigma}: {}", r.relative());
            last = r.relative();
        }
    }

    #[test]
    fn zero_operand_gives_zero() {
        let grid = make_grid(-2.0, 1.0, 7, -2.0, 2.0, 5).unwrap();
        let z = ZeroOperand;
        let op = StarOperand::Analytic { op: &z, grid };
        let r = genvalue_residual_free(&op, 1.0, &CheckOptions::new(FREE_TOLERANCE)).unwrap();
        assert!(r.passed() && r.sup_norm == 0.0);
        let r = fourth_order_residual(&op, 1.0, ZerothOrder::Expanded, &CheckOptions::new(FOURTH_ORDER_TOLERANCE)).unwrap();
        assert!(r.passed() && r.sup_norm == 0.0);
    }

    #[test]
    fn fourth_order_passes_on_rho_bar() {
        let grid = make_grid(-4.0, -0.1, 79, -3.0, 3.0, 61).unwrap();
        let op = ClosedFormOperand::wall(1.0);
        let r = fourth_order_residual(&analytic_wall(grid, &op), 1.0, ZerothOrder::Expanded, &CheckOptions::new(FOURTH_ORDER_TOLERANCE)).unwrap();
        assert!(r.passed(), "{}", r.relative());
        assert_eq!(r.points.len(), 79 * 61);
        let printed = fourth_order_residual(&analytic_wall(grid, &op), 1.0, ZerothOrder::AsPrinted, &CheckOptions::new(FOURTH_ORDER_TOLERANCE)).unwrap();
        assert!(!printed.passed());
    }

    #[test]
    fn fourth_order_only_on_negative_x() {
        let grid = make_grid(-1.0, 1.0, 21, -1.0, 1.0, 3).unwrap();
        let op = ClosedFormOperand::wall(1.0);
        let r = fourth_order_residual(&analytic_wall(grid, &op), 1.0, ZerothOrder::Expanded, &CheckOptions::new(FOURTH_ORDER_TOLERANCE)).unwrap();
        assert!(r.points.iter().all(|q| q.x < 0.0));
        assert_eq!(r.points.len(), 10 * 3);
    }

    struct Fn3<F: Fn(Complex64, Complex64, u32) -> Complex64 + Sync>(F);
    impl<F: Fn(Complex64, Complex64, u32) -> Complex64 + Sync> crate::states::AnalyticOperand for Fn3<F> {
        fn derivatives(&self, x: Complex64, p: Complex64, orders: &[u32]) -> Result<crate::states::Evaluated> {
            Ok(crate::states::Evaluated::exact(orders.iter().map(|&m| (self.0)(x, p, m)).collect()))
        }
    }

    #[test]
    fn fourth_order_characteristic_roots_and_exponential() {
        let grid = make_grid(-3.0, -0.1, 30, -3.0, 3.0, 25).unwrap();
        let k = 1.0;
        // sin(2x(p - k)): d^m = (2(p-k))^m sin(2x(p-k) + m pi/2)
        let s = Fn3(move |x: Complex64, p: Complex64, m| {
            let l = 2.0 * (p - k);
            l.powu(m) * (l * x + m as f64 * std::f64::consts::FRAC_PI_2).sin()
        });
        let r = fourth_order_residual(&StarOperand::Analytic { op: &s, grid }, k, ZerothOrder::Expanded, &CheckOptions::new(FOURTH_ORDER_TOLERANCE)).unwrap();
        assert!(r.passed(), "{}", r.relative());
        let ex = Fn3(|x: Complex64, _p, _m| x.exp());
        let r = fourth_order_residual(&StarOperand::Analytic { op: &ex, grid }, k, ZerothOrder::Expanded, &CheckOptions::new(FOURTH_ORDER_TOLERANCE)).unwrap();
        for q in &r.points {
            let want = (1.0 / 16.0 + 0.5 * (q.p * q.p + k * k) + (q.p * q.p - k * k).powi(2)) * q.x.exp();
            assert!((q.re - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn fourth_order_annihilates_building_blocks() {
        let grid = make_grid(-4.0, -0.1, 40, -3.1, 3.1, 32).unwrap();
        for k in [0.7, 1.0, 2.5] {
            let blocks: Vec<Box<dyn Fn(Complex64, Complex64, u32) -> Complex64 + Sync>> = vec![
                Box::new(move |x, p, m| {
                    let l = 2.0 * (p + k);
                    l.powu(m) * (l * x + m as f64 * std::f64::consts::FRAC_PI_2).cos()
                }),
                Box::new(move |x, p, m| {
                    let l = 2.0 * (p - k);
                    l.powu(m) * (l * x + m as f64 * std::f64::consts::FRAC_PI_2).sin()
                }),
                Box::new(move |x, p, m| crate::states::closed::rho_bar_phase_derivative(k, 0.0, x, p, m) - {
                    crate::states::closed::t_derivative(x, p + k, m) + crate::states::closed::t_derivative(x, p - k, m)
                }),
            ];
            for b in blocks {
                let op = Fn3(b);
                let r = fourth_order_residual(&StarOperand::Analytic { op: &op, grid }, k, ZerothOrder::Expanded, &CheckOptions::new(FOURTH_ORDER_TOLERANCE)).unwrap();
                assert!(r.passed(), "k={k}: {}", r.relative());
            }
        }
    }

    #[test]
    fn double_star_matches_differential_route() {
        let k = 1.0;
        let grid = make_grid(-10.0, 0.0, 256, -32.0, 32.0, 512).unwrap();
        let rho = Field::from_real_fn(grid, |x, p| rho_bar_closed(k, x, p)).unwrap();
        let r = lr_star_residual(&rho, k * k, &LrOptions::default()).unwrap();
        assert!(r.interior_points > 100, "{}", r.interior_points);
        assert!(r.agreement < 1e-5, "{}", r.agreement);
        assert!(r.lr.passed(), "{}", r.lr.relative());
        let bad = lr_star_residual(&rho, k * k + 1.0, &LrOptions::default()).unwrap();
        assert!(bad.lr.relative() >= 0.1, "{}", bad.lr.relative());
        let zero = Field::zeros(grid, FieldKind::RealExpected);
        let z = lr_star_residual(&zero, 1.0, &LrOptions::default()).unwrap();
        assert_eq!(z.lr.sup_norm, 0.0);
    }

    #[test]
    fn empty_double_star_interior_fails() {
        // ramps cover the whole window, so no point is flat
        let grid = make_grid(-1.0, 0.0, 16, -2.0, 2.0, 16).unwrap();
        let rho = Field::from_real_fn(grid, |x, p| rho_bar_closed(1.0, x, p)).unwrap();
        let opts = LrOptions { x_ramp_fraction: 0.6, ..LrOptions::default() };
        let r = lr_star_residual(&rho, 1.0, &opts).unwrap();
        assert_eq!(r.interior_points, 0);
        assert!(!r.lr.passed());
        assert!(r.lr.warnings.iter().any(|w| w.contains("empty interior")));
    }
}

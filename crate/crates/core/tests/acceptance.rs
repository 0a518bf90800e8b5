//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use starwall::analysis::{
    aligned_grid, convergence_study, dirichlet_vs_wall, interference_scan, purity_check, robin_scan,
    wall_suppression_study, RobinOptions,
};
use starwall::phase_space::{fit_scale, fit_scale_values, make_grid, Field, Window};
use starwall::specfun::{meijer_g04_contour, meijer_g04_series, GParams, MellinBarnesSpec};
use starwall::star::{
    difference_eq_residual, effective_mass_residual, fourth_order_residual, genvalue_residual_free,
    genvalue_residual_liouville, lr_star_residual, sample_rectangle, CheckOptions, DifferenceForm, LrOptions,
    ShiftBranch, StarOperand, ZerothOrder,
};
use starwall::states::{
    rho_bar_closed, rho_free_regularized, wigner_transform_lattice, wigner_transform_numeric, ClosedFormOperand,
    EnvelopeState, FreeAmplitudes, LiouvilleEvaluator, LiouvilleState, RobinState, StateSpec, WallState,
    WignerOptions,
};

const C1_TOL: f64 = 1e-8;
const C1_TIME: Duration = Duration::from_secs(60);
const C2_MIN_RATIO: f64 = 0.5;
const C2_VERDICT_TOL: f64 = 1e-6;
const C3_FOURTH_TOL: f64 = 1e-8;
const C3_TWO_ROUTE_TOL: f64 = 1e-5;
const C4_TOL: f64 = 1e-6;
const C4_CONTRAST: f64 = 1e3;
const C5_SPECFUN_TOL: f64 = 1e-8;
const C5_CROSS_TOL: f64 = 1e-5;
const C5_TIME: Duration = Duration::from_secs(300);
const C7_IDENTITY_TOL: f64 = 1e-10;
const C7_TOL: f64 = 1e-6;
const C8_PURE_TOL: f64 = 1e-8;
const C9_TOL: f64 = 1e-3;
const C10_WALL_TOL: f64 = 1e-10;
const C10_PROFILE_MIN: f64 = 0.1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Check = fn() -> Result<Outcome, String>;

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn consistency_oracle() -> Result<Outcome, String> {
    let t = Instant::now();
    let grid = make_grid(-5.0, -0.1, 50, -5.0, 5.0, 101).map_err(err)?;
    let out = wigner_transform_numeric(&WallState { k: 1.0 }, grid, WignerOptions::with_window(6.0)).map_err(err)?;
    let closed = Field::from_real_fn(grid, |x, p| rho_bar_closed(1.0, x, p)).map_err(err)?;
    let fit = fit_scale(&closed, &out.field).map_err(err)?;
    let dt = t.elapsed();
    Ok(outcome(
        fit.residual_sup < C1_TOL && dt <= C1_TIME,
        format!(
            "sup rel err {:.3e} (< {C1_TOL:.0e}), scale {:.12} (-1/(2 pi) = {:.12}), {:.1} s (<= {} s)",
            fit.residual_sup,
            fit.scale.re,
            -1.0 / (2.0 * PI),
            dt.as_secs_f64(),
            C1_TIME.as_secs()
        ),
    ))
}

fn negative_result() -> Result<Outcome, String> {
    let grid = make_grid(-1.0, 0.0, 101, -3.0, 3.0, 121).map_err(err)?;
    let op = ClosedFormOperand::wall(1.0);
    let r = genvalue_residual_free(&StarOperand::Analytic { op: &op, grid }, 1.0, &CheckOptions::new(C2_VERDICT_TOL))
        .map_err(err)?;
    Ok(outcome(
        r.relative() > C2_MIN_RATIO && !r.passed(),
        format!("sup residual / scale = {:.3} (> {C2_MIN_RATIO}), verdict {:?} on x in [-1, 0]", r.relative(), r.verdict),
    ))
}

fn positive_result() -> Result<Outcome, String> {
    let grid = make_grid(-4.0, -0.1, 157, -3.0, 3.0, 121).map_err(err)?;
    let op = ClosedFormOperand::wall(1.0);
    let fourth = fourth_order_residual(
        &StarOperand::Analytic { op: &op, grid },
        1.0,
        ZerothOrder::Expanded,
        &CheckOptions::new(C3_FOURTH_TOL),
    )
    .map_err(err)?;
    let g = make_grid(-10.0, 0.0, 256, -32.0, 32.0, 512).map_err(err)?;
    let rho = Field::from_real_fn(g, |x, p| rho_bar_closed(1.0, x, p)).map_err(err)?;
    let lr = lr_star_residual(&rho, 1.0, &LrOptions { tolerance: C3_TWO_ROUTE_TOL, ..LrOptions::default() }).map_err(err)?;
    Ok(outcome(
        fourth.relative() < C3_FOURTH_TOL && lr.agreement < C3_TWO_ROUTE_TOL && lr.interior_points > 0,
        format!(
            "fourth-order {:.3e} (< {C3_FOURTH_TOL:.0e}); double star vs differential {:.3e} (< {C3_TWO_ROUTE_TOL:.0e}) on {} interior points",
            fourth.relative(),
            lr.agreement,
            lr.interior_points
        ),
    ))
}

fn liouville_identities() -> Result<Outcome, String> {
    let pts = sample_rectangle((-2.0, 0.5), (-2.0, 2.0), 5);
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [1.0, 2.0, 4.0] {
        let ev = LiouvilleEvaluator::auto(alpha, 1.0).map_err(err)?;
        let pair = genvalue_residual_liouville(&ev, alpha, 1.0, &pts, C4_TOL).map_err(err)?;
        let diff = difference_eq_residual(&ev, alpha, 1.0, &pts, DifferenceForm::Derived, C4_TOL).map_err(err)?;
        let printed = difference_eq_residual(&ev, alpha, 1.0, &pts, DifferenceForm::AsPrinted, C4_TOL).map_err(err)?;
        let contrast = printed.sup_norm / diff.sup_norm.max(f64::MIN_POSITIVE);
        pass &= pair.relative() < C4_TOL && diff.relative() < C4_TOL && contrast >= C4_CONTRAST;
        parts.push(format!(
            "alpha {alpha}: pair {:.2e}, difference {:.2e}, uncorrected/corrected {:.1e}",
            pair.relative(),
            diff.relative(),
            contrast
        ));
    }
    Ok(outcome(pass, format!("{} (tol {C4_TOL:.0e}, contrast >= {C4_CONTRAST:.0e})", parts.join("; "))))
}

fn cross_method() -> Result<Outcome, String> {
    let t = Instant::now();
    let (alpha, k) = (1.0, 1.0);
    let mb = MellinBarnesSpec::default();
    let mut worst: f64 = 0.0;
    for &(x, p) in &sample_rectangle((-3.0, 0.0), (-1.87, 2.13), 5) {
        let w = Complex64::new((4.0 * alpha * x - 4.0 * (2.0 * alpha as f64).ln()).exp(), 0.0);
        let params = GParams::wigner(alpha, k, Complex64::new(p, 0.0));
        let a = meijer_g04_contour(w, &params, &mb).map_err(err)?.value;
        let b = meijer_g04_series(w, &params).map_err(err)?.value;
        worst = worst.max((a - b).norm() / b.norm());
    }
    let pts = sample_rectangle((-3.0, 0.0), (-2.0, 2.0), 5);
    let ev = LiouvilleEvaluator::auto(alpha, k).map_err(err)?;
    let state = LiouvilleState { alpha, k };
    let mut mbv = Vec::new();
    let mut num = Vec::new();
    for &(x, p) in &pts {
        mbv.push(ev.evaluate(Complex64::new(x, 0.0), Complex64::new(p, 0.0)).map_err(err)?.value);
        let g = make_grid(x, x + 1.0, 2, p, p + 1.0, 2).map_err(err)?;
        let out = wigner_transform_numeric(&state, g, WignerOptions::with_window(40.0)).map_err(err)?;
        num.push(out.field.get(0, 0));
    }
    let fit = fit_scale_values(&mbv, &num).map_err(err)?;
    let dt = t.elapsed();
    Ok(outcome(
        worst < C5_SPECFUN_TOL && fit.residual_sup < C5_CROSS_TOL && dt <= C5_TIME,
        format!(
            "contour vs series {:.2e} (< {C5_SPECFUN_TOL:.0e}); Mellin-Barnes vs Bessel-K transform {:.2e} (< {C5_CROSS_TOL:.0e}); {:.1} s",
            worst,
            fit.residual_sup,
            dt.as_secs_f64()
        ),
    ))
}

fn limit_claim() -> Result<Outcome, String> {
    let window = Window::new(-3.0, -0.5, -3.0, 3.0).map_err(err)?;
    let grid = make_grid(-3.0, -0.5, 26, -3.0, 3.0, 31).map_err(err)?;
    let conv = convergence_study(&[2.0, 4.0, 8.0, 16.0], 1.0, window, grid, MellinBarnesSpec::default()).map_err(err)?;
    let ps: Vec<f64> = (0..31).map(|i| -3.0 + 0.2 * i as f64).collect();
    let sup = wall_suppression_study(&[2.0, 4.0, 8.0], 1.0, 0.5, &ps, MellinBarnesSpec::default()).map_err(err)?;
    Ok(outcome(
        conv.monotone && sup.decreasing,
        format!(
            "distances {:?} strictly decreasing: {}; r(alpha) {:?} strictly decreasing: {}",
            conv.distances.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>(),
            conv.monotone,
            sup.ratios.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>(),
            sup.decreasing
        ),
    ))
}

fn effective_mass() -> Result<Outcome, String> {
    let pts = sample_rectangle((-2.0, 0.5), (-2.0, 2.0), 5);
    let ev = LiouvilleEvaluator::auto(2.0, 1.0).map_err(err)?;
    let r = effective_mass_residual(&ev, 2.0, 1.0, ShiftBranch::ComplexShift, &pts, C7_TOL).map_err(err)?;
    Ok(outcome(
        r.identity_defect < C7_IDENTITY_TOL && r.residual.relative() < C7_TOL,
        format!(
            "identity defect {:.2e} (< {C7_IDENTITY_TOL:.0e}); complex-shift residual {:.2e} (< {C7_TOL:.0e})",
            r.identity_defect,
            r.residual.relative()
        ),
    ))
}

fn purity() -> Result<Outcome, String> {
    let grid = aligned_grid(-6.0, 1.0, 141, 256, 1).map_err(err)?;
    let window = Window::new(-6.0, 1.0, grid.p.min, grid.p.max).map_err(err)?;
    let one = Complex64::new(1.0, 0.0);
    let states: Vec<(&str, Box<dyn starwall::states::WaveFunction>)> = vec![
        ("wall", Box::new(WallState { k: 1.0 })),
        ("robin L=1", Box::new(RobinState { k: 1.0, l: 1.0 })),
        ("liouville alpha=2", Box::new(LiouvilleState { alpha: 2.0, k: 1.0 })),
        (
            "free envelope",
            Box::new(EnvelopeState { amps: FreeAmplitudes { plus: one, minus: Complex64::new(0.3, 0.4) }, k: 1.0, lambda: 1.5 }),
        ),
    ];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, psi) in &states {
        let rho = wigner_transform_lattice(psi.as_ref(), grid).map_err(err)?;
        let m = purity_check(&rho, window).map_err(err)?.purity_metric;
        worst = worst.max(m);
        parts.push(format!("{name} {m:.1e}"));
    }
    let g2 = aligned_grid(-12.0, 12.0, 241, 256, 1).map_err(err)?;
    let w2 = Window::new(-12.0, 12.0, g2.p.min, g2.p.max).map_err(err)?;
    let mags: Vec<f64> = (0..21).map(|i| 0.2 + 0.05 * i as f64).collect();
    let scan = interference_scan(1.0, 0.49, 0.3, 1.5, 4.0, g2, w2, &mags).map_err(err)?;
    let step = 0.05;
    let scan_ok = (scan.best - scan.expected).abs() <= 0.5 * step;
    Ok(outcome(
        worst < C8_PURE_TOL && scan_ok,
        format!(
            "single states: {} (< {C8_PURE_TOL:.0e}); |b| scan minimum at {:.3}, sqrt(a+ a-) = {:.3} (step {step})",
            parts.join(", "),
            scan.best,
            scan.expected
        ),
    ))
}

fn free_correspondence() -> Result<Outcome, String> {
    let grid = make_grid(-1.0, 1.0, 21, -3.0, 3.0, 61).map_err(err)?;
    let mut errs = Vec::new();
    for lambda in [10.0, 20.0, 40.0] {
        let sigma = 1.0 / (std::f64::consts::SQRT_2 * lambda);
        let spec = StateSpec::free(1.0, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5), sigma);
        let closed = rho_free_regularized(&spec, grid).map_err(err)?;
        let psi = spec.wave_function().map_err(err)?;
        let num = wigner_transform_numeric(psi.as_ref(), grid, WignerOptions::with_window(8.0 * lambda)).map_err(err)?;
        let d = closed.values().iter().zip(num.field.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        errs.push(d / closed.sup_norm());
    }
    let improving = errs.windows(2).all(|w| w[1] < w[0]);
    Ok(outcome(
        errs[2] < C9_TOL && improving,
        format!(
            "sup rel diff at Lambda = 10, 20, 40: {:.2e}, {:.2e}, {:.2e} (last < {C9_TOL:.0e}, decreasing: {improving})",
            errs[0], errs[1], errs[2]
        ),
    ))
}

fn robin_family() -> Result<Outcome, String> {
    let grid = make_grid(-5.0, 0.5, 56, -4.0, 4.0, 81).map_err(err)?;
    let wall = dirichlet_vs_wall(1.0, grid).map_err(err)?;
    let scan = robin_scan(&[-2.0, -0.5, 0.0, 0.5, 1.0, 3.0], 1.0, grid, RobinOptions::default()).map_err(err)?;
    let zero = scan.entries.iter().find(|e| e.l == 0.0).ok_or("missing L = 0")?;
    let one = scan.entries.iter().find(|e| e.l == 1.0).ok_or("missing L = 1")?;
    let bulk = scan.entries.iter().all(|e| e.fourth_order_verdict.passed());
    Ok(outcome(
        wall < C10_WALL_TOL && zero.boundary_ratio < C10_WALL_TOL && one.boundary_ratio > C10_PROFILE_MIN && bulk,
        format!(
            "L=0 vs wall {:.1e} (< {C10_WALL_TOL:.0e}); L=1 boundary profile / scale {:.1e} (needs > {C10_PROFILE_MIN}), \
             boundary slope {:.4} (2/pi sin^2 phi = {:.4}); bulk fourth-order pass for all L: {bulk}",
            wall,
            one.boundary_ratio,
            one.boundary_slope,
            2.0 / PI * one.phi.sin().powi(2)
        ),
    ))
}

fn main() {
    let checks: [(u32, &str, Check); 10] = [
        (1, "closed form vs quadrature", consistency_oracle),
        (2, "free equation fails on the wall state", negative_result),
        (3, "fourth-order equation holds", positive_result),
        (4, "exponential-wall identities", liouville_identities),
        (5, "cross-method special functions", cross_method),
        (6, "steep-wall limit", limit_claim),
        (7, "effective-mass form", effective_mass),
        (8, "purity by kernel rank", purity),
        (9, "free-particle correspondence", free_correspondence),
        (10, "Robin family", robin_family),
    ];
    let mut failed = 0;
    for (n, name, f) in checks {
        let t = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {}: {name}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

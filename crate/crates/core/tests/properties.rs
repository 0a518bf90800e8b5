use num_complex::Complex64;
use proptest::prelude::*;
use starwall::analysis::{aligned_grid, convergence_study, purity_check};
use starwall::phase_space::{make_grid, Field, FieldKind, Window};
use starwall::specfun::MellinBarnesSpec;
use starwall::star::{
    difference_eq_residual, genvalue_residual_liouville, sample_rectangle, star, DifferenceForm, ResidualPoint,
    ResidualReport,
};
use starwall::states::{delta_sigma, rho_bar_closed, LiouvilleEvaluator};

#[test]
fn smeared_rho_bar_peaks_at_plus_minus_k_far_from_wall() {
    let k = 1.3;
    let x = -300.0;
    let width = 0.1;
    let dp = 0.002;
    let ps: Vec<f64> = (0..=1500).map(|i| -3.0 + i as f64 * 0.004).collect();
    let smeared: Vec<f64> = ps
        .iter()
        .map(|&p| {
            (-2500..=2500)
                .map(|j| {
                    let q = j as f64 * dp;
                    delta_sigma(q, width) * rho_bar_closed(k, x, p - q) * dp
                })
                .sum()
        })
        .collect();
    for target in [k, -k] {
        let i = ps
            .iter()
            .enumerate()
            .filter(|(_, p)| (**p - target).abs() < 0.5)
            .max_by(|a, b| smeared[a.0].abs().partial_cmp(&smeared[b.0].abs()).unwrap())
            .unwrap()
            .0;
        assert!((ps[i] - target).abs() <= 0.004 + 1e-12, "peak at {} for {target}", ps[i]);
    }
}

#[test]
fn pair_and_difference_verdicts_agree() {
    let pts = sample_rectangle((-2.0, 0.5), (-2.0, 2.0), 5);
    for (alpha, k) in [(1.0, 1.0), (2.0, 0.7), (3.0, 1.5)] {
        let ev = LiouvilleEvaluator::auto(alpha, k).unwrap();
        let a = genvalue_residual_liouville(&ev, alpha, k, &pts, 1e-6).unwrap();
        let b = difference_eq_residual(&ev, alpha, k, &pts, DifferenceForm::Derived, 1e-6).unwrap();
        assert_eq!(a.verdict, b.verdict, "alpha {alpha}, k {k}");
    }
}

#[test]
fn convergence_json_is_byte_identical() {
    let w = Window::new(-3.0, -0.5, -3.0, 3.0).unwrap();
    let g = make_grid(-3.0, -0.5, 11, -3.0, 3.0, 13).unwrap();
    let run = || serde_json::to_string(&convergence_study(&[2.0, 8.0], 1.0, w, g, MellinBarnesSpec::default()).unwrap()).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn star_with_unit_from_either_side() {
    let g = make_grid(-6.0, 6.0, 64, -6.0, 6.0, 64).unwrap();
    let one = Field::from_real_fn(g, |_, _| 1.0).unwrap();
    let f = Field::from_real_fn(g, |x, p| (-(x * x) - p * p).exp()).unwrap();
    for h in [star(&one, &f).unwrap(), star(&f, &one).unwrap()] {
        let d = h.values().iter().zip(f.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        assert!(d < 1e-13, "{d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verdict_follows_relative_sup(vals in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..20), scale in 0.01f64..10.0, tol in 1e-6f64..1.0) {
        let pts: Vec<ResidualPoint> = vals.iter().enumerate().map(|(i, &(re, im))| ResidualPoint::new(i as f64, 0.0, Complex64::new(re, im))).collect();
        let sup = pts.iter().fold(0.0f64, |m, q| m.max(q.value().norm()));
        let r = ResidualReport::from_points("t", pts, scale, tol);
        prop_assert_eq!(r.sup_norm, sup);
        prop_assert!(r.l2_norm <= r.sup_norm + 1e-15);
        prop_assert_eq!(r.passed(), sup / scale < tol);
    }

    #[test]
    fn purity_metric_is_a_ratio_in_unit_interval(c in 0.1f64..5.0, mix in 0.0f64..1.0) {
        let grid = aligned_grid(-4.0, 4.0, 41, 64, 1).unwrap();
        let a = Field::from_real_fn(grid, |x, p| (-(x * x) - p * p).exp()).unwrap();
        let b = Field::from_real_fn(grid, |x, p| (-((x - 1.0).powi(2)) - (p - 1.0).powi(2)).exp()).unwrap();
        let rho = Field::new(grid, a.values().iter().zip(b.values()).map(|(u, v)| c * ((1.0 - mix) * u + mix * v)).collect(), FieldKind::RealExpected).unwrap();
        let w = Window::new(-4.0, 4.0, -1.0, 1.0).unwrap();
        let r = purity_check(&rho, w).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.purity_metric));
        prop_assert!(r.singular_values.windows(2).all(|s| s[0] >= s[1]));
        let scaled = purity_check(&rho.scaled(3.0), w).unwrap();
        prop_assert!((scaled.purity_metric - r.purity_metric).abs() < 1e-10);
    }
}

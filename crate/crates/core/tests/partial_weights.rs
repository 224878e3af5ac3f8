use std::f64::consts::PI;

use heisenberg_heat::partialweights::*;
use heisenberg_heat::twisted::{weight_lambda_gaussian, TwistedParams};
use heisenberg_heat::Error;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn params(n: usize, t: f64) -> PartialWeightParams {
    PartialWeightParams::new(n, t).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn contour_matches_adaptive_oracle() {
    // 30-digit adaptive quadrature of (1/2π) ∫ e^{2tμ²−2ημ} (μ/(π sinh 2tμ))^n e^{−βμ coth 2tμ} ds, μ = 1 + is/2
    let cases = [
        (1, 0.5, 0.0, 0.0, 0.19838706310696561978),
        (1, 1.0, 0.0, 0.0, 0.081256143480212605054),
        (1, 1.0, 2.0, 0.3, 0.020362356087410914823),
        (2, 0.5, 4.0, -1.0, 0.010195188634256688753),
        (1, 2.0, 0.5, 1.5, 0.0050052064092498711916),
        (2, 1.0, 3.0, -2.5, -0.016877816594316669429),
        (1, 0.25, 1.0, 0.4, 0.05004760203690225664),
    ];
    for (n, t, beta, eta, expected) in cases {
        let v = w_plus_reduced(&params(n, t), beta, eta).unwrap();
        assert!(rel(v.value, expected) < 1e-10, "n={n} t={t} β={beta} η={eta}: {} vs {expected}", v.value);
    }
}

#[test]
fn contour_value_does_not_depend_on_abscissa() {
    for t in [0.5, 1.0] {
        for y in [0.0, 0.4, 0.9] {
            for v in [-0.7, 0.0, 0.5] {
                for eta in [-0.8, 0.0, 1.1] {
                    let values: Vec<f64> = [0.25, 0.5, 1.0]
                        .iter()
                        .map(|&l| w_plus_contour(&params(1, t).with_abscissa(l).unwrap(), &[y], &[v], eta).unwrap().value)
                        .collect();
                    for w in &values[1..] {
                        assert!((w - values[0]).abs() < 1e-6 * (1.0 + values[0].abs()), "{values:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn contour_integral_is_real() {
    for (beta, eta) in [(0.0, 0.0), (1.0, -2.0), (3.0, 0.7), (6.0, -3.0)] {
        let v = w_plus_reduced(&params(1, 1.0), beta, eta).unwrap();
        assert!(v.imag_residual < 1e-8, "β={beta} η={eta}: {}", v.imag_residual);
    }
}

#[test]
fn general_point_ignores_xi_and_uses_polar_shift() {
    let p = params(1, 0.5);
    let z = [C64::new(0.3, 0.4)];
    let w = [C64::new(-0.6, 0.2)];
    let base = w_plus_at(&p, &z, &w, C64::new(0.0, 0.25)).unwrap().value;
    for xi in [-5.0, 1.0, 5.0] {
        let shifted = w_plus_at(&p, &z, &w, C64::new(xi, 0.25)).unwrap().value;
        assert_eq!(shifted, base);
    }
    // η − ½(x·v − u·y) with x = 0.3, y = 0.4, u = −0.6, v = 0.2
    let reduced = w_plus_reduced(&p, 0.2, 0.25 - 0.5 * (0.3 * 0.2 + 0.6 * 0.4)).unwrap().value;
    assert_eq!(reduced, base);
}

#[test]
fn minus_weight_agrees_along_both_paths() {
    let p = params(1, 0.75);
    let samples = [
        (0.0, 0.0, 0.5),
        (0.3, -0.2, -1.0),
        (0.8, 0.1, 0.2),
        (-0.5, 0.5, 2.0),
        (1.2, 0.0, -0.4),
        (0.0, 1.0, 1.5),
        (0.4, 0.4, -2.5),
        (-0.9, -0.3, 0.0),
        (0.2, 1.3, 0.9),
        (1.5, -1.0, -1.2),
    ];
    for (y, v, eta) in samples {
        let direct = w_minus_contour(&p, &[y], &[v], eta).unwrap().value;
        let mirrored = w_plus_contour(&p, &[y], &[v], -eta).unwrap().value;
        assert!((direct - mirrored).abs() < 1e-9 * (1.0 + mirrored.abs()), "{direct} vs {mirrored}");
        let checked = w_minus(&p, &[y], &[v], eta, 1e-8).unwrap();
        assert_eq!(checked, direct);
    }
}

#[test]
fn minus_and_plus_coincide_at_zero_eta() {
    let p = params(1, 1.0);
    for (y, v) in [(0.0, 0.0), (0.7, -0.2), (1.1, 0.9)] {
        let plus = w_plus_contour(&p, &[y], &[v], 0.0).unwrap().value;
        let minus = w_minus(&p, &[y], &[v], 0.0, 1e-8).unwrap();
        assert!((plus - minus).abs() < 1e-10 * (1.0 + plus.abs()));
    }
}

#[test]
fn abscissa_sign_must_match_branch() {
    let p = params(1, 1.0).with_abscissa(-0.5).unwrap();
    assert!(matches!(w_plus_contour(&p, &[0.0], &[0.0], 0.0), Err(Error::InvalidParameter(_))));
    let q = params(1, 1.0).with_abscissa(0.5).unwrap();
    assert!(matches!(w_minus_contour(&q, &[0.0], &[0.0], 0.0), Err(Error::InvalidParameter(_))));
    assert!(params(1, 1.0).with_abscissa(0.0).is_err());
}

#[test]
fn reconstruction_recovers_twisted_weight() {
    for t in [0.5, 1.0] {
        let p = params(1, t).with_tol(1e-10).unwrap();
        for (y, v) in [(0.0, 0.0), (0.5, -0.3)] {
            let beta: f64 = y * y + v * v;
            let table = reconstruct_weight_table(&p, &[beta], &[0.5, 1.0, 2.0]).unwrap();
            for r in &table[0] {
                let target = weight_lambda_gaussian(&TwistedParams::new(1, t, r.lambda).unwrap(), &[y], &[v]).unwrap();
                assert!(rel(r.value, target) < 1e-4, "t={t} λ={}: {} vs {target}", r.lambda, r.value);
            }
        }
    }
}

#[test]
fn reconstruction_at_origin_has_closed_form() {
    // e^{−2tλ²} ∫ e^{2λη} W_t^+ dη at y = v = 0, λ = 1, t = 0.5 is λ/(π sinh 2tλ) = 1/(π sinh 1)
    let r = reconstruct_weight(&params(1, 0.5), &[0.0], &[0.0], 1.0).unwrap();
    assert!(rel(r.value, 1.0 / (PI * 1f64.sinh())) < 1e-8);
    assert!(r.eta_range.0 < 0.0 && r.eta_range.1 > 0.0);
}

#[test]
fn reconstruction_rejects_nonpositive_lambda() {
    assert!(reconstruct_weight(&params(1, 0.5), &[0.0], &[0.0], 0.0).is_err());
    assert!(reconstruct_weight(&params(1, 0.5), &[0.0], &[0.0], -1.0).is_err());
}

#[test]
fn calibration_constant_is_two_over_pi_squared() {
    let c = calibration_constant(ExponentConvention::Corrected).unwrap();
    assert!(rel(c, 2.0 / (PI * PI)) < 1e-12, "{c}");
}

#[test]
fn series_matches_contour_at_half_time() {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for t in [0.5, 1.0, 2.0, 3.0] {
        for (beta, eta) in [(0.0, 0.3), (0.8, -0.5), (1.7, 0.9), (2.9, -1.2), (4.0, 0.0)] {
            let series = w_plus_series_reduced(&params(1, t), beta, eta, ExponentConvention::Corrected).unwrap();
            let contour = w_plus_reduced(&params(1, 0.5 * t), beta, eta).unwrap();
            worst = worst.max((series.value - contour.value).abs() / contour.value.abs().max(1e-3 * contour.mass));
            count += 1;
        }
    }
    assert_eq!(count, 20);
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn printed_exponent_does_not_match_contour() {
    let p = params(1, 1.0);
    let printed = w_plus_series_reduced(&p, 1.0, 0.0, ExponentConvention::AsPrinted).unwrap().value;
    let contour = w_plus_reduced(&params(1, 0.5), 1.0, 0.0).unwrap().value;
    assert!(rel(printed, contour) > 1e-2);
}

#[test]
fn series_rejects_higher_dimension() {
    assert!(w_plus_series_reduced(&params(2, 1.0), 0.0, 0.0, ExponentConvention::Corrected).is_err());
    assert!(w_plus_series(&params(1, 1.0), &[0.0, 0.0], &[0.0, 0.0], 0.0, ExponentConvention::Corrected).is_err());
}

#[test]
fn series_terms_follow_shifted_index() {
    let terms = series_terms(2.0, 1.0, -0.5, ExponentConvention::Corrected, 4).unwrap();
    for term in &terms {
        assert_eq!(term.mu, 0.5 * (2.0 * term.k as f64 + 1.0 + (2.0 * -0.5 + 1.0) / 2.0));
        assert!(term.bound >= term.value.abs());
    }
    assert!(SeriesTerm::new(0, 1.0, -1.0, 0.0, ExponentConvention::Corrected).is_err());
}

#[test]
fn origin_profile_is_positive_for_nonnegative_eta() {
    for t in [0.5, 1.0, 2.0] {
        for i in 0..=200 {
            let eta = 10.0 * t * i as f64 / 200.0;
            assert!(origin_profile(eta, t).unwrap() > 0.0, "t={t} η={eta}");
        }
    }
}

#[test]
fn origin_profile_at_integer_ratio_is_the_positive_tail() {
    // At η = −mt the terms with μ = ±(j + ½), j < m, cancel in pairs, leaving
    // c √(π/t) Σ_{j>=m} (j + ½) e^{−t(j+½)²}.
    let c = 2.0 / (PI * PI);
    for t in [0.5, 1.0, 2.0] {
        for m in 1..=2 {
            let tail: f64 = (m..m + 40).map(|j| (j as f64 + 0.5) * (-t * (j as f64 + 0.5).powi(2)).exp()).sum();
            let expected = c * (PI / t).sqrt() * tail;
            let value = origin_profile(-(m as f64) * t, t).unwrap();
            assert!(value > 0.0);
            assert!(rel(value, expected) < 1e-9, "t={t} m={m}: {value} vs {expected}");
        }
    }
}

#[test]
fn origin_profile_dips_below_zero_far_out() {
    // For η/t → −∞ the one-sided sum approaches the full lattice sum, whose
    // Poisson dual oscillates with amplitude of order e^{−π²/t}.
    let min_on_grid = |t: f64| {
        (0..=400).map(|i| origin_profile(-10.0 * t + 20.0 * t * i as f64 / 400.0, t).unwrap()).fold(f64::INFINITY, f64::min)
    };
    let m2 = min_on_grid(2.0);
    assert!(m2 < -1e-3, "{m2}");
    assert!(min_on_grid(1.0) < 0.0);
    // Agrees with the contour value of the same function.
    let series = origin_profile(-19.5, 2.0).unwrap();
    let contour = w_plus_reduced(&params(1, 1.0), 0.0, -19.5).unwrap().value;
    assert!((series - contour).abs() < 1e-6 * series.abs(), "{series} vs {contour}");
}

#[test]
fn origin_profile_decays_monotonically() {
    let t = 1.0;
    let values: Vec<f64> = (0..=40).map(|i| origin_profile(2.0 * t + 0.2 * i as f64, t).unwrap()).collect();
    assert!(values.windows(2).all(|p| p[1] < p[0]));
    assert!(*values.last().unwrap() < 1e-20);
}

#[test]
fn corrected_scan_changes_sign_once() {
    let scan = oscillation_scan(1.0, 8.0, 400, ExponentConvention::Corrected, ScanConvention::Halved).unwrap();
    assert_eq!(scan.sign_changes.len(), 1);
    assert!((scan.sign_changes[0] - 1.6287).abs() < 1e-2);
    let full = oscillation_scan(1.0, 8.0, 400, ExponentConvention::Corrected, ScanConvention::Full).unwrap();
    assert_eq!(full.sign_changes.len(), 1);
}

#[test]
fn printed_scan_oscillates_with_growing_lobes() {
    let scan = oscillation_scan(1.0, 8.0, 400, ExponentConvention::AsPrinted, ScanConvention::Halved).unwrap();
    let expected = [0.4414, 0.9244, 2.7423, 3.9856, 6.2600];
    assert_eq!(scan.sign_changes.len(), expected.len());
    for (got, want) in scan.sign_changes.iter().zip(expected) {
        assert!((got - want).abs() < 1e-2, "{got} vs {want}");
    }
    let lobes = &scan.lobe_amplitudes;
    assert!(lobes[lobes.len() - 1] > lobes[lobes.len() - 2] && lobes[lobes.len() - 2] > lobes[lobes.len() - 3]);
}

#[test]
fn scan_rows_start_at_origin_profile() {
    let scan = oscillation_scan(1.0, 8.0, 11, ExponentConvention::Corrected, ScanConvention::Halved).unwrap();
    assert_eq!(scan.rows.len(), 11);
    assert_eq!(scan.rows[0].beta, 0.0);
    assert!(rel(scan.rows[0].value, origin_profile(0.0, 1.0).unwrap()) < 1e-14);
    assert!(scan.rows[0].value > 0.0);
    let c = calibration_constant(ExponentConvention::Corrected).unwrap();
    for r in &scan.rows {
        assert!(rel(r.normalized_value * c * PI.sqrt() * (2.0 + r.beta * r.beta).ln(), r.value) < 1e-14);
    }
    let csv = scan.to_csv();
    assert!(csv.starts_with("beta,value,normalized_value\n"));
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn scan_needs_two_steps() {
    assert!(oscillation_scan(1.0, 8.0, 1, ExponentConvention::Corrected, ScanConvention::Halved).is_err());
    assert!(oscillation_scan(1.0, 0.0, 10, ExponentConvention::Corrected, ScanConvention::Halved).is_err());
}

#[test]
fn weight_takes_negative_values_on_the_ray() {
    let p = params(1, 1.0);
    let values: Vec<f64> =
        (0..=80).map(|i| 0.1 * i as f64).map(|b| w_plus_reduced(&p, b, -0.5 * b).unwrap().value).collect();
    let max = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(min < -1e-3 * max, "{min} vs {max}");
}

#[test]
fn weight_is_positive_near_origin() {
    let p = params(1, 1.0);
    for (y, v, eta) in [(0.0, 0.0, 0.0), (0.1, -0.1, 0.1), (-0.1, 0.05, -0.1), (0.05, 0.1, 0.05)] {
        assert!(w_plus_contour(&p, &[y], &[v], eta).unwrap().value > 0.0);
    }
}

#[test]
fn evolution_equation_holds_inside_unit_ball() {
    let p = params(1, 0.7);
    for (y, v, eta) in [(0.3, -0.4, 0.2), (0.0, 0.5, -0.6), (0.6, 0.2, 1.0)] {
        let r = pde_residual(&p, &[y], &[v], eta, 1e-3).unwrap();
        assert!(r.residual < 1e-3, "({y},{v},{eta}): {r:?}");
    }
    let r = pde_residual(&params(2, 0.7), &[0.3, 0.1], &[-0.2, 0.4], 0.3, 1e-3).unwrap();
    assert!(r.residual < 1e-3, "{r:?}");
}

#[test]
fn generator_identity_holds() {
    let points = [(0.0, 0.0), (0.5, -0.2), (1.0, 0.3), (-0.7, 0.8), (1.5, -1.1)];
    for (y, v) in points {
        let r = generator_residual(1.0, 0.5, &[y], &[v], 1e-3).unwrap();
        assert!(r.residual < 1e-4, "({y},{v}): {r:?}");
    }
}

#[test]
fn difference_step_must_be_positive_and_small() {
    assert!(pde_residual(&params(1, 0.5), &[0.0], &[0.0], 0.0, 0.0).is_err());
    assert!(pde_residual(&params(1, 0.5), &[0.0], &[0.0], 0.0, 1.0).is_err());
    assert!(generator_residual(1.0, 0.5, &[0.0], &[0.0], -1e-3).is_err());
}

#[test]
fn signed_disk_norms_match_closed_form() {
    let demo = signed_disk_demo(8).unwrap();
    assert!(rel(demo.entry(0, 0).re, PI / 2.0) < 1e-14);
    assert!(rel(demo.entry(1, 1).re, 7.0 * PI / 16.0) < 1e-14);
    assert!(demo.max_diagonal_error < 1e-10);
    for m in 0..=5 {
        for k in 0..=5 {
            if m != k {
                assert!(demo.entry(m, k).norm() < 1e-12);
            }
        }
    }
    assert!(demo.diagonal_positive);
    assert!(rel(demo.equivalence_constant, 0.5) < 1e-12);
    assert!(signed_disk_demo(40).is_err());
}

fn sample(f: impl Fn(f64) -> C64) -> OneDimSample {
    OneDimSample::from_fn(heisenberg_heat::lattice::Axis::symmetric(14.0, 0.05).unwrap(), f)
}

#[test]
fn one_dim_scale_is_function_independent() {
    let t = 0.5;
    let grid = OneDimGrid { step: 0.1, half_real: 16.0, half_imag: 12.0 };
    let functions: Vec<OneDimSample> = vec![
        sample(|x| C64::new((-x * x).exp(), 0.0)),
        sample(|x| C64::new(x * (-0.5 * x * x).exp(), 0.0)),
        sample(|x| C64::new((-(x - 1.0).powi(2)).exp(), 0.3 * (-(x + 0.5).powi(2)).exp())),
        sample(|x| C64::new((1.0 + x * x) * (-0.6 * x * x).exp(), 0.0)),
        sample(|x| C64::from_polar((-0.7 * x * x).exp(), 2.0 * x)),
    ];
    let scales: Vec<f64> = functions.iter().map(|g| one_dim_scale(g, t, &grid, 1e-12).unwrap()).collect();
    for s in &scales {
        assert!(rel(*s, scales[0]) < 1e-6, "{scales:?}");
    }
    assert!(rel(scales[0], (2.0 * PI * t).sqrt()) < 1e-6);
}

#[test]
fn heat_semigroup_on_the_line() {
    let (s, t) = (0.3, 0.5);
    let g = sample(|x| C64::new(q_heat(s, C64::new(x, 0.0)).re, 0.0));
    let transform = one_dim_transform(&g, t, 1e-12).unwrap();
    for z in [C64::new(0.0, 0.0), C64::new(0.7, -0.4), C64::new(-1.2, 1.1)] {
        assert!((transform.eval(z) - q_heat(s + t, z)).norm() < 1e-10);
    }
}

#[test]
fn branch_tags_follow_fourier_support() {
    // ĝ(λ) = ∫ e^{iλx} g: e^{−iκx} moves the spectrum to λ ≈ κ.
    let plus = sample(|x| C64::from_polar((-0.5 * x * x).exp(), -6.0 * x));
    let minus = sample(|x| C64::from_polar((-0.5 * x * x).exp(), 6.0 * x));
    let mixed = sample(|x| C64::new((-0.5 * x * x).exp(), 0.0));
    let zero = sample(|_| C64::new(0.0, 0.0));
    assert_eq!(branch_of(&plus, 1e-6), BranchTag::Plus);
    assert_eq!(branch_of(&minus, 1e-6), BranchTag::Minus);
    assert_eq!(branch_of(&mixed, 1e-6), BranchTag::Mixed);
    assert_eq!(branch_of(&zero, 1e-6), BranchTag::Zero);
}

#[test]
fn truncated_line_sample_is_rejected() {
    let g = sample(|_| C64::new(1.0, 0.0));
    assert!(matches!(one_dim_transform(&g, 0.5, 1e-8), Err(Error::Truncation { .. })));
}

fn gaussian(gamma: f64, a: f64, b: f64, amplitude: C64) -> CompactSpectrumGaussian {
    CompactSpectrumGaussian::new(0.5, gamma, a, b, amplitude).unwrap()
}

#[test]
fn bracket_trace_increases_to_the_norm() {
    let f = gaussian(0.5, 0.5, 1.5, C64::new(1.0, 0.0));
    let trace = vt_plus_pairing(&f, &f, &DEFAULT_R_SCHEDULE, DEFAULT_TRACE_TOL).unwrap();
    assert!(trace.is_increasing());
    assert!(trace.converged);
    assert!(trace.values.iter().all(|v| v.im.abs() < 1e-12 * v.re));
    assert!(rel(trace.limit().re, f.norm_sq()) < 1e-3, "{:?} vs {}", trace.values, f.norm_sq());
    // The smallest disc misses a visible part of the mass.
    assert!(trace.values[0].re < 0.7 * f.norm_sq());
}

#[test]
fn bracket_of_zero_is_zero() {
    let f = gaussian(0.5, 0.5, 1.5, C64::new(1.0, 0.0));
    let zero = gaussian(0.5, 0.5, 1.5, C64::new(0.0, 0.0));
    let trace = vt_plus_pairing(&zero, &f, &DEFAULT_R_SCHEDULE, DEFAULT_TRACE_TOL).unwrap();
    assert!(trace.values.iter().all(|v| *v == C64::new(0.0, 0.0)));
}

#[test]
fn bracket_of_disjoint_spectra_vanishes() {
    let f = gaussian(0.5, 0.5, 1.0, C64::new(1.0, 0.0));
    let g = gaussian(0.3, 1.2, 2.0, C64::new(0.0, 2.0));
    let trace = vt_plus_pairing(&f, &g, &[2.0, 4.0], DEFAULT_TRACE_TOL).unwrap();
    assert!(trace.values.iter().all(|v| *v == C64::new(0.0, 0.0)));
}

#[test]
fn bracket_is_hermitian_and_sesquilinear() {
    let f = gaussian(0.5, 0.5, 1.5, C64::new(1.0, 0.0));
    let g = gaussian(0.3, 0.8, 1.6, C64::new(0.5, -0.5));
    let fg = vt_plus_pairing(&f, &g, &[2.0, 4.0], DEFAULT_TRACE_TOL).unwrap();
    let gf = vt_plus_pairing(&g, &f, &[2.0, 4.0], DEFAULT_TRACE_TOL).unwrap();
    for (a, b) in fg.values.iter().zip(&gf.values) {
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
    }
    let scaled = gaussian(0.3, 0.8, 1.6, C64::new(0.5, -0.5) * C64::new(0.0, 3.0));
    let fs = vt_plus_pairing(&f, &scaled, &[2.0, 4.0], DEFAULT_TRACE_TOL).unwrap();
    for (a, b) in fg.values.iter().zip(&fs.values) {
        assert!((b - a * C64::new(0.0, -3.0)).norm() < 1e-12 * b.norm());
    }
}

#[test]
fn bracket_rejects_bad_schedules() {
    let f = gaussian(0.5, 0.5, 1.5, C64::new(1.0, 0.0));
    assert!(vt_plus_pairing(&f, &f, &[], 1e-3).is_err());
    assert!(vt_plus_pairing(&f, &f, &[3.0, 2.0], 1e-3).is_err());
    assert!(vt_plus_pairing(&f, &f, &[-1.0], 1e-3).is_err());
    assert!(CompactSpectrumGaussian::new(0.5, 0.5, -0.5, 1.0, C64::new(1.0, 0.0)).is_err());
    let other_time = CompactSpectrumGaussian::new(1.0, 0.5, 0.5, 1.5, C64::new(1.0, 0.0)).unwrap();
    assert!(vt_plus_pairing(&f, &other_time, &[2.0], 1e-3).is_err());
}

#[test]
fn numeric_slice_weight_matches_closed_form_on_small_disc() {
    // Every β reached by |z|, |w| < 2.
    let p = params(1, 0.5).with_tol(1e-10).unwrap();
    let betas = [0.0, 2.0, 4.0, 8.0];
    let lambdas = [0.6, 1.0, 1.4];
    let table = reconstruct_weight_table(&p, &betas, &lambdas).unwrap();
    for (row, &beta) in table.iter().zip(&betas) {
        for r in row {
            let y = (0.5 * beta).sqrt();
            let target = weight_lambda_gaussian(&TwistedParams::new(1, 0.5, r.lambda).unwrap(), &[y], &[y]).unwrap();
            assert!(rel(r.value, target) < 1e-4, "β={beta} λ={}: {} vs {target}", r.lambda, r.value);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_depends_on_y_and_v_through_beta(y in -1.5f64..1.5, v in -1.5f64..1.5, eta in -2.0f64..2.0, angle in 0.0f64..6.3) {
        let p = params(1, 1.0);
        let base = w_plus_contour(&p, &[y], &[v], eta).unwrap().value;
        let swapped = w_plus_contour(&p, &[v], &[y], eta).unwrap().value;
        prop_assert_eq!(base, swapped);
        let r = (y * y + v * v).sqrt();
        let rotated = w_plus_contour(&p, &[r * angle.cos()], &[r * angle.sin()], eta).unwrap().value;
        prop_assert!((rotated - base).abs() <= 1e-12 * (1.0 + base.abs()));
    }

    #[test]
    fn series_is_symmetric_in_y_and_v(y in -1.5f64..1.5, v in -1.5f64..1.5, eta in -1.0f64..1.0) {
        let p = params(1, 1.0);
        let a = w_plus_series(&p, &[y], &[v], eta, ExponentConvention::Corrected).unwrap().value;
        let b = w_plus_series(&p, &[v], &[y], eta, ExponentConvention::Corrected).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn minus_weight_is_reflected_plus_weight(beta in 0.0f64..4.0, eta in -2.0f64..2.0) {
        let p = params(1, 0.5);
        let y = (0.5 * beta).sqrt();
        let minus = w_minus_contour(&p, &[y], &[y], eta).unwrap().value;
        let plus = w_plus_reduced(&p, beta, -eta).unwrap().value;
        prop_assert!((minus - plus).abs() <= 1e-9 * (1.0 + plus.abs()));
    }
}

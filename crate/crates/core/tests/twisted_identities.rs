use std::f64::consts::PI;

use heisenberg_heat::heatkernel::{default_kernel_quadrature, p_twisted};
use heisenberg_heat::hgroup::{central_slice, convolve, ComplexGroupPoint, GroupPoint};
use heisenberg_heat::lattice::{Axis, FieldMeta, Lattice, SampledField, DEFAULT_DECAY_THRESHOLD};
use heisenberg_heat::numeric::{relative_residual, C64};
use heisenberg_heat::specfun::{special_hermite, MultiIndex};
use heisenberg_heat::twisted::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn plane(half: f64, step: f64) -> Lattice {
    let ax = Axis::symmetric(half, step).unwrap();
    Lattice::new(vec![ax, ax]).unwrap()
}

fn sample(lattice: &Lattice, lambda: Option<f64>, f: impl Fn(f64, f64) -> C64 + Sync) -> SampledField {
    SampledField::from_fn(lattice.clone(), FieldMeta { n: 1, t: None, lambda }, |p| f(p[0], p[1]))
}

fn hermite(a: usize, b: usize, lambda: f64) -> impl Fn(f64, f64) -> C64 + Sync {
    move |x, u| special_hermite(&MultiIndex::new(vec![a]), &MultiIndex::new(vec![b]), lambda, &[x], &[u]).unwrap()
}

fn complex_points() -> Vec<(Vec<C64>, Vec<C64>)> {
    [(c(0.3, 0.2), c(-0.5, 0.4)), (c(-1.1, -0.3), c(0.2, 0.6)), (c(0.8, 0.7), c(0.9, -0.5)), (c(0.0, 0.0), c(1.2, 0.1))]
        .iter()
        .map(|&(z, w)| (vec![z], vec![w]))
        .collect()
}

fn params(t: f64, lambda: f64) -> TwistedParams {
    TwistedParams::new(1, t, lambda).unwrap()
}

#[test]
fn twisted_phase_vanishes_at_origin() {
    let lat = plane(8.0, 0.25);
    let g = |x: f64, u: f64| c((-(x * x + 2.0 * u * u)).exp(), 0.0);
    let f = sample(&lat, None, g);
    let out = Lattice::new(vec![Axis::new(0.0, 1.0, 1).unwrap(), Axis::new(0.0, 1.0, 1).unwrap()]).unwrap();
    let kernel = |x: &[f64], u: &[f64]| g(x[0], u[0]);
    let twisted = twisted_convolve(&f, &kernel, 1.7, &out, DEFAULT_DECAY_THRESHOLD).unwrap();
    // ∫ g(x,u)² = π / (2·√2)
    let plain = PI / (2.0 * 2f64.sqrt());
    assert!((twisted.values[0] - c(plain, 0.0)).norm() < 1e-12);
}

#[test]
fn special_hermite_functions_multiply_like_matrix_units() {
    let out = plane(1.0, 1.0);
    for lambda in [0.5f64, 1.0, 2.0] {
        let lat = plane(14.0 / lambda.sqrt(), 0.2 / lambda.sqrt());
        let scale = (2.0 * PI / lambda).sqrt();
        for (a, b, c2, d) in [(0, 0, 0, 0), (1, 2, 2, 0), (2, 1, 1, 2), (0, 1, 2, 1), (2, 2, 1, 1)] {
            let f = sample(&lat, Some(lambda), hermite(a, b, lambda));
            let g = hermite(c2, d, lambda);
            let kernel = |x: &[f64], u: &[f64]| g(x[0], u[0]);
            let conv = twisted_convolve(&f, &kernel, lambda, &out, 1e-6).unwrap();
            let expected: Vec<C64> = (0..out.len())
                .map(|i| {
                    let mut p = [0.0; 2];
                    out.point(i, &mut p);
                    if b == c2 { hermite(a, d, lambda)(p[0], p[1]) * scale } else { c(0.0, 0.0) }
                })
                .collect();
            let err = conv.values.iter().zip(&expected).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(err < 1e-9, "λ={lambda} ({a},{b})*({c2},{d}): {err}");
        }
    }
}

#[test]
fn twisted_kernel_semigroup() {
    let out = plane(2.0, 0.5);
    for (lambda, s, t) in [(1.0, 0.25, 0.5), (0.5, 0.4, 0.3), (-2.0, 0.3, 0.3)] {
        let lat = plane(12.0, 0.2);
        let f = sample(&lat, Some(lambda), |x, u| c(p_twisted(lambda, s, &[x], &[u]).unwrap(), 0.0));
        let kernel = |x: &[f64], u: &[f64]| c(p_twisted(lambda, t, x, u).unwrap(), 0.0);
        let conv = twisted_convolve(&f, &kernel, lambda, &out, DEFAULT_DECAY_THRESHOLD).unwrap();
        let expected: Vec<C64> = (0..out.len())
            .map(|i| {
                let mut p = [0.0; 2];
                out.point(i, &mut p);
                c(p_twisted(lambda, s + t, &p[..1], &p[1..]).unwrap(), 0.0)
            })
            .collect();
        assert!(relative_residual(&conv.values, &expected) < 1e-8);
    }
}

#[test]
fn sampled_transform_matches_gaussian_closed_form() {
    let pr = params(0.5, 1.3);
    let gamma = 0.7;
    let f = sample(&plane(9.0, 0.3), Some(1.3), |x, u| c(radial_gaussian(gamma, &[x], &[u]), 0.0));
    let numeric = heat_transform_lambda(&f, pr.t, pr.lambda, DEFAULT_DECAY_THRESHOLD).unwrap();
    let exact = gaussian_transform(pr, gamma);
    let pts = complex_points();
    let a: Vec<C64> = pts.iter().map(|(z, w)| numeric.eval(z, w)).collect();
    let b: Vec<C64> = pts.iter().map(|(z, w)| exact.eval(z, w)).collect();
    assert!(relative_residual(&a, &b) < 1e-10);
}

#[test]
fn transform_restricts_to_twisted_convolution() {
    let lambda = -0.8;
    let lat = plane(10.0, 0.25);
    let f = sample(&lat, Some(lambda), |x, u| c(1.0 + x - 0.5 * u, 0.3 * x) * (-(x * x + u * u) / 2.0).exp());
    let transform = heat_transform_lambda(&f, 0.6, lambda, DEFAULT_DECAY_THRESHOLD).unwrap();
    let out = plane(1.5, 0.75);
    let kernel = |x: &[f64], u: &[f64]| c(p_twisted(lambda, 0.6, x, u).unwrap(), 0.0);
    let conv = twisted_convolve(&f, &kernel, lambda, &out, DEFAULT_DECAY_THRESHOLD).unwrap();
    let direct: Vec<C64> = (0..out.len())
        .map(|i| {
            let mut p = [0.0; 2];
            out.point(i, &mut p);
            transform.eval_real(&p[..1], &p[1..])
        })
        .collect();
    assert!(relative_residual(&direct, &conv.values) < 1e-10);
}

#[test]
fn eigen_relation_holds_without_extra_factor() {
    let (t, lambda) = (0.5, 1.0);
    let pr = params(t, lambda);
    let lat = plane(10.0, 0.4);
    let pts = complex_points();
    for a in 0..=2 {
        for b in 0..=2 {
            let f = sample(&lat, Some(lambda), hermite(a, b, lambda));
            let numeric = heat_transform_lambda(&f, t, lambda, 1e-6).unwrap();
            let tilde = phi_tilde(pr, &MultiIndex::new(vec![a]), &MultiIndex::new(vec![b])).unwrap();
            let lhs: Vec<C64> = pts.iter().map(|(z, w)| numeric.eval(z, w)).collect();
            let rhs: Vec<C64> = pts.iter().map(|(z, w)| tilde.eval(z, w)).collect();
            assert!(relative_residual(&lhs, &rhs) < 1e-9, "({a},{b})");
            // the variant with an additional (2π)^{-n} misses by 1 - 1/(2π)
            let scaled: Vec<C64> = rhs.iter().map(|v| v / (2.0 * PI)).collect();
            let miss = relative_residual(&lhs, &scaled);
            assert!((miss - (2.0 * PI - 1.0)).abs() < 1e-6, "{miss}");
        }
    }
}

#[test]
fn kernel_transform_advances_time() {
    let (s, t, lambda) = (0.3, 0.5, 1.5);
    let f = sample(&plane(10.0, 0.25), Some(lambda), |x, u| c(p_twisted(lambda, s, &[x], &[u]).unwrap(), 0.0));
    let numeric = heat_transform_lambda(&f, t, lambda, DEFAULT_DECAY_THRESHOLD).unwrap();
    let exact = twisted_kernel_extension(params(t, lambda), s + t).unwrap();
    let pts = complex_points();
    let a: Vec<C64> = pts.iter().map(|(z, w)| numeric.eval(z, w)).collect();
    let b: Vec<C64> = pts.iter().map(|(z, w)| exact.eval(z, w)).collect();
    assert!(relative_residual(&a, &b) < 1e-10);
}

#[test]
fn transform_is_holomorphic() {
    let f = sample(&plane(9.0, 0.3), Some(1.0), |x, u| c((x - u * u) * (-(x * x + u * u) / 3.0).exp(), 0.0));
    let tr = heat_transform_lambda(&f, 0.5, 1.0, DEFAULT_DECAY_THRESHOLD).unwrap();
    let h = 1e-5;
    for (z, w) in complex_points() {
        let dz = |dx: C64| tr.eval(&[z[0] + dx], &w);
        let dw = |dx: C64| tr.eval(&z, &[w[0] + dx]);
        let cr_z = (dz(c(h, 0.0)) - dz(c(-h, 0.0))) / (2.0 * h) - (dz(c(0.0, h)) - dz(c(0.0, -h))) / c(0.0, 2.0 * h);
        let cr_w = (dw(c(h, 0.0)) - dw(c(-h, 0.0))) / (2.0 * h) - (dw(c(0.0, h)) - dw(c(0.0, -h))) / c(0.0, 2.0 * h);
        assert!(cr_z.norm() < 1e-6 && cr_w.norm() < 1e-6);
    }
}

#[test]
fn translation_identity_and_isometry() {
    let lambda = 1.2;
    let lat = plane(10.0, 0.25);
    let f = sample(&lat, Some(lambda), |x, u| c((-(x - 0.3).powi(2) - u * u).exp(), x * (-(x * x + u * u)).exp()));
    let same = twisted_translate_field(&f, &[0.0], &[0.0], lambda).unwrap();
    assert_eq!(same.values, f.values);
    let moved = twisted_translate_field(&f, &[1.5], &[-0.75], lambda).unwrap();
    assert!((moved.l2_norm_sq() - f.l2_norm_sq()).abs() < 1e-12 * f.l2_norm_sq());
    assert!(twisted_translate_field(&f, &[0.1], &[0.0], lambda).is_err());
}

#[test]
fn transform_commutes_with_translation() {
    let lambda = 0.9;
    let pr = params(0.5, lambda);
    let lat = plane(11.0, 0.25);
    let f = sample(&lat, Some(lambda), |x, u| c((-(x * x + u * u) / 2.0).exp() * (1.0 + u), 0.0));
    let (a, b) = ([1.0], [-0.5]);
    let moved = twisted_translate_field(&f, &a, &b, lambda).unwrap();
    let lhs_tr = heat_transform_lambda(&moved, pr.t, lambda, DEFAULT_DECAY_THRESHOLD).unwrap();
    let rhs_tr = twisted_translate(&heat_transform_lambda(&f, pr.t, lambda, DEFAULT_DECAY_THRESHOLD).unwrap(), &a, &b).unwrap();
    let pts = complex_points();
    let l: Vec<C64> = pts.iter().map(|(z, w)| lhs_tr.eval(z, w)).collect();
    let r: Vec<C64> = pts.iter().map(|(z, w)| rhs_tr.eval(z, w)).collect();
    assert!(relative_residual(&l, &r) < 1e-6);

    // closed-form version of the same statement
    let mix = GaussianMixture::new(
        pr,
        vec![GaussianTerm { coefficient: c(1.0, 0.0), gamma: 0.5, a: a.to_vec(), b: b.to_vec() }],
    )
    .unwrap();
    let sampled = sample(&lat, Some(lambda), |x, u| mix.eval(&[x], &[u]));
    let tr = heat_transform_lambda(&sampled, pr.t, lambda, DEFAULT_DECAY_THRESHOLD).unwrap();
    let closed = mix.transform();
    let l: Vec<C64> = pts.iter().map(|(z, w)| tr.eval(z, w)).collect();
    let r: Vec<C64> = pts.iter().map(|(z, w)| closed.eval(z, w)).collect();
    assert!(relative_residual(&l, &r) < 1e-9);
}

#[test]
fn mixture_norm_closed_form() {
    let pr = params(0.5, 1.0);
    let mix = GaussianMixture::new(
        pr,
        vec![
            GaussianTerm { coefficient: c(1.0, 0.5), gamma: 0.4, a: vec![0.5], b: vec![-1.0] },
            GaussianTerm { coefficient: c(-0.7, 0.2), gamma: 0.9, a: vec![-1.2], b: vec![0.3] },
        ],
    )
    .unwrap();
    let f = sample(&plane(12.0, 0.2), Some(1.0), |x, u| mix.eval(&[x], &[u]));
    assert!((f.l2_norm_sq() - mix.norm_sq()).abs() < 1e-10 * mix.norm_sq());
}

#[test]
fn weight_values_and_symmetries() {
    for (t, lambda) in [(0.5, 1.0), (0.25, -2.0), (1.0, 0.3)] {
        let pr = params(t, lambda);
        let at_real = weight_lambda(&pr, &[1.3], &[-0.4], &[0.0], &[0.0]).unwrap();
        let expected = 4.0 * (4.0 * PI).recip() * lambda / (2.0 * t * lambda).sinh();
        assert!((at_real - expected).abs() < 1e-14 * expected);
        let th = 0.7f64;
        let rot = |p: f64, q: f64| (th.cos() * p - th.sin() * q, th.sin() * p + th.cos() * q);
        for (x, u, y, v) in [(0.4, -1.0, 0.3, 0.8), (2.0, 0.5, -0.6, 0.1)] {
            let w0 = weight_lambda(&pr, &[x], &[u], &[y], &[v]).unwrap();
            assert!(w0 > 0.0);
            let (xr, ur) = rot(x, u);
            let (yr, vr) = rot(y, v);
            let w1 = weight_lambda(&pr, &[xr], &[ur], &[yr], &[vr]).unwrap();
            assert!((w0 - w1).abs() < 1e-13 * w0);
            let g = weight_lambda_gaussian(&pr, &[y], &[v]).unwrap();
            let phase = (lambda * (u * y - v * x)).exp();
            assert!((w0 - phase * g).abs() < 1e-13 * w0);
        }
    }
    assert!(TwistedParams::new(1, 0.5, 0.0).is_err());
    let sampled = WeightLambda::sample(params(0.5, 1.0), &[(vec![c(0.2, 0.1)], vec![c(-0.3, 0.4)])]).unwrap();
    assert_eq!(sampled.values.len(), 1);
}

#[test]
fn special_hermite_transforms_are_orthonormal() {
    let pr = params(0.25, 1.0);
    let fs: Vec<TwistedTransformResult> = (0..=2)
        .flat_map(|a| (0..=2).map(move |b| (a, b)))
        .map(|(a, b)| phi_tilde(pr, &MultiIndex::new(vec![a]), &MultiIndex::new(vec![b])).unwrap())
        .collect();
    let refs: Vec<&TwistedTransformResult> = fs.iter().collect();
    let grid = BergmanGrid::new(0.6, 11.0, 7.0).unwrap();
    let gram = bergman_gram(&refs, &grid, 1e-8).unwrap();
    for i in 0..9 {
        for j in 0..9 {
            let target = if i == j { 1.0 } else { 0.0 };
            assert!((gram[i * 9 + j] - c(target, 0.0)).norm() < 1e-6, "({i},{j}) {}", gram[i * 9 + j]);
        }
    }
}

#[test]
fn transform_is_isometric_on_random_mixtures() {
    let pr = params(0.5, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let terms = (0..3)
            .map(|_| GaussianTerm {
                coefficient: c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                gamma: rng.gen_range(0.3..1.5),
                a: vec![rng.gen_range(-1.0..1.0)],
                b: vec![rng.gen_range(-1.0..1.0)],
            })
            .collect();
        let mix = GaussianMixture::new(pr, terms).unwrap();
        let tr = mix.transform();
        let grid = BergmanGrid::for_decay(&pr, 2.0 * tr.decay_rate, 40.0, 1.5, 0.5).unwrap();
        let norm = bergman_pairing(&tr, &tr, &grid, 1e-8).unwrap();
        let exact = mix.norm_sq();
        assert!((norm.re - exact).abs() < 1e-6 * exact, "{} vs {exact}", norm.re);
        assert!(norm.im.abs() < 1e-10 * exact);
    }
}

#[test]
fn reproducing_identity_for_the_doubled_kernel() {
    let pr = params(0.5, 1.0);
    let grid = BergmanGrid::new(0.5, 12.0, 8.0).unwrap();
    for (a, b) in [(0.0, 0.0), (1.0, -0.5), (-0.5, 1.0)] {
        let lhs = reproducing_identity_lhs(pr, &[a], &[b], &grid, 1e-6).unwrap();
        let rhs = p_twisted(1.0, 1.0, &[a], &[b]).unwrap();
        assert!((lhs - c(rhs, 0.0)).norm() < 1e-6 * rhs, "({a},{b}) {lhs} vs {rhs}");
    }
}

#[test]
fn gaussian_chain_steps_hold() {
    for t in [0.25, 0.5, 1.0] {
        for step in reproducing_chain(t).unwrap() {
            assert!(step.residual < 1e-10, "t={t} {}: {}", step.name, step.residual);
        }
    }
}

#[test]
fn reproducing_kernel_reproduces() {
    let pr = params(0.5, 1.0);
    let k0 = reproducing_kernel(&[0.0], &[0.0], 0.5, 1.0).unwrap();
    let p2t = twisted_kernel_extension(pr, 1.0).unwrap();
    for (z, w) in complex_points() {
        assert!((k0.eval(&z, &w) - p2t.eval(&z, &w)).norm() < 1e-15);
    }
    let k = reproducing_kernel(&[0.6], &[-0.4], 0.5, 1.0).unwrap();
    let at_origin = k.eval(&[c(0.0, 0.0)], &[c(0.0, 0.0)]);
    assert!((at_origin - c(p_twisted(1.0, 1.0, &[0.6], &[-0.4]).unwrap(), 0.0)).norm() < 1e-15);

    let mix = GaussianMixture::new(
        pr,
        vec![GaussianTerm { coefficient: c(1.0, -0.3), gamma: 0.6, a: vec![0.4], b: vec![0.2] }],
    )
    .unwrap();
    let tr = mix.transform();
    let grid = BergmanGrid::new(0.5, 12.0, 8.0).unwrap();
    let pairing = bergman_pairing(&tr, &k, &grid, 1e-6).unwrap();
    let value = tr.eval_real(&[0.6], &[-0.4]);
    assert!((pairing - value).norm() < 1e-6 * value.norm());
}

#[test]
fn fock_picture_matches_bergman_pairing() {
    let pr = params(0.5, 1.0);
    let f = phi_tilde(pr, &MultiIndex::new(vec![1]), &MultiIndex::new(vec![0])).unwrap();
    let g = gaussian_transform(pr, 0.5);
    let grid = BergmanGrid::new(0.5, 12.0, 8.0).unwrap();
    let bergman = bergman_pairing(&f.plus(&g).unwrap(), &g, &grid, 1e-6).unwrap();
    let fock = fock_pairing(&fock_map(&f.plus(&g).unwrap()), &fock_map(&g), &grid, 1e-6).unwrap();
    assert!((bergman - fock).norm() < 1e-12 * bergman.norm());
}

#[test]
fn monomials_have_finite_norm_and_degree_blocks_are_orthogonal() {
    let pr = params(0.5, 1.0);
    let mons: Vec<(usize, TwistedTransformResult)> = (0..=4)
        .flat_map(|a| (0..=4 - a).map(move |b| (a, b)))
        .map(|(a, b)| (a + b, monomial(pr, &MultiIndex::new(vec![a]), &MultiIndex::new(vec![b])).unwrap()))
        .collect();
    let refs: Vec<&TwistedTransformResult> = mons.iter().map(|(_, m)| m).collect();
    let k = refs.len();
    let coarse = fock_gram(&refs, &fock_grid(&pr, 4, 0.6).unwrap(), 1e-8).unwrap();
    let fine = fock_gram(&refs, &fock_grid(&pr, 4, 0.55).unwrap(), 1e-8).unwrap();
    for i in 0..k {
        let (n0, n1) = (coarse[i * k + i].re, fine[i * k + i].re);
        assert!(n0.is_finite() && n0 > 0.0 && (n1 - n0).abs() < 1e-9 * n0, "{i}: {n0} {n1}");
    }
    for i in 0..k {
        for j in 0..k {
            if mons[i].0 != mons[j].0 {
                let scale = (coarse[i * k + i].re * coarse[j * k + j].re).sqrt();
                assert!(coarse[i * k + j].norm() < 1e-10 * scale, "{i},{j}");
            }
        }
    }
    // the circle average picks out one degree
    let sum = mons[1].1.plus(&mons[7].1).unwrap().plus(&mons[13].1).unwrap();
    let (d, target) = (mons[7].0, &mons[7].1);
    let part = fock_torus_component(&sum, d, 8).unwrap();
    for (z, w) in complex_points() {
        assert!((part.eval(&z, &w) - target.eval(&z, &w)).norm() < 1e-12 * (1.0 + target.eval(&z, &w).norm()));
    }
}

#[test]
fn global_kernel_symmetries() {
    let q = default_kernel_quadrature(1e-10);
    let t = 0.5;
    let real = GroupPoint::new(vec![0.4], vec![-0.3], 0.6).unwrap().complexify();
    let diag = global_kernel(&real, &real, t, &q).unwrap();
    assert!(diag.re > 0.0 && diag.im.abs() < 1e-14);

    let z = ComplexGroupPoint::new(vec![c(0.3, 0.2)], vec![c(-0.1, 0.4)], c(0.5, -0.2)).unwrap();
    let w = ComplexGroupPoint::new(vec![c(-0.4, 0.1)], vec![c(0.2, -0.3)], c(-0.3, 0.1)).unwrap();
    let kzw = global_kernel(&z, &w, t, &q).unwrap();
    let kwz = global_kernel(&w, &z, t, &q).unwrap();
    assert!((kzw.conj() - kwz).norm() < 1e-10 * kzw.norm());

    for h in [GroupPoint::new(vec![0.7], vec![-1.2], 0.4).unwrap(), GroupPoint::new(vec![-0.5], vec![0.3], -1.0).unwrap()] {
        let hc = h.complexify();
        let moved = global_kernel(&hc.multiply(&z).unwrap(), &hc.multiply(&w).unwrap(), t, &q).unwrap();
        assert!((moved - kzw).norm() < 1e-10 * kzw.norm());
    }
}

#[test]
fn inversion_recovers_hermite_ground_state_and_is_linear() {
    let pr = params(0.5, 1.0);
    let out = plane(1.0, 1.0);
    let grid = BergmanGrid::new(0.5, 11.0, 9.0).unwrap();
    let zero = TwistedTransformResult::zero(pr);
    let f0 = invert(&zero, 0.1, &out, &grid, 1e-8).unwrap();
    assert!(f0.values.iter().all(|v| v.norm() == 0.0));

    let tilde = phi_tilde(pr, &MultiIndex::zero(1), &MultiIndex::zero(1)).unwrap();
    let ground = hermite(0, 0, 1.0);
    let mut prev = f64::INFINITY;
    for s in [0.1, 0.01] {
        let fs = invert(&tilde, s, &out, &grid, 1e-6).unwrap();
        let err = (0..out.len())
            .map(|i| {
                let mut p = [0.0; 2];
                out.point(i, &mut p);
                (fs.values[i] - ground(p[0], p[1])).norm()
            })
            .fold(0.0, f64::max);
        // exact for this input: F_s = e^{-λ s} Φ_{0,0}
        let expected = 1.0 - (-s).exp();
        let peak = ground(0.0, 0.0).norm();
        assert!((err - expected * peak).abs() < 1e-6, "s={s}: {err}");
        assert!(err < prev);
        prev = err;
    }
}

fn group_lattice(half: f64, step: f64, xi_half: f64, xi_step: f64) -> Lattice {
    let ax = Axis::symmetric(half, step).unwrap();
    Lattice::new(vec![ax, ax, Axis::symmetric(xi_half, xi_step).unwrap()]).unwrap()
}

#[test]
fn central_slice_maps_group_convolution_to_opposite_twist() {
    let lambda = 0.8;
    let profile = |x: f64, u: f64| c(1.0 + 0.5 * x, 0.3 * u) * (-(x * x + u * u) / 2.0).exp();
    let f = SampledField::from_fn(group_lattice(6.0, 0.4, 6.0, 0.4), FieldMeta { n: 1, ..Default::default() }, |p| {
        profile(p[0], p[1]) * (-p[2] * p[2]).exp()
    });
    let g = |x: &[f64], u: &[f64], xi: f64| c(1.0, x[0] - u[0]) * (-(x[0] * x[0] + 2.0 * u[0] * u[0]) - xi * xi / 2.0).exp();
    let out = group_lattice(0.8, 0.8, 9.0, 0.25);
    let conv = convolve(&f, &g, &out, DEFAULT_DECAY_THRESHOLD).unwrap();
    let lhs = central_slice(&conv, lambda, DEFAULT_DECAY_THRESHOLD).unwrap();

    let f_slice = central_slice(&f, lambda, DEFAULT_DECAY_THRESHOLD).unwrap();
    // ∫ e^{iλξ} e^{-ξ²/2} dξ = √(2π) e^{-λ²/2}
    let g_hat = (2.0 * PI).sqrt() * (-lambda * lambda / 2.0).exp();
    let g_slice = |x: &[f64], u: &[f64]| g(x, u, 0.0) * g_hat;
    let plane_out = Lattice::new(out.axes[..2].to_vec()).unwrap();
    let opposite = twisted_convolve(&f_slice, &g_slice, -lambda, &plane_out, DEFAULT_DECAY_THRESHOLD).unwrap();
    let same = twisted_convolve(&f_slice, &g_slice, lambda, &plane_out, DEFAULT_DECAY_THRESHOLD).unwrap();
    assert!(relative_residual(&lhs.values, &opposite.values) < 1e-6);
    assert!(relative_residual(&lhs.values, &same.values) > 1e-2);
}

#[test]
fn group_transform_factorizes_over_slices() {
    let q = default_kernel_quadrature(1e-10);
    let pts: Vec<(Vec<C64>, Vec<C64>)> =
        [(c(0.3, 0.2), c(-0.4, 0.1)), (c(-0.5, -0.1), c(0.2, 0.3)), (c(0.0, 0.3), c(0.6, 0.0))]
            .iter()
            .map(|&(z, w)| (vec![z], vec![w]))
            .collect();
    let f = SampledField::from_fn(group_lattice(6.5, 0.5, 5.0, 0.5), FieldMeta { n: 1, ..Default::default() }, |p| {
        c(1.0 + 0.4 * p[0], -0.3 * p[1]) * (-(p[0] * p[0] + p[1] * p[1]) / 2.0 - p[2] * p[2]).exp()
    });
    for eta in [0.0, 0.4] {
        let check = spectral_factorization_check(&f, 0.5, 1.0, eta, &pts, Axis::symmetric(8.0, 0.5).unwrap(), &q, 1e-6)
            .unwrap();
        assert!(check.residual < 1e-6, "η={eta}: {}", check.residual);
    }
}

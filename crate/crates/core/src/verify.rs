//! Named identity checks grouped into suites.
//!
//! Each check produces a [`VerificationReport`]: the residual of one identity
//! at fixed parameters, the tolerance it is held to and whether it passed.
//! A check that fails to evaluate (a truncation error, say) is reported as
//! failing with the error message attached instead of aborting the suite.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::heatkernel::{default_kernel_quadrature, k_heat, p_twisted, HeatKernel, HeatParams, KernelDomain};
use crate::hgroup::{
    central_slice, convolve, inverse, multiply, polar_decompose, polar_recompose, ComplexGroupPoint, GroupPoint,
};
use crate::lattice::{Axis, FieldMeta, Lattice, SampledField, DEFAULT_DECAY_THRESHOLD};
use crate::numeric::{relative_residual, C64};
use crate::partialweights::{
    calibration_constant, generator_residual, one_dim_scale, oscillation_scan, origin_profile, pde_residual,
    reconstruct_weight_table, signed_disk_demo, vt_plus_pairing, w_minus, w_minus_contour, w_plus_contour,
    w_plus_reduced, w_plus_series_reduced, CompactSpectrumGaussian, ExponentConvention, OneDimGrid, OneDimSample,
    PartialWeightParams, ScanConvention, DEFAULT_R_SCHEDULE, DEFAULT_TRACE_TOL,
};
use crate::specfun::{special_hermite, MultiIndex};
use crate::twisted::{
    bergman_gram, bergman_pairing, heat_transform_lambda, invert, phi_tilde, reproducing_chain,
    reproducing_identity_lhs, reproducing_kernel, spectral_factorization_check, twisted_convolve,
    twisted_translate, twisted_translate_field, weight_lambda_gaussian, BergmanGrid, GaussianMixture, GaussianTerm,
    TwistedParams, TwistedTransformResult,
};

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity_name: String,
    /// The statement being checked, written out.
    pub anchor: String,
    /// Fixed parameters of the check, plus diagnostics that are not held to
    /// the tolerance.
    pub params: BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Seconds spent on the check. Left out of serialized output unless
    /// requested, so that reports are reproducible byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl VerificationReport {
    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    pub fn without_timing(mut self) -> Self {
        self.wall_time_s = None;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Group,
    Kernels,
    Twisted,
    Bergman,
    Partial,
    Appendix,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["group", "kernels", "twisted", "bergman", "partial", "appendix", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Kernels => "kernels",
            Suite::Twisted => "twisted",
            Suite::Bergman => "bergman",
            Suite::Partial => "partial",
            Suite::Appendix => "appendix",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "group" => Suite::Group,
            "kernels" => Suite::Kernels,
            "twisted" => Suite::Twisted,
            "bergman" => Suite::Bergman,
            "partial" => Suite::Partial,
            "appendix" => Suite::Appendix,
            "all" => Suite::All,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown suite `{other}`, expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Runs every check of `suite`, in a fixed order.
pub fn run_suite(suite: Suite, tol: &Tolerances) -> Vec<VerificationReport> {
    match suite {
        Suite::Group => group_suite(tol),
        Suite::Kernels => kernels_suite(tol),
        Suite::Twisted => twisted_suite(tol),
        Suite::Bergman => bergman_suite(tol),
        Suite::Partial => partial_suite(tol),
        Suite::Appendix => appendix_suite(tol),
        Suite::All => [Suite::Group, Suite::Kernels, Suite::Twisted, Suite::Bergman, Suite::Partial, Suite::Appendix]
            .into_iter()
            .flat_map(|s| run_suite(s, tol))
            .collect(),
    }
}

/// A residual with the parameters it was computed at.
struct Outcome {
    params: Vec<(&'static str, f64)>,
    residual: f64,
}

fn outcome(params: &[(&'static str, f64)], residual: f64) -> Result<Outcome> {
    Ok(Outcome { params: params.to_vec(), residual })
}

fn report(
    name: &str,
    anchor: &str,
    tol: &Tolerances,
    result: std::result::Result<Outcome, String>,
    seconds: f64,
) -> VerificationReport {
    let tolerance = tol.get(name);
    let (params, residual, error) = match result {
        Ok(o) => (o.params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(), o.residual, None),
        Err(e) => (BTreeMap::new(), f64::NAN, Some(e)),
    };
    VerificationReport {
        identity_name: name.to_string(),
        anchor: anchor.to_string(),
        params,
        residual,
        tolerance,
        // NaN compares false, so an undefined residual never passes.
        pass: residual <= tolerance,
        error,
        wall_time_s: Some(seconds),
    }
}

fn check(name: &str, anchor: &str, tol: &Tolerances, f: impl FnOnce() -> Result<Outcome>) -> VerificationReport {
    let start = Instant::now();
    let result = f();
    report(name, anchor, tol, result.map_err(|e| e.to_string()), start.elapsed().as_secs_f64())
}

/// Several identities that share one expensive computation. The shared
/// wall time is attributed to each of them.
fn check_group<const K: usize>(
    entries: [(&str, &str); K],
    tol: &Tolerances,
    f: impl FnOnce() -> Result<[Outcome; K]>,
) -> Vec<VerificationReport> {
    let start = Instant::now();
    let result = f();
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(outcomes) => entries
            .iter()
            .zip(outcomes)
            .map(|(&(name, anchor), o)| report(name, anchor, tol, Ok(o), seconds))
            .collect(),
        Err(e) => {
            let msg = e.to_string();
            entries
                .iter()
                .map(|&(name, anchor)| report(name, anchor, tol, Err(msg.clone()), seconds))
                .collect()
        }
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn plane(half: f64, step: f64) -> Result<Lattice> {
    let ax = Axis::symmetric(half, step)?;
    Lattice::new(vec![ax, ax])
}

fn group_lattice(half: f64, step: f64, xi_half: f64, xi_step: f64) -> Result<Lattice> {
    let ax = Axis::symmetric(half, step)?;
    Lattice::new(vec![ax, ax, Axis::symmetric(xi_half, xi_step)?])
}

fn single_point(p: &[f64]) -> Result<Lattice> {
    Lattice::new(p.iter().map(|&x| Axis::new(x, 1.0, 1)).collect::<Result<Vec<_>>>()?)
}

fn lattice_points(lattice: &Lattice) -> Vec<Vec<f64>> {
    (0..lattice.len())
        .map(|i| {
            let mut p = vec![0.0; lattice.dim()];
            lattice.point(i, &mut p);
            p
        })
        .collect()
}

fn complex_points() -> Vec<(Vec<C64>, Vec<C64>)> {
    [(c(0.3, 0.2), c(-0.5, 0.4)), (c(-1.1, -0.3), c(0.2, 0.6)), (c(0.8, 0.7), c(0.9, -0.5)), (c(0.0, 0.0), c(1.2, 0.1))]
        .iter()
        .map(|&(z, w)| (vec![z], vec![w]))
        .collect()
}

fn hermite_field(lattice: &Lattice, a: usize, b: usize, lambda: f64) -> SampledField {
    let (ma, mb) = (MultiIndex::new(vec![a]), MultiIndex::new(vec![b]));
    SampledField::from_fn(lattice.clone(), FieldMeta { n: 1, t: None, lambda: Some(lambda) }, |p| {
        special_hermite(&ma, &mb, lambda, &p[..1], &p[1..]).unwrap_or(C64::new(f64::NAN, 0.0))
    })
}

fn max_coord_diff(p: &GroupPoint, q: &GroupPoint) -> f64 {
    p.x.iter()
        .zip(&q.x)
        .chain(p.u.iter().zip(&q.u))
        .map(|(a, b)| (a - b).abs())
        .fold((p.xi - q.xi).abs(), f64::max)
}

fn group_samples() -> Result<Vec<GroupPoint>> {
    [
        (vec![0.3, -1.2], vec![0.7, 0.4], 0.5),
        (vec![-2.0, 0.1], vec![1.5, -0.9], -1.3),
        (vec![0.0, 0.8], vec![-0.6, 2.2], 2.0),
        (vec![1.1, 1.1], vec![0.0, -0.3], 0.0),
    ]
    .into_iter()
    .map(|(x, u, xi)| GroupPoint::new(x, u, xi))
    .collect()
}

fn group_suite(tol: &Tolerances) -> Vec<VerificationReport> {
    vec![
        check("group_associativity", "(pq)r = p(qr)", tol, || {
            let pts = group_samples()?;
            let mut worst: f64 = 0.0;
            for p in &pts {
                for q in &pts {
                    for r in &pts {
                        let left = multiply(&multiply(p, q)?, r)?;
                        let right = multiply(p, &multiply(q, r)?)?;
                        worst = worst.max(max_coord_diff(&left, &right));
                    }
                }
            }
            outcome(&[("n", 2.0), ("points", pts.len() as f64)], worst)
        }),
        check("group_inverse", "p·p⁻¹ = p⁻¹·p = e", tol, || {
            let pts = group_samples()?;
            let e = GroupPoint::identity(2);
            let mut worst: f64 = 0.0;
            for p in &pts {
                worst = worst.max(max_coord_diff(&multiply(p, &inverse(p))?, &e));
                worst = worst.max(max_coord_diff(&multiply(&inverse(p), p)?, &e));
            }
            outcome(&[("n", 2.0), ("points", pts.len() as f64)], worst)
        }),
        check("polar_round_trip", "every point of the complexified group is h·exp(iX) uniquely", tol, || {
            let samples = [
                (c(0.3, 0.2), c(-0.5, 0.4), c(0.7, -0.1)),
                (c(-1.1, -0.3), c(0.2, 0.6), c(-0.4, 1.5)),
                (c(0.8, 0.7), c(0.9, -0.5), c(0.0, 0.0)),
                (c(2.0, -1.0), c(-1.5, 0.25), c(3.0, -2.0)),
            ];
            let mut worst: f64 = 0.0;
            for (z, w, zeta) in samples {
                let point = ComplexGroupPoint::new(vec![z], vec![w], zeta)?;
                let (h, lie) = polar_decompose(&point);
                let back = polar_recompose(&h, &lie)?;
                let diff = (back.z[0] - z).norm().max((back.w[0] - w).norm()).max((back.zeta - zeta).norm());
                worst = worst.max(diff);
            }
            outcome(&[("n", 1.0), ("points", samples.len() as f64)], worst)
        }),
    ]
}

fn kernels_suite(tol: &Tolerances) -> Vec<VerificationReport> {
    vec![
        check("kernel_origin_value", "k_1(e) = (4π)⁻¹(2π)⁻¹ ∫ e^{−λ²} λ/sinh λ dλ", tol, || {
            // 40-digit adaptive quadrature of the defining integral
            const ORACLE: f64 = 0.02084042188594314533;
            let v = k_heat(&GroupPoint::identity(1), HeatParams::new(1, 1.0)?, &default_kernel_quadrature(1e-11))?;
            outcome(&[("n", 1.0), ("t", 1.0), ("value", v)], rel(v, ORACLE))
        }),
        check("heat_semigroup", "k_t ∗ k_t = k_2t", tol, heat_semigroup),
        check("twisted_semigroup", "p_s^λ ∗_λ p_t^λ = p_(s+t)^λ", tol, twisted_semigroup),
        check("generator_identity", "∂_t p_t^λ = (Δ − λ²(|y|²+|v|²)/4) p_t^λ", tol, || {
            let points = [(0.0, 0.0), (0.5, -0.2), (1.0, 0.3), (-0.7, 0.8), (1.5, -1.1)];
            let mut worst: f64 = 0.0;
            for (y, v) in points {
                worst = worst.max(generator_residual(1.0, 0.5, &[y], &[v], 1e-3)?.residual);
            }
            outcome(&[("lambda", 1.0), ("t", 0.5), ("step", 1e-3)], worst)
        }),
    ]
}

fn heat_semigroup() -> Result<Outcome> {
    let t = 0.5;
    let quad = default_kernel_quadrature(1e-10);
    let k_t = HeatKernel::new(HeatParams::new(1, t)?, KernelDomain::real_box(40.0), &quad)?;
    let k_2t = HeatKernel::new(HeatParams::new(1, 2.0 * t)?, KernelDomain::real_box(4.0), &quad)?;
    let lattice = Lattice::new(vec![
        Axis::symmetric(7.2, 0.4)?,
        Axis::symmetric(7.2, 0.4)?,
        Axis::symmetric(8.0, 0.4)?,
    ])?;
    let sampled = SampledField::from_fn(lattice, FieldMeta { n: 1, t: Some(t), lambda: None }, |p| {
        k_t.eval_coords(&p[..1], &p[1..2], p[2])
    });
    let pts = [
        (0.0, 0.0, 0.0), (0.5, 0.0, 0.0), (0.0, 0.5, 0.3), (1.0, -0.5, 0.5), (-0.8, 0.3, -1.0),
        (1.5, 1.0, 0.2), (0.2, -1.2, 1.5), (-1.0, -1.0, -0.5), (2.0, 0.0, 0.0), (0.3, 0.3, 2.5),
    ];
    let g = |a: &[f64], b: &[f64], xi: f64| k_t.eval_coords(a, b, xi);
    let mut worst: f64 = 0.0;
    for (x, u, xi) in pts {
        let conv = convolve(&sampled, &g, &single_point(&[x, u, xi])?, DEFAULT_DECAY_THRESHOLD)?;
        let want = k_2t.eval_coords(&[x], &[u], xi);
        worst = worst.max((conv.values[0] - want).norm() / want.norm());
    }
    outcome(&[("n", 1.0), ("t", t), ("points", pts.len() as f64), ("step", 0.4)], worst)
}

fn twisted_semigroup() -> Result<Outcome> {
    let out = plane(2.0, 0.5)?;
    let lat = plane(12.0, 0.2)?;
    let mut worst: f64 = 0.0;
    for (lambda, s, t) in [(1.0, 0.25, 0.5), (0.5, 0.4, 0.3), (-2.0, 0.3, 0.3)] {
        let f = SampledField::from_fn(lat.clone(), FieldMeta { n: 1, t: Some(s), lambda: Some(lambda) }, |p| {
            c(p_twisted(lambda, s, &p[..1], &p[1..]).unwrap_or(f64::NAN), 0.0)
        });
        let kernel = |x: &[f64], u: &[f64]| c(p_twisted(lambda, t, x, u).unwrap_or(f64::NAN), 0.0);
        let conv = twisted_convolve(&f, &kernel, lambda, &out, DEFAULT_DECAY_THRESHOLD)?;
        let expected = lattice_points(&out)
            .iter()
            .map(|p| Ok(c(p_twisted(lambda, s + t, &p[..1], &p[1..])?, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        worst = worst.max(relative_residual(&conv.values, &expected));
    }
    outcome(&[("n", 1.0), ("cases", 3.0), ("output_points", out.len() as f64)], worst)
}

fn twisted_suite(tol: &Tolerances) -> Vec<VerificationReport> {
    let mut out = vec![
        check("reproducing_chain", "Gaussian integrals and coth/tanh identities behind the reproducing identity", tol, || {
            let mut worst: f64 = 0.0;
            for t in [0.25, 0.5, 1.0] {
                for step in reproducing_chain(t)? {
                    worst = worst.max(step.residual);
                }
            }
            outcome(&[("lambda", 1.0), ("times", 3.0)], worst)
        }),
        check("reproducing_identity", "⟨τ(−a,−b) p_2t^λ, p_2t^λ⟩_(t,λ) = p_2t^λ(a,b)", tol, reproducing_identity),
        check("eigen_relation", "H_t^λ(Φ_αβ^λ) = e^{−(2|β|+n)λt} Φ_αβ^λ", tol, eigen_relation),
        check("equivariance", "H_t^λ(τ(a,b) f) = τ(a,b) H_t^λ f", tol, || {
            let lambda = 0.9;
            let t = 0.5;
            let f = SampledField::from_fn(plane(11.0, 0.25)?, FieldMeta { n: 1, t: None, lambda: Some(lambda) }, |p| {
                c((-(p[0] * p[0] + p[1] * p[1]) / 2.0).exp() * (1.0 + p[1]), 0.0)
            });
            let (a, b) = ([1.0], [-0.5]);
            let moved = twisted_translate_field(&f, &a, &b, lambda)?;
            let lhs = heat_transform_lambda(&moved, t, lambda, DEFAULT_DECAY_THRESHOLD)?;
            let rhs = twisted_translate(&heat_transform_lambda(&f, t, lambda, DEFAULT_DECAY_THRESHOLD)?, &a, &b)?;
            let pts = complex_points();
            let l: Vec<C64> = pts.iter().map(|(z, w)| lhs.eval(z, w)).collect();
            let r: Vec<C64> = pts.iter().map(|(z, w)| rhs.eval(z, w)).collect();
            outcome(&[("lambda", lambda), ("t", t), ("a", a[0]), ("b", b[0])], relative_residual(&l, &r))
        }),
    ];
    out.extend(check_group(
        [
            ("inversion_error", "F_s = (H_t^λ)* applied with p_(t+s) tends to f as s → 0"),
            ("inversion_decrease", "‖F_s − f‖∞ decreases as s decreases"),
        ],
        tol,
        inversion,
    ));
    out.push(check(
        "spectral_factorization",
        "∫ 𝓗_t f(z,w,ξ+iη) e^{iλξ} dξ = e^{λη−tλ²} H_t^{−λ}(f^λ)(z,w)",
        tol,
        || {
            let q = default_kernel_quadrature(1e-10);
            let pts: Vec<(Vec<C64>, Vec<C64>)> =
                [(c(0.3, 0.2), c(-0.4, 0.1)), (c(-0.5, -0.1), c(0.2, 0.3)), (c(0.0, 0.3), c(0.6, 0.0))]
                    .iter()
                    .map(|&(z, w)| (vec![z], vec![w]))
                    .collect();
            let f = SampledField::from_fn(group_lattice(6.5, 0.5, 5.0, 0.5)?, FieldMeta { n: 1, ..Default::default() }, |p| {
                c(1.0 + 0.4 * p[0], -0.3 * p[1]) * (-(p[0] * p[0] + p[1] * p[1]) / 2.0 - p[2] * p[2]).exp()
            });
            let mut worst: f64 = 0.0;
            for eta in [0.0, 0.4] {
                let check = spectral_factorization_check(&f, 0.5, 1.0, eta, &pts, Axis::symmetric(8.0, 0.5)?, &q, 1e-6)?;
                worst = worst.max(check.residual);
            }
            outcome(&[("t", 0.5), ("lambda", 1.0), ("etas", 2.0), ("points", pts.len() as f64)], worst)
        },
    ));
    out.push(check("slice_convolution", "(f ∗ g)^λ = f^λ ∗_{−λ} g^λ", tol, slice_convolution));
    out
}

fn reproducing_identity() -> Result<Outcome> {
    let pr = TwistedParams::new(1, 0.5, 1.0)?;
    let grid = BergmanGrid::new(0.5, 12.0, 8.0)?;
    let nodes = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut worst: f64 = 0.0;
    for a in nodes {
        for b in nodes {
            let lhs = reproducing_identity_lhs(pr, &[a], &[b], &grid, 1e-6)?;
            let rhs = p_twisted(1.0, 1.0, &[a], &[b])?;
            worst = worst.max((lhs - c(rhs, 0.0)).norm() / rhs);
        }
    }
    outcome(&[("n", 1.0), ("lambda", 1.0), ("t", 0.5), ("grid_points", 25.0), ("step", grid.step)], worst)
}

fn eigen_relation() -> Result<Outcome> {
    let (t, lambda) = (0.5, 1.0);
    let pr = TwistedParams::new(1, t, lambda)?;
    let lat = plane(10.0, 0.4)?;
    let pts = complex_points();
    let mut worst: f64 = 0.0;
    let mut stated: f64 = 0.0;
    for a in 0..=2 {
        for b in 0..=2 {
            let f = hermite_field(&lat, a, b, lambda);
            let numeric = heat_transform_lambda(&f, t, lambda, 1e-6)?;
            let tilde = phi_tilde(pr, &MultiIndex::new(vec![a]), &MultiIndex::new(vec![b]))?;
            let lhs: Vec<C64> = pts.iter().map(|(z, w)| numeric.eval(z, w)).collect();
            let rhs: Vec<C64> = pts.iter().map(|(z, w)| tilde.eval(z, w)).collect();
            worst = worst.max(relative_residual(&lhs, &rhs));
            let scaled: Vec<C64> = rhs.iter().map(|v| v / (2.0 * PI)).collect();
            stated = stated.max(relative_residual(&lhs, &scaled));
        }
    }
    // The variant with an extra (2π)^{-n} is reported for comparison only.
    outcome(&[("n", 1.0), ("t", t), ("lambda", lambda), ("max_index", 2.0), ("with_two_pi_factor", stated)], worst)
}

fn inversion() -> Result<[Outcome; 2]> {
    let pr = TwistedParams::new(1, 0.5, 1.0)?;
    let out = plane(1.0, 1.0)?;
    let grid = BergmanGrid::new(0.6, 11.0, 9.0)?;
    // the ground state e^{−λ(|x|²+|u|²)/4}, up to normalization
    let ground = MultiIndex::zero(1);
    let transform = phi_tilde(pr, &ground, &ground)?;
    let target = lattice_points(&out)
        .iter()
        .map(|p| special_hermite(&ground, &ground, 1.0, &p[..1], &p[1..]))
        .collect::<Result<Vec<_>>>()?;
    let peak = special_hermite(&ground, &ground, 1.0, &[0.0], &[0.0])?.norm();
    let mut errors = Vec::new();
    for s in [1e-1, 1e-2, 1e-3] {
        let fs = invert(&transform, s, &out, &grid, 1e-6)?;
        let err = fs.values.iter().zip(&target).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        errors.push(err / peak);
    }
    let ratio = errors.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    let params = [("t", 0.5), ("lambda", 1.0), ("err_s1e-1", errors[0]), ("err_s1e-2", errors[1]), ("err_s1e-3", errors[2])];
    Ok([
        Outcome { params: params.to_vec(), residual: errors[2] },
        Outcome { params: params.to_vec(), residual: ratio },
    ])
}

fn slice_convolution() -> Result<Outcome> {
    let lambda = 0.8;
    let profile = |x: f64, u: f64| c(1.0 + 0.5 * x, 0.3 * u) * (-(x * x + u * u) / 2.0).exp();
    let f = SampledField::from_fn(group_lattice(6.0, 0.4, 6.0, 0.4)?, FieldMeta { n: 1, ..Default::default() }, |p| {
        profile(p[0], p[1]) * (-p[2] * p[2]).exp()
    });
    let g = |x: &[f64], u: &[f64], xi: f64| c(1.0, x[0] - u[0]) * (-(x[0] * x[0] + 2.0 * u[0] * u[0]) - xi * xi / 2.0).exp();
    let out = group_lattice(0.8, 0.8, 9.0, 0.25)?;
    let conv = convolve(&f, &g, &out, DEFAULT_DECAY_THRESHOLD)?;
    let lhs = central_slice(&conv, lambda, DEFAULT_DECAY_THRESHOLD)?;
    let f_slice = central_slice(&f, lambda, DEFAULT_DECAY_THRESHOLD)?;
    // ∫ e^{iλξ} e^{−ξ²/2} dξ = √(2π) e^{−λ²/2}
    let g_hat = (2.0 * PI).sqrt() * (-lambda * lambda / 2.0).exp();
    let g_slice = |x: &[f64], u: &[f64]| g(x, u, 0.0) * g_hat;
    let plane_out = Lattice::new(out.axes[..2].to_vec())?;
    let rhs = twisted_convolve(&f_slice, &g_slice, -lambda, &plane_out, DEFAULT_DECAY_THRESHOLD)?;
    outcome(&[("lambda", lambda), ("output_points", plane_out.len() as f64)], relative_residual(&lhs.values, &rhs.values))
}

fn bergman_suite(tol: &Tolerances) -> Vec<VerificationReport> {
    vec![
        check("orthonormal_basis", "⟨Φ̃_αβ, Φ̃_γδ⟩_(t,λ) = δ_αγ δ_βδ", tol, || {
            let pr = TwistedParams::new(1, 0.25, 1.0)?;
            let fs = (0..=2)
                .flat_map(|a| (0..=2).map(move |b| (a, b)))
                .map(|(a, b)| phi_tilde(pr, &MultiIndex::new(vec![a]), &MultiIndex::new(vec![b])))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&TwistedTransformResult> = fs.iter().collect();
            let gram = bergman_gram(&refs, &BergmanGrid::new(0.6, 11.0, 7.0)?, 1e-8)?;
            let k = fs.len();
            let worst = (0..k * k)
                .map(|i| (gram[i] - c(if i / k == i % k { 1.0 } else { 0.0 }, 0.0)).norm())
                .fold(0.0, f64::max);
            outcome(&[("n", 1.0), ("t", 0.25), ("lambda", 1.0), ("max_index", 2.0)], worst)
        }),
        check("isometry", "‖H_t^λ f‖²_(t,λ) = ‖f‖²", tol, || {
            let pr = TwistedParams::new(1, 0.5, 1.0)?;
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut worst: f64 = 0.0;
            for _ in 0..5 {
                let terms = (0..3)
                    .map(|_| GaussianTerm {
                        coefficient: c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                        gamma: rng.gen_range(0.3..1.5),
                        a: vec![rng.gen_range(-1.0..1.0)],
                        b: vec![rng.gen_range(-1.0..1.0)],
                    })
                    .collect();
                let mix = GaussianMixture::new(pr, terms)?;
                let tr = mix.transform();
                let grid = BergmanGrid::for_decay(&pr, 2.0 * tr.decay_rate, 30.0, 1.5, 0.6)?;
                let norm = bergman_pairing(&tr, &tr, &grid, 1e-8)?;
                let exact = mix.norm_sq();
                worst = worst.max((norm - c(exact, 0.0)).norm() / exact);
            }
            outcome(&[("t", 0.5), ("lambda", 1.0), ("mixtures", 5.0), ("seed", 7.0)], worst)
        }),
        check("reproducing_kernel", "⟨F, K_(a,b)⟩_(t,λ) = F(a,b)", tol, || {
            let pr = TwistedParams::new(1, 0.5, 1.0)?;
            let k = reproducing_kernel(&[0.6], &[-0.4], 0.5, 1.0)?;
            let mix = GaussianMixture::new(
                pr,
                vec![GaussianTerm { coefficient: c(1.0, -0.3), gamma: 0.6, a: vec![0.4], b: vec![0.2] }],
            )?;
            let tr = mix.transform();
            let pairing = bergman_pairing(&tr, &k, &BergmanGrid::new(0.5, 12.0, 8.0)?, 1e-6)?;
            let value = tr.eval_real(&[0.6], &[-0.4]);
            outcome(&[("t", 0.5), ("lambda", 1.0), ("a", 0.6), ("b", -0.4)], (pairing - value).norm() / value.norm())
        }),
    ]
}

fn partial_suite(tol: &Tolerances) -> Vec<VerificationReport> {
    let mut out = vec![
        check("contour_independence", "W_t^+ does not depend on the contour abscissa", tol, || {
            let mut worst: f64 = 0.0;
            for t in [0.5, 1.0] {
                for y in [0.0, 0.4, 0.9] {
                    for v in [-0.7, 0.0, 0.5] {
                        for eta in [-0.8, 0.0, 1.1] {
                            let values = [0.25, 0.5, 1.0]
                                .iter()
                                .map(|&l| {
                                    let p = PartialWeightParams::new(1, t)?.with_abscissa(l)?;
                                    Ok(w_plus_contour(&p, &[y], &[v], eta)?.value)
                                })
                                .collect::<Result<Vec<f64>>>()?;
                            for w in &values[1..] {
                                worst = worst.max((w - values[0]).abs() / (1.0 + values[0].abs()));
                            }
                        }
                    }
                }
            }
            outcome(&[("n", 1.0), ("points", 54.0)], worst)
        }),
        check("contour_realness", "W_t^+ is real", tol, || {
            let p = PartialWeightParams::new(1, 1.0)?;
            let mut worst: f64 = 0.0;
            for (beta, eta) in [(0.0, 0.0), (1.0, -2.0), (3.0, 0.7), (6.0, -3.0)] {
                worst = worst.max(w_plus_reduced(&p, beta, eta)?.imag_residual);
            }
            outcome(&[("n", 1.0), ("t", 1.0), ("points", 4.0)], worst)
        }),
        check("reconstruction", "e^{−2tλ²} ∫ e^{2λη} W_t^+(iy,iv,iη) dη = W_t^λ(iy,iv)", tol, || {
            let mut worst: f64 = 0.0;
            for t in [0.5, 1.0] {
                let p = PartialWeightParams::new(1, t)?.with_tol(1e-10)?;
                for (y, v) in [(0.0, 0.0), (0.5, -0.3)] {
                    let beta: f64 = y * y + v * v;
                    for r in &reconstruct_weight_table(&p, &[beta], &[0.5, 1.0, 2.0])?[0] {
                        let target = weight_lambda_gaussian(&TwistedParams::new(1, t, r.lambda)?, &[y], &[v])?;
                        worst = worst.max(rel(r.value, target));
                    }
                }
            }
            outcome(&[("n", 1.0), ("times", 2.0), ("lambdas", 3.0)], worst)
        }),
        check("minus_paths", "W_t^−(y,v,η) = W_t^+(y,v,−η)", tol, || {
            let p = PartialWeightParams::new(1, 0.75)?;
            let samples = [
                (0.0, 0.0, 0.5), (0.3, -0.2, -1.0), (0.8, 0.1, 0.2), (-0.5, 0.5, 2.0), (1.2, 0.0, -0.4),
                (0.0, 1.0, 1.5), (0.4, 0.4, -2.5), (-0.9, -0.3, 0.0), (0.2, 1.3, 0.9), (1.5, -1.0, -1.2),
            ];
            let mut worst: f64 = 0.0;
            for (y, v, eta) in samples {
                let direct = w_minus_contour(&p, &[y], &[v], eta)?.value;
                let mirrored = w_plus_contour(&p, &[y], &[v], -eta)?.value;
                worst = worst.max((direct - mirrored).abs() / (1.0 + mirrored.abs()));
            }
            // zero η is where the two signed weights meet
            for (y, v) in [(0.0, 0.0), (0.7, -0.2)] {
                let plus = w_plus_contour(&p, &[y], &[v], 0.0)?.value;
                let minus = w_minus(&p, &[y], &[v], 0.0, 1e-8)?;
                worst = worst.max((plus - minus).abs() / (1.0 + plus.abs()));
            }
            outcome(&[("n", 1.0), ("t", 0.75), ("points", 12.0)], worst)
        }),
        check("pde_residual", "2∂_t U = (Δ_(y,v) + (1−β)∂_η²) U for U = W_t^+", tol, || {
            let mut worst: f64 = 0.0;
            let p = PartialWeightParams::new(1, 0.7)?;
            for (y, v, eta) in [(0.3, -0.4, 0.2), (0.0, 0.5, -0.6), (0.6, 0.2, 1.0)] {
                worst = worst.max(pde_residual(&p, &[y], &[v], eta, 1e-3)?.residual);
            }
            let p2 = PartialWeightParams::new(2, 0.7)?;
            worst = worst.max(pde_residual(&p2, &[0.3, 0.1], &[-0.2, 0.4], 0.3, 1e-3)?.residual);
            outcome(&[("t", 0.7), ("step", 1e-3), ("points", 4.0)], worst)
        }),
    ];
    out.extend(check_group(
        [
            ("signed_disk_diagonal", "⟨zⁿ, zⁿ⟩ = (π/(n+1))(1 − 2^{−(2n+1)}) for the signed disc weight"),
            ("signed_disk_off_diagonal", "distinct monomials are orthogonal for the signed disc weight"),
        ],
        tol,
        || {
            let demo = signed_disk_demo(8)?;
            let mut off: f64 = 0.0;
            for m in 0..=5 {
                for k in 0..=5 {
                    if m != k {
                        off = off.max(demo.entry(m, k).norm());
                    }
                }
            }
            let params = [("max_degree", 8.0), ("equivalence_constant", demo.equivalence_constant)];
            Ok([
                Outcome { params: params.to_vec(), residual: demo.max_diagonal_error },
                Outcome { params: params.to_vec(), residual: off },
            ])
        },
    ));
    out.push(check("one_dim_scale", "‖h_t g‖² / ‖g‖² is the same constant √(2πt) for every g", tol, one_dim));
    out.extend(check_group(
        [
            ("kr_bracket_limit", "∫_{K_R} ⟨𝓗_t f, 𝓗_t f⟩₊ → ‖f‖² as R → ∞"),
            ("kr_bracket_monotone", "∫_{K_R} ⟨𝓗_t f, 𝓗_t f⟩₊ increases with R"),
        ],
        tol,
        || {
            let f = CompactSpectrumGaussian::new(0.5, 0.5, 0.5, 1.5, c(1.0, 0.0))?;
            let trace = vt_plus_pairing(&f, &f, &DEFAULT_R_SCHEDULE, DEFAULT_TRACE_TOL)?;
            let norm = f.norm_sq();
            let limit = trace.limit();
            let drop = trace.values.windows(2).map(|w| (w[0].re - w[1].re).max(0.0)).fold(0.0, f64::max);
            let mut params = vec![
                ("t", 0.5),
                ("gamma", 0.5),
                ("lambda_min", 0.5),
                ("lambda_max", 1.5),
                ("norm_sq", norm),
                ("quadrature_error", trace.quadrature_error),
            ];
            let names = ["trace_r2", "trace_r3", "trace_r4", "trace_r6", "trace_r8"];
            params.extend(names.iter().zip(&trace.values).map(|(&k, v)| (k, v.re / norm)));
            Ok([
                Outcome { params: params.clone(), residual: (limit - c(norm, 0.0)).norm() / norm },
                Outcome { params, residual: drop / limit.norm() },
            ])
        },
    ));
    out.push(check("negativity_witness", "W_t^+ takes negative values along 2η = −β", tol, || {
        let p = PartialWeightParams::new(1, 1.0)?;
        let values = (0..=80)
            .map(|i| Ok(w_plus_reduced(&p, 0.1 * i as f64, -0.05 * i as f64)?.value))
            .collect::<Result<Vec<f64>>>()?;
        let max = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        outcome(&[("t", 1.0), ("beta_max", 8.0), ("min", min), ("max_abs", max)], min / max)
    }));
    out
}

fn one_dim() -> Result<Outcome> {
    let t = 0.5;
    let grid = OneDimGrid { step: 0.1, half_real: 16.0, half_imag: 12.0 };
    let axis = Axis::symmetric(14.0, 0.05)?;
    let functions: Vec<OneDimSample> = vec![
        OneDimSample::from_fn(axis, |x| c((-x * x).exp(), 0.0)),
        OneDimSample::from_fn(axis, |x| c(x * (-0.5 * x * x).exp(), 0.0)),
        OneDimSample::from_fn(axis, |x| c((-(x - 1.0).powi(2)).exp(), 0.3 * (-(x + 0.5).powi(2)).exp())),
        OneDimSample::from_fn(axis, |x| c((1.0 + x * x) * (-0.6 * x * x).exp(), 0.0)),
        OneDimSample::from_fn(axis, |x| C64::from_polar((-0.7 * x * x).exp(), 2.0 * x)),
    ];
    let scales = functions.iter().map(|g| one_dim_scale(g, t, &grid, 1e-12)).collect::<Result<Vec<f64>>>()?;
    let expected = (2.0 * PI * t).sqrt();
    let worst = scales.iter().map(|s| rel(*s, expected)).fold(0.0, f64::max);
    outcome(&[("t", t), ("functions", 5.0), ("scale", scales[0])], worst)
}

fn appendix_suite(tol: &Tolerances) -> Vec<VerificationReport> {
    vec![
        check("series_contour", "series for W_t^+ (with calibrated c) equals the contour value at t/2", tol, || {
            let mut worst: f64 = 0.0;
            let mut count = 0;
            for t in [0.5, 1.0, 2.0, 3.0] {
                for (beta, eta) in [(0.0, 0.3), (0.8, -0.5), (1.7, 0.9), (2.9, -1.2), (4.0, 0.0)] {
                    let series = w_plus_series_reduced(&PartialWeightParams::new(1, t)?, beta, eta, ExponentConvention::Corrected)?;
                    let contour = w_plus_reduced(&PartialWeightParams::new(1, 0.5 * t)?, beta, eta)?;
                    worst = worst.max((series.value - contour.value).abs() / contour.value.abs().max(1e-3 * contour.mass));
                    count += 1;
                }
            }
            outcome(&[("points", count as f64), ("beta_max", 4.0)], worst)
        }),
        check("calibration_constant", "c = 2/π²", tol, || {
            let value = calibration_constant(ExponentConvention::Corrected)?;
            outcome(&[("c", value)], rel(value, 2.0 / (PI * PI)))
        }),
        check("origin_profile_positive", "W_t^+(0,0,η) > 0 for η ≥ 0", tol, || {
            // Over the full window η ∈ [−10t, 10t] the profile dips below
            // zero far on the negative side; that minimum is kept as a
            // diagnostic.
            let mut worst: f64 = f64::NEG_INFINITY;
            let mut params = vec![];
            for (t, key) in [(0.5, "full_grid_min_t0.5"), (1.0, "full_grid_min_t1"), (2.0, "full_grid_min_t2")] {
                let grid = (0..=400)
                    .map(|i| -10.0 * t + 20.0 * t * i as f64 / 400.0)
                    .map(|eta| Ok((eta, origin_profile(eta, t)?)))
                    .collect::<Result<Vec<(f64, f64)>>>()?;
                let max = grid.iter().map(|g| g.1.abs()).fold(0.0, f64::max);
                let half_min = grid.iter().filter(|g| g.0 >= 0.0).map(|g| g.1).fold(f64::INFINITY, f64::min);
                let full_min = grid.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
                worst = worst.max(-half_min / max);
                params.push((key, full_min / max));
            }
            params.push(("grid_points", 401.0));
            Ok(Outcome { params, residual: worst })
        }),
        check("origin_profile_integer_tail", "W_t^+(0,0,−mt) = c√(π/t) Σ_{j≥m} (j+½) e^{−t(j+½)²}", tol, || {
            let c0 = 2.0 / (PI * PI);
            let mut worst: f64 = 0.0;
            for t in [0.5, 1.0, 2.0] {
                for m in 1..=2 {
                    let tail: f64 = (m..m + 40).map(|j| (j as f64 + 0.5) * (-t * (j as f64 + 0.5).powi(2)).exp()).sum();
                    worst = worst.max(rel(origin_profile(-(m as f64) * t, t)?, c0 * (PI / t).sqrt() * tail));
                }
            }
            outcome(&[("times", 3.0), ("m_max", 2.0)], worst)
        }),
        check("oscillation_sign_changes", "the normalized scan along 2η = −β changes sign at least twice", tol, || {
            let printed = oscillation_scan(1.0, 8.0, 400, ExponentConvention::AsPrinted, ScanConvention::Halved)?;
            let corrected = oscillation_scan(1.0, 8.0, 400, ExponentConvention::Corrected, ScanConvention::Halved)?;
            let found = printed.sign_changes.len() as f64;
            outcome(
                &[
                    ("t", 1.0),
                    ("beta_max", 8.0),
                    ("steps", 400.0),
                    ("printed_sign_changes", found),
                    ("corrected_sign_changes", corrected.sign_changes.len() as f64),
                ],
                2.0 - found,
            )
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("kernel".parse::<Suite>().is_err());
    }

    #[test]
    fn failed_evaluation_is_reported_not_raised() {
        let tol = Tolerances::default();
        let r = check("group_inverse", "", &tol, || Err(Error::InvalidParameter("boom".into())));
        assert!(!r.pass);
        assert!(r.residual.is_nan());
        assert!(r.error.unwrap().contains("boom"));
    }

    #[test]
    fn group_suite_passes() {
        let reports = run_suite(Suite::Group, &Tolerances::default());
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r.pass), "{reports:#?}");
    }
}

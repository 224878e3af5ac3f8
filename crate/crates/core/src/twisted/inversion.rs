//! Inversion of `H_t^λ`, the group-level reproducing kernel, the central
//! factorization of the group transform, and the closed-form Gaussian chain
//! behind the reproducing identity for `p_{2t}^λ`.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::bergman::{grid_integrate, weight_lambda, BergmanGrid};
use super::{heat_transform_lambda, translation_phase, TwistedParams, TwistedTransformResult};
use crate::error::{check_dim, invalid, Error, Result};
use crate::heatkernel::{k_heat_analytic, p_twisted_complex, HeatKernel, HeatParams, KernelDomain};
use crate::hgroup::{central_slice, ComplexGroupPoint};
use crate::lattice::{Axis, FieldMeta, Lattice, SampledField};
use crate::numeric::{pairwise_sum, relative_residual, C64, I};
use crate::specfun::QuadratureSpec;

/// `𝓚^t(z, w) = k_{2t}^∼(conj(w)⁻¹ z)`.
pub fn global_kernel(z: &ComplexGroupPoint, w: &ComplexGroupPoint, t: f64, quad: &QuadratureSpec) -> Result<C64> {
    let arg = w.conj().inverse().multiply(z)?;
    k_heat_analytic(&arg, HeatParams::new(z.n(), 2.0 * t)?, quad)
}

/// `F_s(a,b) = ∫ F(z+a, w+b) e^{(iλ/2)(a·w − b·z)} conj(p_{t+s}^λ(z,w)) W_t^λ(z,w) dz dw`
/// at the nodes of `output`, an `R^{2n}` lattice.
pub fn invert(
    f: &TwistedTransformResult,
    s: f64,
    output: &Lattice,
    grid: &BergmanGrid,
    decay_threshold: f64,
) -> Result<SampledField> {
    if !(s > 0.0) {
        return Err(invalid(format!("regularization time s must be positive, got {s}")));
    }
    let params = f.params;
    let n = params.n;
    check_dim(2 * n, output.dim())?;
    let lambda = params.lambda;
    let kernel_time = params.t + s;
    let shifts: Vec<(Vec<f64>, Vec<f64>)> = (0..output.len())
        .map(|i| {
            let mut p = vec![0.0; 2 * n];
            output.point(i, &mut p);
            let (a, b) = p.split_at(n);
            (a.to_vec(), b.to_vec())
        })
        .collect();
    let lattice = grid.lattice(n)?;
    let values = grid_integrate(&lattice, shifts.len(), decay_threshold, |p, out| {
        let (x, rest) = p.split_at(n);
        let (u, rest) = rest.split_at(n);
        let (y, v) = rest.split_at(n);
        let z: Vec<C64> = (0..n).map(|j| C64::new(x[j], y[j])).collect();
        let w: Vec<C64> = (0..n).map(|j| C64::new(u[j], v[j])).collect();
        let zc: Vec<C64> = z.iter().map(|c| c.conj()).collect();
        let wc: Vec<C64> = w.iter().map(|c| c.conj()).collect();
        let weight = weight_lambda(&params, x, u, y, v).expect("dimensions fixed by the grid");
        let kernel = p_twisted_complex(C64::new(lambda, 0.0), kernel_time, &zc, &wc).expect("real λ")
            * weight;
        let mut mag = 0.0f64;
        for (k, (a, b)) in shifts.iter().enumerate() {
            let za: Vec<C64> = z.iter().zip(a).map(|(c, s)| c + s).collect();
            let wb: Vec<C64> = w.iter().zip(b).map(|(c, s)| c + s).collect();
            let phase = translation_phase(-lambda, a, b, &z, &w);
            out[k] = f.eval(&za, &wb) * phase * kernel;
            mag = mag.max(out[k].norm());
        }
        mag
    })?;
    SampledField::new(
        output.clone(),
        values,
        FieldMeta { n, t: Some(params.t), lambda: Some(lambda) },
    )
}

/// Both sides of the central factorization at one `η`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationCheck {
    pub eta: f64,
    /// `∫ 𝓗_t(f)(z, w, ξ+iη) e^{iλξ} dξ` at each point.
    pub lhs: Vec<C64>,
    /// `e^{λη} e^{−tλ²} H_t^{−λ}(f^λ)(z, w)` at each point.
    pub rhs: Vec<C64>,
    pub residual: f64,
}

/// Compares the `λ`-slice of the group transform `𝓗_t f` along `Im ζ = η`
/// with the twisted transform of the slice of `f`.
///
/// The left side convolves the samples of `f` with the continued heat
/// kernel and integrates over `xi_axis`; the right side slices `f` first and
/// applies the separable twisted transform. With the group law and slice
/// convention used throughout, group convolution becomes `∗_{−λ}` on
/// slices, so the right side carries `H_t^{−λ}`.
pub fn spectral_factorization_check(
    f: &SampledField,
    t: f64,
    lambda: f64,
    eta: f64,
    points: &[(Vec<C64>, Vec<C64>)],
    xi_axis: Axis,
    quad: &QuadratureSpec,
    decay_threshold: f64,
) -> Result<FactorizationCheck> {
    let d = f.lattice.dim();
    if d < 3 || d % 2 == 0 {
        return Err(Error::IncompatibleLattice(format!("expected a lattice over R^(2n+1), got dimension {d}")));
    }
    let n = (d - 1) / 2;
    if points.is_empty() {
        return Err(invalid("need at least one evaluation point"));
    }
    for (z, w) in points {
        check_dim(n, z.len())?;
        check_dim(n, w.len())?;
    }
    f.check_decay(decay_threshold)?;

    let sources: Vec<(Vec<f64>, C64)> = (0..f.lattice.len())
        .filter(|&i| f.values[i] != C64::new(0.0, 0.0))
        .map(|i| {
            let mut p = vec![0.0; d];
            f.lattice.point(i, &mut p);
            (p, f.values[i])
        })
        .collect();
    let reduced = |z: &[C64], w: &[C64], zeta: C64, h: &[f64]| -> (C64, C64) {
        let (hx, rest) = h.split_at(n);
        let (hu, hxi) = (&rest[..n], rest[n]);
        let mut sympl = C64::new(0.0, 0.0);
        let mut q = C64::new(0.0, 0.0);
        for j in 0..n {
            sympl += hu[j] * z[j] - hx[j] * w[j];
            q += (z[j] - hx[j]).powi(2) + (w[j] - hu[j]).powi(2);
        }
        (zeta - hxi + 0.5 * sympl, q)
    };

    let slices: Vec<(usize, f64)> = (0..points.len())
        .flat_map(|p| (0..xi_axis.count).map(move |k| (p, xi_axis.node(k))))
        .collect();
    let mut domain = KernelDomain::origin();
    for &(p, xi) in &slices {
        let (z, w) = &points[p];
        for (h, _) in &sources {
            let (zeta, q) = reduced(z, w, C64::new(xi, eta), h);
            domain = domain.union(&KernelDomain::of(zeta, q));
        }
    }
    let kernel = HeatKernel::new(HeatParams::new(n, t)?, domain, quad)?;
    let vol = f.lattice.cell_volume();
    let transform: Vec<C64> = slices
        .par_iter()
        .map(|&(p, xi)| {
            let (z, w) = &points[p];
            let terms: Vec<C64> = sources
                .iter()
                .map(|(h, fv)| {
                    let (zeta, q) = reduced(z, w, C64::new(xi, eta), h);
                    fv * kernel.eval_reduced(zeta, q)
                })
                .collect();
            pairwise_sum(&terms) * vol
        })
        .collect();

    let m = xi_axis.count;
    let mut lhs = Vec::with_capacity(points.len());
    for p in 0..points.len() {
        let row = &transform[p * m..(p + 1) * m];
        let peak = row.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let edge = row[0].norm().max(row[m - 1].norm());
        if peak > 0.0 && edge / peak > decay_threshold {
            return Err(Error::Truncation { ratio: edge / peak, threshold: decay_threshold });
        }
        let terms: Vec<C64> = row
            .iter()
            .enumerate()
            .map(|(k, v)| v * C64::from_polar(xi_axis.step, lambda * xi_axis.node(k)))
            .collect();
        lhs.push(pairwise_sum(&terms));
    }

    let slice = central_slice(f, lambda, decay_threshold)?;
    let twisted = heat_transform_lambda(&slice, t, -lambda, decay_threshold)?;
    let scale = (lambda * eta - t * lambda * lambda).exp();
    let rhs: Vec<C64> = points.iter().map(|(z, w)| twisted.eval(z, w) * scale).collect();
    let residual = relative_residual(&lhs, &rhs);
    Ok(FactorizationCheck { eta, lhs, rhs, residual })
}

/// One numerically checked step of the Gaussian chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainStep {
    pub name: &'static str,
    pub residual: f64,
}

fn trapezoid_2d(half: f64, step: f64, center: (f64, f64), f: impl Fn(f64, f64) -> C64 + Sync) -> Result<C64> {
    let lattice = Lattice::new(vec![Axis::centered(center.0, half, step)?, Axis::centered(center.1, half, step)?])?;
    let field = SampledField::from_fn(lattice, FieldMeta::default(), |p| f(p[0], p[1]));
    field.check_decay(1e-12)?;
    Ok(field.integral())
}

/// Checks, at time `t` and `λ = 1`, the two Gaussian integrals and the
/// hyperbolic identities that reduce `⟨τ(−a,−b)p_{2t}, p_{2t}⟩` to
/// `p_{2t}(a,b)`.
pub fn reproducing_chain(t: f64) -> Result<Vec<ChainStep>> {
    if !(t > 0.0) {
        return Err(invalid("time t must be positive"));
    }
    let (c2, t2, s4) = (1.0 / (2.0 * t).tanh(), (2.0 * t).tanh(), (4.0 * t).sinh());
    let c4 = 1.0 / (4.0 * t).tanh();
    let samples = [(0.7, -0.4, 0.3, 0.5), (-1.1, 0.6, -0.2, 0.8), (0.0, 1.3, 0.9, -0.6)];

    let mut shifted = (Vec::new(), Vec::new());
    let mut dual = (Vec::new(), Vec::new());
    for &(a, b, y, v) in &samples {
        let center = (-0.5 * a - v * t2, -0.5 * b + y * t2);
        shifted.0.push(trapezoid_2d(14.0, 0.1, center, |x, u| {
            let (p, q) = (x + 0.5 * a + v * t2, u + 0.5 * b - y * t2);
            (0.5 * I * (a * u - b * x)).exp() * (-0.5 * c2 * (p * p + q * q)).exp()
        })?);
        shifted.1.push(
            2.0 * PI * t2 * (0.5 * I * t2 * (a * y + b * v)).exp() * (-0.125 * t2 * (a * a + b * b)).exp(),
        );
        let half = (45.0 * s4).sqrt() + 1.0;
        dual.0.push(trapezoid_2d(half, 0.1 * s4.sqrt().min(2.0), (0.0, 0.0), |y, v| {
            (-I * (a * y + b * v) / s4).exp() * (-(y * y + v * v) / s4).exp()
        })?);
        dual.1.push(C64::new(PI * s4 * (-0.25 * (a * a + b * b) / s4).exp(), 0.0));
    }
    let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / rhs.abs();
    Ok(vec![
        ChainStep { name: "shifted_gaussian_integral", residual: relative_residual(&shifted.0, &shifted.1) },
        ChainStep { name: "dual_gaussian_integral", residual: relative_residual(&dual.0, &dual.1) },
        ChainStep { name: "coth_plus_tanh", residual: rel(c2 + t2, 2.0 * c4) },
        ChainStep { name: "coth_minus_tanh", residual: rel(c2 - t2, 2.0 / s4) },
        ChainStep { name: "coth_difference", residual: rel(c2 - c4, 1.0 / s4) },
        ChainStep { name: "coth_recombination", residual: rel(c4 + 1.0 / s4, c2) },
    ])
}

/// `⟨τ^λ(−a,−b) p_{2t}^λ, p_{2t}^λ⟩_{t,λ}`, which should equal `p_{2t}^λ(a,b)`.
pub fn reproducing_identity_lhs(
    params: TwistedParams,
    a: &[f64],
    b: &[f64],
    grid: &BergmanGrid,
    decay_threshold: f64,
) -> Result<C64> {
    let p2t = super::twisted_kernel_extension(params, 2.0 * params.t)?;
    let neg_a: Vec<f64> = a.iter().map(|s| -s).collect();
    let neg_b: Vec<f64> = b.iter().map(|s| -s).collect();
    let shifted = super::twisted_translate(&p2t, &neg_a, &neg_b)?;
    super::bergman_pairing(&shifted, &p2t, grid, decay_threshold)
}

//! Weighted `L²` structure on `C^{2n}`: the twisted Bergman weight, its Fock
//! picture, and grid quadrature for the pairings.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{TwistedParams, TwistedTransformResult};
use crate::error::{check_dim, invalid, Error, Result};
use crate::lattice::{Axis, Lattice};
use crate::numeric::{ellipse_half_widths, pairwise_sum, x_coth, x_over_sinh, C64, CHUNK};
use crate::specfun::MultiIndex;

/// `λ coth(2tλ)`, positive for every real `λ ≠ 0`.
fn doubled_coth(params: &TwistedParams) -> f64 {
    x_coth(params.lambda, 2.0 * params.t)
}

/// `(λ / (π sinh 2tλ))^n`, the weight's value at `y = v = 0`.
pub fn weight_constant(params: &TwistedParams) -> f64 {
    (x_over_sinh(params.lambda, 2.0 * params.t) / PI).powi(params.n as i32)
}

/// `W_t^λ(x+iy, u+iv) = 4^n e^{λ(u·y − v·x)} p_{2t}^λ(2y, 2v)`.
pub fn weight_lambda(params: &TwistedParams, x: &[f64], u: &[f64], y: &[f64], v: &[f64]) -> Result<f64> {
    let n = params.n;
    for s in [x, u, y, v] {
        check_dim(n, s.len())?;
    }
    let sympl: f64 = (0..n).map(|j| u[j] * y[j] - v[j] * x[j]).sum();
    Ok((params.lambda * sympl).exp() * weight_lambda_gaussian(params, y, v)?)
}

/// The `(x,u)`-free factor `4^n p_{2t}^λ(2y, 2v)` of the weight.
pub fn weight_lambda_gaussian(params: &TwistedParams, y: &[f64], v: &[f64]) -> Result<f64> {
    check_dim(params.n, y.len())?;
    check_dim(params.n, v.len())?;
    let r2: f64 = y.iter().chain(v).map(|s| s * s).sum();
    Ok(weight_constant(params) * (-doubled_coth(params) * r2).exp())
}

/// Weight values at a list of complex points.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightLambda {
    pub params: TwistedParams,
    pub values: Vec<f64>,
}

impl WeightLambda {
    pub fn sample(params: TwistedParams, points: &[(Vec<C64>, Vec<C64>)]) -> Result<Self> {
        let values = points
            .iter()
            .map(|(z, w)| {
                let re = |s: &[C64]| s.iter().map(|c| c.re).collect::<Vec<_>>();
                let im = |s: &[C64]| s.iter().map(|c| c.im).collect::<Vec<_>>();
                weight_lambda(&params, &re(z), &re(w), &im(z), &im(w))
            })
            .collect::<Result<_>>()?;
        Ok(Self { params, values })
    }
}

/// Uniform grid on the box `|x_j|, |u_j| <= half_real`, `|y_j|, |v_j| <= half_imag`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BergmanGrid {
    pub step: f64,
    pub half_real: f64,
    pub half_imag: f64,
}

impl BergmanGrid {
    pub fn new(step: f64, half_real: f64, half_imag: f64) -> Result<Self> {
        if !(step > 0.0 && half_real > 0.0 && half_imag > 0.0) {
            return Err(invalid("grid step and half widths must be positive"));
        }
        Ok(Self { step, half_real, half_imag })
    }

    /// Box for integrands `F conj(G) W` where `|F| ≲ e^{-k_F Re(z·z+w·w)}`,
    /// `k_F + k_G = rate_sum`: the level set `{exponent <= tail}` of the joint
    /// Gaussian envelope, widened by `margin` to absorb translations.
    pub fn for_decay(params: &TwistedParams, rate_sum: f64, tail: f64, margin: f64, step: f64) -> Result<Self> {
        let lc = doubled_coth(params);
        let (hr, hi) = ellipse_half_widths(rate_sum, 0.5 * params.lambda.abs(), lc - rate_sum, tail)?;
        Self::new(step, hr + margin, hi + margin)
    }

    /// Lattice with axes `x.., u.., y.., v..`.
    pub fn lattice(&self, n: usize) -> Result<Lattice> {
        let re = Axis::symmetric(self.half_real, self.step)?;
        let im = Axis::symmetric(self.half_imag, self.step)?;
        let mut axes = vec![re; 2 * n];
        axes.extend(vec![im; 2 * n]);
        Lattice::new(axes)
    }
}

/// Deterministic lattice quadrature of `width` integrands at once.
///
/// `f` writes the integrands at one node into its output slice and returns a
/// nonnegative magnitude used for the truncation check at the box boundary.
pub(crate) fn grid_integrate<F>(lattice: &Lattice, width: usize, decay_threshold: f64, f: F) -> Result<Vec<C64>>
where
    F: Fn(&[f64], &mut [C64]) -> f64 + Sync,
{
    let d = lattice.dim();
    let len = lattice.len();
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<(Vec<C64>, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let mut p = vec![0.0; d];
            let mut idx = vec![0usize; d];
            let mut rows = vec![C64::new(0.0, 0.0); (hi - lo) * width];
            let (mut edge, mut inner) = (0.0f64, 0.0f64);
            for (r, i) in (lo..hi).enumerate() {
                lattice.point(i, &mut p);
                lattice.multi_index(i, &mut idx);
                let mag = f(&p, &mut rows[r * width..(r + 1) * width]);
                if lattice.is_boundary(&idx) {
                    edge = edge.max(mag);
                } else {
                    inner = inner.max(mag);
                }
            }
            let sums = (0..width)
                .map(|k| {
                    let col: Vec<C64> = (0..hi - lo).map(|r| rows[r * width + k]).collect();
                    pairwise_sum(&col)
                })
                .collect();
            (sums, edge, inner)
        })
        .collect();
    let edge = partial.iter().map(|p| p.1).fold(0.0, f64::max);
    let inner = partial.iter().map(|p| p.2).fold(0.0, f64::max);
    if inner > 0.0 && edge / inner > decay_threshold {
        return Err(Error::Truncation { ratio: edge / inner, threshold: decay_threshold });
    }
    let vol = lattice.cell_volume();
    Ok((0..width)
        .map(|k| {
            let col: Vec<C64> = partial.iter().map(|p| p.0[k]).collect();
            pairwise_sum(&col) * vol
        })
        .collect())
}

fn shared_params(fs: &[&TwistedTransformResult]) -> Result<TwistedParams> {
    let first = fs.first().ok_or_else(|| invalid("need at least one function"))?.params;
    if fs.iter().any(|f| f.params != first) {
        return Err(invalid("functions in a pairing must share (n, t, λ)"));
    }
    Ok(first)
}

fn split_point(p: &[f64], n: usize, z: &mut [C64], w: &mut [C64]) {
    for j in 0..n {
        z[j] = C64::new(p[j], p[2 * n + j]);
        w[j] = C64::new(p[n + j], p[3 * n + j]);
    }
}

/// All pairings `⟨F_i, F_j⟩ = ∫ F_i conj(F_j) W_t^λ` (row-major `k × k`).
pub fn bergman_gram(fs: &[&TwistedTransformResult], grid: &BergmanGrid, decay_threshold: f64) -> Result<Vec<C64>> {
    let params = shared_params(fs)?;
    let n = params.n;
    let k = fs.len();
    let lattice = grid.lattice(n)?;
    grid_integrate(&lattice, k * k, decay_threshold, |p, out| {
        let (mut z, mut w) = (vec![C64::default(); n], vec![C64::default(); n]);
        split_point(p, n, &mut z, &mut w);
        let (x, rest) = p.split_at(n);
        let (u, rest) = rest.split_at(n);
        let (y, v) = rest.split_at(n);
        let weight = weight_lambda(&params, x, u, y, v).expect("dimensions fixed by the grid");
        let vals: Vec<C64> = fs.iter().map(|f| f.eval(&z, &w)).collect();
        for i in 0..k {
            for j in 0..k {
                out[i * k + j] = vals[i] * vals[j].conj() * weight;
            }
        }
        vals.iter().map(|c| c.norm_sqr()).sum::<f64>() * weight
    })
}

/// `⟨F, G⟩_{t,λ} = ∫ F conj(G) W_t^λ` over the truncated grid.
pub fn bergman_pairing(
    f: &TwistedTransformResult,
    g: &TwistedTransformResult,
    grid: &BergmanGrid,
    decay_threshold: f64,
) -> Result<C64> {
    let params = shared_params(&[f, g])?;
    let n = params.n;
    let lattice = grid.lattice(n)?;
    let out = grid_integrate(&lattice, 1, decay_threshold, |p, out| {
        let (mut z, mut w) = (vec![C64::default(); n], vec![C64::default(); n]);
        split_point(p, n, &mut z, &mut w);
        let (x, rest) = p.split_at(n);
        let (u, rest) = rest.split_at(n);
        let (y, v) = rest.split_at(n);
        let weight = weight_lambda(&params, x, u, y, v).expect("dimensions fixed by the grid");
        let (a, b) = (f.eval(&z, &w), g.eval(&z, &w));
        out[0] = a * b.conj() * weight;
        (a.norm() * b.norm()).max(a.norm_sqr()) * weight
    })?;
    Ok(out[0])
}

/// `F ↦ F(z,w) e^{(λ/4)coth(2tλ)(z·z + w·w)}`, the Fock picture.
pub fn fock_map(f: &TwistedTransformResult) -> TwistedTransformResult {
    let rate = 0.25 * doubled_coth(&f.params);
    let inner = f.clone();
    TwistedTransformResult::from_fn(f.params, f.decay_rate - rate, move |z, w| {
        let q: C64 = z.iter().chain(w).map(|s| s * s).sum();
        inner.eval(z, w) * (rate * q).exp()
    })
}

/// Fock weight `(λ/(π sinh 2tλ))^n e^{λ Im(z·w̄)} e^{−(λ/2)coth(2tλ)(|z|²+|w|²)}`.
pub fn fock_weight(params: &TwistedParams, z: &[C64], w: &[C64]) -> f64 {
    let im: f64 = z.iter().zip(w).map(|(a, b)| (a * b.conj()).im).sum();
    let r2: f64 = z.iter().chain(w).map(|s| s.norm_sqr()).sum();
    weight_constant(params) * (params.lambda * im - 0.5 * doubled_coth(params) * r2).exp()
}

/// `∫ G₁ conj(G₂)` against the Fock weight.
pub fn fock_pairing(
    g1: &TwistedTransformResult,
    g2: &TwistedTransformResult,
    grid: &BergmanGrid,
    decay_threshold: f64,
) -> Result<C64> {
    let params = shared_params(&[g1, g2])?;
    let n = params.n;
    let lattice = grid.lattice(n)?;
    let out = grid_integrate(&lattice, 1, decay_threshold, |p, out| {
        let (mut z, mut w) = (vec![C64::default(); n], vec![C64::default(); n]);
        split_point(p, n, &mut z, &mut w);
        let weight = fock_weight(&params, &z, &w);
        let (a, b) = (g1.eval(&z, &w), g2.eval(&z, &w));
        out[0] = a * b.conj() * weight;
        (a.norm() * b.norm()).max(a.norm_sqr()) * weight
    })?;
    Ok(out[0])
}

/// All Fock pairings `⟨G_i, G_j⟩` (row-major `k × k`).
pub fn fock_gram(gs: &[&TwistedTransformResult], grid: &BergmanGrid, decay_threshold: f64) -> Result<Vec<C64>> {
    let params = shared_params(gs)?;
    let n = params.n;
    let k = gs.len();
    let lattice = grid.lattice(n)?;
    grid_integrate(&lattice, k * k, decay_threshold, |p, out| {
        let (mut z, mut w) = (vec![C64::default(); n], vec![C64::default(); n]);
        split_point(p, n, &mut z, &mut w);
        let weight = fock_weight(&params, &z, &w);
        let vals: Vec<C64> = gs.iter().map(|g| g.eval(&z, &w)).collect();
        for i in 0..k {
            for j in 0..k {
                out[i * k + j] = vals[i] * vals[j].conj() * weight;
            }
        }
        vals.iter().map(|c| c.norm_sqr()).sum::<f64>() * weight
    })
}

/// Grid for Fock pairings of polynomials of total degree at most `degree`:
/// the Gaussian level set at `e^{-30}` widened by the polynomial growth.
pub fn fock_grid(params: &TwistedParams, degree: usize, step: f64) -> Result<BergmanGrid> {
    let half = 0.5 * doubled_coth(params);
    let (hr, hi) = ellipse_half_widths(half, 0.5 * params.lambda.abs(), half, 30.0 + 4.0 * degree as f64)?;
    BergmanGrid::new(step, hr, hi)
}

/// The monomial `z^α w^β` as a function in the Fock picture.
pub fn monomial(params: TwistedParams, alpha: &MultiIndex, beta: &MultiIndex) -> Result<TwistedTransformResult> {
    check_dim(params.n, alpha.dim())?;
    check_dim(params.n, beta.dim())?;
    let (alpha, beta) = (alpha.clone(), beta.clone());
    Ok(TwistedTransformResult::from_fn(params, f64::NEG_INFINITY, move |z, w| {
        let mut out = C64::new(1.0, 0.0);
        for j in 0..z.len() {
            out *= z[j].powu(alpha.0[j] as u32) * w[j].powu(beta.0[j] as u32);
        }
        out
    }))
}

/// Degree-`degree` component of `G` under the diagonal circle action
/// `(z,w) ↦ (e^{iθ}z, e^{iθ}w)`, by an `nodes`-point trapezoid in `θ`
/// (exact for polynomials of degree below `nodes`).
pub fn fock_torus_component(g: &TwistedTransformResult, degree: usize, nodes: usize) -> Result<TwistedTransformResult> {
    if nodes <= degree {
        return Err(invalid("torus average needs more nodes than the degree"));
    }
    let inner = g.clone();
    let phases: Vec<(C64, C64)> = (0..nodes)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / nodes as f64;
            (C64::from_polar(1.0, th), C64::from_polar(1.0 / nodes as f64, -(degree as f64) * th))
        })
        .collect();
    Ok(TwistedTransformResult::from_fn(g.params, g.decay_rate, move |z, w| {
        let terms: Vec<C64> = phases
            .iter()
            .map(|(rot, weight)| {
                let zr: Vec<C64> = z.iter().map(|s| s * rot).collect();
                let wr: Vec<C64> = w.iter().map(|s| s * rot).collect();
                inner.eval(&zr, &wr) * weight
            })
            .collect();
        pairwise_sum(&terms)
    }))
}

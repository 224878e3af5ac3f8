//! Contour quadrature for `W_t^±` and the η-integral that recovers `W_t^λ`.

use std::f64::consts::PI;

use super::{beta_of, Branch, PartialWeightParams};
use crate::error::{check_dim, Error, Result};
use crate::numeric::{ln_x_over_sinh, pairwise_sum, par_map, x_coth_c, C64};

/// Real parts tried for the contour when none is fixed.
const ABSCISSA_MIN: f64 = 0.25;
const ABSCISSA_MAX: f64 = 6.0;
const ABSCISSA_COUNT: usize = 12;
const MAX_HALVINGS: usize = 12;

/// One evaluation of the contour integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourValue {
    pub value: f64,
    /// `|Im| / max(|Re|, 10⁻⁶ · mass)`.
    pub imag_residual: f64,
    /// Real part of the line that was integrated along.
    pub abscissa: f64,
    /// `∫ |integrand| ds`, the scale against which cancellation is measured.
    pub mass: f64,
    pub nodes: usize,
}

/// `ln` of the integrand at `μ`, including the leading `1/(2π)`.
fn log_integrand(n: usize, t: f64, beta: f64, eta: f64, mu: C64) -> Result<C64> {
    let ratio = ln_x_over_sinh(mu, 2.0 * t)?;
    Ok(2.0 * t * mu * mu - 2.0 * eta * mu + n as f64 * (ratio - PI.ln()) - x_coth_c(mu, 2.0 * t)? * beta
        - (2.0 * PI).ln())
}

fn ln_sinh_real(x: f64) -> f64 {
    x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
}

/// Upper bound for the real part of [`log_integrand`] on the line `Re μ = λ`,
/// from `|sinh(a+ib)| >= sinh a`, `Re(μ coth 2tμ) λ >= 0` and
/// `|Im coth(a+ib)| <= 1/sinh 2a`.
fn log_envelope(n: usize, t: f64, beta: f64, eta: f64, lambda: f64, s: f64) -> f64 {
    let a = lambda.abs();
    let mu_abs = (a * a + 0.25 * s * s).sqrt();
    2.0 * t * (a * a - 0.25 * s * s) - 2.0 * eta * lambda
        + n as f64 * (mu_abs.ln() - ln_sinh_real(2.0 * t * a) - PI.ln())
        + 0.5 * beta * s.abs() / (4.0 * t * a).sinh()
        - (2.0 * PI).ln()
}

struct Line {
    lambda: f64,
    peak: f64,
    reach: f64,
}

/// Walks the line outward in steps of at most `|λ|/2`, recording the peak of
/// `ln|integrand|`, until the envelope guarantees the rest is negligible.
/// Gives up as soon as the peak exceeds `give_up_above`.
fn probe(n: usize, t: f64, beta: f64, eta: f64, lambda: f64, tol: f64, give_up_above: f64) -> Result<Option<Line>> {
    let a = lambda.abs();
    let step = (0.5 * a).min(0.5);
    let sh = (4.0 * t * a).sinh();
    let vertex = if sh.is_finite() { beta / (2.0 * t * sh) } else { 0.0 };
    let monotone_from = vertex + n as f64 / (2.0 * t * a);
    let mut peak = f64::NEG_INFINITY;
    let mut k = 0usize;
    loop {
        let s = k as f64 * step;
        peak = peak.max(log_integrand(n, t, beta, eta, C64::new(lambda, 0.5 * s))?.re);
        if peak > give_up_above {
            return Ok(None);
        }
        if s > monotone_from && log_envelope(n, t, beta, eta, lambda, s) < peak + tol.ln() - 12.0 {
            return Ok(Some(Line { lambda, peak, reach: s }));
        }
        k += 1;
        if s > 1e4 {
            return Err(Error::NonConvergence(format!("contour at Re μ = {lambda} does not decay")));
        }
    }
}

fn choose_line(params: &PartialWeightParams, beta: f64, eta: f64, sign: f64) -> Result<Line> {
    let (n, t, tol) = (params.n, params.t, params.tol);
    if let Some(l) = params.abscissa {
        return probe(n, t, beta, eta, l, tol, f64::INFINITY).map(|line| line.expect("no give-up bound"));
    }
    let ratio = (ABSCISSA_MAX / ABSCISSA_MIN).powf(1.0 / (ABSCISSA_COUNT - 1) as f64);
    let mut best: Option<Line> = None;
    for i in (0..ABSCISSA_COUNT).rev() {
        let lambda = sign * ABSCISSA_MIN * ratio.powi(i as i32);
        let bound = best.as_ref().map_or(f64::INFINITY, |b| b.peak + 1.0);
        if let Some(line) = probe(n, t, beta, eta, lambda, tol, bound)? {
            if best.as_ref().map_or(true, |b| line.peak < b.peak) {
                best = Some(line);
            }
        }
    }
    Ok(best.expect("the first candidate is never abandoned"))
}

/// Trapezoid sums over `±s` at the given nodes: `(Σ f, Σ |f|)`.
fn node_sums(n: usize, t: f64, beta: f64, eta: f64, lambda: f64, s: &[f64]) -> Result<(C64, f64)> {
    let mut vals = Vec::with_capacity(2 * s.len());
    for &sk in s {
        vals.push(log_integrand(n, t, beta, eta, C64::new(lambda, 0.5 * sk))?.exp());
        if sk != 0.0 {
            vals.push(log_integrand(n, t, beta, eta, C64::new(lambda, -0.5 * sk))?.exp());
        }
    }
    let abs: Vec<f64> = vals.iter().map(|c| c.norm()).collect();
    Ok((pairwise_sum(&vals), pairwise_sum(&abs)))
}

fn contour(params: &PartialWeightParams, beta: f64, eta: f64, branch: Branch) -> Result<ContourValue> {
    params.check_branch(branch)?;
    let sign = if branch == Branch::Plus { 1.0 } else { -1.0 };
    let (n, t) = (params.n, params.t);
    let line = choose_line(params, beta, eta, sign)?;
    let mut h = (line.lambda.abs() / 8.0).min(0.125);
    let count = (line.reach / h).ceil() as usize;
    let coarse: Vec<f64> = (0..=count).map(|k| k as f64 * h).collect();
    let (mut sum, mut abs) = node_sums(n, t, beta, eta, line.lambda, &coarse)?;
    let mut nodes = 2 * count + 1;
    let mut intervals = count;
    let mut prev = sum * h;
    for _ in 0..MAX_HALVINGS {
        let mids: Vec<f64> = (0..intervals).map(|k| (k as f64 + 0.5) * h).collect();
        intervals *= 2;
        let (ms, ma) = node_sums(n, t, beta, eta, line.lambda, &mids)?;
        sum += ms;
        abs += ma;
        nodes += 2 * mids.len();
        h *= 0.5;
        let value = sum * h;
        let mass = abs * h;
        if (value - prev).norm() <= params.tol * mass {
            let floor = 1e-6 * mass;
            let imag_residual = value.im.abs() / value.re.abs().max(floor);
            if imag_residual > params.imag_tol {
                return Err(Error::ImaginaryResidual { residual: imag_residual, tolerance: params.imag_tol });
            }
            return Ok(ContourValue { value: value.re, imag_residual, abscissa: line.lambda, mass, nodes });
        }
        prev = value;
    }
    Err(Error::NonConvergence(format!(
        "contour trapezoid for (β, η) = ({beta}, {eta}) did not settle after {MAX_HALVINGS} halvings"
    )))
}

/// `W_t^+(iy, iv, iη)` as a function of `β = |y|² + |v|²` and `η`.
pub fn w_plus_reduced(params: &PartialWeightParams, beta: f64, eta: f64) -> Result<ContourValue> {
    contour(params, beta, eta, Branch::Plus)
}

/// `W_t^+(iy, iv, iη)` by contour quadrature.
pub fn w_plus_contour(params: &PartialWeightParams, y: &[f64], v: &[f64], eta: f64) -> Result<ContourValue> {
    check_dim(params.n, y.len())?;
    check_dim(params.n, v.len())?;
    w_plus_reduced(params, beta_of(y, v), eta)
}

/// `W_t^+(z, w, ζ)` at a general point, through the polar decomposition.
pub fn w_plus_at(params: &PartialWeightParams, z: &[C64], w: &[C64], zeta: C64) -> Result<ContourValue> {
    check_dim(params.n, z.len())?;
    check_dim(params.n, w.len())?;
    let beta: f64 = z.iter().chain(w).map(|c| c.im * c.im).sum();
    let sympl: f64 = z.iter().zip(w).map(|(a, b)| a.re * b.im - b.re * a.im).sum();
    w_plus_reduced(params, beta, zeta.im - 0.5 * sympl)
}

/// `W_t^−(z, w, ζ)` at a general point, through the same polar shift as
/// [`w_plus_at`]. Both evaluation paths of [`w_minus`] must agree within
/// `path_tol`.
pub fn w_minus_at(params: &PartialWeightParams, z: &[C64], w: &[C64], zeta: C64, path_tol: f64) -> Result<f64> {
    check_dim(params.n, z.len())?;
    check_dim(params.n, w.len())?;
    let y: Vec<f64> = z.iter().map(|c| c.im).collect();
    let v: Vec<f64> = w.iter().map(|c| c.im).collect();
    let sympl: f64 = z.iter().zip(w).map(|(a, b)| a.re * b.im - b.re * a.im).sum();
    w_minus(params, &y, &v, zeta.im - 0.5 * sympl, path_tol)
}

/// `W_t^−(iy, iv, iη)` along a line with negative real part.
pub fn w_minus_contour(params: &PartialWeightParams, y: &[f64], v: &[f64], eta: f64) -> Result<ContourValue> {
    check_dim(params.n, y.len())?;
    check_dim(params.n, v.len())?;
    contour(params, beta_of(y, v), eta, Branch::Minus)
}

/// `W_t^−(iy, iv, iη) = W_t^+(iy, iv, −iη)`.
pub fn w_minus_reflection(params: &PartialWeightParams, y: &[f64], v: &[f64], eta: f64) -> Result<ContourValue> {
    let mut mirrored = *params;
    mirrored.abscissa = params.abscissa.map(f64::abs);
    w_plus_contour(&mirrored, y, v, -eta)
}

/// `W_t^−` by both paths; fails when they disagree by more than `path_tol`
/// relative to the larger value (floored at `10⁻⁶` of the contour mass).
pub fn w_minus(params: &PartialWeightParams, y: &[f64], v: &[f64], eta: f64, path_tol: f64) -> Result<f64> {
    let direct = w_minus_contour(params, y, v, eta)?;
    let mirrored = w_minus_reflection(params, y, v, eta)?;
    let scale = direct.value.abs().max(mirrored.value.abs()).max(1e-6 * direct.mass.max(mirrored.mass));
    let difference = (direct.value - mirrored.value).abs() / scale;
    if difference > path_tol {
        return Err(Error::PathDisagreement { difference, tolerance: path_tol });
    }
    Ok(direct.value)
}

/// `e^{−2tλ²} ∫ e^{2λη} W_t^+(iy, iv, iη) dη` computed by quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconstructedWeight {
    pub lambda: f64,
    pub beta: f64,
    pub value: f64,
    pub eta_range: (f64, f64),
    pub step: f64,
    pub nodes: usize,
}

/// Reconstruction at one point; compare with `weight_lambda_gaussian`.
pub fn reconstruct_weight(params: &PartialWeightParams, y: &[f64], v: &[f64], lambda: f64) -> Result<ReconstructedWeight> {
    check_dim(params.n, y.len())?;
    check_dim(params.n, v.len())?;
    let row = reconstruct_weight_table(params, &[beta_of(y, v)], &[lambda])?;
    Ok(row[0][0])
}

/// Reconstructions for every `(β, λ)` pair, entry `[i][j]` for `betas[i]`
/// and `lambdas[j]`. The `W_t^+` samples of one `β` are shared by all `λ`.
pub fn reconstruct_weight_table(
    params: &PartialWeightParams,
    betas: &[f64],
    lambdas: &[f64],
) -> Result<Vec<Vec<ReconstructedWeight>>> {
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(crate::error::invalid("reconstruction needs positive λ values"));
    }
    if betas.iter().any(|&b| !(b >= 0.0 && b.is_finite())) {
        return Err(crate::error::invalid("β = |y|² + |v|² must be nonnegative"));
    }
    betas.iter().map(|&beta| reconstruct_row(params, beta, lambdas)).collect()
}

fn reconstruct_row(params: &PartialWeightParams, beta: f64, lambdas: &[f64]) -> Result<Vec<ReconstructedWeight>> {
    let t = params.t;
    let eval = |etas: &[f64]| -> Result<Vec<f64>> {
        par_map(etas.len(), |i| w_plus_reduced(params, beta, etas[i]).map(|c| c.value)).into_iter().collect()
    };
    let lmin = lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
    let lmax = lambdas.iter().cloned().fold(0.0, f64::max);
    let h0 = 0.25 * t.sqrt().min(1.0);
    let mut lo = (-(0.5 * beta + 8.0 * t.sqrt() + 12.0 / lmin) / h0).floor() as i64;
    let mut hi = ((2.0 * t * lmax + 8.0 * t.sqrt()) / h0).ceil() as i64;
    let mut base: Vec<(i64, f64)> = {
        let etas: Vec<f64> = (lo..=hi).map(|k| k as f64 * h0).collect();
        (lo..=hi).zip(eval(&etas)?).collect()
    };
    let weight = |lambda: f64, eta: f64| (2.0 * lambda * eta - 2.0 * t * lambda * lambda).exp();
    // Grow the window until, for every λ, the last few samples on each side
    // are negligible against the largest one.
    let edge_tol = 1e-3 * params.tol;
    for _ in 0..40 {
        let (mut grow_lo, mut grow_hi) = (false, false);
        for &lambda in lambdas {
            let mags: Vec<f64> = base.iter().map(|&(k, w)| (w * weight(lambda, k as f64 * h0)).abs()).collect();
            let peak = mags.iter().cloned().fold(0.0, f64::max);
            let m = mags.len();
            grow_lo |= mags[..4].iter().any(|&g| g > edge_tol * peak);
            grow_hi |= mags[m - 4..].iter().any(|&g| g > edge_tol * peak);
        }
        if !grow_lo && !grow_hi {
            break;
        }
        let span = (hi - lo) / 2 + 1;
        if grow_lo {
            let ks: Vec<i64> = (lo - span..lo).collect();
            let vals = eval(&ks.iter().map(|&k| k as f64 * h0).collect::<Vec<_>>())?;
            let mut fresh: Vec<(i64, f64)> = ks.into_iter().zip(vals).collect();
            fresh.extend(base);
            base = fresh;
            lo -= span;
        }
        if grow_hi {
            let ks: Vec<i64> = (hi + 1..=hi + span).collect();
            let vals = eval(&ks.iter().map(|&k| k as f64 * h0).collect::<Vec<_>>())?;
            base.extend(ks.into_iter().zip(vals));
            hi += span;
        }
        if hi - lo > 50_000 {
            return Err(Error::Truncation { ratio: f64::NAN, threshold: edge_tol });
        }
    }
    let (a, b) = (lo as f64 * h0, hi as f64 * h0);
    let mut samples: Vec<(f64, f64)> = base.iter().map(|&(k, w)| (k as f64 * h0, w)).collect();
    let sums = |samples: &[(f64, f64)]| -> Vec<(f64, f64)> {
        lambdas
            .iter()
            .map(|&l| {
                let terms: Vec<f64> = samples.iter().map(|&(e, w)| w * weight(l, e)).collect();
                let abs: Vec<f64> = terms.iter().map(|x| x.abs()).collect();
                (pairwise_sum(&terms), pairwise_sum(&abs))
            })
            .collect()
    };
    let mut acc = sums(&samples);
    let mut h = h0;
    let mut prev: Vec<f64> = acc.iter().map(|s| s.0 * h).collect();
    for _ in 0..MAX_HALVINGS {
        let count = ((b - a) / h).round() as usize;
        let etas: Vec<f64> = (0..count).map(|j| a + (j as f64 + 0.5) * h).collect();
        let mids: Vec<(f64, f64)> = etas.iter().cloned().zip(eval(&etas)?).collect();
        for (s, m) in acc.iter_mut().zip(sums(&mids)) {
            s.0 += m.0;
            s.1 += m.1;
        }
        samples.extend(mids);
        h *= 0.5;
        let cur: Vec<f64> = acc.iter().map(|s| s.0 * h).collect();
        let settled = cur.iter().zip(&prev).zip(&acc).all(|((c, p), s)| (c - p).abs() <= params.tol * s.1 * h);
        if settled {
            return Ok(lambdas
                .iter()
                .zip(cur)
                .map(|(&lambda, value)| ReconstructedWeight {
                    lambda,
                    beta,
                    value,
                    eta_range: (a, b),
                    step: h,
                    nodes: samples.len(),
                })
                .collect());
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!("η-quadrature for β = {beta} did not settle")))
}

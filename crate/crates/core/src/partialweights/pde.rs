//! Central-difference residuals of the two evolution equations:
//! `2∂_t U = (Δ_{y,v} + (1 − |y|² − |v|²) ∂_η²) U` for `U = W_t^+(iy, iv, iη)`,
//! and `∂_t p_t^λ = (Δ − (λ²/4)(|y|² + |v|²)) p_t^λ`.

use super::contour::w_plus_contour;
use super::{beta_of, PartialWeightParams};
use crate::error::{check_dim, invalid, Result};
use crate::heatkernel::p_twisted;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdeResidual {
    /// The time-derivative side.
    pub lhs: f64,
    /// The spatial side.
    pub rhs: f64,
    /// `|lhs − rhs| / max(|lhs|, |rhs|, |value|)`.
    pub residual: f64,
    pub value: f64,
}

impl PdeResidual {
    fn new(lhs: f64, rhs: f64, value: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(value.abs());
        let residual = if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 };
        Self { lhs, rhs, residual, value }
    }
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("difference step must be positive, got {h}")))
    }
}

/// Second difference of `f` along every coordinate of `point`.
fn laplacian<F: Fn(&[f64]) -> Result<f64>>(f: &F, point: &[f64], center: f64, h: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut p = point.to_vec();
    for j in 0..point.len() {
        p[j] = point[j] + h;
        let plus = f(&p)?;
        p[j] = point[j] - h;
        let minus = f(&p)?;
        p[j] = point[j];
        total += (plus - 2.0 * center + minus) / (h * h);
    }
    Ok(total)
}

/// Residual of the `W_t^+` evolution equation at `(y, v, η)`, time `params.t`.
pub fn pde_residual(params: &PartialWeightParams, y: &[f64], v: &[f64], eta: f64, h: f64) -> Result<PdeResidual> {
    check_step(h)?;
    let n = params.n;
    check_dim(n, y.len())?;
    check_dim(n, v.len())?;
    if params.t <= h {
        return Err(invalid("difference step must be smaller than t"));
    }
    let u = |t: f64, yv: &[f64], eta: f64| -> Result<f64> {
        let p = params.with_t(t)?;
        Ok(w_plus_contour(&p, &yv[..n], &yv[n..], eta)?.value)
    };
    let point: Vec<f64> = y.iter().chain(v).cloned().collect();
    let t = params.t;
    let center = u(t, &point, eta)?;
    let dt = (u(t + h, &point, eta)? - u(t - h, &point, eta)?) / (2.0 * h);
    let lap = laplacian(&|p: &[f64]| u(t, p, eta), &point, center, h)?;
    let d_eta = (u(t, &point, eta + h)? - 2.0 * center + u(t, &point, eta - h)?) / (h * h);
    Ok(PdeResidual::new(2.0 * dt, lap + (1.0 - beta_of(y, v)) * d_eta, center))
}

/// Residual of the generator identity for `p_t^λ` at `(y, v)`.
pub fn generator_residual(lambda: f64, t: f64, y: &[f64], v: &[f64], h: f64) -> Result<PdeResidual> {
    check_step(h)?;
    let n = y.len();
    check_dim(n, v.len())?;
    if t <= h {
        return Err(invalid("difference step must be smaller than t"));
    }
    let p = |t: f64, yv: &[f64]| p_twisted(lambda, t, &yv[..n], &yv[n..]);
    let point: Vec<f64> = y.iter().chain(v).cloned().collect();
    let center = p(t, &point)?;
    let dt = (p(t + h, &point)? - p(t - h, &point)?) / (2.0 * h);
    let lap = laplacian(&|q: &[f64]| p(t, q), &point, center, h)?;
    Ok(PdeResidual::new(dt, lap - 0.25 * lambda * lambda * beta_of(y, v) * center, center))
}

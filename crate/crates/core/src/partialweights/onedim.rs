//! The one-dimensional layer: `h_t g = (g ∗ q_t)^∼` with the heat kernel
//! `q_t(x) = (4πt)^{−1/2} e^{−x²/4t}` on `R`, and its Bergman norm
//! `∫∫ |G(x+iy)|² e^{−y²/2t} dx dy`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::lattice::{Axis, Lattice};
use crate::numeric::{pairwise_sum, C64};
use crate::twisted::grid_integrate;

/// `q_t(z)` for complex `z`.
pub fn q_heat(t: f64, z: C64) -> C64 {
    (-z * z / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

/// Samples of a function on `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneDimSample {
    pub axis: Axis,
    pub values: Vec<C64>,
}

impl OneDimSample {
    pub fn from_fn(axis: Axis, f: impl Fn(f64) -> C64) -> Self {
        let values = axis.nodes().into_iter().map(f).collect();
        Self { axis, values }
    }

    /// `∫ |g|²` by the trapezoid rule.
    pub fn norm_sq(&self) -> f64 {
        let terms: Vec<f64> = self.values.iter().map(|c| c.norm_sqr()).collect();
        pairwise_sum(&terms) * self.axis.step
    }

    /// `ĝ(λ) = ∫ e^{iλx} g(x) dx`.
    pub fn fourier(&self, lambda: f64) -> C64 {
        let terms: Vec<C64> = self
            .axis
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&x, &g)| g * C64::from_polar(1.0, lambda * x))
            .collect();
        pairwise_sum(&terms) * self.axis.step
    }

    fn check_decay(&self, threshold: f64) -> Result<()> {
        let peak = self.values.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let m = self.values.len();
        let edge = self.values[0].norm().max(self.values[m - 1].norm());
        if peak > 0.0 && edge / peak > threshold {
            return Err(crate::error::Error::Truncation { ratio: edge / peak, threshold });
        }
        Ok(())
    }
}

/// `h_t g`, evaluable anywhere in `C`.
#[derive(Clone, Debug)]
pub struct OneDimTransform {
    pub t: f64,
    sample: Arc<OneDimSample>,
}

impl OneDimTransform {
    pub fn eval(&self, z: C64) -> C64 {
        let terms: Vec<C64> = self
            .sample
            .axis
            .nodes()
            .iter()
            .zip(&self.sample.values)
            .map(|(&x, &g)| g * q_heat(self.t, z - x))
            .collect();
        pairwise_sum(&terms) * self.sample.axis.step
    }
}

pub fn one_dim_transform(g: &OneDimSample, t: f64, decay_threshold: f64) -> Result<OneDimTransform> {
    if !(t > 0.0) {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    g.check_decay(decay_threshold)?;
    Ok(OneDimTransform { t, sample: Arc::new(g.clone()) })
}

/// Box `|x| <= half_real`, `|y| <= half_imag` sampled at `step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneDimGrid {
    pub step: f64,
    pub half_real: f64,
    pub half_imag: f64,
}

pub fn one_dim_bergman_norm(transform: &OneDimTransform, grid: &OneDimGrid, decay_threshold: f64) -> Result<f64> {
    let lattice = Lattice::new(vec![
        Axis::symmetric(grid.half_real, grid.step)?,
        Axis::symmetric(grid.half_imag, grid.step)?,
    ])?;
    let t = transform.t;
    let total = grid_integrate(&lattice, 1, decay_threshold, |p, out| {
        let value = transform.eval(C64::new(p[0], p[1])).norm_sqr() * (-p[1] * p[1] / (2.0 * t)).exp();
        out[0] = C64::new(value, 0.0);
        value
    })?;
    Ok(total[0].re)
}

/// `‖h_t g‖² / ‖g‖²`.
pub fn one_dim_scale(g: &OneDimSample, t: f64, grid: &OneDimGrid, decay_threshold: f64) -> Result<f64> {
    let transform = one_dim_transform(g, t, decay_threshold)?;
    let norm = g.norm_sq();
    if norm == 0.0 {
        return Err(invalid("the scale constant is undefined for g = 0"));
    }
    Ok(one_dim_bergman_norm(&transform, grid, decay_threshold)? / norm)
}

/// Where the Fourier transform `ĝ(λ) = ∫ e^{iλx} g` lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchTag {
    Plus,
    Minus,
    Mixed,
    Zero,
}

/// Classifies `g` by the share of `∫|ĝ|²` on each half-line, resolved up to
/// the Nyquist frequency of the samples. A side counts as empty when its
/// share is below `tol`.
pub fn branch_of(g: &OneDimSample, tol: f64) -> BranchTag {
    const NODES: usize = 1024;
    let nyquist = PI / g.axis.step;
    let dl = nyquist / NODES as f64;
    let side = |sign: f64| {
        let terms: Vec<f64> = (1..=NODES).map(|k| g.fourier(sign * k as f64 * dl).norm_sqr()).collect();
        pairwise_sum(&terms) * dl
    };
    let (plus, minus) = (side(1.0), side(-1.0));
    let total = plus + minus;
    if total == 0.0 {
        BranchTag::Zero
    } else if minus <= tol * total {
        BranchTag::Plus
    } else if plus <= tol * total {
        BranchTag::Minus
    } else {
        BranchTag::Mixed
    }
}

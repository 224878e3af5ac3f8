//! Deterministic summation, hyperbolic helpers with removable singularities,
//! and float formatting shared by every module.
//!
//! Every reduction in the crate goes through [`pairwise_sum`] or
//! [`par_sum`]. The parallel version splits the index range into chunks of
//! fixed size [`CHUNK`], sums each chunk with the pairwise tree, and then sums
//! the chunk results with the same tree. The chunk boundaries never depend on
//! the number of worker threads, so results are bitwise reproducible.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// The imaginary unit.
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Size of the leaf blocks of the parallel reduction tree.
pub const CHUNK: usize = 4096;

const LEAF: usize = 16;

/// Values that can be pairwise-summed.
pub trait Summand: Copy + Send + Sync + std::ops::Add<Output = Self> {
    fn zero() -> Self;
}

impl Summand for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Summand for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
}

/// Pairwise (cascade) summation with a fixed tree: the slice is halved
/// recursively until blocks of at most 16 elements remain, which are summed
/// left to right.
pub fn pairwise_sum<T: Summand>(xs: &[T]) -> T {
    if xs.len() <= LEAF {
        let mut acc = T::zero();
        for &x in xs {
            acc = acc + x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Sum `f(0) + ... + f(len-1)` in parallel with a thread-count independent
/// reduction tree.
pub fn par_sum<T, F>(len: usize, f: F) -> T
where
    T: Summand,
    F: Fn(usize) -> T + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let block: Vec<T> = (lo..hi).map(&f).collect();
            pairwise_sum(&block)
        })
        .collect();
    pairwise_sum(&partial)
}

/// Sum a family of vectors component-wise, each component with the same
/// deterministic tree as [`par_sum`]. `f(i)` must always return `width`
/// entries.
pub fn par_sum_vec<F>(len: usize, width: usize, f: F) -> Vec<C64>
where
    F: Fn(usize) -> Vec<C64> + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<Vec<C64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let rows: Vec<Vec<C64>> = (lo..hi).map(&f).collect();
            (0..width)
                .map(|k| {
                    let col: Vec<C64> = rows.iter().map(|r| r[k]).collect();
                    pairwise_sum(&col)
                })
                .collect()
        })
        .collect();
    (0..width)
        .map(|k| {
            let col: Vec<C64> = partial.iter().map(|r| r[k]).collect();
            pairwise_sum(&col)
        })
        .collect()
}

/// Map `f` over `0..len` in parallel, preserving order.
pub fn par_map<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

/// Format a float with 17 significant digits, which round-trips every `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Threshold below which `x/sinh(tx)` and `x coth(tx)` switch to their Taylor
/// polynomials.
pub const SERIES_SWITCH: f64 = 1e-4;

/// `x / sinh(t x)` for real `x`, including the removable point `x = 0`.
pub fn x_over_sinh(x: f64, t: f64) -> f64 {
    let z = x * t;
    if z.abs() < SERIES_SWITCH {
        (1.0 - z * z / 6.0) / t
    } else {
        x / z.sinh()
    }
}

/// `x coth(t x)` for real `x`, including the removable point `x = 0`.
pub fn x_coth(x: f64, t: f64) -> f64 {
    let z = x * t;
    if z.abs() < SERIES_SWITCH {
        (1.0 + z * z / 3.0) / t
    } else {
        x / z.tanh()
    }
}

/// Distance-based detection of the zeros of `sinh` (the points `iπk`).
fn sinh_zero_index(z: C64) -> Option<i64> {
    let k = (z.im / std::f64::consts::PI).round();
    let d = C64::new(z.re, z.im - k * std::f64::consts::PI).norm();
    if d < 1e-8 {
        Some(k as i64)
    } else {
        None
    }
}

/// Natural log of `sinh(z)` that stays finite for large `|Re z|`.
pub fn ln_sinh(z: C64) -> Result<C64> {
    if let Some(k) = sinh_zero_index(z) {
        return Err(Error::Singularity(format!(
            "sinh vanishes at {z} (multiple {k} of iπ)"
        )));
    }
    if z.re >= 0.0 {
        // sinh z = e^z (1 - e^{-2z}) / 2
        Ok(z + (1.0 - (-2.0 * z).exp()).ln() - std::f64::consts::LN_2)
    } else {
        // sinh z = -sinh(-z)
        let m = -z;
        Ok(m + (1.0 - (-2.0 * m).exp()).ln() - std::f64::consts::LN_2 + I * std::f64::consts::PI)
    }
}

/// `coth z` for complex `z`, stable for large `|Re z|`.
pub fn coth(z: C64) -> Result<C64> {
    if let Some(k) = sinh_zero_index(z) {
        return Err(Error::Singularity(format!(
            "coth has a pole at {z} (multiple {k} of iπ)"
        )));
    }
    if z.re >= 0.0 {
        let e = (-2.0 * z).exp();
        Ok((1.0 + e) / (1.0 - e))
    } else {
        let e = (2.0 * z).exp();
        Ok(-(1.0 + e) / (1.0 - e))
    }
}

/// `ln(x / sinh(t x))` for complex `x`, with the removable point `x = 0`.
pub fn ln_x_over_sinh(x: C64, t: f64) -> Result<C64> {
    let z = x * t;
    if z.norm() < SERIES_SWITCH {
        Ok((1.0 - z * z / 6.0).ln() - t.ln())
    } else {
        Ok(x.ln() - ln_sinh(z)?)
    }
}

/// `x coth(t x)` for complex `x`, with the removable point `x = 0`.
pub fn x_coth_c(x: C64, t: f64) -> Result<C64> {
    let z = x * t;
    if z.norm() < SERIES_SWITCH {
        Ok((1.0 + z * z / 3.0) / t)
    } else {
        Ok(x * coth(z)?)
    }
}

/// Maximum of `|a_i - b_i|` over `max |b_i|`, the relative residual used by
/// every pointwise identity check. Falls back to the absolute residual when
/// the reference vanishes identically.
pub fn relative_residual(computed: &[C64], expected: &[C64]) -> f64 {
    assert_eq!(computed.len(), expected.len());
    let scale = expected.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let diff = computed
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Half-widths of the box `{ q(v) <= tail }` for the 2x2 quadratic form
/// `q(a, b) = p a^2 + 2 m a b + r b^2` (which must be positive definite).
pub fn ellipse_half_widths(p: f64, m: f64, r: f64, tail: f64) -> Result<(f64, f64)> {
    let det = p * r - m * m;
    if !(p > 0.0 && det > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "integrand envelope is not decaying (form [{p}, {m}; {m}, {r}])"
        )));
    }
    Ok(((tail * r / det).sqrt(), (tail * p / det).sqrt()))
}

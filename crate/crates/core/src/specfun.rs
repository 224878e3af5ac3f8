//! Hermite and Laguerre polynomials, Hermite functions, special Hermite
//! functions, and Gauss quadrature rules.
//!
//! Polynomials are only ever evaluated by three-term recurrences. The
//! special Hermite functions are defined through the Fourier–Wigner integral
//!
//! ```text
//! Φ_{a,b}(x,u) = (2π)^{-1/2} ∫ e^{i x s} Φ_a(s + u/2) Φ_b(s - u/2) ds
//! ```
//!
//! in each coordinate. Completing the square turns the integrand into
//! `e^{-s²}` times a polynomial of degree `a + b` in `s`, so a Gauss–Hermite
//! rule with `(a+b)/2 + 2` nodes evaluates it exactly, for real and for
//! complex `(x,u)` alike. The λ-dependence is the dilation
//! `Φ^λ(x,u) = |λ|^{n/2} Φ(√|λ| x, √|λ| u)` for `λ > 0` and
//! `Φ^λ(x,u) = Φ^{|λ|}(x,-u)` for `λ < 0`.
//!
//! With this normalization the family is orthonormal in `L²(R^{2n})` and
//!
//! ```text
//! Φ^λ_{a,b} ×_λ Φ^λ_{c,d} = (2π/|λ|)^{n/2} δ_{b,c} Φ^λ_{a,d}
//! p^λ_t = (|λ|/2π)^{n/2} Σ_m e^{-(2|m|+n)|λ|t} Φ^λ_{m,m}.
//! ```

use std::collections::HashMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::numeric::{fmt17, C64, I};

/// Scalars the recurrences run on (`f64` and `C64`).
pub trait Field:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self> + From<f64>
{
}
impl Field for f64 {}
impl Field for C64 {}

/// Physicists' Hermite polynomial `H_k(x)`.
pub fn hermite_poly<T: Field>(k: usize, x: T) -> T {
    let mut prev = T::from(1.0);
    if k == 0 {
        return prev;
    }
    let mut cur = x * 2.0;
    for j in 1..k {
        let next = x * cur * 2.0 - prev * (2.0 * j as f64);
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_k^a(x)` for complex `x`.
pub fn laguerre_poly(k: usize, a: f64, x: C64) -> C64 {
    let mut prev = C64::new(1.0, 0.0);
    if k == 0 {
        return prev;
    }
    let mut cur = C64::new(1.0 + a, 0.0) - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_j(x) / sqrt(2^j j! sqrt(π))` for `j = 0..=kmax`: the Hermite
/// polynomials orthonormal against `e^{-x²}`.
pub fn normalized_hermite_table<T: Field>(kmax: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(T::from(PI.powf(-0.25)));
    if kmax >= 1 {
        out.push(x * (2.0f64.sqrt() * PI.powf(-0.25)));
    }
    for j in 1..kmax {
        let jf = j as f64;
        let next = x * out[j] * (2.0 / (jf + 1.0)).sqrt() - out[j - 1] * (jf / (jf + 1.0)).sqrt();
        out.push(next);
    }
    out
}

/// A multi-index in `N_0^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        Self(entries)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_j`.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    /// All indices in dimension `n` with every entry at most `max_entry`,
    /// in lexicographic order.
    pub fn all_bounded(n: usize, max_entry: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::new())];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=max_entry).map(move |k| {
                        let mut v = m.0.clone();
                        v.push(k);
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out
    }
}

/// L²-normalized product Hermite function `Φ_α(ξ)`.
pub fn hermite_function(alpha: &MultiIndex, xi: &[f64]) -> Result<f64> {
    check_dim(alpha.dim(), xi.len())?;
    Ok(alpha
        .0
        .iter()
        .zip(xi)
        .map(|(&k, &x)| normalized_hermite_table(k, x)[k] * (-0.5 * x * x).exp())
        .product())
}

/// Integration rule selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    GaussHermite,
    UniformTruncated,
}

/// How an integral is discretized and how accurate it must be.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: Rule,
    /// Node count per axis (initial count for adaptive rules).
    pub nodes: usize,
    /// Truncation radius for the uniform rule.
    pub radius: f64,
    /// Target tolerance.
    pub tol: f64,
}

impl QuadratureSpec {
    pub fn uniform(nodes: usize, radius: f64, tol: f64) -> Result<Self> {
        Self { rule: Rule::UniformTruncated, nodes, radius, tol }.validated()
    }

    pub fn gauss_hermite(nodes: usize, tol: f64) -> Result<Self> {
        Self { rule: Rule::GaussHermite, nodes, radius: f64::INFINITY, tol }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.nodes < 2 {
            return Err(invalid("a quadrature rule needs at least two nodes"));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("quadrature tolerance must be positive"));
        }
        if self.rule == Rule::UniformTruncated && !(self.radius > 0.0) {
            return Err(invalid("truncation radius must be positive"));
        }
        Ok(self)
    }
}

/// Nodes and weights of a one-dimensional Gauss rule.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Node table as CSV with header `k,node,weight`.
    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("k,node,weight\n");
        for (k, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            s.push_str(&format!("{k},{},{}\n", fmt17(*x), fmt17(*w)));
        }
        s
    }
}

type RuleCache = Mutex<HashMap<usize, Arc<GaussRule>>>;

fn cached(cache: &'static OnceLock<RuleCache>, m: usize, build: fn(usize) -> GaussRule) -> Arc<GaussRule> {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = map.lock().expect("rule cache poisoned").get(&m) {
        return r.clone();
    }
    let rule = Arc::new(build(m));
    map.lock().expect("rule cache poisoned").entry(m).or_insert(rule).clone()
}

/// `m`-point Gauss–Hermite rule for the weight `e^{-x²}`, nodes ascending.
pub fn gauss_hermite_nodes(m: usize) -> Result<Arc<GaussRule>> {
    if m < 2 {
        return Err(invalid("Gauss–Hermite rule needs m >= 2"));
    }
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    Ok(cached(&CACHE, m, build_gauss_hermite))
}

fn build_gauss_hermite(m: usize) -> GaussRule {
    // Newton iteration on the orthonormal recurrence, seeded with the
    // classical asymptotic guesses for the largest roots.
    let mf = m as f64;
    let mut roots = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..half {
        z = match i {
            0 => (2.0 * mf + 1.0).sqrt() - 1.85575 * (2.0 * mf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * mf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * roots[0],
            3 => 1.91 * z - 0.91 * roots[1],
            _ => 2.0 * z - roots[i - 2],
        };
        for _ in 0..100 {
            let h = normalized_hermite_table(m, z);
            let dp = (2.0 * mf).sqrt() * h[m - 1];
            let dz = h[m] / dp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let h = normalized_hermite_table(m, z);
        let dp = (2.0 * mf).sqrt() * h[m - 1];
        roots[i] = z;
        weights[i] = 2.0 / (dp * dp);
        roots[m - 1 - i] = -z;
        weights[m - 1 - i] = weights[i];
    }
    if m % 2 == 1 {
        roots[m / 2] = 0.0;
    }
    roots.reverse();
    weights.reverse();
    GaussRule { nodes: roots, weights }
}

/// `m`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre_nodes(m: usize) -> Result<Arc<GaussRule>> {
    if m < 2 {
        return Err(invalid("Gauss–Legendre rule needs m >= 2"));
    }
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    Ok(cached(&CACHE, m, build_gauss_legendre))
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 1..m {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn build_gauss_legendre(m: usize) -> GaussRule {
    let mf = m as f64;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[m - 1 - i] = weights[i];
    }
    GaussRule { nodes, weights }
}

/// Table of the one-dimensional special Hermite functions at `λ = 1`:
/// entry `a * (kmax + 1) + b` holds `Φ_{a,b}(z, w)` for `a, b <= kmax`.
pub fn special_hermite_table_1d(kmax: usize, z: C64, w: C64) -> Vec<C64> {
    let m = kmax + 2;
    let rule = gauss_hermite_nodes(m).expect("m >= 2");
    let shift_a = (I * z + w) * 0.5;
    let shift_b = (I * z - w) * 0.5;
    let k1 = kmax + 1;
    let mut acc = vec![C64::new(0.0, 0.0); k1 * k1];
    for (&s, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let ha = normalized_hermite_table(kmax, shift_a + s);
        let hb = normalized_hermite_table(kmax, shift_b + s);
        for a in 0..k1 {
            let ta = ha[a] * wt;
            for b in 0..k1 {
                acc[a * k1 + b] += ta * hb[b];
            }
        }
    }
    let pref = (-(z * z + w * w) * 0.25).exp() / (2.0 * PI).sqrt();
    for v in &mut acc {
        *v *= pref;
    }
    acc
}

fn lambda_arguments(lambda: f64, z: C64, w: C64) -> (C64, C64) {
    let r = lambda.abs().sqrt();
    if lambda > 0.0 {
        (z * r, w * r)
    } else {
        (z * r, -w * r)
    }
}

/// Holomorphic extension `Φ^λ_{α,β}(z, w)` to `C^n × C^n`.
pub fn special_hermite_analytic(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    lambda: f64,
    z: &[C64],
    w: &[C64],
) -> Result<C64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(invalid("special Hermite functions need a finite nonzero λ"));
    }
    let n = alpha.dim();
    check_dim(n, beta.dim())?;
    check_dim(n, z.len())?;
    check_dim(n, w.len())?;
    let mut out = C64::new(lambda.abs().powf(0.5 * n as f64), 0.0);
    for j in 0..n {
        let (a, b) = (alpha.0[j], beta.0[j]);
        let kmax = a.max(b);
        let (zs, ws) = lambda_arguments(lambda, z[j], w[j]);
        out *= special_hermite_table_1d(kmax, zs, ws)[a * (kmax + 1) + b];
    }
    Ok(out)
}

/// `Φ^λ_{α,β}(x, u)` at a real point.
pub fn special_hermite(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    lambda: f64,
    x: &[f64],
    u: &[f64],
) -> Result<C64> {
    let z: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
    let w: Vec<C64> = u.iter().map(|&v| C64::new(v, 0.0)).collect();
    special_hermite_analytic(alpha, beta, lambda, &z, &w)
}

/// All `Φ^λ_{α,β}(z, w)` in dimension one for `α, β <= kmax` at once,
/// same layout as [`special_hermite_table_1d`].
pub fn special_hermite_table(kmax: usize, lambda: f64, z: C64, w: C64) -> Result<Vec<C64>> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(invalid("special Hermite functions need a finite nonzero λ"));
    }
    let (zs, ws) = lambda_arguments(lambda, z, w);
    let scale = lambda.abs().sqrt();
    Ok(special_hermite_table_1d(kmax, zs, ws).into_iter().map(|v| v * scale).collect())
}

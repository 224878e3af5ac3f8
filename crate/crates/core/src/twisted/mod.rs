//! The λ-twisted layer on `R^{2n}` and its complexification `C^{2n}`.
//!
//! Holomorphic functions on `C^{2n}` (transforms, reproducing kernels, Fock
//! pictures) are carried as lazy evaluators in [`TwistedTransformResult`] and
//! only materialized on grids inside the pairings.

mod bergman;
mod inversion;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, invalid, Error, Result};
use crate::heatkernel::{normalization, p_twisted_complex};
use crate::lattice::{FieldMeta, Lattice, SampledField};
use crate::numeric::{pairwise_sum, x_coth, x_over_sinh, C64, I};
use crate::specfun::{special_hermite_analytic, MultiIndex};

pub use bergman::*;
pub use inversion::*;

/// `(n, t, λ)` shared by every object of the twisted layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistedParams {
    pub n: usize,
    pub t: f64,
    pub lambda: f64,
}

impl TwistedParams {
    pub fn new(n: usize, t: f64, lambda: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension n must be at least 1"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("time t must be positive, got {t}")));
        }
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(invalid("the twisted layer needs a finite nonzero λ"));
        }
        Ok(Self { n, t, lambda })
    }

    /// `(λ/4) coth(tλ)`, the Gaussian rate of `p_t^λ`.
    pub fn kernel_rate(&self) -> f64 {
        0.25 * x_coth(self.lambda, self.t)
    }
}

pub type Evaluator = Arc<dyn Fn(&[C64], &[C64]) -> C64 + Send + Sync>;

/// A holomorphic function on `C^{2n}` attached to `(n, t, λ)`.
#[derive(Clone)]
pub struct TwistedTransformResult {
    pub params: TwistedParams,
    /// Lattice of the sampled source, when there is one.
    pub source: Option<Lattice>,
    /// Rate `k` with `|F(z,w)| ≲ e^{-k Re(z·z + w·w)}` up to lower order
    /// terms; used to size integration boxes.
    pub decay_rate: f64,
    evaluator: Evaluator,
}

impl fmt::Debug for TwistedTransformResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwistedTransformResult")
            .field("params", &self.params)
            .field("source", &self.source)
            .field("decay_rate", &self.decay_rate)
            .finish_non_exhaustive()
    }
}

impl TwistedTransformResult {
    pub fn new(params: TwistedParams, decay_rate: f64, evaluator: Evaluator) -> Self {
        Self { params, source: None, decay_rate, evaluator }
    }

    pub fn from_fn<F>(params: TwistedParams, decay_rate: f64, f: F) -> Self
    where
        F: Fn(&[C64], &[C64]) -> C64 + Send + Sync + 'static,
    {
        Self::new(params, decay_rate, Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, z: &[C64], w: &[C64]) -> C64 {
        (self.evaluator)(z, w)
    }

    pub fn eval_checked(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        check_dim(self.params.n, z.len())?;
        check_dim(self.params.n, w.len())?;
        Ok(self.eval(z, w))
    }

    pub fn eval_real(&self, x: &[f64], u: &[f64]) -> C64 {
        let z: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
        let w: Vec<C64> = u.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.eval(&z, &w)
    }

    /// `c · F`.
    pub fn scaled(&self, c: C64) -> Self {
        let inner = self.evaluator.clone();
        Self { evaluator: Arc::new(move |z, w| c * inner(z, w)), ..self.clone() }
    }

    /// `F + G` (same parameters).
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.params != other.params {
            return Err(invalid("cannot add transforms with different (n, t, λ)"));
        }
        let (a, b) = (self.evaluator.clone(), other.evaluator.clone());
        Ok(Self {
            params: self.params,
            source: None,
            decay_rate: self.decay_rate.min(other.decay_rate),
            evaluator: Arc::new(move |z, w| a(z, w) + b(z, w)),
        })
    }

    /// The zero function.
    pub fn zero(params: TwistedParams) -> Self {
        Self::from_fn(params, f64::INFINITY, |_, _| C64::new(0.0, 0.0))
    }
}

fn plane_n(lattice: &Lattice) -> Result<usize> {
    let d = lattice.dim();
    if d < 2 || d % 2 == 1 {
        return Err(Error::IncompatibleLattice(format!(
            "expected a lattice over R^(2n), got dimension {d}"
        )));
    }
    Ok(d / 2)
}

/// `(f ∗_λ g)(x,u) = ∫ f(x',u') g(x−x',u−u') e^{−i(λ/2)(x'·u − x·u')} dx'du'`
/// on the nodes of `output`, with the lattice rule of `f`.
pub fn twisted_convolve(
    f: &SampledField,
    g: &(dyn Fn(&[f64], &[f64]) -> C64 + Sync),
    lambda: f64,
    output: &Lattice,
    decay_threshold: f64,
) -> Result<SampledField> {
    let n = plane_n(&f.lattice)?;
    if plane_n(output)? != n {
        return Err(Error::IncompatibleLattice("input and output dimensions differ".into()));
    }
    f.check_decay(decay_threshold)?;
    let vol = f.lattice.cell_volume();
    let src: Vec<(Vec<f64>, C64)> = (0..f.lattice.len())
        .filter(|&i| f.values[i] != C64::new(0.0, 0.0))
        .map(|i| {
            let mut p = vec![0.0; 2 * n];
            f.lattice.point(i, &mut p);
            (p, f.values[i])
        })
        .collect();
    let out = SampledField::from_fn(output.clone(), f.meta.clone(), |p| {
        let (x, u) = p.split_at(n);
        let mut dx = vec![0.0; n];
        let mut du = vec![0.0; n];
        let terms: Vec<C64> = src
            .iter()
            .map(|(q, fv)| {
                let (xp, up) = q.split_at(n);
                let mut sympl = 0.0;
                for k in 0..n {
                    dx[k] = x[k] - xp[k];
                    du[k] = u[k] - up[k];
                    sympl += xp[k] * u[k] - x[k] * up[k];
                }
                fv * g(&dx, &du) * C64::from_polar(1.0, -0.5 * lambda * sympl)
            })
            .collect();
        pairwise_sum(&terms) * vol
    });
    Ok(SampledField { meta: FieldMeta { lambda: Some(lambda), ..out.meta }, ..out })
}

/// `H_t^λ(f)(z,w) = ∫ f(x',u') p_t^λ(z−x', w−u') e^{−(i/2)λ(x'·w − u'·z)} dx'du'`
/// for arbitrary complex `(z, w)`.
///
/// The Gaussian kernel separates, so each evaluation is a tensor contraction
/// of the pre-weighted samples against one exponential table per axis.
pub fn heat_transform_lambda(
    f: &SampledField,
    t: f64,
    lambda: f64,
    decay_threshold: f64,
) -> Result<TwistedTransformResult> {
    let n = plane_n(&f.lattice)?;
    let params = TwistedParams::new(n, t, lambda)?;
    f.check_decay(decay_threshold)?;
    let a = params.kernel_rate();
    let pref = normalization(n) * x_over_sinh(lambda, t).powi(n as i32) * f.lattice.cell_volume();
    let lattice = f.lattice.clone();
    let weighted: Vec<C64> = {
        let mut p = vec![0.0; 2 * n];
        (0..lattice.len())
            .map(|i| {
                lattice.point(i, &mut p);
                let r2: f64 = p.iter().map(|v| v * v).sum();
                f.values[i] * (pref * (-a * r2).exp())
            })
            .collect()
    };
    let axes: Vec<Vec<f64>> = lattice.axes.iter().map(|ax| ax.nodes()).collect();
    let evaluator = move |z: &[C64], w: &[C64]| -> C64 {
        // linear coefficients per axis: x-axes then u-axes
        let coef: Vec<C64> = (0..n)
            .map(|j| 2.0 * a * z[j] - 0.5 * I * lambda * w[j])
            .chain((0..n).map(|j| 2.0 * a * w[j] + 0.5 * I * lambda * z[j]))
            .collect();
        let mut cur = weighted.clone();
        for k in (0..2 * n).rev() {
            let nodes = &axes[k];
            let table: Vec<C64> = nodes.iter().map(|&s| (coef[k] * s).exp()).collect();
            let m = nodes.len();
            cur = cur
                .chunks(m)
                .map(|row| row.iter().zip(&table).map(|(v, e)| v * e).sum())
                .collect();
        }
        let q: C64 = z.iter().chain(w).map(|v| v * v).sum();
        cur[0] * (-a * q).exp()
    };
    Ok(TwistedTransformResult {
        params,
        source: Some(f.lattice.clone()),
        decay_rate: 0.25 * lambda.abs() * (lambda * t).abs().tanh(),
        evaluator: Arc::new(evaluator),
    })
}

/// `e^{−(iλ/2)(a·w − b·z)}`, the multiplier of a twisted translation.
pub fn translation_phase(lambda: f64, a: &[f64], b: &[f64], z: &[C64], w: &[C64]) -> C64 {
    let s: C64 = (0..a.len()).map(|j| a[j] * w[j] - b[j] * z[j]).sum();
    (-0.5 * I * lambda * s).exp()
}

/// `(τ^λ(a,b)F)(z,w) = e^{−(iλ/2)(a·w − b·z)} F(z−a, w−b)`.
pub fn twisted_translate(f: &TwistedTransformResult, a: &[f64], b: &[f64]) -> Result<TwistedTransformResult> {
    let n = f.params.n;
    check_dim(n, a.len())?;
    check_dim(n, b.len())?;
    let (a, b) = (a.to_vec(), b.to_vec());
    let lambda = f.params.lambda;
    let inner = f.evaluator.clone();
    Ok(TwistedTransformResult {
        params: f.params,
        source: None,
        decay_rate: f.decay_rate,
        evaluator: Arc::new(move |z, w| {
            let zs: Vec<C64> = z.iter().zip(&a).map(|(v, s)| v - s).collect();
            let ws: Vec<C64> = w.iter().zip(&b).map(|(v, s)| v - s).collect();
            translation_phase(lambda, &a, &b, z, w) * inner(&zs, &ws)
        }),
    })
}

/// Twisted translation of a sampled field by a lattice-aligned shift;
/// nodes shifted in from outside the box are zero.
pub fn twisted_translate_field(f: &SampledField, a: &[f64], b: &[f64], lambda: f64) -> Result<SampledField> {
    let n = plane_n(&f.lattice)?;
    check_dim(n, a.len())?;
    check_dim(n, b.len())?;
    let shifts: Vec<i64> = a
        .iter()
        .chain(b)
        .zip(&f.lattice.axes)
        .map(|(s, ax)| {
            let k = (s / ax.step).round();
            if (k * ax.step - s).abs() > 1e-9 * ax.step.max(s.abs()) {
                Err(Error::IncompatibleLattice(format!("shift {s} is not a multiple of the spacing {}", ax.step)))
            } else {
                Ok(k as i64)
            }
        })
        .collect::<Result<_>>()?;
    let lattice = &f.lattice;
    let strides: Vec<usize> = (0..2 * n)
        .map(|k| lattice.axes[k + 1..].iter().map(|ax| ax.count).product())
        .collect();
    let mut idx = vec![0usize; 2 * n];
    let mut p = vec![0.0; 2 * n];
    let values = (0..lattice.len())
        .map(|i| {
            lattice.multi_index(i, &mut idx);
            lattice.point(i, &mut p);
            let mut src = 0usize;
            for k in 0..2 * n {
                let j = idx[k] as i64 - shifts[k];
                if j < 0 || j >= lattice.axes[k].count as i64 {
                    return C64::new(0.0, 0.0);
                }
                src += j as usize * strides[k];
            }
            let (x, u) = p.split_at(n);
            let s: f64 = (0..n).map(|j| a[j] * u[j] - b[j] * x[j]).sum();
            C64::from_polar(1.0, -0.5 * lambda * s) * f.values[src]
        })
        .collect();
    SampledField::new(lattice.clone(), values, f.meta.clone())
}

/// `e^{−γ(|x|²+|u|²)}` on `R^{2n}`.
pub fn radial_gaussian(gamma: f64, x: &[f64], u: &[f64]) -> f64 {
    let r2: f64 = x.iter().chain(u).map(|v| v * v).sum();
    (-gamma * r2).exp()
}

/// A finite combination `Σ c_k τ^λ(a_k, b_k) e^{−γ_k(|x|²+|u|²)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMixture {
    pub params: TwistedParams,
    pub terms: Vec<GaussianTerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianTerm {
    pub coefficient: C64,
    pub gamma: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl GaussianMixture {
    pub fn new(params: TwistedParams, terms: Vec<GaussianTerm>) -> Result<Self> {
        for term in &terms {
            check_dim(params.n, term.a.len())?;
            check_dim(params.n, term.b.len())?;
            if !(term.gamma > 0.0) {
                return Err(invalid("Gaussian width parameter must be positive"));
            }
        }
        Ok(Self { params, terms })
    }

    /// Value at a real point.
    pub fn eval(&self, x: &[f64], u: &[f64]) -> C64 {
        let lambda = self.params.lambda;
        self.terms
            .iter()
            .map(|term| {
                let xs: Vec<f64> = x.iter().zip(&term.a).map(|(p, q)| p - q).collect();
                let us: Vec<f64> = u.iter().zip(&term.b).map(|(p, q)| p - q).collect();
                let s: f64 = (0..x.len()).map(|j| term.a[j] * u[j] - term.b[j] * x[j]).sum();
                term.coefficient * C64::from_polar(radial_gaussian(term.gamma, &xs, &us), -0.5 * lambda * s)
            })
            .sum()
    }

    /// Exact `‖f‖₂²` from the pairwise Gaussian integrals.
    pub fn norm_sq(&self) -> f64 {
        let mut total = C64::new(0.0, 0.0);
        for p in &self.terms {
            for q in &self.terms {
                total += p.coefficient * q.coefficient.conj() * self.overlap(p, q);
            }
        }
        total.re
    }

    /// `⟨τ(a₁,b₁)g₁, τ(a₂,b₂)g₂⟩` in closed form.
    fn overlap(&self, p: &GaussianTerm, q: &GaussianTerm) -> C64 {
        let lambda = self.params.lambda;
        // ∫ e^{-P s² + Q s - R} ds = √(π/P) e^{Q²/4P - R}
        let one_dim = |c1: f64, c2: f64, freq: f64| {
            let pp = p.gamma + q.gamma;
            let qq = C64::new(2.0 * (p.gamma * c1 + q.gamma * c2), freq);
            let rr = p.gamma * c1 * c1 + q.gamma * c2 * c2;
            (PI / pp).sqrt() * (qq * qq / (4.0 * pp) - rr).exp()
        };
        let mut out = C64::new(1.0, 0.0);
        for j in 0..self.params.n {
            out *= one_dim(p.a[j], q.a[j], 0.5 * lambda * (p.b[j] - q.b[j]));
            out *= one_dim(p.b[j], q.b[j], -0.5 * lambda * (p.a[j] - q.a[j]));
        }
        out
    }

    /// Closed-form `H_t^λ` of the mixture.
    pub fn transform(&self) -> TwistedTransformResult {
        let params = self.params;
        let mut acc = TwistedTransformResult::zero(params);
        for term in &self.terms {
            let g = gaussian_transform(params, term.gamma);
            let shifted = twisted_translate(&g, &term.a, &term.b).expect("dimensions checked");
            acc = acc.plus(&shifted.scaled(term.coefficient)).expect("same params");
        }
        acc
    }
}

/// Closed-form `H_t^λ` of `e^{−γ(|x|²+|u|²)}`:
/// `c_n (λ/sinh λt)^n (π/(γ+a))^n e^{−κ(z·z+w·w)}` with `a = (λ/4)coth(λt)` and
/// `κ = a − (4a² − λ²/4)/(4(γ+a))`.
pub fn gaussian_transform(params: TwistedParams, gamma: f64) -> TwistedTransformResult {
    let (n, t, lambda) = (params.n, params.t, params.lambda);
    let a = params.kernel_rate();
    let kappa = gaussian_transform_rate(params, gamma);
    let amp = normalization(n) * (x_over_sinh(lambda, t) * PI / (gamma + a)).powi(n as i32);
    TwistedTransformResult::from_fn(params, kappa, move |z, w| {
        let q: C64 = z.iter().chain(w).map(|v| v * v).sum();
        amp * (-kappa * q).exp()
    })
}

/// The rate `κ` of [`gaussian_transform`].
pub fn gaussian_transform_rate(params: TwistedParams, gamma: f64) -> f64 {
    let a = params.kernel_rate();
    let l = params.lambda;
    a - (4.0 * a * a - 0.25 * l * l) / (4.0 * (gamma + a))
}

/// `Φ̃^λ_{α,β} = H_t^λ Φ^λ_{α,β} = e^{−(2|β|+n)|λ|t} Φ^λ_{α,β}` extended to `C^{2n}`.
pub fn phi_tilde(params: TwistedParams, alpha: &MultiIndex, beta: &MultiIndex) -> Result<TwistedTransformResult> {
    check_dim(params.n, alpha.dim())?;
    check_dim(params.n, beta.dim())?;
    let factor = (-((2 * beta.order() + params.n) as f64) * params.lambda.abs() * params.t).exp();
    special_hermite_extension(params, alpha, beta, factor)
}

/// `c · Φ^λ_{α,β}` extended to `C^{2n}`.
pub fn special_hermite_extension(
    params: TwistedParams,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    c: f64,
) -> Result<TwistedTransformResult> {
    check_dim(params.n, alpha.dim())?;
    check_dim(params.n, beta.dim())?;
    let (alpha, beta) = (alpha.clone(), beta.clone());
    let lambda = params.lambda;
    Ok(TwistedTransformResult::from_fn(params, 0.25 * lambda.abs(), move |z, w| {
        c * special_hermite_analytic(&alpha, &beta, lambda, z, w).expect("validated")
    }))
}

/// `p_s^λ` extended to `C^{2n}` (`H_t^λ p_s^λ = p_{s+t}^λ`).
pub fn twisted_kernel_extension(params: TwistedParams, s: f64) -> Result<TwistedTransformResult> {
    if !(s > 0.0) {
        return Err(invalid("kernel time must be positive"));
    }
    let lambda = params.lambda;
    Ok(TwistedTransformResult::from_fn(params, 0.25 * x_coth(lambda, s), move |z, w| {
        p_twisted_complex(C64::new(lambda, 0.0), s, z, w).expect("real λ has no poles")
    }))
}

/// `K^t_{(a,b)}(z,w) = p_{2t}^λ(z−a, w−b) e^{−(i/2)λ(a·w − b·z)}`.
pub fn reproducing_kernel(a: &[f64], b: &[f64], t: f64, lambda: f64) -> Result<TwistedTransformResult> {
    check_dim(a.len(), b.len())?;
    let params = TwistedParams::new(a.len(), t, lambda)?;
    let p2t = twisted_kernel_extension(params, 2.0 * t)?;
    twisted_translate(&p2t, a, b)
}

//! Heat kernels: the full heat kernel `k_t` of the group (as an oscillatory
//! λ-integral) with its holomorphic continuation, the twisted kernels
//! `p_t^λ` in closed form for real and complex λ, and the one-dimensional
//! Gauss kernel `q_t`.
//!
//! The group kernel is normalized to have total mass one:
//!
//! ```text
//! k_t(z,w,ζ) = c_n/(2π) ∫ e^{-iλζ} e^{-tλ²} (λ/sinh tλ)^n e^{-(λ/4) coth(tλ)(z·z+w·w)} dλ
//! ```
//!
//! with `c_n = (4π)^{-n}`, so that `k_t ∗ k_t = k_{2t}` and the central slice
//! `∫ e^{iλξ} k_t dξ` equals `e^{-tλ²} p_t^λ`.

use std::f64::consts::PI;

use crate::error::{check_dim, invalid, Error, Result};
use crate::hgroup::{ComplexGroupPoint, GroupPoint};
use crate::numeric::{fmt17, ln_x_over_sinh, pairwise_sum, x_coth, x_coth_c, x_over_sinh, C64, I};
use crate::specfun::{QuadratureSpec, Rule};

/// Dimension and time of a heat kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatParams {
    pub n: usize,
    pub t: f64,
}

impl HeatParams {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension n must be at least 1"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("time t must be positive, got {t}")));
        }
        Ok(Self { n, t })
    }

    /// `c_n = (4π)^{-n}`.
    pub fn c_n(&self) -> f64 {
        normalization(self.n)
    }
}

pub(crate) fn normalization(n: usize) -> f64 {
    (4.0 * PI).powi(-(n as i32))
}

/// A spectral parameter `λ + is/2`; `s = 0` on the real axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParam {
    pub lambda: f64,
    pub s: f64,
}

impl SpectralParam {
    pub fn real(lambda: f64) -> Self {
        Self { lambda, s: 0.0 }
    }

    pub fn value(&self) -> C64 {
        C64::new(self.lambda, 0.5 * self.s)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("time t must be positive, got {t}")))
    }
}

/// `p_t^λ(y, v)` for real λ; `λ = 0` returns the Gaussian limit
/// `(4πt)^{-n} e^{-(|y|²+|v|²)/4t}`.
pub fn p_twisted(lambda: f64, t: f64, y: &[f64], v: &[f64]) -> Result<f64> {
    check_time(t)?;
    check_dim(y.len(), v.len())?;
    let n = y.len();
    let r2: f64 = y.iter().chain(v).map(|a| a * a).sum();
    Ok(normalization(n) * x_over_sinh(lambda, t).powi(n as i32) * (-0.25 * x_coth(lambda, t) * r2).exp())
}

/// `ln p_t^λ(z, w)` for complex λ and complex arguments.
pub fn ln_p_twisted_complex(lambda: C64, t: f64, z: &[C64], w: &[C64]) -> Result<C64> {
    check_time(t)?;
    check_dim(z.len(), w.len())?;
    let n = z.len();
    let q: C64 = z.iter().chain(w).map(|a| a * a).sum();
    Ok(normalization(n).ln() + ln_x_over_sinh(lambda, t)? * n as f64 - 0.25 * x_coth_c(lambda, t)? * q)
}

/// Analytic continuation of `p_t^λ(z, w)` in both λ and the arguments.
/// Errors at the poles `tλ ∈ iπZ \ {0}`.
pub fn p_twisted_complex(lambda: C64, t: f64, z: &[C64], w: &[C64]) -> Result<C64> {
    Ok(ln_p_twisted_complex(lambda, t, z, w)?.exp())
}

/// `q_t(x) = (4πt)^{-1/2} e^{-x²/4t}`.
pub fn q_heat(x: f64, t: f64) -> f64 {
    (4.0 * PI * t).powf(-0.5) * (-x * x / (4.0 * t)).exp()
}

/// Entire extension of [`q_heat`].
pub fn q_heat_analytic(z: C64, t: f64) -> C64 {
    (4.0 * PI * t).powf(-0.5) * (-z * z / (4.0 * t)).exp()
}

/// Region of `(ζ, z·z + w·w)` values a [`HeatKernel`] must resolve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelDomain {
    /// Largest `|Re ζ|`.
    pub xi_max: f64,
    /// Largest `|Im ζ|`.
    pub eta_max: f64,
    /// Most negative `Re(z·z + w·w)` (zero if none is negative).
    pub quad_re_min: f64,
    /// Largest `|Im(z·z + w·w)|`.
    pub quad_im_max: f64,
}

impl KernelDomain {
    pub fn origin() -> Self {
        Self { xi_max: 0.0, eta_max: 0.0, quad_re_min: 0.0, quad_im_max: 0.0 }
    }

    /// Smallest domain containing the given complex points.
    pub fn covering<'a>(points: impl IntoIterator<Item = &'a ComplexGroupPoint>) -> Self {
        let mut d = Self::origin();
        for c in points {
            d = d.union(&Self::of(c.zeta, quadratic(c)));
        }
        d
    }

    pub(crate) fn of(zeta: C64, q: C64) -> Self {
        Self {
            xi_max: zeta.re.abs(),
            eta_max: zeta.im.abs(),
            quad_re_min: q.re.min(0.0),
            quad_im_max: q.im.abs(),
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        Self {
            xi_max: self.xi_max.max(o.xi_max),
            eta_max: self.eta_max.max(o.eta_max),
            quad_re_min: self.quad_re_min.min(o.quad_re_min),
            quad_im_max: self.quad_im_max.max(o.quad_im_max),
        }
    }

    /// Domain of all real points with `|ξ| <= xi_max`.
    pub fn real_box(xi_max: f64) -> Self {
        Self { xi_max, ..Self::origin() }
    }

    pub(crate) fn contains(&self, o: &Self) -> bool {
        o.xi_max <= self.xi_max * (1.0 + 1e-12)
            && o.eta_max <= self.eta_max * (1.0 + 1e-12)
            && o.quad_re_min >= self.quad_re_min * (1.0 + 1e-12)
            && o.quad_im_max <= self.quad_im_max * (1.0 + 1e-12)
    }
}

fn quadratic(c: &ComplexGroupPoint) -> C64 {
    c.z.iter().chain(&c.w).map(|a| a * a).sum()
}

/// The group heat kernel discretized on a λ-grid that has been checked
/// against its own refinement over a [`KernelDomain`].
///
/// Evaluation costs one complex exponential per λ-node.
#[derive(Clone, Debug)]
pub struct HeatKernel {
    pub params: HeatParams,
    pub domain: KernelDomain,
    /// Truncation radius of the λ-integral.
    pub radius: f64,
    /// λ-spacing.
    pub step: f64,
    lambdas: Vec<f64>,
    amplitude: Vec<f64>,
    decay: Vec<f64>,
    /// Largest refinement disagreement seen on the domain probes.
    pub refinement_error: f64,
}

/// Log-magnitude bound of the λ-integrand over a domain.
fn envelope(params: &HeatParams, d: &KernelDomain, lambda: f64) -> f64 {
    let l = lambda.abs();
    -params.t * l * l
        + params.n as f64 * x_over_sinh(l, params.t).ln()
        + l * d.eta_max
        - 0.25 * x_coth(l, params.t) * d.quad_re_min
}

impl HeatKernel {
    /// Build a kernel accurate to `quad.tol` (relative to the larger of the
    /// value and the kernel's peak) on `domain`.
    pub fn new(params: HeatParams, domain: KernelDomain, quad: &QuadratureSpec) -> Result<Self> {
        if quad.rule != Rule::UniformTruncated {
            return Err(invalid("the heat kernel λ-integral uses the uniform truncated rule"));
        }
        let tol = quad.tol;
        let radius = if quad.radius.is_finite() {
            quad.radius
        } else {
            let mut peak = envelope(&params, &domain, 0.0);
            let cut = tol.ln() - 8.0;
            let mut l: f64 = 0.0;
            loop {
                l += 0.25;
                let g = envelope(&params, &domain, l);
                peak = peak.max(g);
                if g - peak < cut && l > 1.0 {
                    break l;
                }
                if l > 1e4 {
                    return Err(Error::NonConvergence("λ-envelope does not decay".into()));
                }
            }
        };
        let freq = domain.xi_max + 0.25 * domain.quad_im_max + 1.0;
        let mut step = (2.0 * radius / (quad.nodes.max(3) - 1) as f64).min(PI / (2.0 * freq));
        let probes = probe_points(&domain);
        for _ in 0..12 {
            let mut k = Self::with_grid(params, domain, radius, step);
            let scale = k.eval_core(C64::new(0.0, 0.0), C64::new(0.0, 0.0)).0.norm();
            let mut worst = 0.0f64;
            for &(zeta, q) in &probes {
                let (fine, coarse) = k.eval_core(zeta, q);
                worst = worst.max((fine - coarse).norm() / scale.max(fine.norm()));
            }
            if worst <= tol {
                k.refinement_error = worst;
                return Ok(k);
            }
            step *= 0.5;
        }
        Err(Error::NonConvergence(format!(
            "heat kernel λ-grid did not converge on {domain:?}"
        )))
    }

    fn with_grid(params: HeatParams, domain: KernelDomain, radius: f64, step: f64) -> Self {
        let m = (radius / step).ceil() as i64;
        let norm = normalization(params.n) / (2.0 * PI);
        let n = params.n as i32;
        let mut lambdas = Vec::with_capacity(2 * m as usize + 1);
        let mut amplitude = Vec::with_capacity(lambdas.capacity());
        let mut decay = Vec::with_capacity(lambdas.capacity());
        for j in -m..=m {
            let l = j as f64 * step;
            lambdas.push(l);
            amplitude.push(norm * step * (-params.t * l * l).exp() * x_over_sinh(l, params.t).powi(n));
            decay.push(0.25 * x_coth(l, params.t));
        }
        Self { params, domain, radius, step, lambdas, amplitude, decay, refinement_error: 0.0 }
    }

    /// Trapezoid sums on the full grid and on every other node.
    fn eval_core(&self, zeta: C64, q: C64) -> (C64, C64) {
        let m = self.lambdas.len() / 2;
        let terms: Vec<C64> = (0..self.lambdas.len())
            .map(|j| self.amplitude[j] * (-I * self.lambdas[j] * zeta - self.decay[j] * q).exp())
            .collect();
        let coarse: Vec<C64> = terms.iter().enumerate().filter(|(j, _)| (j + m) % 2 == 0).map(|(_, v)| *v).collect();
        // Every other node around λ = 0, with twice the weight.
        let coarse = pairwise_sum(&coarse) * 2.0;
        (pairwise_sum(&terms), coarse)
    }

    /// `k_t^∼(c)`. Points outside the construction domain are rejected.
    pub fn eval_complex(&self, c: &ComplexGroupPoint) -> Result<C64> {
        check_dim(self.params.n, c.n())?;
        let q = quadratic(c);
        if !self.domain.contains(&KernelDomain::of(c.zeta, q)) {
            return Err(invalid("point lies outside the domain this heat kernel was built for"));
        }
        Ok(self.eval_core(c.zeta, q).0)
    }

    /// `k_t^∼` as a function of `ζ` and `q = z·z + w·w`, without the domain check.
    pub(crate) fn eval_reduced(&self, zeta: C64, q: C64) -> C64 {
        self.eval_core(zeta, q).0
    }

    /// `k_t` at a real point given in coordinates.
    pub fn eval_coords(&self, x: &[f64], u: &[f64], xi: f64) -> C64 {
        let q: f64 = x.iter().chain(u).map(|a| a * a).sum();
        self.eval_core(C64::new(xi, 0.0), C64::new(q, 0.0)).0
    }

    pub fn eval(&self, p: &GroupPoint) -> Result<f64> {
        check_dim(self.params.n, p.n())?;
        if p.xi.abs() > self.domain.xi_max * (1.0 + 1e-12) {
            return Err(invalid("point lies outside the domain this heat kernel was built for"));
        }
        Ok(self.eval_coords(&p.x, &p.u, p.xi).re)
    }

    pub fn node_count(&self) -> usize {
        self.lambdas.len()
    }
}

fn probe_points(d: &KernelDomain) -> Vec<(C64, C64)> {
    let mut out = Vec::new();
    for &xr in &[0.0, d.xi_max, 0.5 * d.xi_max] {
        for &xe in &[-d.eta_max, 0.0, d.eta_max] {
            for &qi in &[-d.quad_im_max, 0.0, d.quad_im_max] {
                for &qr in &[d.quad_re_min, 0.0, 1.0] {
                    out.push((C64::new(xr, xe), C64::new(qr, qi)));
                }
            }
        }
    }
    out
}

/// Default λ-quadrature for the group heat kernel at tolerance `tol`.
pub fn default_kernel_quadrature(tol: f64) -> QuadratureSpec {
    QuadratureSpec { rule: Rule::UniformTruncated, nodes: 64, radius: f64::INFINITY, tol }
}

/// `k_t(p)` with a λ-grid sized for this one point.
pub fn k_heat(p: &GroupPoint, params: HeatParams, quad: &QuadratureSpec) -> Result<f64> {
    let d = KernelDomain::covering([&p.complexify()]);
    HeatKernel::new(params, d, quad)?.eval(p)
}

/// `k_t^∼(c)` with a λ-grid sized for this one point.
pub fn k_heat_analytic(c: &ComplexGroupPoint, params: HeatParams, quad: &QuadratureSpec) -> Result<C64> {
    HeatKernel::new(params, KernelDomain::covering([c]), quad)?.eval_complex(c)
}

/// Profile CSV: header `coord...,value` and one row per sample.
pub fn profile_csv(coord_names: &[&str], rows: &[(Vec<f64>, f64)]) -> String {
    let mut s = coord_names.join(",");
    s.push_str(",value\n");
    for (coords, v) in rows {
        for c in coords {
            s.push_str(&fmt17(*c));
            s.push(',');
        }
        s.push_str(&fmt17(*v));
        s.push('\n');
    }
    s
}

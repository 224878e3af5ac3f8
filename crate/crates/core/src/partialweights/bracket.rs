//! The exhaustion bracket `⟨F, G⟩₊ = lim_R ∫_{K_R} F conj(G) W_t^+`, with
//! `K_R = B_R × B_R × C` and `B_R` the open disc of radius `R` (`n = 1`).
//!
//! The inputs are heat transforms `F = 𝓗_t f` of separable functions
//! `f(x, u, ξ) = e^{−γ(x²+u²)} φ(ξ)` whose spectrum `φ̂(λ) = ∫ e^{iλξ} φ` is a
//! bump supported in a compact interval of `(0, ∞)`. For these, the integral
//! over the central coordinate is done exactly:
//!
//! * along `ξ` by Plancherel, since the slice of `F` at frequency `λ` is
//!   `e^{λη − tλ²} φ̂(λ) H_t^{−λ}(e^{−γ|·|²})`;
//! * along `η` by the reconstruction identity
//!   `∫ e^{2λη} W_t^+(iy, iv, iη) dη = e^{2tλ²} 4 p_{2t}^λ(2y, 2v)`,
//!   after shifting `η` by the symplectic term of the polar decomposition.
//!
//! What remains is `(1/2π) ∫ φ̂_F conj(φ̂_G) N_R(λ) dλ`, where `N_R(λ)` is an
//! integral over the two discs of an explicit Gaussian. In each disc the real
//! part is parametrized as `R sin φ` and the imaginary part is integrated
//! along the chord, both by Gauss–Legendre rules.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::numeric::{pairwise_sum, x_coth, C64};
use crate::specfun::gauss_legendre_nodes;
use crate::twisted::{gaussian_transform, gaussian_transform_rate, weight_constant, TwistedParams};

/// Disc radii used when none are given.
pub const DEFAULT_R_SCHEDULE: [f64; 5] = [2.0, 3.0, 4.0, 6.0, 8.0];

/// Relative change between the last two radii below which the trace counts
/// as converged.
pub const DEFAULT_TRACE_TOL: f64 = 1e-3;

/// Number of Gauss–Legendre nodes in `λ`; the bump is a polynomial of
/// degree 4, so products of two bumps are integrated exactly up to the
/// smooth factor `N_R(λ)`.
const SPECTRAL_NODES: usize = 24;

/// `f(x, u, ξ) = e^{−γ(x²+u²)} φ(ξ)` with
/// `φ̂(λ) = amplitude · ((λ − a)(b − λ))² / ((b − a)/2)⁴` on `[a, b]`, zero elsewhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompactSpectrumGaussian {
    pub t: f64,
    pub gamma: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub amplitude: C64,
}

impl CompactSpectrumGaussian {
    pub fn new(t: f64, gamma: f64, lambda_min: f64, lambda_max: f64, amplitude: C64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("t must be positive, got {t}")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid(format!("Gaussian width parameter must be positive, got {gamma}")));
        }
        if !(lambda_min > 0.0 && lambda_max > lambda_min && lambda_max.is_finite()) {
            return Err(invalid(format!(
                "spectrum must be a compact interval of (0, ∞), got [{lambda_min}, {lambda_max}]"
            )));
        }
        if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
            return Err(invalid("amplitude must be finite"));
        }
        Ok(Self { t, gamma, lambda_min, lambda_max, amplitude })
    }

    /// `φ̂(λ)`.
    pub fn spectrum(&self, lambda: f64) -> C64 {
        if lambda <= self.lambda_min || lambda >= self.lambda_max {
            return C64::new(0.0, 0.0);
        }
        let half = 0.5 * (self.lambda_max - self.lambda_min);
        let bump = (lambda - self.lambda_min) * (self.lambda_max - lambda) / (half * half);
        self.amplitude * bump * bump
    }

    /// `‖f‖₂² = (1/2π) ∫ |φ̂|² dλ · π/(2γ)`, in closed form.
    pub fn norm_sq(&self) -> f64 {
        // ∫_a^b ((λ−a)(b−λ))⁴ dλ = (b−a)⁹ · 4!·4!/9!, and the bump is scaled by ((b−a)/2)⁻⁴.
        let width = self.lambda_max - self.lambda_min;
        let spectral = width * 256.0 / 630.0 * self.amplitude.norm_sqr();
        spectral / (2.0 * PI) * PI / (2.0 * self.gamma)
    }

    /// The twisted layer at frequency `−λ`, which carries the `λ`-slice of `𝓗_t f`.
    fn slice_params(&self, lambda: f64) -> Result<TwistedParams> {
        TwistedParams::new(1, self.t, -lambda)
    }
}

/// Partial values of the bracket along the radius schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTrace {
    pub radii: Vec<f64>,
    pub values: Vec<C64>,
    /// `|values[k] − values[k−1]|`, one entry per consecutive pair.
    pub increments: Vec<f64>,
    /// Largest difference between the two quadrature resolutions.
    pub quadrature_error: f64,
    /// The last increment is at most `tol` times the last value.
    pub converged: bool,
}

impl BracketTrace {
    pub fn limit(&self) -> C64 {
        *self.values.last().expect("schedule is nonempty")
    }

    /// Real parts never decrease along the schedule.
    pub fn is_increasing(&self) -> bool {
        self.values.windows(2).all(|p| p[1].re >= p[0].re)
    }
}

/// `∫_{−Y}^{Y} e^{−p s² − a s} ds` by Gauss–Legendre.
fn chord_integral(rule: &crate::specfun::GaussRule, half: f64, p: f64, a: C64) -> C64 {
    let terms: Vec<C64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, wt)| {
            let s = half * x;
            (-(p * s * s) - a * s).exp() * (half * wt)
        })
        .collect();
    pairwise_sum(&terms)
}

/// `N_R(λ)` without the spectral and transform amplitudes: the integral over
/// `|z|, |w| < R` of `e^{−κ_F q − κ_G conj(q)} e^{λ(xv − uy)} e^{−c(y² + v²)}`
/// with `q = z² + w²` and `c = λ coth(2tλ)`.
fn disc_integral(kappa_f: f64, kappa_g: f64, lambda: f64, c: f64, radius: f64, outer: usize, inner: usize) -> Result<C64> {
    let sum = kappa_f + kappa_g;
    let diff = kappa_f - kappa_g;
    let p = c - sum;
    if !(p > 0.0) {
        return Err(invalid("slice weight does not dominate the transform growth"));
    }
    let outer_rule = gauss_legendre_nodes(outer)?;
    let inner_rule = gauss_legendre_nodes(inner)?;
    // Outer nodes φ ∈ (−π/2, π/2): real part R sin φ, chord half-length R cos φ.
    let nodes: Vec<(f64, f64, f64)> = outer_rule
        .nodes
        .iter()
        .zip(&outer_rule.weights)
        .map(|(x, wt)| {
            let phi = 0.5 * PI * x;
            (radius * phi.sin(), radius * phi.cos(), 0.5 * PI * wt * radius * phi.cos())
        })
        .collect();
    let rows: Vec<C64> = crate::numeric::par_map(nodes.len(), |i| {
        let (x, chord_x, wx) = nodes[i];
        let terms: Vec<C64> = nodes
            .iter()
            .map(|&(u, chord_u, wu)| {
                let envelope = (-sum * (x * x + u * u)).exp();
                let phase = C64::from_polar(1.0, -diff * (x * x + u * u));
                let along_y = chord_integral(&inner_rule, chord_x, p, C64::new(lambda * u, 2.0 * diff * x));
                let along_v = chord_integral(&inner_rule, chord_u, p, C64::new(-lambda * x, 2.0 * diff * u));
                envelope * phase * along_y * along_v * (wx * wu)
            })
            .collect();
        pairwise_sum(&terms)
    });
    let total = pairwise_sum(&rows);
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::NonConvergence(format!("disc integral overflowed at R = {radius}, λ = {lambda}")));
    }
    Ok(total)
}

fn node_counts(radius: f64) -> [(usize, usize); 2] {
    let outer = 24 + (4.0 * radius).ceil() as usize;
    let inner = 24 + (6.0 * radius).ceil() as usize;
    [(outer, inner), (outer + outer / 2, inner + inner / 2)]
}

/// One partial value `∫_{K_R} F conj(G) W_t^+` at both quadrature
/// resolutions.
fn partial_value(f: &CompactSpectrumGaussian, g: &CompactSpectrumGaussian, radius: f64) -> Result<[C64; 2]> {
    let a = f.lambda_min.max(g.lambda_min);
    let b = f.lambda_max.min(g.lambda_max);
    if a >= b || f.amplitude == C64::new(0.0, 0.0) || g.amplitude == C64::new(0.0, 0.0) {
        return Ok([C64::new(0.0, 0.0); 2]);
    }
    let rule = gauss_legendre_nodes(SPECTRAL_NODES)?;
    let mut out = [C64::new(0.0, 0.0); 2];
    for (slot, &(outer, inner)) in node_counts(radius).iter().enumerate() {
        let terms: Vec<C64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, wt)| {
                let lambda = 0.5 * (b - a) * x + 0.5 * (a + b);
                let (pf, pg) = (f.slice_params(lambda)?, g.slice_params(lambda)?);
                let origin = [C64::new(0.0, 0.0)];
                let amp_f = gaussian_transform(pf, f.gamma).eval(&origin, &origin);
                let amp_g = gaussian_transform(pg, g.gamma).eval(&origin, &origin);
                let (kf, kg) = (gaussian_transform_rate(pf, f.gamma), gaussian_transform_rate(pg, g.gamma));
                let c = x_coth(lambda, 2.0 * f.t);
                let disc = disc_integral(kf, kg, lambda, c, radius, outer, inner)?;
                let spectral = f.spectrum(lambda) * g.spectrum(lambda).conj();
                Ok(0.5 * (b - a) * wt * spectral * amp_f * amp_g.conj() * weight_constant(&pf) * disc)
            })
            .collect::<Result<_>>()?;
        out[slot] = pairwise_sum(&terms) / (2.0 * PI);
    }
    Ok(out)
}

/// The bracket `⟨𝓗_t f, 𝓗_t g⟩₊` along an increasing schedule of disc
/// radii. Fails when the schedule is not increasing, when the two inputs
/// live at different `t`, when the quadrature error exceeds `tol` relative
/// to the value, or when the increments stop shrinking.
pub fn vt_plus_pairing(
    f: &CompactSpectrumGaussian,
    g: &CompactSpectrumGaussian,
    radii: &[f64],
    tol: f64,
) -> Result<BracketTrace> {
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(invalid("radius schedule must be a nonempty list of positive radii"));
    }
    if radii.windows(2).any(|p| p[1] <= p[0]) {
        return Err(invalid("radius schedule must be strictly increasing"));
    }
    if f.t != g.t {
        return Err(invalid(format!("both transforms must use the same t, got {} and {}", f.t, g.t)));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(invalid(format!("trace tolerance must lie in (0, 1), got {tol}")));
    }
    let mut values = Vec::with_capacity(radii.len());
    let mut quadrature_error: f64 = 0.0;
    for &r in radii {
        let [coarse, fine] = partial_value(f, g, r)?;
        let error = (fine - coarse).norm();
        quadrature_error = quadrature_error.max(error);
        if error > 1e-3 * tol * fine.norm() {
            return Err(Error::NonConvergence(format!(
                "disc quadrature at R = {r} moved by {error:.3e} between resolutions"
            )));
        }
        values.push(fine);
    }
    let increments: Vec<f64> = values.windows(2).map(|p| (p[1] - p[0]).norm()).collect();
    if increments.windows(2).any(|d| d[1] > d[0]) {
        return Err(Error::NonConvergence(format!("bracket increments are not decreasing: {increments:?}")));
    }
    let last = values.last().expect("nonempty").norm();
    let converged = increments.last().map_or(true, |&d| d <= tol * last);
    Ok(BracketTrace { radii: radii.to_vec(), values, increments, quadrature_error, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted::weight_lambda;

    /// The disc integral against a plain 4-D Gauss–Legendre product built
    /// from the twisted layer's own transform and weight.
    #[test]
    fn disc_integral_matches_direct_product_rule() {
        let (t, gamma, lambda, radius) = (0.5, 0.4, 0.8, 1.5);
        let params = TwistedParams::new(1, t, -lambda).unwrap();
        let transform = gaussian_transform(params, gamma);
        let rule = gauss_legendre_nodes(20).unwrap();
        let mut total = 0.0;
        for (px, wx) in rule.nodes.iter().zip(&rule.weights) {
            let x = radius * (0.5 * PI * px).sin();
            let chord_x = radius * (0.5 * PI * px).cos();
            for (pu, wu) in rule.nodes.iter().zip(&rule.weights) {
                let u = radius * (0.5 * PI * pu).sin();
                let chord_u = radius * (0.5 * PI * pu).cos();
                for (qy, wy) in rule.nodes.iter().zip(&rule.weights) {
                    let y = chord_x * qy;
                    for (qv, wv) in rule.nodes.iter().zip(&rule.weights) {
                        let v = chord_u * qv;
                        let value = transform.eval(&[C64::new(x, y)], &[C64::new(u, v)]).norm_sqr()
                            * weight_lambda(&params, &[x], &[u], &[y], &[v]).unwrap();
                        let jacobian = (0.5 * PI * chord_x) * (0.5 * PI * chord_u) * chord_x * chord_u;
                        total += wx * wu * wy * wv * jacobian * value;
                    }
                }
            }
        }
        let kappa = gaussian_transform_rate(params, gamma);
        let amp = transform.eval(&[C64::new(0.0, 0.0)], &[C64::new(0.0, 0.0)]).norm_sqr();
        let c = x_coth(lambda, 2.0 * t);
        let fast = disc_integral(kappa, kappa, lambda, c, radius, 40, 40).unwrap() * amp * weight_constant(&params);
        assert!((fast.re - total).abs() < 1e-9 * total, "{} vs {}", fast.re, total);
        assert!(fast.im.abs() < 1e-12 * total);
    }
}

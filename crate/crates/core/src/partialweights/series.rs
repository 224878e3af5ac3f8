//! Hermite series for `W_{t/2}^+` when `n = 1`, the origin profile, and the
//! oscillation scan along the ray `2η = −β`.
//!
//! With `μ_k = (2k + 1 + (2η + β)/t)/2`, `x_k = −μ_k √t` and `r = β/√t`,
//!
//! ```text
//! W_{t/2}^+(iy, iv, iη) = c √(π/t) Σ_k g(μ_k) [ μ_k Σ_{j<=k} r^j/j! H_j(x_k) C(k,j)
//!                                       + (β/t) Σ_{j<k} r^j/j! H_j(x_k) C(k,j+1) ].
//! ```
//!
//! The factor `g(μ) = e^{−tμ²}` reproduces the contour integral; the variant
//! `g(μ) = e^{−μ²/4}` is kept as [`ExponentConvention::AsPrinted`] because it
//! is the one that produces the familiar oscillating picture. The constant
//! `c` is fixed once per convention by matching the contour value at
//! `β = η = 0`, `t = 1`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::OnceLock;

use super::contour::w_plus_reduced;
use super::{beta_of, PartialWeightParams};
use crate::error::{check_dim, invalid, Error, Result};
use crate::numeric::{fmt17, par_map};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExponentConvention {
    /// `e^{−tμ_k²}`, consistent with the contour integral.
    Corrected,
    /// `e^{−μ_k²/4}`.
    AsPrinted,
}

/// Which weight a scan at parameter `t` plots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScanConvention {
    /// The series at parameter `t`, i.e. `W_{t/2}^+`.
    Halved,
    /// The series at parameter `2t`, i.e. `W_t^+`.
    Full,
}

impl ScanConvention {
    pub fn series_t(self, t: f64) -> f64 {
        match self {
            ScanConvention::Halved => t,
            ScanConvention::Full => 2.0 * t,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ScanConvention::Halved => "halved",
            ScanConvention::Full => "full",
        }
    }
}

/// One term of the series, without the prefactor `c √(π/t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesTerm {
    pub k: usize,
    pub mu: f64,
    pub beta: f64,
    pub value: f64,
    /// The same sum with every summand replaced by its absolute value.
    pub bound: f64,
}

impl SeriesTerm {
    pub fn new(k: usize, t: f64, beta: f64, eta: f64, convention: ExponentConvention) -> Result<Self> {
        if !(beta >= 0.0) {
            return Err(invalid(format!("β must be nonnegative, got {beta}")));
        }
        if !(t > 0.0) {
            return Err(invalid(format!("t must be positive, got {t}")));
        }
        let mu = 0.5 * (2.0 * k as f64 + 1.0 + (2.0 * eta + beta) / t);
        let x = -mu * t.sqrt();
        let r = beta / t.sqrt();
        let gauss = match convention {
            ExponentConvention::Corrected => (-t * mu * mu).exp(),
            ExponentConvention::AsPrinted => (-0.25 * mu * mu).exp(),
        };
        let (mut first, mut first_abs, mut second, mut second_abs) = (0.0, 0.0, 0.0, 0.0);
        let (mut h_prev, mut h) = (0.0, 1.0);
        let mut power = 1.0;
        let mut binom = 1.0;
        for j in 0..=k {
            if j > 0 {
                let next = 2.0 * x * h - 2.0 * (j - 1) as f64 * h_prev;
                h_prev = h;
                h = next;
                power *= r / j as f64;
            }
            let base = power * h;
            first += base * binom;
            first_abs += (base * binom).abs();
            let binom_next = binom * (k - j) as f64 / (j + 1) as f64;
            if j < k {
                second += base * binom_next;
                second_abs += (base * binom_next).abs();
            }
            binom = binom_next;
        }
        let value = gauss * (mu * first + beta / t * second);
        let bound = gauss * (mu.abs() * first_abs + beta / t * second_abs);
        if !value.is_finite() || !bound.is_finite() {
            return Err(Error::NonConvergence(format!("series term {k} overflowed at β = {beta}, η = {eta}")));
        }
        Ok(Self { k, mu, beta, value, bound })
    }
}

/// The first `count` terms.
pub fn series_terms(t: f64, beta: f64, eta: f64, convention: ExponentConvention, count: usize) -> Result<Vec<SeriesTerm>> {
    (0..count).map(|k| SeriesTerm::new(k, t, beta, eta, convention)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
    /// Magnitude bound of the last term kept, relative to the largest one.
    pub last_bound: f64,
    /// Sum of the term bounds (including the prefactor), which measures how
    /// much cancellation the value went through.
    pub abs_sum: f64,
}

fn raw_series(t: f64, beta: f64, eta: f64, convention: ExponentConvention, tol: f64, max_terms: usize) -> Result<SeriesValue> {
    let mut terms = Vec::new();
    let mut largest: f64 = 0.0;
    let mut previous = f64::INFINITY;
    for k in 0..max_terms {
        let term = SeriesTerm::new(k, t, beta, eta, convention)?;
        largest = largest.max(term.bound);
        terms.push(term);
        let decaying = term.mu > 0.0 && term.bound <= previous;
        previous = term.bound;
        if decaying && term.bound <= 0.1 * tol * largest {
            let values: Vec<f64> = terms.iter().map(|s| s.value).collect();
            let bounds: Vec<f64> = terms.iter().map(|s| s.bound).collect();
            return Ok(SeriesValue {
                value: crate::numeric::pairwise_sum(&values),
                terms: terms.len(),
                last_bound: if largest > 0.0 { term.bound / largest } else { 0.0 },
                abs_sum: crate::numeric::pairwise_sum(&bounds),
            });
        }
    }
    Err(Error::NonConvergence(format!(
        "series did not reach relative term size {tol:.1e} within {max_terms} terms"
    )))
}

fn calibration_cell(convention: ExponentConvention) -> &'static OnceLock<std::result::Result<f64, String>> {
    static CORRECTED: OnceLock<std::result::Result<f64, String>> = OnceLock::new();
    static AS_PRINTED: OnceLock<std::result::Result<f64, String>> = OnceLock::new();
    match convention {
        ExponentConvention::Corrected => &CORRECTED,
        ExponentConvention::AsPrinted => &AS_PRINTED,
    }
}

/// The constant `c`, computed on first use from the contour value
/// `W_{1/2}^+(0, 0, 0)` and frozen afterwards.
pub fn calibration_constant(convention: ExponentConvention) -> Result<f64> {
    calibration_cell(convention)
        .get_or_init(|| {
            let params = PartialWeightParams::new(1, 0.5).and_then(|p| p.with_tol(1e-14)).map_err(|e| e.to_string())?;
            let contour = w_plus_reduced(&params, 0.0, 0.0).map_err(|e| e.to_string())?;
            let series = raw_series(1.0, 0.0, 0.0, convention, 1e-16, 1000).map_err(|e| e.to_string())?;
            Ok(contour.value / (PI.sqrt() * series.value))
        })
        .clone()
        .map_err(|msg| Error::NonConvergence(format!("calibration of c failed: {msg}")))
}

/// `W_{t/2}^+` from the series at parameter `t = params.t`, as a function of
/// `β` and `η`.
pub fn w_plus_series_reduced(
    params: &PartialWeightParams,
    beta: f64,
    eta: f64,
    convention: ExponentConvention,
) -> Result<SeriesValue> {
    if params.n != 1 {
        return Err(invalid("the Hermite series is only available for n = 1"));
    }
    let c = calibration_constant(convention)?;
    let raw = raw_series(params.t, beta, eta, convention, params.tol, params.max_terms)?;
    let prefactor = c * (PI / params.t).sqrt();
    Ok(SeriesValue { value: prefactor * raw.value, abs_sum: prefactor * raw.abs_sum, ..raw })
}

/// `W_{t/2}^+(iy, iv, iη)` from the series at parameter `t = params.t`.
pub fn w_plus_series(
    params: &PartialWeightParams,
    y: &[f64],
    v: &[f64],
    eta: f64,
    convention: ExponentConvention,
) -> Result<SeriesValue> {
    check_dim(1, y.len())?;
    check_dim(1, v.len())?;
    w_plus_series_reduced(params, beta_of(y, v), eta, convention)
}

/// `W_{t/2}^+(0, 0, iη)`, the `β = 0` series.
pub fn origin_profile(eta: f64, t: f64) -> Result<f64> {
    let params = PartialWeightParams::new(1, t)?;
    Ok(w_plus_series_reduced(&params, 0.0, eta, ExponentConvention::Corrected)?.value)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub beta: f64,
    pub value: f64,
    /// `value / (c √π log(2 + β²))`.
    pub normalized_value: f64,
}

/// Samples along `2η = −β` for `β` in `[0, beta_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillationScan {
    pub t: f64,
    pub exponent: ExponentConvention,
    pub convention: ScanConvention,
    pub rows: Vec<ScanRow>,
    /// Interpolated `β` locations where the value changes sign.
    pub sign_changes: Vec<f64>,
    /// Largest `|normalized_value|` on each stretch of constant sign.
    pub lobe_amplitudes: Vec<f64>,
}

impl OscillationScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,value,normalized_value\n");
        for r in &self.rows {
            writeln!(out, "{},{},{}", fmt17(r.beta), fmt17(r.value), fmt17(r.normalized_value)).expect("string write");
        }
        out
    }

    pub fn max_abs_value(&self) -> f64 {
        self.rows.iter().map(|r| r.value.abs()).fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min)
    }
}

pub fn oscillation_scan(
    t: f64,
    beta_max: f64,
    steps: usize,
    exponent: ExponentConvention,
    convention: ScanConvention,
) -> Result<OscillationScan> {
    if steps < 2 {
        return Err(invalid(format!("a scan needs at least 2 steps, got {steps}")));
    }
    if !(beta_max > 0.0 && beta_max.is_finite()) {
        return Err(invalid(format!("beta_max must be positive, got {beta_max}")));
    }
    let params = PartialWeightParams::new(1, convention.series_t(t))?;
    let c = calibration_constant(exponent)?;
    let rows: Vec<ScanRow> = par_map(steps, |i| {
        let beta = beta_max * i as f64 / (steps - 1) as f64;
        let value = w_plus_series_reduced(&params, beta, -0.5 * beta, exponent)?.value;
        let normalized_value = value / (c * PI.sqrt() * (2.0 + beta * beta).ln());
        Ok(ScanRow { beta, value, normalized_value })
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let mut sign_changes = Vec::new();
    let mut lobe_amplitudes = Vec::new();
    let mut lobe: f64 = 0.0;
    for pair in rows.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        lobe = lobe.max(a.normalized_value.abs());
        if (a.value < 0.0) != (b.value < 0.0) && a.value != 0.0 {
            sign_changes.push(a.beta + (b.beta - a.beta) * a.value / (a.value - b.value));
            lobe_amplitudes.push(lobe);
            lobe = 0.0;
        }
    }
    if let Some(last) = rows.last() {
        lobe_amplitudes.push(lobe.max(last.normalized_value.abs()));
    }
    Ok(OscillationScan { t, exponent, convention, rows, sign_changes, lobe_amplitudes })
}

//! The signed partial weights `W_t^±` on the complexified group, their
//! Hermite series for `n = 1`, the one-dimensional Bergman layer, the `K_R`
//! exhaustion bracket, and the signed-weight disk example.
//!
//! `W_t^+` is evaluated as the contour integral
//!
//! ```text
//! W_t^+(iy, iv, iη) = (1/2π) ∫ e^{2tμ²} e^{−2ημ} W_t^μ(iy, iv) ds,   μ = λ + is/2, λ > 0,
//! ```
//!
//! which is independent of `λ`. At a general point `(z, w, ξ + iη)` the
//! weight only depends on `y`, `v` and the central coordinate of the polar
//! decomposition, `η − ½(x·v − u·y)`. `W_t^−` is the same integral along a
//! line with `λ < 0`.

mod bracket;
mod contour;
mod disk;
mod onedim;
mod pde;
mod series;

pub use bracket::{vt_plus_pairing, BracketTrace, CompactSpectrumGaussian, DEFAULT_R_SCHEDULE, DEFAULT_TRACE_TOL};
pub use contour::{
    reconstruct_weight, reconstruct_weight_table, w_minus, w_minus_at, w_minus_contour, w_minus_reflection, w_plus_at,
    w_plus_contour, w_plus_reduced, ContourValue, ReconstructedWeight,
};
pub use disk::{signed_disk_demo, DiskDemo};
pub use onedim::{
    branch_of, one_dim_bergman_norm, one_dim_scale, one_dim_transform, q_heat, BranchTag, OneDimGrid,
    OneDimSample, OneDimTransform,
};
pub use pde::{generator_residual, pde_residual, PdeResidual};
pub use series::{
    calibration_constant, origin_profile, oscillation_scan, series_terms, w_plus_series, w_plus_series_reduced,
    ExponentConvention, OscillationScan, ScanConvention, ScanRow, SeriesTerm, SeriesValue,
};

use crate::error::{invalid, Result};

/// Which of the two signed weights a contour belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Evaluation parameters shared by the contour, series and reconstruction
/// routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartialWeightParams {
    pub n: usize,
    pub t: f64,
    /// Fixed real part of the contour. `None` picks, per point, the line
    /// that keeps the integrand's peak smallest.
    pub abscissa: Option<f64>,
    /// Relative target for quadrature refinement and series truncation.
    pub tol: f64,
    /// Largest accepted imaginary part of the contour integral, relative to
    /// its real part.
    pub imag_tol: f64,
    /// Upper bound on the number of series terms.
    pub max_terms: usize,
}

impl PartialWeightParams {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        Self { n, t, abscissa: None, tol: 1e-12, imag_tol: 1e-8, max_terms: 400 }.validated()
    }

    pub fn with_abscissa(mut self, abscissa: f64) -> Result<Self> {
        self.abscissa = Some(abscissa);
        self.validated()
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        self.tol = tol;
        self.validated()
    }

    pub fn with_t(mut self, t: f64) -> Result<Self> {
        self.t = t;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(invalid(format!("t must be positive, got {}", self.t)));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) || !(self.imag_tol > 0.0) {
            return Err(invalid("tolerances must lie in (0, 1)"));
        }
        if self.max_terms == 0 {
            return Err(invalid("series truncation K must be at least 1"));
        }
        if let Some(l) = self.abscissa {
            if !(l.is_finite() && l != 0.0) {
                return Err(invalid("contour abscissa must be finite and nonzero"));
            }
        }
        Ok(self)
    }

    fn check_branch(&self, branch: Branch) -> Result<()> {
        match (self.abscissa, branch) {
            (Some(l), Branch::Plus) if l < 0.0 => Err(invalid("W⁺ needs a contour with positive abscissa")),
            (Some(l), Branch::Minus) if l > 0.0 => Err(invalid("W⁻ needs a contour with negative abscissa")),
            _ => Ok(()),
        }
    }
}

fn beta_of(y: &[f64], v: &[f64]) -> f64 {
    y.iter().chain(v).map(|s| s * s).sum()
}

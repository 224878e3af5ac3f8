//! Tolerances for the verification suites.
//!
//! Every identity checked by [`crate::verify`] has a default tolerance listed
//! in [`DEFAULT_TOLERANCES`]. A TOML file can override any of them:
//!
//! ```toml
//! [tolerances]
//! reproducing_identity = 2e-3
//! kr_bracket_limit = 5e-4
//! ```
//!
//! Unknown names are rejected so that a typo cannot silently leave a default
//! in place.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// `(identity, default tolerance, what the residual measures)`.
pub const DEFAULT_TOLERANCES: &[(&str, f64, &str)] = &[
    ("group_associativity", 1e-12, "max coordinate difference of (pq)r and p(qr)"),
    ("group_inverse", 1e-12, "max coordinate of p·p⁻¹"),
    ("polar_round_trip", 1e-12, "max coordinate difference after decomposing and recomposing"),
    ("kernel_origin_value", 1e-10, "relative error of k_1 at the identity"),
    ("heat_semigroup", 1e-4, "max relative error of k_t ∗ k_t against k_2t over 10 points"),
    ("twisted_semigroup", 1e-4, "relative l2 error of p_s ∗_λ p_t against p_(s+t) on a grid"),
    ("generator_identity", 1e-4, "max relative central-difference residual of ∂_t p = (Δ − λ²r²/4) p"),
    ("reproducing_chain", 1e-10, "max relative residual of the Gaussian and hyperbolic steps"),
    ("reproducing_identity", 1e-3, "max relative error of ⟨τ(−a,−b) p_2t, p_2t⟩ against p_2t(a,b)"),
    ("eigen_relation", 1e-4, "max relative error of H_t(Φ_αβ) against e^{−(2|β|+n)λt} Φ_αβ"),
    ("equivariance", 1e-6, "relative error of H_t ∘ τ against τ ∘ H_t"),
    ("inversion_error", 1e-2, "sup error of F_s against f at s = 10⁻³, relative to sup f"),
    ("inversion_decrease", 0.5, "largest ratio of successive inversion errors along s = 10⁻¹, 10⁻², 10⁻³"),
    ("spectral_factorization", 1e-4, "relative error of the ξ-slice of 𝓗_t f against e^{λη−tλ²} H_t^{−λ} f^λ"),
    ("slice_convolution", 1e-4, "relative error of the λ-slice of f ∗ g against f^λ ∗_{−λ} g^λ"),
    ("orthonormal_basis", 1e-3, "max entrywise deviation of the Gram matrix of Φ̃_αβ from the identity"),
    ("isometry", 1e-3, "max relative error of ‖H_t f‖² against ‖f‖² over 5 mixtures"),
    ("reproducing_kernel", 1e-4, "relative error of ⟨F, K_(a,b)⟩ against F(a,b)"),
    ("contour_independence", 1e-6, "max |W(λ') − W(λ)| / (1 + |W|) across abscissas 0.25, 0.5, 1"),
    ("contour_realness", 1e-8, "max imaginary part relative to the real part"),
    ("reconstruction", 1e-4, "max relative error of the η-reconstruction against W_t^λ"),
    ("minus_paths", 1e-8, "max relative disagreement of the two W⁻ evaluations"),
    ("pde_residual", 1e-3, "max relative residual of 2∂_t U = (Δ + (1−β)∂_η²) U"),
    ("signed_disk_diagonal", 1e-10, "max relative error of ⟨zⁿ, zⁿ⟩ against (π/(n+1))(1 − 2^{−(2n+1)})"),
    ("signed_disk_off_diagonal", 1e-12, "max |⟨z^m, z^k⟩| for m ≠ k"),
    ("one_dim_scale", 1e-6, "max relative spread of ‖h_t g‖²/‖g‖² across 5 functions"),
    ("kr_bracket_limit", 1e-3, "relative error of the last bracket value against ‖f‖²"),
    ("kr_bracket_monotone", 0.0, "largest decrease along the radius schedule, relative to the limit"),
    ("negativity_witness", -1e-3, "min W_t^+ along 2η = −β divided by its max modulus"),
    ("series_contour", 1e-4, "max relative deviation of the series from the contour over 20 points"),
    ("calibration_constant", 1e-10, "relative distance of c from 2/π²"),
    ("origin_profile_positive", 0.0, "−min/max of the origin profile on η ∈ [0, 10t]"),
    ("origin_profile_integer_tail", 1e-8, "relative error at η = −mt against the positive tail sum"),
    ("oscillation_sign_changes", 0.0, "2 minus the number of sign changes of the printed-exponent scan"),
];

/// Tolerance per identity name.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    values: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { values: DEFAULT_TOLERANCES.iter().map(|&(k, v, _)| (k.to_string(), v)).collect() }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
}

impl Tolerances {
    pub fn get(&self, identity: &str) -> f64 {
        *self.values.get(identity).unwrap_or_else(|| panic!("no tolerance registered for {identity}"))
    }

    pub fn set(&mut self, identity: &str, tolerance: f64) -> Result<()> {
        if !self.values.contains_key(identity) {
            return Err(Error::Config(format!("unknown identity `{identity}`")));
        }
        if !tolerance.is_finite() {
            return Err(Error::Config(format!("tolerance for `{identity}` must be finite")));
        }
        self.values.insert(identity.to_string(), tolerance);
        Ok(())
    }

    /// Defaults with the overrides of a TOML document applied.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: File = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut out = Self::default();
        for (name, value) in file.tolerances {
            out.set(&name, value)?;
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

//! Monomials on the unit disk against the signed weight
//! `W = 1_{1/2 <= |z| < 1} − 1_{|z| < 1/2}`.
//!
//! The pairing `⟨z^m, z^k⟩ = ∫ r^{m+k+1} e^{i(m−k)θ} W(r) dr dθ` is computed
//! with a periodic trapezoid rule in `θ` and Gauss–Legendre rules on the two
//! radial pieces, so polynomial integrands are integrated exactly up to
//! rounding.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::numeric::{pairwise_sum, C64};
use crate::specfun::gauss_legendre_nodes;

const ANGLE_NODES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct DiskDemo {
    pub max_degree: usize,
    /// `⟨z^m, z^k⟩`, row-major `(max_degree + 1)²`.
    pub gram: Vec<C64>,
    /// `(π/(m+1))(1 − 2^{−(2m+1)})`.
    pub expected_diagonal: Vec<f64>,
    pub max_diagonal_error: f64,
    pub max_off_diagonal: f64,
    pub diagonal_positive: bool,
    /// Smallest ratio of the signed norm to the unsigned one,
    /// `⟨z^m,z^m⟩ / (π/(m+1))`.
    pub equivalence_constant: f64,
}

impl DiskDemo {
    pub fn entry(&self, m: usize, k: usize) -> C64 {
        self.gram[m * (self.max_degree + 1) + k]
    }
}

fn signed_weight(r: f64) -> f64 {
    if r < 0.5 {
        -1.0
    } else {
        1.0
    }
}

pub fn signed_disk_demo(max_degree: usize) -> Result<DiskDemo> {
    if 2 * max_degree + 1 >= ANGLE_NODES {
        return Err(invalid(format!("degree {max_degree} needs more than {ANGLE_NODES} angular nodes")));
    }
    let radial = gauss_legendre_nodes(max_degree + 2)?;
    let mut radii = Vec::new();
    for (lo, hi) in [(0.0, 0.5), (0.5, 1.0)] {
        for (x, w) in radial.nodes.iter().zip(&radial.weights) {
            let r: f64 = 0.5 * (hi - lo) * x + 0.5 * (hi + lo);
            radii.push((r, 0.5 * (hi - lo) * w * signed_weight(r)));
        }
    }
    let dim = max_degree + 1;
    let mut gram = vec![C64::new(0.0, 0.0); dim * dim];
    for m in 0..dim {
        for k in 0..dim {
            let radial_part: Vec<f64> = radii.iter().map(|&(r, w)| w * r.powi((m + k + 1) as i32)).collect();
            let angular: Vec<C64> = (0..ANGLE_NODES)
                .map(|j| C64::from_polar(2.0 * PI / ANGLE_NODES as f64, (m as f64 - k as f64) * 2.0 * PI * j as f64 / ANGLE_NODES as f64))
                .collect();
            gram[m * dim + k] = pairwise_sum(&angular) * pairwise_sum(&radial_part);
        }
    }
    let expected_diagonal: Vec<f64> =
        (0..dim).map(|m| PI / (m + 1) as f64 * (1.0 - 0.5f64.powi(2 * m as i32 + 1))).collect();
    let mut max_diagonal_error: f64 = 0.0;
    let mut max_off_diagonal: f64 = 0.0;
    let mut equivalence_constant = f64::INFINITY;
    for m in 0..dim {
        for k in 0..dim {
            let g = gram[m * dim + k];
            if m == k {
                max_diagonal_error = max_diagonal_error.max((g - expected_diagonal[m]).norm() / expected_diagonal[m]);
                equivalence_constant = equivalence_constant.min(g.re / (PI / (m + 1) as f64));
            } else {
                max_off_diagonal = max_off_diagonal.max(g.norm());
            }
        }
    }
    let diagonal_positive = (0..dim).all(|m| gram[m * dim + m].re > 0.0);
    Ok(DiskDemo {
        max_degree,
        gram,
        expected_diagonal,
        max_diagonal_error,
        max_off_diagonal,
        diagonal_positive,
        equivalence_constant,
    })
}

//! Tensor-product uniform lattices and complex fields sampled on them.
//!
//! Values are stored row-major with the last axis varying fastest. For fields
//! on the group the axis order is `x_1..x_n, u_1..u_n, xi`; for fields on
//! `R^{2n}` it is `x_1..x_n, u_1..u_n`.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{fmt17, par_sum, C64};

/// Boundary-to-interior magnitude ratio above which a sampled integrand is
/// considered truncated.
pub const DEFAULT_DECAY_THRESHOLD: f64 = 1e-3;

/// One uniform axis: nodes `start + i * step` for `i < count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(invalid(format!("axis spacing must be positive, got {step}")));
        }
        if count == 0 {
            return Err(invalid("axis must have at least one node"));
        }
        if !start.is_finite() {
            return Err(invalid("axis start must be finite"));
        }
        Ok(Self { start, step, count })
    }

    /// Nodes `k * step` for all integers `k` with `|k * step| <= half_width`.
    pub fn symmetric(half_width: f64, step: f64) -> Result<Self> {
        if !(half_width >= 0.0) {
            return Err(invalid("half width must be non-negative"));
        }
        let k = (half_width / step + 1e-9).floor() as usize;
        Self::new(-(k as f64) * step, step, 2 * k + 1)
    }

    /// Nodes `k * step + center`, symmetric about `center`.
    pub fn centered(center: f64, half_width: f64, step: f64) -> Result<Self> {
        let a = Self::symmetric(half_width, step)?;
        Self::new(a.start + center, step, a.count)
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.node(i)).collect()
    }

    pub fn end(&self) -> f64 {
        self.node(self.count - 1)
    }
}

/// A tensor product of uniform axes.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    pub axes: Vec<Axis>,
}

impl Lattice {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(invalid("lattice needs at least one axis"));
        }
        Ok(Self { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.step).product()
    }

    /// Multi-index of the flat index `i`.
    pub fn multi_index(&self, mut i: usize, out: &mut [usize]) {
        for (k, a) in self.axes.iter().enumerate().rev() {
            out[k] = i % a.count;
            i /= a.count;
        }
    }

    /// Coordinates of the flat index `i`.
    pub fn point(&self, mut i: usize, out: &mut [f64]) {
        for (k, a) in self.axes.iter().enumerate().rev() {
            out[k] = a.node(i % a.count);
            i /= a.count;
        }
    }

    pub fn is_boundary(&self, idx: &[usize]) -> bool {
        idx.iter()
            .zip(&self.axes)
            .any(|(&i, a)| a.count > 1 && (i == 0 || i + 1 == a.count))
    }
}

/// Metadata carried with a sampled field and written to its descriptor.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub n: usize,
    pub t: Option<f64>,
    pub lambda: Option<f64>,
}

/// Complex values on a [`Lattice`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub lattice: Lattice,
    pub values: Vec<C64>,
    pub meta: FieldMeta,
}

#[derive(Serialize, Deserialize)]
struct AxisDescriptor {
    name: String,
    start: f64,
    spacing: f64,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct Descriptor {
    axes: Vec<AxisDescriptor>,
    n: usize,
    t: Option<f64>,
    lambda: Option<f64>,
}

impl SampledField {
    pub fn new(lattice: Lattice, values: Vec<C64>, meta: FieldMeta) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(invalid(format!(
                "value count {} does not match lattice size {}",
                values.len(),
                lattice.len()
            )));
        }
        Ok(Self { lattice, values, meta })
    }

    /// Sample `f` at every node (in parallel, order preserving).
    pub fn from_fn<F>(lattice: Lattice, meta: FieldMeta, f: F) -> Self
    where
        F: Fn(&[f64]) -> C64 + Sync,
    {
        let d = lattice.dim();
        let values = (0..lattice.len())
            .into_par_iter()
            .map_init(
                || vec![0.0; d],
                |p, i| {
                    lattice.point(i, p);
                    f(p)
                },
            )
            .collect();
        Self { lattice, values, meta }
    }

    /// Largest boundary magnitude divided by the largest interior magnitude.
    pub fn boundary_ratio(&self) -> f64 {
        let d = self.lattice.dim();
        let mut idx = vec![0usize; d];
        let (mut bmax, mut imax) = (0.0f64, 0.0f64);
        for (i, v) in self.values.iter().enumerate() {
            self.lattice.multi_index(i, &mut idx);
            let m = v.norm();
            if self.lattice.is_boundary(&idx) {
                bmax = bmax.max(m);
            } else {
                imax = imax.max(m);
            }
        }
        if imax == 0.0 {
            if bmax == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            bmax / imax
        }
    }

    /// Error out unless the field has decayed at the edge of its box.
    pub fn check_decay(&self, threshold: f64) -> Result<()> {
        let ratio = self.boundary_ratio();
        if ratio > threshold {
            Err(Error::Truncation { ratio, threshold })
        } else {
            Ok(())
        }
    }

    /// Riemann sum of the values times the cell volume.
    pub fn integral(&self) -> C64 {
        par_sum(self.values.len(), |i| self.values[i]) * self.lattice.cell_volume()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        par_sum(self.values.len(), |i| self.values[i].norm_sqr()) * self.lattice.cell_volume()
    }

    fn axis_names(&self) -> Vec<String> {
        let d = self.lattice.dim();
        let n = self.meta.n;
        if n > 0 && (d == 2 * n || d == 2 * n + 1) {
            let mut names: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
            names.extend((1..=n).map(|j| format!("u{j}")));
            if d == 2 * n + 1 {
                names.push("xi".into());
            }
            names
        } else {
            (0..d).map(|k| format!("axis{k}")).collect()
        }
    }

    /// CSV body: header `axis0,...,axisK,re,im` and one row per node.
    pub fn to_csv_string(&self) -> String {
        let d = self.lattice.dim();
        let mut out = String::new();
        for k in 0..d {
            out.push_str(&format!("axis{k},"));
        }
        out.push_str("re,im\n");
        let mut p = vec![0.0; d];
        for (i, v) in self.values.iter().enumerate() {
            self.lattice.point(i, &mut p);
            for c in &p {
                out.push_str(&fmt17(*c));
                out.push(',');
            }
            out.push_str(&fmt17(v.re));
            out.push(',');
            out.push_str(&fmt17(v.im));
            out.push('\n');
        }
        out
    }

    /// Sidecar JSON descriptor (axes with names and spacings, n, t, lambda).
    pub fn descriptor_json(&self) -> String {
        let desc = Descriptor {
            axes: self
                .lattice
                .axes
                .iter()
                .zip(self.axis_names())
                .map(|(a, name)| AxisDescriptor {
                    name,
                    start: a.start,
                    spacing: a.step,
                    count: a.count,
                })
                .collect(),
            n: self.meta.n,
            t: self.meta.t,
            lambda: self.meta.lambda,
        };
        serde_json::to_string_pretty(&desc).expect("descriptor serializes")
    }

    /// Path of the descriptor written next to `csv_path`.
    pub fn descriptor_path(csv_path: &Path) -> PathBuf {
        csv_path.with_extension("json")
    }

    /// Write the CSV and its sidecar descriptor.
    pub fn write(&self, csv_path: &Path) -> Result<()> {
        std::fs::File::create(csv_path)?.write_all(self.to_csv_string().as_bytes())?;
        std::fs::File::create(Self::descriptor_path(csv_path))?
            .write_all(self.descriptor_json().as_bytes())?;
        Ok(())
    }

    /// Read a field written by [`SampledField::write`].
    pub fn read(csv_path: &Path) -> Result<Self> {
        let desc: Descriptor =
            serde_json::from_str(&std::fs::read_to_string(Self::descriptor_path(csv_path))?)?;
        let axes = desc
            .axes
            .iter()
            .map(|a| Axis::new(a.start, a.spacing, a.count))
            .collect::<Result<Vec<_>>>()?;
        let lattice = Lattice::new(axes)?;
        let d = lattice.dim();
        let mut rdr = csv::Reader::from_path(csv_path)?;
        let mut values = Vec::with_capacity(lattice.len());
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != d + 2 {
                return Err(invalid(format!("row has {} columns, expected {}", rec.len(), d + 2)));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse::<f64>().map_err(|e| invalid(format!("bad float {s:?}: {e}")))
            };
            values.push(C64::new(parse(&rec[d])?, parse(&rec[d + 1])?));
        }
        Self::new(
            lattice,
            values,
            FieldMeta { n: desc.n, t: desc.t, lambda: desc.lambda },
        )
    }
}

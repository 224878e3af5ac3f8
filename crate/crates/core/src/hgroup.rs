//! Heisenberg group coordinates, the group law, the polar map of the
//! complexification, Haar convolution, and central Fourier slices.
//!
//! Real points are `(x, u, ξ)` with law
//! `(x,u,ξ)(x',u',ξ') = (x+x', u+u', ½(x·u' − u·x') + ξ + ξ')`.
//! The complexified group uses the same polynomial law on `(z, w, ζ)`.

use rayon::prelude::*;

use crate::error::{check_dim, invalid, Error, Result};
use crate::lattice::{FieldMeta, Lattice, SampledField};
use crate::numeric::{pairwise_sum, par_sum, C64};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// A point `(x, u, ξ)` of the real Heisenberg group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPoint {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub xi: f64,
}

impl GroupPoint {
    pub fn new(x: Vec<f64>, u: Vec<f64>, xi: f64) -> Result<Self> {
        check_dim(x.len(), u.len())?;
        if x.is_empty() {
            return Err(invalid("group points need n >= 1"));
        }
        if !(x.iter().chain(&u).all(|v| v.is_finite()) && xi.is_finite()) {
            return Err(invalid("group point has non-finite entries"));
        }
        Ok(Self { x, u, xi })
    }

    pub fn identity(n: usize) -> Self {
        Self { x: vec![0.0; n], u: vec![0.0; n], xi: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn complexify(&self) -> ComplexGroupPoint {
        ComplexGroupPoint {
            z: self.x.iter().map(|&v| C64::new(v, 0.0)).collect(),
            w: self.u.iter().map(|&v| C64::new(v, 0.0)).collect(),
            zeta: C64::new(self.xi, 0.0),
        }
    }
}

/// The group law.
pub fn multiply(p: &GroupPoint, q: &GroupPoint) -> Result<GroupPoint> {
    check_dim(p.n(), q.n())?;
    Ok(GroupPoint {
        x: p.x.iter().zip(&q.x).map(|(a, b)| a + b).collect(),
        u: p.u.iter().zip(&q.u).map(|(a, b)| a + b).collect(),
        xi: 0.5 * (dot(&p.x, &q.u) - dot(&p.u, &q.x)) + p.xi + q.xi,
    })
}

/// `(x,u,ξ)⁻¹ = (−x,−u,−ξ)`.
pub fn inverse(p: &GroupPoint) -> GroupPoint {
    GroupPoint {
        x: p.x.iter().map(|v| -v).collect(),
        u: p.u.iter().map(|v| -v).collect(),
        xi: -p.xi,
    }
}

/// A point `(z, w, ζ)` of the complexified group.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGroupPoint {
    pub z: Vec<C64>,
    pub w: Vec<C64>,
    pub zeta: C64,
}

impl ComplexGroupPoint {
    pub fn new(z: Vec<C64>, w: Vec<C64>, zeta: C64) -> Result<Self> {
        check_dim(z.len(), w.len())?;
        if z.is_empty() {
            return Err(invalid("group points need n >= 1"));
        }
        let finite = |c: &C64| c.re.is_finite() && c.im.is_finite();
        if !(z.iter().chain(&w).all(finite) && finite(&zeta)) {
            return Err(invalid("complex group point has non-finite entries"));
        }
        Ok(Self { z, w, zeta })
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_dim(self.n(), other.n())?;
        Ok(Self {
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            w: self.w.iter().zip(&other.w).map(|(a, b)| a + b).collect(),
            zeta: (cdot(&self.z, &other.w) - cdot(&self.w, &other.z)) * 0.5 + self.zeta + other.zeta,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            z: self.z.iter().map(|v| -v).collect(),
            w: self.w.iter().map(|v| -v).collect(),
            zeta: -self.zeta,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            z: self.z.iter().map(|v| v.conj()).collect(),
            w: self.w.iter().map(|v| v.conj()).collect(),
            zeta: self.zeta.conj(),
        }
    }

    /// `(Re z, Re w, Re ζ)`.
    pub fn real_part(&self) -> GroupPoint {
        GroupPoint {
            x: self.z.iter().map(|v| v.re).collect(),
            u: self.w.iter().map(|v| v.re).collect(),
            xi: self.zeta.re,
        }
    }

    /// `(Im z, Im w, Im ζ)`.
    pub fn imag_part(&self) -> GroupPoint {
        GroupPoint {
            x: self.z.iter().map(|v| v.im).collect(),
            u: self.w.iter().map(|v| v.im).collect(),
            xi: self.zeta.im,
        }
    }
}

/// Write `c = h · exp(iX)` with `h` real and `X` in the Lie algebra.
///
/// The forward map is `(x,u,ξ)·exp(i(y,v,η')) = (x+iy, u+iv, ξ + i(η' + ½(x·v − u·y)))`,
/// so `X = (y, v, η − ½(x·v − u·y))`.
pub fn polar_decompose(c: &ComplexGroupPoint) -> (GroupPoint, GroupPoint) {
    let h = c.real_part();
    let im = c.imag_part();
    let cross = 0.5 * (dot(&h.x, &im.u) - dot(&h.u, &im.x));
    let xi = im.xi - cross;
    (h, GroupPoint { x: im.x, u: im.u, xi })
}

/// Inverse of [`polar_decompose`].
pub fn polar_recompose(h: &GroupPoint, lie: &GroupPoint) -> Result<ComplexGroupPoint> {
    check_dim(h.n(), lie.n())?;
    let exp_ix = ComplexGroupPoint {
        z: lie.x.iter().map(|&v| C64::new(0.0, v)).collect(),
        w: lie.u.iter().map(|&v| C64::new(0.0, v)).collect(),
        zeta: C64::new(0.0, lie.xi),
    };
    h.complexify().multiply(&exp_ix)
}

/// A function on the group that can be evaluated anywhere.
pub trait GroupFunction: Sync {
    fn eval(&self, x: &[f64], u: &[f64], xi: f64) -> C64;
}

impl<F> GroupFunction for F
where
    F: Fn(&[f64], &[f64], f64) -> C64 + Sync,
{
    fn eval(&self, x: &[f64], u: &[f64], xi: f64) -> C64 {
        self(x, u, xi)
    }
}

fn group_lattice_n(lattice: &Lattice) -> Result<usize> {
    let d = lattice.dim();
    if d < 3 || d % 2 == 0 {
        return Err(Error::IncompatibleLattice(format!(
            "expected a lattice over R^(2n+1), got dimension {d}"
        )));
    }
    Ok((d - 1) / 2)
}

/// `(f ∗ g)(p) = ∫ f(h) g(h⁻¹p) dh` on the nodes of `output`, by the
/// lattice rule of `f`. The samples of `f` must have decayed at the edge
/// of their box.
pub fn convolve(
    f: &SampledField,
    g: &dyn GroupFunction,
    output: &Lattice,
    decay_threshold: f64,
) -> Result<SampledField> {
    let n = group_lattice_n(&f.lattice)?;
    let n_out = group_lattice_n(output)?;
    if n != n_out {
        return Err(Error::IncompatibleLattice(format!(
            "input has n = {n}, output has n = {n_out}"
        )));
    }
    f.check_decay(decay_threshold)?;
    let d = 2 * n + 1;
    let vol = f.lattice.cell_volume();
    let nodes: Vec<(Vec<f64>, C64)> = (0..f.lattice.len())
        .filter(|&i| f.values[i] != C64::new(0.0, 0.0))
        .map(|i| {
            let mut p = vec![0.0; d];
            f.lattice.point(i, &mut p);
            (p, f.values[i])
        })
        .collect();
    let values = (0..output.len())
        .into_par_iter()
        .map(|j| {
            let mut p = vec![0.0; d];
            output.point(j, &mut p);
            let (x, rest) = p.split_at(n);
            let (u, xi) = (&rest[..n], rest[n]);
            let mut dx = vec![0.0; n];
            let mut du = vec![0.0; n];
            let terms: Vec<C64> = nodes
                .iter()
                .map(|(h, fv)| {
                    let (hx, hrest) = h.split_at(n);
                    let (hu, hxi) = (&hrest[..n], hrest[n]);
                    for k in 0..n {
                        dx[k] = x[k] - hx[k];
                        du[k] = u[k] - hu[k];
                    }
                    let c = xi - hxi + 0.5 * (dot(hu, x) - dot(hx, u));
                    fv * g.eval(&dx, &du, c)
                })
                .collect();
            pairwise_sum(&terms) * vol
        })
        .collect();
    SampledField::new(output.clone(), values, f.meta.clone())
}

/// `F^λ(x,u) = ∫ e^{iλξ} F(x,u,ξ) dξ` by the lattice rule in `ξ`.
pub fn central_slice(field: &SampledField, lambda: f64, decay_threshold: f64) -> Result<SampledField> {
    let n = group_lattice_n(&field.lattice)?;
    let xi_axis = field.lattice.axes[2 * n];
    let m = xi_axis.count;
    let base = Lattice::new(field.lattice.axes[..2 * n].to_vec())?;
    // truncation check on the two extreme ξ-slices only
    let (mut edge, mut interior) = (0.0f64, 0.0f64);
    for (i, v) in field.values.iter().enumerate() {
        let k = i % m;
        if k == 0 || k + 1 == m {
            edge = edge.max(v.norm());
        } else {
            interior = interior.max(v.norm());
        }
    }
    if interior > 0.0 && edge / interior > decay_threshold {
        return Err(Error::Truncation { ratio: edge / interior, threshold: decay_threshold });
    }
    let phases: Vec<C64> = (0..m)
        .map(|k| C64::from_polar(xi_axis.step, lambda * xi_axis.node(k)))
        .collect();
    let values = (0..base.len())
        .into_par_iter()
        .map(|j| par_sum(m, |k| field.values[j * m + k] * phases[k]))
        .collect();
    SampledField::new(
        base,
        values,
        FieldMeta { lambda: Some(lambda), ..field.meta.clone() },
    )
}

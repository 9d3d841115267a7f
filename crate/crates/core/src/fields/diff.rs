//! Central differences with Richardson extrapolation.

use crate::error::{domain, Result};
use crate::kernel::quadrature::{Integral, Quadrable};
use crate::kernel::FormFactor;

/// Base step and number of halvings used by the extrapolation tableau.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffSpec {
    pub h: f64,
    pub levels: usize,
}

impl DiffSpec {
    pub fn new(h: f64, levels: usize) -> Result<Self> {
        let d = Self { h, levels };
        d.validate()?;
        Ok(d)
    }

    /// h = σ/2 with five levels: second derivatives of the Gaussian-smooth
    /// closed forms to about 1e-10 of the charge density peak.
    pub fn for_form_factor(ff: &FormFactor) -> Self {
        Self { h: 0.5 * ff.sigma(), levels: 5 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) || self.levels == 0 {
            return domain("finite-difference step must be positive and levels at least 1");
        }
        Ok(())
    }

    /// Largest stencil offset.
    pub fn reach(&self) -> f64 {
        self.h
    }
}

/// Richardson tableau over h, h/2, …; `stencil(h)` must have an error
/// expansion in even powers of h. A single level returns the raw stencil
/// with zero error estimate.
pub fn richardson<V: Quadrable>(spec: &DiffSpec, mut stencil: impl FnMut(f64) -> Result<V>) -> Result<Integral<V>> {
    spec.validate()?;
    let mut prev: Vec<V> = Vec::with_capacity(spec.levels);
    let mut error = 0.0;
    let mut h = spec.h;
    for i in 0..spec.levels {
        let mut row = Vec::with_capacity(i + 1);
        row.push(stencil(h)?);
        let mut factor = 1.0;
        for j in 1..=i {
            factor *= 4.0;
            let better = row[j - 1] + (row[j - 1] - prev[j - 1]) * (1.0 / (factor - 1.0));
            row.push(better);
        }
        if i > 0 {
            error = (row[i] - prev[i - 1]).magnitude();
        }
        prev = row;
        h *= 0.5;
    }
    Ok(Integral { value: prev[spec.levels - 1], error })
}

/// Point in (t, x, y, z) shifted by `h` along each listed axis.
pub fn shifted(p: [f64; 4], moves: &[(usize, f64)]) -> [f64; 4] {
    let mut q = p;
    for (axis, d) in moves {
        q[*axis] += d;
    }
    q
}

/// ∂_a f by central differences.
pub fn first_derivative<V: Quadrable>(
    spec: &DiffSpec,
    p: [f64; 4],
    axis: usize,
    f: &impl Fn([f64; 4]) -> Result<V>,
) -> Result<Integral<V>> {
    richardson(spec, |h| {
        let up = f(shifted(p, &[(axis, h)]))?;
        let down = f(shifted(p, &[(axis, -h)]))?;
        Ok((up - down) * (0.5 / h))
    })
}

/// ∂_a ∂_b f; the diagonal uses the three-point stencil and the mixed
/// case the four-point one.
pub fn second_derivative<V: Quadrable>(
    spec: &DiffSpec,
    p: [f64; 4],
    a: usize,
    b: usize,
    f: &impl Fn([f64; 4]) -> Result<V>,
) -> Result<Integral<V>> {
    if a == b {
        let centre = f(p)?;
        richardson(spec, |h| {
            let up = f(shifted(p, &[(a, h)]))?;
            let down = f(shifted(p, &[(a, -h)]))?;
            Ok((up + down - centre * 2.0) * (1.0 / (h * h)))
        })
    } else {
        richardson(spec, |h| {
            let pp = f(shifted(p, &[(a, h), (b, h)]))?;
            let pm = f(shifted(p, &[(a, h), (b, -h)]))?;
            let mp = f(shifted(p, &[(a, -h), (b, h)]))?;
            let mm = f(shifted(p, &[(a, -h), (b, -h)]))?;
            Ok((pp - pm - mp + mm) * (0.25 / (h * h)))
        })
    }
}

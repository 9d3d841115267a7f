use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::fock::{point_packet, FieldKind, ModeSet};
use crate::kernel::quadrature::gauss_legendre;
use crate::kernel::{FormFactor, Vec3};

/// Which field a factor measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    /// Interacting A^μ.
    Potential(usize),
    /// Interacting F^{μν}.
    FieldStrength(usize, usize),
    /// Interacting ∂·A.
    Divergence,
    /// A_out^μ.
    OutPotential(usize),
    /// A_in^μ.
    InPotential(usize),
    /// ∂·A_out.
    OutDivergence,
    /// ∂·A_in.
    InDivergence,
}

/// Which classical shift a factor sees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    Interacting,
    Out,
    In,
}

impl FactorKind {
    pub(crate) fn role(&self) -> Role {
        use FactorKind::*;
        match self {
            Potential(_) | FieldStrength(..) | Divergence => Role::Interacting,
            OutPotential(_) | OutDivergence => Role::Out,
            InPotential(_) | InDivergence => Role::In,
        }
    }

    /// Free field underlying the factor.
    pub fn free_kind(&self) -> FieldKind {
        use FactorKind::*;
        match *self {
            Potential(m) | OutPotential(m) | InPotential(m) => FieldKind::Potential(m),
            FieldStrength(m, n) => FieldKind::FieldStrength(m, n),
            Divergence | OutDivergence | InDivergence => FieldKind::Divergence,
        }
    }

    pub fn label(&self) -> String {
        use FactorKind::*;
        match self {
            Potential(m) => format!("A^{m}"),
            FieldStrength(m, n) => format!("F^{m}{n}"),
            Divergence => "dA".into(),
            OutPotential(m) => format!("Aout^{m}"),
            InPotential(m) => format!("Ain^{m}"),
            OutDivergence => "dAout".into(),
            InDivergence => "dAin".into(),
        }
    }

    fn validate(&self) -> Result<()> {
        use FactorKind::*;
        let ok = match *self {
            Potential(m) | OutPotential(m) | InPotential(m) => m < 4,
            FieldStrength(m, n) => m < 4 && n < 4,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            domain("Lorentz index out of range")
        }
    }
}

/// Spatial test function at a fixed time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Smearing {
    /// Normalised Gaussian of the given width; width 0 is a point value.
    Gaussian { width: f64 },
    /// Normalised smooth bump exp(−1/(1 − s²)), s = |x − x_c|/radius,
    /// integrated on a fixed product rule.
    Bump { radius: f64 },
    /// Weight 1/|x − x_c|² outside `inner`: not localised. Only usable
    /// against fields of bounded support and only in one-point functions.
    InverseSquare { inner: f64 },
}

/// One smeared field at time `t` centred on `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Factor {
    pub kind: FactorKind,
    pub x: Vec3,
    pub t: f64,
    pub smearing: Smearing,
}

pub(crate) const BUMP_RADIAL: usize = 8;
pub(crate) const BUMP_ANGULAR: usize = 8;

impl Factor {
    pub fn point(kind: FactorKind, x: Vec3, t: f64) -> Self {
        Self { kind, x, t, smearing: Smearing::Gaussian { width: 0.0 } }
    }

    pub fn gaussian(kind: FactorKind, x: Vec3, t: f64, width: f64) -> Self {
        Self { kind, x, t, smearing: Smearing::Gaussian { width } }
    }

    pub fn bump(kind: FactorKind, x: Vec3, t: f64, radius: f64) -> Self {
        Self { kind, x, t, smearing: Smearing::Bump { radius } }
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate()?;
        if !(self.t.is_finite() && self.x.iter().all(|c| c.is_finite())) {
            return domain("factor position must be finite");
        }
        match self.smearing {
            Smearing::Gaussian { width } if !(width >= 0.0 && width.is_finite()) => {
                domain("Gaussian smearing width must be non-negative")
            }
            Smearing::Bump { radius } if !(radius > 0.0 && radius.is_finite()) => domain("bump radius must be positive"),
            Smearing::InverseSquare { inner } if !(inner > 0.0 && inner.is_finite()) => {
                domain("inverse-square weight needs a positive inner radius")
            }
            _ => Ok(()),
        }
    }

    /// Radius of the ball around `x` carrying the test function, up to
    /// 1e-10 of its mass; infinite for the inverse-square weight.
    pub fn radius(&self) -> f64 {
        match self.smearing {
            Smearing::Gaussian { width } if width == 0.0 => 0.0,
            Smearing::Gaussian { width } => FormFactor::gaussian(width).map(|g| g.r_eff(1e-10)).unwrap_or(f64::INFINITY),
            Smearing::Bump { radius } => radius,
            Smearing::InverseSquare { .. } => f64::INFINITY,
        }
    }

    /// Positions and weights of the bump rule.
    pub fn bump_nodes(&self) -> Option<Vec<(Vec3, f64)>> {
        let Smearing::Bump { radius } = self.smearing else { return None };
        Some(bump_nodes(&self.x, radius))
    }

    /// Mode amplitudes of the free part.
    pub fn packet(&self, modes: &ModeSet) -> Result<Vec<Complex64>> {
        match self.smearing {
            Smearing::Gaussian { width } => Ok(point_packet(modes, &self.x, self.t, width)),
            Smearing::Bump { radius } => {
                let mut acc = vec![Complex64::new(0.0, 0.0); modes.len()];
                for (x, w) in bump_nodes(&self.x, radius) {
                    for (a, h) in acc.iter_mut().zip(point_packet(modes, &x, self.t, 0.0)) {
                        *a += h * w;
                    }
                }
                Ok(acc)
            }
            Smearing::InverseSquare { .. } => domain("the inverse-square weight has no free-field packet"),
        }
    }

    pub fn label(&self) -> String {
        let s = match self.smearing {
            Smearing::Gaussian { width } => format!("g{width}"),
            Smearing::Bump { radius } => format!("b{radius}"),
            Smearing::InverseSquare { inner } => format!("inv{inner}"),
        };
        format!("{}({:.3},{:.3},{:.3};{:.3})[{s}]", self.kind.label(), self.x.x, self.x.y, self.x.z, self.t)
    }
}

fn bump_profile(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// Product rule for the normalised bump: Gauss-Legendre in radius and
/// cos θ, trapezoid in φ. Weights sum to one.
pub fn bump_nodes(center: &Vec3, radius: f64) -> Vec<(Vec3, f64)> {
    let rr = gauss_legendre(BUMP_RADIAL);
    let ru = gauss_legendre(BUMP_ANGULAR);
    let n_phi = BUMP_ANGULAR;
    let mut nodes = Vec::with_capacity(BUMP_RADIAL * BUMP_ANGULAR * n_phi);
    for (r, wr) in rr.mapped(0.0, radius) {
        let radial = wr * r * r * bump_profile(r / radius);
        for (u, wu) in ru.mapped(-1.0, 1.0) {
            let s = (1.0 - u * u).sqrt();
            for p in 0..n_phi {
                let phi = 2.0 * PI * (p as f64 + 0.5) / n_phi as f64;
                let d = Vec3::new(s * phi.cos(), s * phi.sin(), u) * r;
                nodes.push((center + d, radial * wu));
            }
        }
    }
    let total: f64 = nodes.iter().map(|(_, w)| w).sum();
    for n in &mut nodes {
        n.1 /= total;
    }
    nodes
}

/// Ordered product of smeared fields.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ObservableSpec {
    pub factors: Vec<Factor>,
}

impl ObservableSpec {
    pub fn new(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    pub fn single(f: Factor) -> Self {
        Self { factors: vec![f] }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Adjoint word; every factor is Hermitian since the test functions
    /// are real.
    pub fn adjoint(&self) -> Self {
        Self { factors: self.factors.iter().rev().copied().collect() }
    }

    pub fn then(&self, other: &Self) -> Self {
        Self { factors: self.factors.iter().chain(&other.factors).copied().collect() }
    }

    /// Factor labels joined by `*`.
    pub fn label(&self) -> String {
        self.factors.iter().map(Factor::label).collect::<Vec<_>>().join(" * ")
    }

    pub fn validate(&self) -> Result<()> {
        self.factors.iter().try_for_each(Factor::validate)
    }
}

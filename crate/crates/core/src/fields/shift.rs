//! The classical shift fields, per unit charge.

use super::momentum::{compensating_amplitude, moving_amplitude};
use super::rest;
use super::shell::{shell_integral, shell_integral_dt};
use crate::error::{domain, Result};
use crate::kernel::quadrature::{Integral, C4, V4};
use crate::kernel::{FormFactor, Vec3};

/// A c-number vector field built from the uniform-velocity kernels.
///
/// Fields taking `v_in`/`v_out` use the outgoing velocity for t ≥ 0 and the
/// incoming one for t < 0.
#[derive(Clone, Debug, PartialEq)]
pub enum ShiftField {
    Zero,
    /// Cone-interior truncated Liénard-Wiechert potential F.
    Interior { y: Vec3, v_in: Vec3, v_out: Vec3 },
    /// Cone-exterior part G = −C of the same velocity.
    Exterior { y: Vec3, v_in: Vec3, v_out: Vec3 },
    /// Free field with the static smeared Coulomb potential as data at t = 0.
    Coulomb { y: Vec3 },
    /// Free field with the potential of a charge moving with velocity `c`
    /// as data at t = 0.
    LienardWiechert { c: Vec3, y: Vec3 },
    /// Time-independent smeared Coulomb potential.
    CoulombStatic { y: Vec3 },
    /// `base` multiplied by χ(|x − center|/radius), χ ≡ 1 on [0, ½] and 0
    /// beyond 1.
    Cutoff { base: Box<ShiftField>, radius: f64, center: Vec3 },
    Combination(Vec<(f64, ShiftField)>),
}

fn four(v: &Vec3, s: f64) -> V4 {
    V4([s, s * v.x, s * v.y, s * v.z])
}

fn branch(t: f64, v_in: &Vec3, v_out: &Vec3) -> (Vec3, f64) {
    if t >= 0.0 {
        (*v_out, 1.0)
    } else {
        (*v_in, -1.0)
    }
}

/// Smooth plateau profile: 1 on [0, ½], 0 on [1, ∞).
pub fn plateau(s: f64) -> f64 {
    if s <= 0.5 {
        return 1.0;
    }
    if s >= 1.0 {
        return 0.0;
    }
    let a = (-1.0 / (1.0 - s)).exp();
    let b = (-1.0 / (s - 0.5)).exp();
    a / (a + b)
}

/// Derivative of [`plateau`].
pub fn plateau_derivative(s: f64) -> f64 {
    if s <= 0.5 || s >= 1.0 {
        return 0.0;
    }
    let (u, w) = (1.0 - s, s - 0.5);
    let a = (-1.0 / u).exp();
    let b = (-1.0 / w).exp();
    // d/ds a = −a/u², d/ds b = b/w²
    let num = -a / (u * u) * (a + b) - a * (-a / (u * u) + b / (w * w));
    num / ((a + b) * (a + b))
}

impl ShiftField {
    pub fn interior(y: Vec3, v_in: Vec3, v_out: Vec3) -> Self {
        ShiftField::Interior { y, v_in, v_out }
    }

    pub fn exterior(y: Vec3, v_in: Vec3, v_out: Vec3) -> Self {
        ShiftField::Exterior { y, v_in, v_out }
    }

    /// Free compensating field for velocity `c`; c = 0 gives the Coulomb one.
    pub fn compensating(c: Vec3, y: Vec3) -> Self {
        if c == Vec3::zeros() {
            ShiftField::Coulomb { y }
        } else {
            ShiftField::LienardWiechert { c, y }
        }
    }

    /// Linear combination, flattened, with equal terms merged and zero
    /// terms dropped; a single unit term is returned bare.
    pub fn sum(parts: Vec<(f64, ShiftField)>) -> Self {
        let mut flat: Vec<(f64, ShiftField)> = Vec::new();
        let push = |c: f64, f: ShiftField, flat: &mut Vec<(f64, ShiftField)>| {
            if let Some(e) = flat.iter_mut().find(|(_, g)| *g == f) {
                e.0 += c;
            } else {
                flat.push((c, f));
            }
        };
        for (c, f) in parts {
            match f {
                ShiftField::Zero => {}
                ShiftField::Combination(inner) => {
                    for (d, g) in inner {
                        push(c * d, g, &mut flat);
                    }
                }
                f => push(c, f, &mut flat),
            }
        }
        flat.retain(|(c, _)| *c != 0.0);
        match flat.len() {
            0 => ShiftField::Zero,
            1 if flat[0].0 == 1.0 => flat.pop().expect("one term").1,
            _ => ShiftField::Combination(flat),
        }
    }

    /// Ball (centre, radius) outside which the field vanishes identically,
    /// if there is one.
    pub fn support(&self) -> Option<(Vec3, f64)> {
        use ShiftField::*;
        match self {
            Zero => Some((Vec3::zeros(), 0.0)),
            Cutoff { radius, center, .. } => Some((*center, *radius)),
            Combination(p) => {
                let balls: Option<Vec<(Vec3, f64)>> = p.iter().map(|(_, f)| f.support()).collect();
                let balls = balls?;
                let c = balls.first().map(|b| b.0).unwrap_or_else(Vec3::zeros);
                Some((c, balls.iter().fold(0.0f64, |m, (b, r)| m.max((b - c).norm() + r))))
            }
            _ => None,
        }
    }

    /// Coefficient κ with ∂·A = κ·t·S(|x − y|, |t|): +1 for the interior
    /// and exterior fields, −1 for the compensating ones.
    pub fn divergence_weight(&self) -> Option<f64> {
        use ShiftField::*;
        match self {
            Zero | CoulombStatic { .. } => Some(0.0),
            Interior { .. } | Exterior { .. } => Some(1.0),
            Coulomb { .. } | LienardWiechert { .. } => Some(-1.0),
            Cutoff { .. } => None,
            Combination(p) => p.iter().map(|(c, f)| f.divergence_weight().map(|w| c * w)).sum(),
        }
    }

    /// Contains a cut-off factor anywhere.
    pub fn has_cutoff(&self) -> bool {
        match self {
            ShiftField::Cutoff { .. } => true,
            ShiftField::Combination(p) => p.iter().any(|(_, f)| f.has_cutoff()),
            _ => false,
        }
    }

    /// The field seen by a smearing kernel confined to the ball B(x, reach):
    /// every cut-off factor becomes its base where the ball lies on the
    /// plateau and zero where it lies outside the support. `None` when a
    /// ball straddles a transition layer.
    pub fn without_cutoffs_near(&self, x: &Vec3, reach: f64) -> Option<Self> {
        use ShiftField::*;
        match self {
            Cutoff { base, radius, center } => {
                let d = (x - center).norm();
                if d + reach <= 0.5 * radius {
                    base.without_cutoffs_near(x, reach)
                } else if d - reach >= *radius {
                    Some(Zero)
                } else {
                    None
                }
            }
            Combination(p) => {
                let parts: Option<Vec<(f64, ShiftField)>> =
                    p.iter().map(|(c, f)| f.without_cutoffs_near(x, reach).map(|g| (*c, g))).collect();
                Some(ShiftField::sum(parts?))
            }
            other => Some(other.clone()),
        }
    }

    pub fn cutoff(self, radius: f64, center: Vec3) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return domain("cutoff radius must be positive");
        }
        Ok(ShiftField::Cutoff { base: Box::new(self), radius, center })
    }

    /// The same field with every particle position translated by `d`.
    pub fn translated(&self, d: &Vec3) -> Self {
        use ShiftField::*;
        match self {
            Zero => Zero,
            Interior { y, v_in, v_out } => Interior { y: y + d, v_in: *v_in, v_out: *v_out },
            Exterior { y, v_in, v_out } => Exterior { y: y + d, v_in: *v_in, v_out: *v_out },
            Coulomb { y } => Coulomb { y: y + d },
            LienardWiechert { c, y } => LienardWiechert { c: *c, y: y + d },
            CoulombStatic { y } => CoulombStatic { y: y + d },
            Cutoff { base, radius, center } => {
                Cutoff { base: Box::new(base.translated(d)), radius: *radius, center: center + d }
            }
            Combination(p) => Combination(p.iter().map(|(c, f)| (*c, f.translated(d))).collect()),
        }
    }

    /// Field value A^μ(x, t).
    pub fn eval(&self, ff: &FormFactor, x: &Vec3, t: f64) -> Result<Integral<V4>> {
        use ShiftField::*;
        Ok(match self {
            Zero => Integral::zero(),
            Interior { y, v_in, v_out } => {
                let (vb, s) = branch(t, v_in, v_out);
                if vb == Vec3::zeros() {
                    exact(V4([rest::interior(ff, (x - y).norm(), t), 0.0, 0.0, 0.0]))
                } else {
                    let i = shell_integral(ff, &(x - y - vb * t), &vb, s, 0.0, t.abs());
                    Integral { value: four(&vb, i.value), error: i.error }
                }
            }
            Exterior { y, v_in, v_out } => {
                let (vb, s) = branch(t, v_in, v_out);
                if vb == Vec3::zeros() {
                    exact(V4([rest::exterior(ff, (x - y).norm(), t), 0.0, 0.0, 0.0]))
                } else {
                    let i = shell_integral(ff, &(x - y - vb * t), &vb, s, t.abs(), f64::INFINITY);
                    Integral { value: four(&vb, -i.value), error: i.error }
                }
            }
            Coulomb { y } => exact(V4([-rest::exterior(ff, (x - y).norm(), t), 0.0, 0.0, 0.0])),
            LienardWiechert { c, y } => {
                if *c == Vec3::zeros() {
                    return Coulomb { y: *y }.eval(ff, x, t);
                }
                let s = if t >= 0.0 { 1.0 } else { -1.0 };
                let i = shell_integral(ff, &(x - y - c * t), c, s, t.abs(), f64::INFINITY);
                Integral { value: four(c, i.value), error: i.error }
            }
            CoulombStatic { y } => exact(V4([ff.coulomb((x - y).norm()), 0.0, 0.0, 0.0])),
            Cutoff { base, radius, center } => {
                let w = plateau((x - center).norm() / radius);
                if w == 0.0 {
                    Integral::zero()
                } else {
                    let b = base.eval(ff, x, t)?;
                    Integral { value: b.value * w, error: b.error * w }
                }
            }
            Combination(parts) => {
                let mut acc = Integral::zero();
                for (c, f) in parts {
                    let v = f.eval(ff, x, t)?;
                    acc = acc + Integral { value: v.value * *c, error: v.error * c.abs() };
                }
                acc
            }
        })
    }

    /// ∂_t A^μ(x, t).
    pub fn eval_dt(&self, ff: &FormFactor, x: &Vec3, t: f64) -> Result<Integral<V4>> {
        use ShiftField::*;
        Ok(match self {
            Zero | CoulombStatic { .. } => Integral::zero(),
            Interior { y, v_in, v_out } => {
                let (vb, s) = branch(t, v_in, v_out);
                let edge = t * ff.shell_average((x - y).norm(), t.abs());
                if vb == Vec3::zeros() {
                    exact(V4([edge, 0.0, 0.0, 0.0]))
                } else {
                    let i = shell_integral_dt(ff, &(x - y - vb * t), &vb, s, 0.0, t.abs());
                    Integral { value: four(&vb, edge + i.value), error: i.error }
                }
            }
            Exterior { y, v_in, v_out } => {
                let (vb, s) = branch(t, v_in, v_out);
                let edge = t * ff.shell_average((x - y).norm(), t.abs());
                if vb == Vec3::zeros() {
                    exact(V4([edge, 0.0, 0.0, 0.0]))
                } else {
                    let i = shell_integral_dt(ff, &(x - y - vb * t), &vb, s, t.abs(), f64::INFINITY);
                    Integral { value: four(&vb, edge - i.value), error: i.error }
                }
            }
            Coulomb { y } => exact(V4([-t * ff.shell_average((x - y).norm(), t.abs()), 0.0, 0.0, 0.0])),
            LienardWiechert { c, y } => {
                if *c == Vec3::zeros() {
                    return Coulomb { y: *y }.eval_dt(ff, x, t);
                }
                let s = if t >= 0.0 { 1.0 } else { -1.0 };
                let edge = -t * ff.shell_average((x - y).norm(), t.abs());
                let i = shell_integral_dt(ff, &(x - y - c * t), c, s, t.abs(), f64::INFINITY);
                Integral { value: four(c, edge + i.value), error: i.error }
            }
            Cutoff { base, radius, center } => {
                let w = plateau((x - center).norm() / radius);
                if w == 0.0 {
                    Integral::zero()
                } else {
                    let b = base.eval_dt(ff, x, t)?;
                    Integral { value: b.value * w, error: b.error * w }
                }
            }
            Combination(parts) => {
                let mut acc = Integral::zero();
                for (c, f) in parts {
                    let v = f.eval_dt(ff, x, t)?;
                    acc = acc + Integral { value: v.value * *c, error: v.error * c.abs() };
                }
                acc
            }
        })
    }

    /// ∂_μ A^μ in closed form. The interior and exterior fields have
    /// divergence t·S(|x − y|, |t|) whatever the velocity; the compensating
    /// fields have the opposite value.
    pub fn divergence(&self, ff: &FormFactor, x: &Vec3, t: f64) -> Result<f64> {
        use ShiftField::*;
        Ok(match self {
            Zero | CoulombStatic { .. } => 0.0,
            Interior { y, .. } | Exterior { y, .. } => t * ff.shell_average((x - y).norm(), t.abs()),
            Coulomb { y } | LienardWiechert { y, .. } => -t * ff.shell_average((x - y).norm(), t.abs()),
            Cutoff { base, radius, center } => {
                let d = x - center;
                let s = d.norm() / radius;
                let w = plateau(s);
                let dw = plateau_derivative(s);
                let mut out = 0.0;
                if w != 0.0 {
                    out += w * base.divergence(ff, x, t)?;
                }
                if dw != 0.0 {
                    let b = base.eval(ff, x, t)?.value.0;
                    let grad = d * (dw / (radius * d.norm()));
                    out += b[1] * grad.x + b[2] * grad.y + b[3] * grad.z;
                }
                out
            }
            Combination(parts) => {
                let mut acc = 0.0;
                for (c, f) in parts {
                    acc += c * f.divergence(ff, x, t)?;
                }
                acc
            }
        })
    }

    /// □A^μ where known in closed form: the charge density for the interior
    /// field, zero for the free fields.
    pub fn source(&self, ff: &FormFactor, x: &Vec3, t: f64) -> Result<V4> {
        use ShiftField::*;
        Ok(match self {
            Zero | Exterior { .. } | Coulomb { .. } | LienardWiechert { .. } => V4([0.0; 4]),
            Interior { y, v_in, v_out } => {
                let (vb, _) = branch(t, v_in, v_out);
                four(&vb, ff.rho((x - y - vb * t).norm()))
            }
            CoulombStatic { y } => V4([ff.rho((x - y).norm()), 0.0, 0.0, 0.0]),
            Cutoff { .. } => return domain("the cut-off field has no closed-form source"),
            Combination(parts) => {
                let mut acc = V4([0.0; 4]);
                for (c, f) in parts {
                    acc = acc + f.source(ff, x, t)? * *c;
                }
                acc
            }
        })
    }

    /// Solves the free wave equation everywhere.
    pub fn is_free(&self) -> bool {
        use ShiftField::*;
        match self {
            Zero | Exterior { .. } | Coulomb { .. } | LienardWiechert { .. } => true,
            Interior { .. } | CoulombStatic { .. } | Cutoff { .. } => false,
            Combination(p) => p.iter().all(|(_, f)| f.is_free()),
        }
    }

    /// Fourier amplitude Â^μ(k, τ) and its τ-derivative, with
    /// A(x) = (2π)^{-3/2}∫d³k e^{ik·x} Â(k).
    pub fn fourier(&self, ff: &FormFactor, k: &Vec3, tau: f64) -> Result<(C4, C4)> {
        use ShiftField::*;
        let zero = (C4([Default::default(); 4]), C4([Default::default(); 4]));
        Ok(match self {
            Zero => zero,
            Interior { y, v_in, v_out } => {
                let (vb, _) = branch(tau, v_in, v_out);
                let (l, dl) = moving_amplitude(ff, k, tau, &vb, y);
                let (c, dc) = compensating_amplitude(ff, k, tau, &vb, y);
                (l - c, dl - dc)
            }
            Exterior { y, v_in, v_out } => {
                let (vb, _) = branch(tau, v_in, v_out);
                let (c, dc) = compensating_amplitude(ff, k, tau, &vb, y);
                (c * -1.0, dc * -1.0)
            }
            Coulomb { y } => compensating_amplitude(ff, k, tau, &Vec3::zeros(), y),
            LienardWiechert { c, y } => compensating_amplitude(ff, k, tau, c, y),
            CoulombStatic { y } => moving_amplitude(ff, k, tau, &Vec3::zeros(), y),
            Cutoff { .. } => return domain("the cut-off field has no closed-form Fourier amplitude"),
            Combination(parts) => {
                let mut acc = zero;
                for (c, f) in parts {
                    let (a, b) = f.fourier(ff, k, tau)?;
                    acc = (acc.0 + a * *c, acc.1 + b * *c);
                }
                acc
            }
        })
    }

    /// Spheres (centre, radius) at time τ near which the field varies on
    /// the scale σ.
    pub fn features(&self, tau: f64) -> Vec<(Vec3, f64)> {
        use ShiftField::*;
        match self {
            Zero => vec![],
            Interior { y, v_in, v_out } | Exterior { y, v_in, v_out } => {
                let (vb, _) = branch(tau, v_in, v_out);
                vec![(*y, tau.abs()), (y + vb * tau, 0.0)]
            }
            Coulomb { y } => vec![(*y, tau.abs())],
            LienardWiechert { c, y } => vec![(*y, tau.abs()), (y + c * tau, 0.0)],
            CoulombStatic { y } => vec![(*y, 0.0)],
            Cutoff { base, .. } => base.features(tau),
            Combination(p) => p.iter().flat_map(|(_, f)| f.features(tau)).collect(),
        }
    }

    /// Particle positions and velocities the field depends on.
    pub fn anchors(&self) -> Vec<(Vec3, Vec3)> {
        use ShiftField::*;
        match self {
            Zero => vec![],
            Interior { y, v_in, v_out } | Exterior { y, v_in, v_out } => vec![(*y, *v_in), (*y, *v_out)],
            Coulomb { y } | CoulombStatic { y } => vec![(*y, Vec3::zeros())],
            LienardWiechert { c, y } => vec![(*y, *c)],
            Cutoff { base, center, .. } => {
                let mut a = base.anchors();
                a.push((*center, Vec3::zeros()));
                a
            }
            Combination(p) => p.iter().flat_map(|(_, f)| f.anchors()).collect(),
        }
    }

    /// Offsets from `center` and velocities: the directions that break
    /// rotational symmetry about `center`.
    pub fn directions(&self, center: &Vec3) -> Vec<Vec3> {
        self.anchors().into_iter().flat_map(|(y, v)| [y - center, v]).collect()
    }

    /// True when the field is spherically symmetric about `center` with only
    /// a time component.
    pub fn is_radial_about(&self, center: &Vec3) -> bool {
        use ShiftField::*;
        let z = Vec3::zeros();
        match self {
            Zero => true,
            Interior { y, v_in, v_out } | Exterior { y, v_in, v_out } => y == center && *v_in == z && *v_out == z,
            Coulomb { y } | CoulombStatic { y } => y == center,
            LienardWiechert { c, y } => y == center && *c == z,
            Cutoff { base, center: c, .. } => c == center && base.is_radial_about(center),
            Combination(p) => p.iter().all(|(_, f)| f.is_radial_about(center)),
        }
    }
}

fn exact(v: V4) -> Integral<V4> {
    Integral { value: v, error: 0.0 }
}

//! Classical shift fields of the model and their evaluators.
//!
//! The interacting potential is A = A₀ + e·F where F, per unit charge, is
//! the ρ-smeared uniform-velocity potential restricted to emission times
//! between 0 and t. Its complement G (emission before 0) and the free
//! compensating fields C all derive from one radial integral over retarded
//! spheres; at rest they reduce to error-function closed forms.

mod chi;
mod diff;
mod momentum;
mod particle;
mod rest;
mod shell;
mod shift;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use chi::{chi_kernel_lhs, chi_kernel_rhs};
pub use diff::{first_derivative, richardson, second_derivative, DiffSpec};
pub use momentum::{
    compensating_amplitude, divergence_gradient_k_quadrature, divergence_k_quadrature,
    divergence_minus_k_quadrature, interior_k_quadrature, mode_shift_f, mode_shift_unit, moving_amplitude,
};
pub use particle::ParticleSpec;
pub use rest::erf_window_over_r;
pub use shell::{ridge_radius, shell_integral};
pub use shift::{plateau, plateau_derivative, ShiftField};

use crate::error::{domain, Error, Result};
use crate::kernel::quadrature::{Integral, V4};
use crate::kernel::{FormFactor, Vec3, METRIC};

/// How the interior field is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Error-function closed form; velocity must vanish.
    ClosedRest,
    /// Radial integral over retarded spheres, any |v| < 1.
    ClosedBoosted,
    /// Momentum-space reconstruction from the mode shift.
    KQuadrature,
}

/// How ∂·F is evaluated by [`div_f`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DivMethod {
    Momentum,
    FiniteDifference(DiffSpec),
}

/// Tolerance passed to the momentum quadratures.
const K_TOL: f64 = 1e-9;

/// Average of `f(y)` over the particle's position nodes.
fn averaged(p: &ParticleSpec, mut f: impl FnMut(&Vec3) -> Result<Integral<V4>>) -> Result<Integral<V4>> {
    let mut acc = Integral::zero();
    for (y, w) in p.positions() {
        let v = f(&y)?;
        acc = acc + Integral { value: v.value * w, error: v.error * w };
    }
    Ok(acc)
}

fn averaged_scalar(p: &ParticleSpec, mut f: impl FnMut(&Vec3) -> Result<Integral>) -> Result<Integral> {
    let mut acc = Integral::zero();
    for (y, w) in p.positions() {
        let v = f(&y)?;
        acc = acc + Integral { value: v.value * w, error: v.error * w };
    }
    Ok(acc)
}

/// Interior field F^μ(x, t) per unit charge.
pub fn f_interior(x: &Vec3, t: f64, p: &ParticleSpec, ff: &FormFactor, method: Method) -> Result<Integral<V4>> {
    p.validate()?;
    let vb = p.branch_velocity(t);
    match method {
        Method::ClosedRest => {
            if vb != Vec3::zeros() {
                return domain("the rest-frame closed form needs zero velocity");
            }
            averaged(p, |y| ShiftField::interior(*y, p.v_in, p.v_out).eval(ff, x, t))
        }
        Method::ClosedBoosted => averaged(p, |y| {
            if vb == Vec3::zeros() {
                // Same radial integral the boosted path uses, at v = 0.
                let i = shell_integral(ff, &(x - y), &vb, 1.0, 0.0, t.abs());
                return Ok(Integral { value: V4([i.value, 0.0, 0.0, 0.0]), error: i.error });
            }
            ShiftField::interior(*y, p.v_in, p.v_out).eval(ff, x, t)
        }),
        Method::KQuadrature => averaged(p, |y| interior_k_quadrature(ff, &(x - y), t, &vb, K_TOL)),
    }
}

/// Exterior field G^μ(x, t) per unit charge.
pub fn g_exterior(x: &Vec3, t: f64, p: &ParticleSpec, ff: &FormFactor) -> Result<Integral<V4>> {
    p.validate()?;
    averaged(p, |y| ShiftField::exterior(*y, p.v_in, p.v_out).eval(ff, x, t))
}

/// Coulomb compensating field: free, with static Coulomb data at t = 0.
pub fn c_coulomb(x: &Vec3, t: f64, y: &Vec3, ff: &FormFactor) -> V4 {
    V4([-rest::exterior(ff, (x - y).norm(), t), 0.0, 0.0, 0.0])
}

/// Liénard-Wiechert compensating field for the velocity `c`.
pub fn c_lw(x: &Vec3, t: f64, c: &Vec3, y: &Vec3, ff: &FormFactor) -> Result<Integral<V4>> {
    if !(c.norm() < 1.0) {
        return domain(format!("compensating velocity must have |c| < 1, got {}", c.norm()));
    }
    ShiftField::compensating(*c, *y).eval(ff, x, t)
}

/// ρ-smeared Coulomb potential erf(r/√2σ)/(4πr).
pub fn coulomb_static(x: &Vec3, y: &Vec3, ff: &FormFactor) -> f64 {
    ff.coulomb((x - y).norm())
}

/// ρ * Δ with Δ = ε(t)δ(t² − x²)/2π: the shell integral reduces to
/// t·S(|x − y|, |t|).
pub fn pauli_jordan_smeared(x: &Vec3, t: f64, y: &Vec3, ff: &FormFactor) -> f64 {
    t * ff.shell_average((x - y).norm(), t.abs())
}

/// ∂_μF^μ(x, t) per unit charge.
pub fn div_f(x: &Vec3, t: f64, p: &ParticleSpec, ff: &FormFactor, method: DivMethod) -> Result<Integral> {
    p.validate()?;
    match method {
        DivMethod::Momentum => averaged_scalar(p, |y| Ok(divergence_k_quadrature(ff, (x - y).norm(), t))),
        DivMethod::FiniteDifference(spec) => {
            check_stencil(ff, &spec, p, x, t)?;
            averaged_scalar(p, |y| {
                let field = ShiftField::interior(*y, p.v_in, p.v_out);
                let f = |q: [f64; 4]| Ok(field.eval(ff, &Vec3::new(q[1], q[2], q[3]), q[0])?.value);
                let at = [t, x.x, x.y, x.z];
                let mut acc = Integral::zero();
                for mu in 0..4 {
                    let d = first_derivative(&spec, at, mu, &f)?;
                    acc = acc + Integral { value: d.value.0[mu], error: d.error };
                }
                Ok(acc)
            })
        }
    }
}

/// Refuses stencils that straddle the t = 0 velocity switch or that are
/// coarser than σ near the smeared cone.
pub(crate) fn check_stencil(ff: &FormFactor, spec: &DiffSpec, p: &ParticleSpec, x: &Vec3, t: f64) -> Result<()> {
    spec.validate()?;
    if p.v_in != p.v_out && t.abs() <= spec.reach() {
        return Err(Error::Proximity(format!(
            "|t| = {} is within the stencil reach {} of the velocity switch",
            t.abs(),
            spec.reach()
        )));
    }
    if spec.h > ff.sigma() {
        let band = ff.r_eff(1e-10) + spec.reach();
        for (y, _) in p.positions() {
            if ((x - y).norm() - t.abs()).abs() < band {
                return Err(Error::Proximity(format!(
                    "step {} exceeds the shell width {} near the cone",
                    spec.h,
                    ff.sigma()
                )));
            }
        }
    }
    Ok(())
}

/// Jacobian J[α][μ] = ∂_α A^μ of a field by Richardson differences.
pub fn jacobian(field: &ShiftField, ff: &FormFactor, x: &Vec3, t: f64, spec: &DiffSpec) -> Result<([[f64; 4]; 4], f64)> {
    let f = |q: [f64; 4]| Ok(field.eval(ff, &Vec3::new(q[1], q[2], q[3]), q[0])?.value);
    let at = [t, x.x, x.y, x.z];
    let mut j = [[0.0; 4]; 4];
    let mut err = 0.0f64;
    for (alpha, row) in j.iter_mut().enumerate() {
        let d = first_derivative(spec, at, alpha, &f)?;
        *row = d.value.0;
        err = err.max(d.error);
    }
    Ok((j, err))
}

/// H^{μν} = ∂^μA^ν − ∂^νA^μ from a Jacobian.
pub fn field_strength_from_jacobian(j: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut h = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            h[mu][nu] = METRIC[mu] * j[mu][nu] - METRIC[nu] * j[nu][mu];
        }
    }
    h
}

/// Field strength of the interior shift, H^{μν} = ∂^μF^ν − ∂^νF^μ.
pub fn field_strength_shift(
    x: &Vec3,
    t: f64,
    p: &ParticleSpec,
    ff: &FormFactor,
    spec: &DiffSpec,
) -> Result<[[f64; 4]; 4]> {
    p.validate()?;
    check_stencil(ff, spec, p, x, t)?;
    let mut acc = [[0.0; 4]; 4];
    for (y, w) in p.positions() {
        let (j, _) = jacobian(&ShiftField::interior(y, p.v_in, p.v_out), ff, x, t, spec)?;
        let h = field_strength_from_jacobian(&j);
        for mu in 0..4 {
            for nu in 0..4 {
                acc[mu][nu] += w * h[mu][nu];
            }
        }
    }
    Ok(acc)
}

/// □A^μ − (closed-form source) by the Richardson-extrapolated
/// seven-point d'Alembertian.
pub fn box_residual(field: &ShiftField, ff: &FormFactor, x: &Vec3, t: f64, spec: &DiffSpec) -> Result<Integral<V4>> {
    spec.validate()?;
    if *field == ShiftField::Zero {
        return Ok(Integral::zero());
    }
    if let ShiftField::Interior { y, v_in, v_out } = field {
        let p = ParticleSpec::new(*y, *v_in, *v_out, 1.0)?;
        check_stencil(ff, spec, &p, x, t)?;
    } else if spec.h > ff.sigma() {
        return Err(Error::Proximity(format!("step {} exceeds the form factor width {}", spec.h, ff.sigma())));
    }
    let source = field.source(ff, x, t)?;
    let f = |q: [f64; 4]| Ok(field.eval(ff, &Vec3::new(q[1], q[2], q[3]), q[0])?.value);
    let at = [t, x.x, x.y, x.z];
    let centre = f(at)?;
    let boxed = richardson(spec, |h| {
        let mut acc = centre * 4.0;
        for axis in 0..4 {
            let sign = if axis == 0 { 1.0 } else { -1.0 };
            let up = f(diff::shifted(at, &[(axis, h)]))?;
            let down = f(diff::shifted(at, &[(axis, -h)]))?;
            acc = acc + (up + down) * sign;
        }
        Ok(acc * (1.0 / (h * h)))
    })?;
    Ok(Integral { value: boxed.value - source, error: boxed.error })
}

/// Measured ratio ⟨K, C⟩/⟨C, C⟩ between the momentum reconstruction K and
/// the closed form C of F⁰ over `points`. The mode shift includes the
/// e^{−i|k|t} free-evolution factor, with which the ratio is +1.
pub fn reconciliation_factor(p: &ParticleSpec, ff: &FormFactor, points: &[(Vec3, f64)]) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, t) in points {
        let closed = f_interior(x, *t, p, ff, Method::ClosedBoosted)?.value.0[0];
        let quad = f_interior(x, *t, p, ff, Method::KQuadrature)?.value.0[0];
        num += closed * quad;
        den += closed * closed;
    }
    if !(den > 0.0) {
        return domain("reconciliation needs points where the field is non-zero");
    }
    Ok(num / den)
}

/// Negative-frequency part (∂·F)⁽⁻⁾ at separation r and time t, per unit
/// charge; its real part is half of ∂·F.
pub fn div_f_minus(ff: &FormFactor, r: f64, t: f64) -> Integral<Complex64> {
    divergence_minus_k_quadrature(ff, r, t)
}

/// Point-charge Coulomb potential 1/(4πr).
pub fn point_coulomb(r: f64) -> f64 {
    1.0 / (4.0 * PI * r)
}

//! Klein-Gordon pairing of a free packet with a shift field,
//!
//! ∫d³x [ḡ(x, x₀) ∂_τA(x, τ) − ∂_{x₀}ḡ(x, x₀) A(x, τ)],  τ = x₀ + t,
//!
//! by spatial quadrature around the packet centre or through Parseval in
//! momentum space.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::packet::WavePacket;
use crate::error::{domain, Result};
use crate::fields::ShiftField;
use crate::kernel::quadrature::{composite_gk15, gauss_legendre, gk15, Integral, Quadrable, C4};
use crate::kernel::{FormFactor, QuadratureSpec, Vec3};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c4_scale(v: [f64; 4], z: Complex64) -> C4 {
    C4(v.map(|x| z * x))
}

/// Radial breakpoints: fine panels across every feature sphere seen from
/// the packet centre, coarse panels elsewhere.
fn radial_panels(window: (f64, f64), fine: &[(f64, f64)], fine_w: f64, coarse_w: f64) -> Vec<(f64, f64)> {
    let (a, b) = window;
    let mut cuts: Vec<(f64, f64)> = fine
        .iter()
        .map(|(lo, hi)| (lo.max(a), hi.min(b)))
        .filter(|(lo, hi)| hi > lo)
        .collect();
    cuts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for c in cuts {
        match merged.last_mut() {
            Some(m) if c.0 <= m.1 => m.1 = m.1.max(c.1),
            _ => merged.push(c),
        }
    }
    let mut panels = Vec::new();
    let mut push = |lo: f64, hi: f64, w: f64| {
        if hi > lo {
            let n = ((hi - lo) / w).ceil().max(1.0) as usize;
            let h = (hi - lo) / n as f64;
            for i in 0..n {
                let l = lo + h * i as f64;
                panels.push((l, if i + 1 == n { hi } else { lo + h * (i + 1) as f64 }));
            }
        }
    };
    let mut pos = a;
    for (lo, hi) in merged {
        push(pos, lo, coarse_w);
        push(lo, hi, fine_w);
        pos = hi;
    }
    push(pos, b, coarse_w);
    panels
}

/// Common symmetry axis through `center`, if every anchor direction of the
/// field is parallel to one line.
fn symmetry_axis(dirs: &[Vec3]) -> Option<Vec3> {
    let mut axis: Option<Vec3> = None;
    for d in dirs {
        let n = d.norm();
        if n < 1e-14 {
            continue;
        }
        let u = d / n;
        match axis {
            None => axis = Some(u),
            Some(a) => {
                if a.cross(&u).norm() > 1e-12 {
                    return None;
                }
            }
        }
    }
    Some(axis.unwrap_or_else(Vec3::z))
}

fn orthonormal_frame(axis: &Vec3) -> (Vec3, Vec3) {
    let trial = if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (trial - axis * trial.dot(axis)).normalize();
    (e1, axis.cross(&e1))
}

/// Spatial Klein-Gordon smear. `spec` supplies the angular node counts and
/// panel widths (fine in units of σ, coarse in packet wavelengths).
pub fn kg_smear(
    field: &ShiftField,
    ff: &FormFactor,
    g: &WavePacket,
    x0: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<Integral<C4>> {
    spec.validate()?;
    if *field == ShiftField::Zero {
        return Ok(Integral::zero());
    }
    let tau = x0 + t;
    let xc = g.center;
    let reach = g.profile.spatial_reach();
    let window = ((x0.abs() - reach).max(0.0), x0.abs() + reach);
    let pad = 10.0 * ff.sigma();
    let fine: Vec<(f64, f64)> = field
        .features(tau)
        .iter()
        .map(|(c, r)| {
            let d = (c - xc).norm();
            ((r - d).abs() - pad, r + d + pad)
        })
        .collect();
    let k_hi = g.profile.support().1;
    let coarse = spec.coarse_panel_wavelengths * 2.0 * PI / k_hi;
    let panels = radial_panels(window, &fine, spec.fine_panel_sigmas * ff.sigma(), coarse);

    let radial = field.is_radial_about(&xc);
    let axis = if radial { Some(Vec3::z()) } else { symmetry_axis(&field.directions(&xc)) };
    let (n_theta, n_phi) = match (radial, axis) {
        (true, _) => (1, 1),
        (false, Some(_)) => (spec.n_theta, 1),
        (false, None) => (spec.n_theta, spec.n_phi),
    };
    let axis = axis.unwrap_or_else(Vec3::z);
    let (e1, e2) = orthonormal_frame(&axis);
    let rule = gauss_legendre(n_theta);
    let mut dirs: Vec<(Vec3, f64)> = Vec::with_capacity(n_theta * n_phi);
    for (u, wu) in rule.mapped(-1.0, 1.0) {
        let st = (1.0 - u * u).max(0.0).sqrt();
        for ip in 0..n_phi {
            let phi = 2.0 * PI * ip as f64 / n_phi as f64;
            let d = axis * u + (e1 * phi.cos() + e2 * phi.sin()) * st;
            let w = if radial { 4.0 * PI } else { wu * 2.0 * PI / n_phi as f64 };
            dirs.push((d, w));
        }
    }

    let per_panel: Vec<Result<Integral<C4>>> = panels
        .par_iter()
        .map(|&(lo, hi)| {
            let mut err = None;
            let r = gk15(
                &mut |rho: f64| {
                    let (gv, gt) = g.radial_eval(rho, x0);
                    let (gc, gtc) = (gv.conj(), gt.conj());
                    let mut acc = C4::zero();
                    for (d, w) in &dirs {
                        let x = xc + d * rho;
                        let a = field.eval(ff, &x, tau);
                        let da = field.eval_dt(ff, &x, tau);
                        match (a, da) {
                            (Ok(a), Ok(da)) => {
                                acc = acc + (c4_scale(da.value.0, gc) - c4_scale(a.value.0, gtc)) * (*w * rho * rho);
                            }
                            (Err(e), _) | (_, Err(e)) => err = Some(e),
                        }
                    }
                    acc
                },
                lo,
                hi,
            );
            match err {
                Some(e) => Err(e),
                None => Ok(r),
            }
        })
        .collect();
    let mut total = Integral::zero();
    for p in per_panel {
        total = total + p?;
    }
    Ok(total)
}

/// Node counts for the momentum-space pairing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumSmearSpec {
    /// Extra Gauss-Legendre nodes in cos θ beyond the phase count.
    pub extra_u: usize,
    /// Azimuthal trapezoid nodes when the field has no common axis.
    pub n_phi: usize,
}

impl Default for MomentumSmearSpec {
    fn default() -> Self {
        Self { extra_u: 24, n_phi: 32 }
    }
}

/// Momentum-space Klein-Gordon smear:
/// ∫d³k conj ĝ(k, x₀) [∂_τÂ(k, τ) − i s|k| Â(k, τ)].
pub fn kg_smear_momentum(
    field: &ShiftField,
    ff: &FormFactor,
    g: &WavePacket,
    x0: f64,
    t: f64,
    spec: &MomentumSmearSpec,
) -> Result<Integral<C4>> {
    if spec.n_phi == 0 {
        return domain("azimuthal node count must be positive");
    }
    if *field == ShiftField::Zero {
        return Ok(Integral::zero());
    }
    let tau = x0 + t;
    let dirs = field.directions(&g.center);
    let axis = symmetry_axis(&dirs);
    let axis_found = axis.is_some();
    let axis = axis.unwrap_or_else(Vec3::z);
    let (e1, e2) = orthonormal_frame(&axis);
    let anchors = field.anchors();
    let offset = anchors.iter().fold(0.0f64, |m, (y, _)| m.max((y - g.center).norm()));
    let speed = anchors.iter().fold(0.0f64, |m, (_, v)| m.max(v.norm()));
    // Phase ranges: in cos θ from the offsets and the drift v·k τ, in |k|
    // from the free evolution of both the packet and the field.
    let span = offset + speed * tau.abs();
    let k_span = offset + tau.abs() + x0.abs();
    let (k_lo, k_hi) = g.profile.support();
    let n_phi = if axis_found { 1 } else { spec.n_phi.max((k_hi * offset).ceil() as usize + 8) };
    let width = (0.5 * PI / k_span.max(1e-12)).min((k_hi - k_lo) / 32.0);
    let n_panels = ((k_hi - k_lo) / width).ceil() as usize;
    let h = (k_hi - k_lo) / n_panels as f64;
    let s = g.freq_sign;

    let integrand = |km: f64| -> Result<C4> {
        let n_u = (0.5 * km * span).ceil() as usize + spec.extra_u;
        let rule = gauss_legendre(n_u);
        let mut acc = C4::zero();
        for (u, wu) in rule.mapped(-1.0, 1.0) {
            let st = (1.0 - u * u).max(0.0).sqrt();
            for ip in 0..n_phi {
                let phi = 2.0 * PI * ip as f64 / n_phi as f64;
                let k = (axis * u + (e1 * phi.cos() + e2 * phi.sin()) * st) * km;
                let gh = g.amplitude_at(&k, x0).conj();
                let (a, da) = field.fourier(ff, &k, tau)?;
                let w = wu * 2.0 * PI / n_phi as f64 * km * km;
                let term = C4(std::array::from_fn(|m| gh * (da.0[m] - I * s * km * a.0[m])));
                acc = acc + term * w;
            }
        }
        Ok(acc)
    };
    let per_panel: Vec<Result<Integral<C4>>> = (0..n_panels)
        .into_par_iter()
        .map(|i| {
            let lo = k_lo + h * i as f64;
            let hi = if i + 1 == n_panels { k_hi } else { lo + h };
            let mut err = None;
            let r = composite_gk15(
                |k: f64| match integrand(k) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        C4::zero()
                    }
                },
                lo,
                hi,
                1,
            );
            match err {
                Some(e) => Err(e),
                None => Ok(r),
            }
        })
        .collect();
    let mut total = Integral::zero();
    for p in per_panel {
        total = total + p?;
    }
    Ok(total)
}

//! Momentum-space routes: the mode shift f, its Fourier reconstruction, and
//! radial integrals for the divergence of the shift.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::particle::ParticleSpec;
use crate::error::{domain, Error, Result};
use crate::kernel::form_factor::INV_TWO_PI_3_2;
use crate::kernel::quadrature::{gauss_legendre, panels_of_width, Integral, C4, V4};
use crate::kernel::{FormFactor, Vec3};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// (e^{iwt} − 1)/w without cancellation for small wt.
fn phase_ratio(w: f64, t: f64) -> Complex64 {
    let h = 0.5 * w * t;
    let sinc = if h.abs() < 1e-4 { 1.0 - h * h / 6.0 } else { h.sin() / h };
    I * t * Complex64::from_polar(sinc, h)
}

/// Mode shift per unit charge for branch velocity `vb`, particle at `y`:
/// e^{−i|k|t} v^μ ρ̃/√(2|k|) · (e^{i(v·k)t} − 1)/(v·k) · e^{−ik·y}.
pub fn mode_shift_unit(ff: &FormFactor, k: &Vec3, t: f64, vb: &Vec3, y: &Vec3) -> [Complex64; 4] {
    let km = k.norm();
    let vk = km - vb.dot(k);
    let s = Complex64::from_polar(ff.rho_tilde(km) / (2.0 * km).sqrt(), -km * t - k.dot(y)) * phase_ratio(vk, t);
    [s, s * vb.x, s * vb.y, s * vb.z]
}

/// f^μ(k, t) for the particle, including the charge; t < 0 uses the
/// incoming velocity.
pub fn mode_shift_f(k: &Vec3, t: f64, p: &ParticleSpec, ff: &FormFactor) -> Result<[Complex64; 4]> {
    if !(k.norm() > 0.0) {
        return domain("mode shift needs |k| > 0");
    }
    let vb = p.branch_velocity(t);
    Ok(mode_shift_unit(ff, k, t, &vb, &p.y).map(|c| c * p.charge))
}

/// Fourier amplitude of the interior field from the mode shift:
/// (f(k) + conj f(−k))/√(2|k|), particle at the origin, μ = 0 component.
pub fn interior_amplitude(ff: &FormFactor, k: &Vec3, t: f64, vb: &Vec3) -> Complex64 {
    let y = Vec3::zeros();
    let a = mode_shift_unit(ff, k, t, vb, &y)[0];
    let b = mode_shift_unit(ff, &(-k), t, vb, &y)[0];
    (a + b.conj()) / (2.0 * k.norm()).sqrt()
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Interior field by momentum quadrature of the reconstructed amplitude.
/// `disp` is x − y.
pub fn interior_k_quadrature(ff: &FormFactor, disp: &Vec3, t: f64, vb: &Vec3, tol: f64) -> Result<Integral<V4>> {
    let kc = ff.k_cut();
    let r = disp.norm();
    let speed = vb.norm();
    if speed == 0.0 {
        let width = (0.5 * PI / (r + t.abs()).max(1e-12)).min(0.5 / ff.sigma());
        let f = |k: f64| {
            if k == 0.0 {
                return 0.0;
            }
            let amp = interior_amplitude(ff, &Vec3::new(0.0, 0.0, k), t, vb).re;
            k * k * amp * sinc(k * r)
        };
        let i = panels_of_width(f, 0.0, kc, width);
        let s = 4.0 * PI * INV_TWO_PI_3_2;
        return Ok(Integral { value: V4([i.value * s, 0.0, 0.0, 0.0]), error: i.error * s });
    }
    let axis = vb / speed;
    let par = disp.dot(&axis);
    let perp = (disp - axis * par).norm();
    let perp_dir = {
        let trial = if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        (trial - axis * trial.dot(&axis)).normalize()
    };
    let span = r + speed * t.abs();
    let width = (0.5 * PI / (r + (1.0 + speed) * t.abs()).max(1e-12)).min(0.5 / ff.sigma());
    let f = |k: f64| {
        if k == 0.0 {
            return 0.0;
        }
        let n = (0.5 * k * (span + perp)).ceil() as usize + 24;
        let rule = gauss_legendre(n);
        let mut s = 0.0;
        for (u, w) in rule.mapped(-1.0, 1.0) {
            let st = (1.0 - u * u).max(0.0).sqrt();
            let kv = axis * (k * u) + perp_dir * (k * st);
            let amp = interior_amplitude(ff, &kv, t, vb);
            let phase = Complex64::from_polar(1.0, k * u * par);
            s += w * libm::j0(k * st * perp) * (phase * amp).re;
        }
        k * k * s
    };
    let i = panels_of_width(f, 0.0, kc, width);
    let scale = 2.0 * PI * INV_TWO_PI_3_2;
    if !(i.error <= tol.max(1e-13 * i.value.abs())) && i.error > 1e-6 {
        return Err(Error::NonConvergence { context: "interior momentum quadrature".into(), estimate: i.error, tolerance: tol });
    }
    let v = i.value * scale;
    Ok(Integral { value: V4([v, v * vb.x, v * vb.y, v * vb.z]), error: i.error * scale })
}

/// Radial transform (2π)^{-3/2}(4π/r)∫ρ̃(k) g(k) sin(kr) dk for an
/// integrand with oscillation frequency at most `freq`.
fn radial_transform(ff: &FormFactor, r: f64, freq: f64, g: impl Fn(f64) -> f64) -> Integral {
    let kc = ff.k_cut();
    let width = (0.5 * PI / freq.max(1e-12)).min(0.5 / ff.sigma());
    let s = 4.0 * PI * INV_TWO_PI_3_2;
    let i = panels_of_width(|k: f64| ff.rho_tilde(k) * g(k) * k * sinc(k * r), 0.0, kc, width);
    Integral { value: i.value * s, error: i.error * s }
}

/// ∂·F by momentum quadrature: (2π)^{-3/2}(4π/r)∫ρ̃ sin(kt) sin(kr) dk.
pub fn divergence_k_quadrature(ff: &FormFactor, r: f64, t: f64) -> Integral {
    radial_transform(ff, r, r + t.abs(), |k| (k * t).sin())
}

/// ∂^ν(∂·F) by momentum quadrature; `disp` is x − y.
pub fn divergence_gradient_k_quadrature(ff: &FormFactor, disp: &Vec3, t: f64) -> Integral<V4> {
    let r = disp.norm();
    let freq = r + t.abs();
    let dt = radial_transform(ff, r, freq, |k| k * (k * t).cos());
    let kc = ff.k_cut();
    let width = (0.5 * PI / freq.max(1e-12)).min(0.5 / ff.sigma());
    let s = 4.0 * PI * INV_TWO_PI_3_2;
    // d/dr [sin(kr)/r] = k³ r · q(kr), q(x) = (x cos x − sin x)/x³.
    let q = |x: f64| {
        if x < 0.05 {
            let x2 = x * x;
            -1.0 / 3.0 + x2 * (1.0 / 30.0 - x2 / 840.0)
        } else {
            (x * x.cos() - x.sin()) / (x * x * x)
        }
    };
    let dr = panels_of_width(|k: f64| ff.rho_tilde(k) * (k * t).sin() * k * k * k * q(k * r), 0.0, kc, width);
    // ∂_i f = (df/dr) X_i / r = s·∫…·X_i ; upper index flips the sign.
    let g = dr.value * s;
    Integral {
        value: V4([dt.value, -g * disp.x, -g * disp.y, -g * disp.z]),
        error: dt.error + dr.error * s * r,
    }
}

/// Negative-frequency part of ∂·F: (2π)^{-3/2}(2π/r)∫ρ̃ sin(kr) i e^{−ikt} dk.
pub fn divergence_minus_k_quadrature(ff: &FormFactor, r: f64, t: f64) -> Integral<Complex64> {
    let re = radial_transform(ff, r, r + t.abs(), |k| 0.5 * (k * t).sin());
    let im = radial_transform(ff, r, r + t.abs(), |k| 0.5 * (k * t).cos());
    Integral { value: Complex64::new(re.value, im.value), error: re.error + im.error }
}

/// Fourier amplitude of the uniformly moving potential v^μ ρ̃ e^{−ik·(y+vτ)}/(k² − (v·k)²)
/// and its τ-derivative.
pub fn moving_amplitude(ff: &FormFactor, k: &Vec3, tau: f64, v: &Vec3, y: &Vec3) -> (C4, C4) {
    let km = k.norm();
    let vk = v.dot(k);
    let base = Complex64::from_polar(ff.rho_tilde(km) / (km * km - vk * vk), -k.dot(y) - vk * tau);
    let d = -I * vk * base;
    (scaled(base, v), scaled(d, v))
}

/// Fourier amplitude of the free compensating field with Cauchy data equal
/// to the moving potential at τ = 0, and its τ-derivative.
pub fn compensating_amplitude(ff: &FormFactor, k: &Vec3, tau: f64, v: &Vec3, y: &Vec3) -> (C4, C4) {
    let km = k.norm();
    let vk = v.dot(k);
    let pre = Complex64::from_polar(ff.rho_tilde(km) / (km * km - vk * vk), -k.dot(y));
    let (s, c) = (km * tau).sin_cos();
    let val = pre * Complex64::new(c, -vk * s / km);
    let d = pre * Complex64::new(-km * s, -vk * c);
    (scaled(val, v), scaled(d, v))
}

fn scaled(z: Complex64, v: &Vec3) -> C4 {
    C4([z, z * v.x, z * v.y, z * v.z])
}

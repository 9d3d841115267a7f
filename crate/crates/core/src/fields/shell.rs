//! Uniform-velocity potentials as radial integrals over retarded spheres.
//!
//! A charge that moves as y + v·t' contributes to (x, t) through the sphere
//! of radius R = |t − t'| around x; averaging ρ over that sphere is done in
//! closed form, leaving
//!
//! ∫ R · S(|X₀ + s·v·R|, R) dR,  X₀ = x − y − v·t,
//!
//! with s = +1 for retarded and s = −1 for advanced propagation. The
//! integrand is a Gaussian ridge around the unique root R* of |X₀ + s v R| = R
//! whose width in R is at most σ/(1 − |v|).

use crate::kernel::quadrature::{panels_of_width, Integral};
use crate::kernel::{FormFactor, Vec3};

/// Half-width of the integration window in units of σ/(1 − |v|).
const WINDOW_SIGMAS: f64 = 10.0;

/// Root of |X₀ + s v R| = R.
pub fn ridge_radius(x0: &Vec3, v: &Vec3, s: f64) -> f64 {
    let v2 = v.norm_squared();
    let vx = v.dot(x0);
    let disc = (vx * vx + (1.0 - v2) * x0.norm_squared()).sqrt();
    let den = 1.0 - v2;
    if s * vx >= 0.0 {
        (s * vx + disc) / den
    } else {
        // Rationalised form avoids cancellation.
        x0.norm_squared() / (disc - s * vx)
    }
}

/// ∫_lo^hi R·S(|X₀ + s v R|, R) dR; `hi` may be infinite.
pub fn shell_integral(ff: &FormFactor, x0: &Vec3, v: &Vec3, s: f64, lo: f64, hi: f64) -> Integral {
    shell_integral_with(ff, x0, v, s, lo, hi, |w, r| r * ff.shell_average(w.norm(), r))
}

/// ∂/∂t of the integrand of [`shell_integral`] when X₀ = x − y − v t,
/// integrated over the same range.
pub fn shell_integral_dt(ff: &FormFactor, x0: &Vec3, v: &Vec3, s: f64, lo: f64, hi: f64) -> Integral {
    shell_integral_with(ff, x0, v, s, lo, hi, |w, r| {
        let a = w.norm();
        if a == 0.0 {
            return 0.0;
        }
        -r * ff.shell_average_da(a, r) * v.dot(w) / a
    })
}

/// Integral of `g(X₀ + s v R, R)` over the ridge window intersected with [lo, hi].
pub fn shell_integral_with(
    ff: &FormFactor,
    x0: &Vec3,
    v: &Vec3,
    s: f64,
    lo: f64,
    hi: f64,
    g: impl Fn(&Vec3, f64) -> f64,
) -> Integral {
    let speed = v.norm();
    let sigma = ff.sigma();
    let r_star = ridge_radius(x0, v, s);
    let half = WINDOW_SIGMAS * sigma / (1.0 - speed);
    let a = lo.max(r_star - half).max(0.0);
    let b = hi.min(r_star + half);
    if !(b > a) {
        return Integral::zero();
    }
    // Panels no wider than the narrowest ridge width keep the rule converged
    // to rounding, so the result is smooth enough for finite differences.
    let width = sigma / (1.0 + speed);
    let f = |r: f64| g(&(x0 + v * (s * r)), r);
    let mut out = panels_of_width(f, a, b, width);
    // Mass outside the window is below e^{-50} of the ridge height.
    out.error += 2e-22 * ff.peak() * (r_star + half) * sigma;
    out
}

//! The characteristic-function identity
//!
//! (2π)^{-3/2} ∫d³k e^{ik·x} (1 − cos|k|t)/|k|² = √(π/2) χ_{|x|<|t|}/|x|.
//!
//! After the angular integral the left side is (2π)^{-3/2}(4π/r) times
//! ∫₀^∞ (1 − cos kt) sin(kr)/k dk. The finite part is integrated on
//! quarter-period panels; the remainder splits into three sine integrals
//! ∫_K^∞ sin(ak)/k dk handled by their asymptotic expansion.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::kernel::form_factor::INV_TWO_PI_3_2;
use crate::kernel::quadrature::{composite_gk15, Integral};
use crate::kernel::Vec3;

/// Cut-off is placed where min |a|·K reaches this value.
const TAIL_START: f64 = 200.0;
const MAX_PANELS: f64 = 2.0e6;

/// ∫_z^∞ sin(u)/u du for z ≥ 200 from the auxiliary functions f and g.
fn sine_tail(z: f64) -> f64 {
    let w = 1.0 / (z * z);
    let f = (1.0 - w * (2.0 - w * (24.0 - w * 720.0))) / z;
    let g = (1.0 - w * (6.0 - w * (120.0 - w * 5040.0))) * w;
    f * z.cos() + g * z.sin()
}

/// Left side by radial oscillatory quadrature with tail correction.
pub fn chi_kernel_lhs(x: &Vec3, t: f64) -> Result<Integral> {
    let r = x.norm();
    if !(r > 0.0) {
        return domain("the characteristic-function kernel needs x ≠ 0");
    }
    if t == 0.0 {
        return Ok(Integral::zero());
    }
    let tt = t.abs();
    let freqs = [(r, 1.0), (r + tt, -0.5), (r - tt, -0.5)];
    let a_max = r + tt;
    let a_min = freqs.iter().map(|(a, _)| a.abs()).filter(|a| *a > 0.0).fold(f64::INFINITY, f64::min);
    let k_end = TAIL_START / a_min;
    let panels = (k_end * 2.0 * a_max / PI).ceil();
    if panels > MAX_PANELS {
        return Err(Error::NonConvergence {
            context: format!("characteristic-function kernel at r = {r}, t = {t} (too close to the cone)"),
            estimate: panels,
            tolerance: MAX_PANELS,
        });
    }
    let body = composite_gk15(
        |k: f64| {
            if k == 0.0 {
                return 0.0;
            }
            let s = (0.5 * k * tt).sin();
            2.0 * s * s * (k * r).sin() / k
        },
        0.0,
        k_end,
        panels as usize,
    );
    let tail: f64 = freqs
        .iter()
        .filter(|(a, _)| *a != 0.0)
        .map(|(a, c)| c * a.signum() * sine_tail(a.abs() * k_end))
        .sum();
    let scale = INV_TWO_PI_3_2 * 4.0 * PI / r;
    // The expansion is truncated after the z^{-8} term.
    let tail_error = 40320.0 / (a_min * k_end).powi(9);
    Ok(Integral { value: scale * (body.value + tail), error: scale * (body.error + tail_error) })
}

/// Right side √(π/2) χ_{|x|<|t|}/|x|; zero on the cone itself.
pub fn chi_kernel_rhs(x: &Vec3, t: f64) -> Result<f64> {
    let r = x.norm();
    if !(r > 0.0) {
        return domain("the characteristic-function kernel needs x ≠ 0");
    }
    Ok(if r < t.abs() { (0.5 * PI).sqrt() / r } else { 0.0 })
}

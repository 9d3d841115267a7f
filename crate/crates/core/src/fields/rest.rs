//! Closed forms for a charge at rest.
//!
//! With a = √2σ, T = |t| and D = erf((T+r)/a) − erf((T−r)/a):
//! interior F⁰ = Coul(r) − D/(8πr), exterior G = −D/(8πr), Coulomb
//! compensating field C = D/(8πr).

use std::f64::consts::{PI, SQRT_2};

use crate::kernel::quadrature::gauss_legendre;
use crate::kernel::FormFactor;

/// D/r, accurate for every r ≥ 0.
pub fn erf_window_over_r(ff: &FormFactor, r: f64, t: f64) -> f64 {
    let a = SQRT_2 * ff.sigma();
    let tt = t.abs();
    if r < 0.1 * a {
        let rule = gauss_legendre(20);
        let s: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(u, w)| {
                let z = (tt + r * u) / a;
                w * (-z * z).exp()
            })
            .sum();
        return 2.0 / (PI.sqrt() * a) * s;
    }
    let (p, m) = ((tt + r) / a, (tt - r) / a);
    let d = if m >= 0.0 { libm::erfc(m) - libm::erfc(p) } else { libm::erf(p) + libm::erf(-m) };
    d / r
}

pub fn exterior(ff: &FormFactor, r: f64, t: f64) -> f64 {
    -erf_window_over_r(ff, r, t) / (8.0 * PI)
}

pub fn interior(ff: &FormFactor, r: f64, t: f64) -> f64 {
    ff.coulomb(r) + exterior(ff, r, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_agree_at_switch() {
        let ff = FormFactor::gaussian(0.1).unwrap();
        let a = SQRT_2 * 0.1;
        for t in [0.0, 0.05, 0.3, 2.0] {
            let r = 0.1 * a;
            let lo = erf_window_over_r(&ff, r * (1.0 - 1e-12), t);
            let hi = erf_window_over_r(&ff, r * (1.0 + 1e-12), t);
            assert!((lo - hi).abs() <= 1e-10 * hi.abs().max(1e-300), "t={t}: {lo} {hi}");
        }
    }

    #[test]
    fn interior_vanishes_at_zero_time() {
        let ff = FormFactor::gaussian(0.05).unwrap();
        for r in [0.0, 0.01, 0.3, 4.0] {
            assert!(interior(&ff, r, 0.0).abs() < 1e-15);
        }
    }
}

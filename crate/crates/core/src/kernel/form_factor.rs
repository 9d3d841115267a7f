use std::f64::consts::{PI, SQRT_2};

use crate::error::{domain, Result};

/// (2π)^{-3/2}
pub const INV_TWO_PI_3_2: f64 = 0.063_493_635_934_240_97;

/// Supported charge-distribution families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormFactorFamily {
    Gaussian,
}

/// Rotationally invariant charge distribution ρ with ∫ρ = 1.
///
/// The Gaussian family ρ(r) = (2πσ²)^{-3/2} e^{−r²/2σ²} has the transform
/// ρ̃(k) = (2π)^{-3/2} e^{−σ²k²/2} in the symmetric Fourier convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormFactor {
    family: FormFactorFamily,
    sigma: f64,
}

impl FormFactor {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return domain(format!("form factor width must be positive and finite, got {sigma}"));
        }
        Ok(Self { family: FormFactorFamily::Gaussian, sigma })
    }

    pub fn family(&self) -> FormFactorFamily {
        self.family
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Normalisation constant (2πσ²)^{-3/2}.
    pub fn peak(&self) -> f64 {
        (2.0 * PI * self.sigma * self.sigma).powf(-1.5)
    }

    pub fn rho(&self, r: f64) -> f64 {
        self.peak() * (-0.5 * r * r / (self.sigma * self.sigma)).exp()
    }

    pub fn rho_tilde(&self, k: f64) -> f64 {
        INV_TWO_PI_3_2 * (-0.5 * self.sigma * self.sigma * k * k).exp()
    }

    /// Momentum beyond which ρ̃(k)/ρ̃(0) < e^{−41}.
    pub fn k_cut(&self) -> f64 {
        9.1 / self.sigma
    }

    /// Charge outside the ball of radius r.
    pub fn tail_mass(&self, r: f64) -> f64 {
        let u = r / self.sigma;
        libm::erfc(u / SQRT_2) + (2.0 / PI).sqrt() * u * (-0.5 * u * u).exp()
    }

    /// Smallest r with tail mass below `eps`.
    pub fn r_eff(&self, eps: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.sigma);
        while self.tail_mass(hi) >= eps {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.tail_mass(mid) < eps {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        hi
    }

    /// Same family convolved with a normalised Gaussian of width `extra`.
    pub fn convolved(&self, extra: f64) -> Self {
        Self {
            family: self.family,
            sigma: (self.sigma * self.sigma + extra * extra).sqrt(),
        }
    }

    /// Average of ρ over the sphere of radius `radius` whose centre lies at
    /// distance `a` from the centre of the distribution.
    pub fn shell_average(&self, a: f64, radius: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let d = a - radius;
        let x = 2.0 * a * radius / s2;
        let q = if x < 1e-8 { 1.0 - 0.5 * x } else { -libm::expm1(-x) / x };
        self.peak() * (-0.5 * d * d / s2).exp() * q
    }

    /// ∂S/∂a of [`Self::shell_average`].
    pub fn shell_average_da(&self, a: f64, radius: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let d = a - radius;
        let x = 2.0 * a * radius / s2;
        let (q, dq) = if x < 0.05 {
            let q = 1.0 + x * (-0.5 + x * (1.0 / 6.0 + x * (-1.0 / 24.0 + x / 120.0)));
            let dq = -0.5 + x * (1.0 / 3.0 + x * (-0.125 + x * (1.0 / 30.0 + x * (-1.0 / 144.0 + x / 840.0))));
            (q, dq)
        } else {
            let e = (-x).exp();
            (-libm::expm1(-x) / x, (e * (1.0 + x) - 1.0) / (x * x))
        };
        let g = self.peak() * (-0.5 * d * d / s2).exp();
        g * (-d / s2 * q + dq * 2.0 * radius / s2)
    }

    /// Smeared Coulomb potential ∫ρ(|x−z|)/(4π|z|) d³z at distance r.
    pub fn coulomb(&self, r: f64) -> f64 {
        let a = SQRT_2 * self.sigma;
        if r < 1e-8 * a {
            let u = r / a;
            return (1.0 - u * u / 3.0) / (2.0 * PI.powf(1.5) * a);
        }
        libm::erf(r / a) / (4.0 * PI * r)
    }

    /// Radial derivative of [`Self::coulomb`].
    pub fn coulomb_dr(&self, r: f64) -> f64 {
        let a = SQRT_2 * self.sigma;
        let u = r / a;
        if u < 0.05 {
            let u2 = u * u;
            let s = u * (-2.0 / 3.0 + u2 * (0.4 + u2 * (-1.0 / 7.0 + u2 / 27.0)));
            return s / (2.0 * PI.powf(1.5) * a * a);
        }
        let g = 2.0 / PI.sqrt() * (-(r / a) * (r / a)).exp() / a;
        (g * r - libm::erf(r / a)) / (4.0 * PI * r * r)
    }
}

/// ρ̃(|k|) for a form factor; negative magnitudes are rejected.
pub fn form_factor_tilde(ff: &FormFactor, kmag: f64) -> Result<f64> {
    if !(kmag >= 0.0) {
        return domain(format!("momentum magnitude must be non-negative, got {kmag}"));
    }
    Ok(ff.rho_tilde(kmag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_at_origin() {
        let ff = FormFactor::gaussian(0.3).unwrap();
        assert!((ff.rho_tilde(0.0) - (2.0 * PI).powf(-1.5)).abs() < 1e-17);
        assert!((INV_TWO_PI_3_2 - (2.0 * PI).powf(-1.5)).abs() < 1e-17);
    }

    #[test]
    fn rejects_bad_width() {
        assert!(FormFactor::gaussian(0.0).is_err());
        assert!(FormFactor::gaussian(-1.0).is_err());
        assert!(FormFactor::gaussian(f64::INFINITY).is_err());
        let ff = FormFactor::gaussian(1.0).unwrap();
        assert!(form_factor_tilde(&ff, -1.0).is_err());
    }

    #[test]
    fn effective_radius_matches_tail() {
        let ff = FormFactor::gaussian(0.05).unwrap();
        let r = ff.r_eff(1e-10);
        assert!(ff.tail_mass(r) < 1e-10);
        assert!(ff.tail_mass(r * (1.0 - 1e-9)) >= 1e-10 * 0.999);
        assert!(r > 6.0 * 0.05 && r < 8.0 * 0.05);
    }

    #[test]
    fn shell_average_small_distance_limit() {
        let ff = FormFactor::gaussian(0.2).unwrap();
        let r = 0.3;
        assert!((ff.shell_average(0.0, r) - ff.rho(r)).abs() < 1e-12 * ff.rho(r));
        assert!((ff.shell_average(1e-12, r) - ff.rho(r)).abs() < 1e-9 * ff.rho(r));
    }

    #[test]
    fn coulomb_series_is_continuous() {
        let ff = FormFactor::gaussian(0.1).unwrap();
        let a = SQRT_2 * 0.1;
        let r = 1e-8 * a;
        let lhs = ff.coulomb(r * 0.999);
        let rhs = libm::erf(r * 1.001 / a) / (4.0 * PI * r * 1.001);
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
        let r = 0.05 * a;
        let series = ff.coulomb_dr(r * (1.0 - 1e-12));
        let g = 2.0 / PI.sqrt() * (-(r / a) * (r / a)).exp() / a;
        let direct = (g * r - libm::erf(r / a)) / (4.0 * PI * r * r);
        assert!((series - direct).abs() < 1e-10 * direct.abs());
    }
}

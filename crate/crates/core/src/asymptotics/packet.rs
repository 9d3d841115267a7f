//! Free wave packets g(x, t) = (2π)^{-3/2}∫d³k e^{ik·x} ĝ(k, t) with
//! ĝ(k, t) = A·b(|k|)·e^{−ik·x_c}·e^{−is|k|t}.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::kernel::form_factor::INV_TWO_PI_3_2;
use crate::kernel::quadrature::panels_of_width;
use crate::kernel::Vec3;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Radial momentum profile b(|k|).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile {
    /// e^{−(k−k₀)²/2w²} on [k_lo, k_hi], zero elsewhere.
    TruncatedGaussian { center: f64, width: f64, k_lo: f64, k_hi: f64 },
    /// C∞ bump exp(−1/(1 − u²)) with u mapping [k_lo, k_hi] onto [−1, 1].
    Bump { k_lo: f64, k_hi: f64 },
    /// e^{−w²k²/2}; reaches down to k = 0, so limits need not converge.
    IrSoft { width: f64 },
}

impl Profile {
    /// Truncated Gaussian cut where it has fallen to e^{−40.5} of its peak.
    pub fn gaussian_annulus(center: f64, width: f64) -> Self {
        Profile::TruncatedGaussian { center, width, k_lo: center - 9.0 * width, k_hi: center + 9.0 * width }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Profile::TruncatedGaussian { width, k_lo, k_hi, center } => {
                if !(width > 0.0 && center.is_finite()) {
                    return domain("packet width must be positive");
                }
                annulus(k_lo, k_hi)
            }
            Profile::Bump { k_lo, k_hi } => annulus(k_lo, k_hi),
            Profile::IrSoft { width } => {
                if width > 0.0 && width.is_finite() {
                    Ok(())
                } else {
                    domain("packet width must be positive")
                }
            }
        }
    }

    pub fn value(&self, k: f64) -> f64 {
        match *self {
            Profile::TruncatedGaussian { center, width, k_lo, k_hi } => {
                if k < k_lo || k > k_hi {
                    0.0
                } else {
                    let d = (k - center) / width;
                    (-0.5 * d * d).exp()
                }
            }
            Profile::Bump { k_lo, k_hi } => {
                let u = (2.0 * k - k_lo - k_hi) / (k_hi - k_lo);
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - u * u)).exp()
                }
            }
            Profile::IrSoft { width } => (-0.5 * width * width * k * k).exp(),
        }
    }

    /// Momentum interval carrying the profile.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Profile::TruncatedGaussian { k_lo, k_hi, .. } | Profile::Bump { k_lo, k_hi } => (k_lo, k_hi),
            Profile::IrSoft { width } => (0.0, 9.1 / width),
        }
    }

    /// Radius beyond which |g(·, t)| is negligible, measured from the
    /// packet's wavefront |x − x_c| = |t|.
    pub fn spatial_reach(&self) -> f64 {
        match *self {
            Profile::TruncatedGaussian { width, .. } => 9.5 / width,
            // The bump's transform decays only like exp(−c√r).
            Profile::Bump { k_lo, k_hi } => 2000.0 / (k_hi - k_lo),
            Profile::IrSoft { width } => 9.5 * width,
        }
    }
}

fn annulus(k_lo: f64, k_hi: f64) -> Result<()> {
    if !(k_lo > 0.0 && k_hi > k_lo && k_hi.is_finite()) {
        return domain(format!("packet annulus [{k_lo}, {k_hi}] must satisfy 0 < k_lo < k_hi"));
    }
    Ok(())
}

/// A free solution of the wave equation with radial momentum profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavePacket {
    pub profile: Profile,
    pub center: Vec3,
    pub amplitude: Complex64,
    /// +1 for e^{i(k·x − |k|t)}, −1 for the opposite frequency.
    pub freq_sign: f64,
}

/// Builds a packet; the default convention is positive frequency.
pub fn make_wave_packet(profile: Profile, center: Vec3, amplitude: Complex64, freq_sign: f64) -> Result<WavePacket> {
    profile.validate()?;
    if freq_sign != 1.0 && freq_sign != -1.0 {
        return domain("frequency sign must be +1 or −1");
    }
    if !(amplitude.norm() > 0.0 && amplitude.norm().is_finite()) {
        return domain("packet amplitude must be non-zero and finite");
    }
    Ok(WavePacket { profile, center, amplitude, freq_sign })
}

impl WavePacket {
    /// The packet whose smears are the complex conjugates of this one's.
    pub fn conjugate(&self) -> Self {
        Self { amplitude: self.amplitude.conj(), freq_sign: -self.freq_sign, ..*self }
    }

    /// ĝ(k, t).
    pub fn amplitude_at(&self, k: &Vec3, t: f64) -> Complex64 {
        let km = k.norm();
        self.amplitude
            * self.profile.value(km)
            * Complex64::from_polar(1.0, -k.dot(&self.center) - self.freq_sign * km * t)
    }

    /// ∫ b(k) k^n e^{ikA} dk for n = 1, 2, 3.
    fn moments(&self, a: f64) -> (Complex64, Complex64, Complex64) {
        match self.profile {
            Profile::TruncatedGaussian { center, width, .. } => {
                // Gaussian moments over the whole line; the truncated and
                // negative-k parts weigh less than e^{−40}.
                let c = Complex64::from_polar(
                    (2.0 * PI).sqrt() * width * (-0.5 * width * width * a * a).exp(),
                    center * a,
                );
                let z = Complex64::new(center, width * width * a);
                let w2 = width * width;
                (c * z, c * (z * z + w2), c * z * (z * z + 3.0 * w2))
            }
            _ => {
                let (lo, hi) = self.profile.support();
                let w = (0.5 * PI / a.abs().max(1e-12)).min((hi - lo) / 64.0);
                let i1 = panels_of_width(|k: f64| self.profile.value(k) * k * Complex64::from_polar(1.0, k * a), lo, hi, w);
                let i2 =
                    panels_of_width(|k: f64| self.profile.value(k) * k * k * Complex64::from_polar(1.0, k * a), lo, hi, w);
                let i3 = panels_of_width(
                    |k: f64| self.profile.value(k) * k * k * k * Complex64::from_polar(1.0, k * a),
                    lo,
                    hi,
                    w,
                );
                (i1.value, i2.value, i3.value)
            }
        }
    }

    /// g and ∂_t g at distance ρ from the centre: with c = s·t,
    /// g = A(2π)^{-3/2}(2π/iρ)[M₁(ρ − c) − M₁(−ρ − c)].
    pub fn radial_eval(&self, rho: f64, t: f64) -> (Complex64, Complex64) {
        let c = self.freq_sign * t;
        let s = self.freq_sign;
        let pre = self.amplitude * INV_TWO_PI_3_2 * 2.0 * PI / I;
        if rho < 1e-5 {
            // [M(ρ − c) − M(−ρ − c)]/ρ → 2M′(−c), and M_n′ = i M_{n+1}.
            let (_, m2, m3) = self.moments(-c);
            return (pre * 2.0 * I * m2, pre * (-I * s) * 2.0 * I * m3);
        }
        let (p1, p2, _) = self.moments(rho - c);
        let (m1, m2, _) = self.moments(-rho - c);
        (pre * (p1 - m1) / rho, pre * (-I * s) * (p2 - m2) / rho)
    }

    pub fn eval(&self, x: &Vec3, t: f64) -> Complex64 {
        self.radial_eval((x - self.center).norm(), t).0
    }

    /// Squared L² norm 4π|A|²∫b²k² dk, conserved by free evolution.
    pub fn norm_squared(&self) -> f64 {
        let (lo, hi) = self.profile.support();
        let i = panels_of_width(|k: f64| (self.profile.value(k) * k).powi(2), lo, hi, (hi - lo) / 200.0);
        4.0 * PI * self.amplitude.norm_sqr() * i.value
    }
}

//! Extrapolation of Klein-Gordon smears to x₀ → ±∞.

use rayon::prelude::*;

use super::packet::WavePacket;
use super::smear::{kg_smear, kg_smear_momentum, MomentumSmearSpec};
use crate::error::{domain, Result};
use crate::fields::ShiftField;
use crate::kernel::quadrature::{Integral, Quadrable, C4};
use crate::kernel::{FormFactor, QuadratureSpec};

/// Increasing |x₀| values, the polynomial order in 1/x₀ and the relative
/// tolerance on successive extrapolants.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitSchedule {
    pub x0: Vec<f64>,
    pub order: usize,
    pub tolerance: f64,
}

impl Default for LimitSchedule {
    fn default() -> Self {
        Self { x0: vec![20.0, 25.0, 30.0, 35.0, 40.0], order: 2, tolerance: 1e-6 }
    }
}

impl LimitSchedule {
    /// Default spacing, shifted so the first x₀ clears the packet's spatial
    /// reach. Earlier samples still see the packet body overlap the charge
    /// and spoil the extrapolation.
    pub fn clearing(g: &WavePacket) -> Self {
        let d = Self::default();
        let shift = (g.profile.spatial_reach() - d.x0[0]).max(0.0);
        Self { x0: d.x0.iter().map(|x| x + shift).collect(), ..d }
    }

    pub fn validate(&self) -> Result<()> {
        if self.x0.len() < 3 {
            return domain("limit schedule needs at least three points");
        }
        if self.x0.windows(2).any(|w| !(w[1] > w[0])) || !(self.x0[0] > 0.0) {
            return domain("limit schedule must be positive and strictly increasing");
        }
        if self.order + 2 > self.x0.len() {
            return domain("extrapolation order needs order + 2 schedule points");
        }
        if !(self.tolerance > 0.0) {
            return domain("limit tolerance must be positive");
        }
        Ok(())
    }
}

/// Which smearing route evaluates the schedule points.
#[derive(Clone, Debug, PartialEq)]
pub enum SmearMethod {
    Spatial(QuadratureSpec),
    Momentum(MomentumSmearSpec),
}

pub fn smear(
    field: &ShiftField,
    ff: &FormFactor,
    g: &WavePacket,
    x0: f64,
    t: f64,
    method: &SmearMethod,
) -> Result<Integral<C4>> {
    match method {
        SmearMethod::Spatial(q) => kg_smear(field, ff, g, x0, t, q),
        SmearMethod::Momentum(m) => kg_smear_momentum(field, ff, g, x0, t, m),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitStatus {
    Converged,
    NotConverged,
}

/// Raw sequence, extrapolants and the decay fit.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub value: C4,
    pub error: f64,
    pub raw: Vec<(f64, Integral<C4>)>,
    pub extrapolants: Vec<C4>,
    /// |last − previous extrapolant|.
    pub spread: f64,
    pub scale: f64,
    pub status: LimitStatus,
    /// Slope of log|raw − limit| against log|x₀|, when at least two
    /// differences are resolvable.
    pub decay_exponent: Option<f64>,
}

/// Neville extrapolation to h = 0 from (h_i, y_i).
fn neville(h: &[f64], y: &[C4]) -> C4 {
    let mut p: Vec<C4> = y.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (hi, hj) = (h[i], h[i + m]);
            p[i] = (p[i] * (-hj) + p[i + 1] * hi) * (1.0 / (hi - hj));
        }
    }
    p[0]
}

fn limit(
    field: &ShiftField,
    ff: &FormFactor,
    g: &WavePacket,
    t: f64,
    sched: &LimitSchedule,
    method: &SmearMethod,
    sign: f64,
) -> Result<LimitReport> {
    sched.validate()?;
    let raw: Vec<Result<(f64, Integral<C4>)>> = sched
        .x0
        .par_iter()
        .map(|&x| Ok((sign * x, smear(field, ff, g, sign * x, t, method)?)))
        .collect();
    let raw: Vec<(f64, Integral<C4>)> = raw.into_iter().collect::<Result<_>>()?;
    let h: Vec<f64> = sched.x0.iter().map(|x| 1.0 / x).collect();
    let ys: Vec<C4> = raw.iter().map(|(_, v)| v.value).collect();
    let m = sched.order + 1;
    let extrapolants: Vec<C4> = (0..=ys.len() - m).map(|s| neville(&h[s..s + m], &ys[s..s + m])).collect();
    let value = *extrapolants.last().expect("schedule has order + 2 points");
    let spread = (value - extrapolants[extrapolants.len() - 2]).magnitude();
    let scale = ys.iter().fold(0.0f64, |a, v| a.max(v.magnitude()));
    let status = if spread <= sched.tolerance * scale { LimitStatus::Converged } else { LimitStatus::NotConverged };
    let quad = raw.iter().fold(0.0f64, |a, (_, v)| a.max(v.error));
    let pts: Vec<(f64, f64)> = raw
        .iter()
        .map(|(x, v)| (x.abs().ln(), (v.value - value).magnitude()))
        .filter(|(_, d)| *d > 1e-15 * scale.max(f64::MIN_POSITIVE))
        .map(|(lx, d)| (lx, d.ln()))
        .collect();
    let decay_exponent = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    Ok(LimitReport { value, error: spread + quad, raw, extrapolants, spread, scale, status, decay_exponent })
}

/// x₀ → +∞ limit of the smear of `field` against `g`.
pub fn out_limit(
    field: &ShiftField,
    ff: &FormFactor,
    g: &WavePacket,
    t: f64,
    sched: &LimitSchedule,
    method: &SmearMethod,
) -> Result<LimitReport> {
    limit(field, ff, g, t, sched, method, 1.0)
}

/// x₀ → −∞ limit; the schedule lists |x₀|.
pub fn in_limit(
    field: &ShiftField,
    ff: &FormFactor,
    g: &WavePacket,
    t: f64,
    sched: &LimitSchedule,
    method: &SmearMethod,
) -> Result<LimitReport> {
    limit(field, ff, g, t, sched, method, -1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_quadratic_in_h() {
        let h = [0.1, 0.05, 0.025];
        let f = |h: f64| C4([num_complex::Complex64::new(2.0 + 3.0 * h - h * h, 1.0); 4]);
        let y: Vec<C4> = h.iter().map(|x| f(*x)).collect();
        let v = neville(&h, &y);
        assert!((v.0[0].re - 2.0).abs() < 1e-13);
    }

    #[test]
    fn schedule_validation() {
        assert!(LimitSchedule::default().validate().is_ok());
        let bad = LimitSchedule { x0: vec![1.0, 1.0, 2.0, 3.0], ..Default::default() };
        assert!(bad.validate().is_err());
        let short = LimitSchedule { x0: vec![1.0, 2.0], ..Default::default() };
        assert!(short.validate().is_err());
    }
}

use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use super::algebra::{FockVector, Label, ModeOperator, Word};
use super::modes::ModeSet;
use crate::error::{domain, Error, Result};
use crate::kernel::form_factor::INV_TWO_PI_3_2;
use crate::kernel::{FourVector, Vec3};

/// Which free field is smeared with a packet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// A₀^μ
    Potential(usize),
    /// F₀^{μν}
    FieldStrength(usize, usize),
    /// B₀ = ∂·A₀
    Divergence,
    /// Annihilation part of B₀.
    DivergenceMinus,
}

impl FromStr for FieldKind {
    type Err = Error;

    /// Accepts `A0^m`, `F0^mn`, `B0` and `B0-`.
    fn from_str(s: &str) -> Result<Self> {
        let idx = |c: char| c.to_digit(10).filter(|d| *d < 4).map(|d| d as usize);
        let t = s.trim();
        let parsed = if t == "B0" {
            Some(FieldKind::Divergence)
        } else if t == "B0-" {
            Some(FieldKind::DivergenceMinus)
        } else if let Some(r) = t.strip_prefix("A0^") {
            let mut c = r.chars();
            match (c.next().and_then(idx), c.next()) {
                (Some(m), None) => Some(FieldKind::Potential(m)),
                _ => None,
            }
        } else if let Some(r) = t.strip_prefix("F0^") {
            let mut c = r.chars();
            match (c.next().and_then(idx), c.next().and_then(idx), c.next()) {
                (Some(m), Some(n), None) => Some(FieldKind::FieldStrength(m, n)),
                _ => None,
            }
        } else {
            None
        };
        parsed.ok_or_else(|| Error::Domain(format!("unknown field kind '{s}'")))
    }
}

/// Smeared free field Σ_j [h_j X_j† + h̄_j X_j] in normal order, where the
/// creation amplitude of a plane wave e^{ik·x} carries i k^μ per derivative.
pub fn smear_free_field(modes: &Arc<ModeSet>, kind: FieldKind, packet: &[Complex64]) -> Result<ModeOperator> {
    if packet.len() != modes.len() {
        return Err(Error::ModeSetMismatch);
    }
    let i = Complex64::new(0.0, 1.0);
    let cre = |l: Label| Word { creators: vec![l], annihilators: vec![] };
    let ann = |l: Label| Word { creators: vec![], annihilators: vec![l] };
    let mut terms = Vec::new();
    for (j, h) in packet.iter().enumerate() {
        if *h == Complex64::new(0.0, 0.0) {
            continue;
        }
        let k = FourVector::on_shell(modes.k(j));
        let kl = k.lower();
        match kind {
            FieldKind::Potential(mu) => {
                check_index(mu)?;
                terms.push((cre(Label::new(j, mu)), *h));
                terms.push((ann(Label::new(j, mu)), h.conj()));
            }
            FieldKind::FieldStrength(mu, nu) => {
                check_index(mu)?;
                check_index(nu)?;
                if mu == nu {
                    continue;
                }
                let (km, kn) = (k.component(mu), k.component(nu));
                terms.push((cre(Label::new(j, nu)), i * h * km));
                terms.push((cre(Label::new(j, mu)), -i * h * kn));
                terms.push((ann(Label::new(j, nu)), -i * h.conj() * km));
                terms.push((ann(Label::new(j, mu)), i * h.conj() * kn));
            }
            FieldKind::Divergence | FieldKind::DivergenceMinus => {
                for (mu, kmu) in kl.iter().enumerate() {
                    if kind == FieldKind::Divergence {
                        terms.push((cre(Label::new(j, mu)), i * h * kmu));
                    }
                    terms.push((ann(Label::new(j, mu)), -i * h.conj() * kmu));
                }
            }
        }
    }
    Ok(ModeOperator::from_terms(modes, terms))
}

fn check_index(mu: usize) -> Result<()> {
    if mu < 4 {
        Ok(())
    } else {
        domain(format!("Lorentz index {mu} out of range"))
    }
}

/// Packet of a field evaluated at (x, t) and smeared with a normalised
/// Gaussian of width `width`: h_j = (2π)^{-3/2} e^{−width²k²/2} e^{i(|k|t − k·x)}.
pub fn point_packet(modes: &ModeSet, x: &Vec3, t: f64, width: f64) -> Vec<Complex64> {
    (0..modes.len())
        .map(|j| {
            let k = modes.k(j);
            let km = k.norm();
            let amp = INV_TWO_PI_3_2 * (-0.5 * width * width * km * km).exp();
            Complex64::from_polar(amp, km * t - k.dot(x))
        })
        .collect()
}

/// Largest coefficient of (∂^μ F₀_{μν})⁽⁻⁾ applied to `x`, mode by mode.
///
/// For a plane wave this operator is proportional to k_ν (k·a_j) once the
/// on-shell identity k·k = 0 is used.
pub fn gb_condition_check(x: &FockVector) -> Result<f64> {
    let modes = x.modes().clone();
    let mut used: Vec<u32> = x.terms().keys().flatten().map(|l| l.mode).collect();
    used.sort_unstable();
    used.dedup();
    let mut worst = 0.0f64;
    for j in used {
        let j = j as usize;
        let k = FourVector::on_shell(modes.k(j));
        let kl = k.lower();
        let op = ModeOperator::from_terms(
            &modes,
            (0..4).map(|mu| {
                (Word { creators: vec![], annihilators: vec![Label::new(j, mu)] }, Complex64::new(kl[mu], 0.0))
            }),
        );
        let y = op.apply(x)?;
        let knu = kl.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        worst = worst.max(knu * y.max_coefficient());
    }
    Ok(worst)
}

use crate::asymptotics::{in_field, out_field};
use crate::error::{domain, Result};
use crate::fields::{ParticleSpec, ShiftField};
use crate::kernel::{FormFactor, Vec3};

/// Name of a state family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateLabel {
    /// Fock vacuum of the free field with the particle state alone.
    Vacuum,
    /// ω_ch ⊗ ω_F: the interacting field over the Fock vacuum.
    Gupta,
    /// Gupta state composed with the Coulomb compensating shift.
    Coulomb,
    /// Gupta state composed with the Liénard-Wiechert shift of velocity c.
    LienardWiechert(Vec3),
    Custom,
}

/// Families accepted by [`make_state`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateKind {
    Gupta,
    Coulomb,
    LienardWiechert,
}

/// Fock vacuum plus coherent classical shifts, per unit charge: `shift`
/// for the interacting field and `out_shift`/`in_shift` for the asymptotic
/// fields. Expectations multiply them by the charge.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiFreeState {
    pub label: StateLabel,
    pub particle: ParticleSpec,
    pub form_factor: FormFactor,
    pub shift: ShiftField,
    pub out_shift: ShiftField,
    pub in_shift: ShiftField,
}

/// Builds a Gupta, Coulomb or Liénard-Wiechert state. Only the latter
/// takes a velocity, which must satisfy |c| < 1.
pub fn make_state(kind: StateKind, particle: ParticleSpec, c: Option<Vec3>, ff: FormFactor) -> Result<QuasiFreeState> {
    particle.validate()?;
    let y = particle.y;
    let base = ShiftField::interior(y, particle.v_in, particle.v_out);
    let (label, comp) = match (kind, c) {
        (StateKind::Gupta, None) => (StateLabel::Gupta, ShiftField::Zero),
        (StateKind::Coulomb, None) => (StateLabel::Coulomb, ShiftField::compensating(Vec3::zeros(), y)),
        (StateKind::LienardWiechert, Some(c)) => {
            if !(c.norm() < 1.0) {
                return domain(format!("Liénard-Wiechert velocity must satisfy |c| < 1, got {}", c.norm()));
            }
            (StateLabel::LienardWiechert(c), ShiftField::compensating(c, y))
        }
        (StateKind::LienardWiechert, None) => return domain("a Liénard-Wiechert state needs a velocity"),
        (_, Some(_)) => return domain("only Liénard-Wiechert states take a velocity"),
    };
    let with = |f: ShiftField| ShiftField::sum(vec![(1.0, f), (1.0, comp.clone())]);
    Ok(QuasiFreeState {
        label,
        shift: with(base),
        out_shift: with(out_field(&particle)),
        in_shift: with(in_field(&particle)),
        particle,
        form_factor: ff,
    })
}

impl QuasiFreeState {
    pub fn vacuum(particle: ParticleSpec, ff: FormFactor) -> Result<Self> {
        particle.validate()?;
        Ok(Self {
            label: StateLabel::Vacuum,
            particle,
            form_factor: ff,
            shift: ShiftField::Zero,
            out_shift: ShiftField::Zero,
            in_shift: ShiftField::Zero,
        })
    }

    pub fn custom(
        particle: ParticleSpec,
        ff: FormFactor,
        shift: ShiftField,
        out_shift: ShiftField,
        in_shift: ShiftField,
    ) -> Result<Self> {
        particle.validate()?;
        Ok(Self { label: StateLabel::Custom, particle, form_factor: ff, shift, out_shift, in_shift })
    }

    /// Composition with the automorphism A_out → A_out + e·extra. The
    /// interacting and incoming fields differ from A_out by particle
    /// c-numbers, so all three move by the same amount.
    pub fn with_shift_added(&self, extra: ShiftField) -> Self {
        let add = |f: &ShiftField| ShiftField::sum(vec![(1.0, f.clone()), (1.0, extra.clone())]);
        Self {
            shift: add(&self.shift),
            out_shift: add(&self.out_shift),
            in_shift: add(&self.in_shift),
            ..self.clone()
        }
    }

    pub fn label_text(&self) -> String {
        match self.label {
            StateLabel::Vacuum => "VACUUM".into(),
            StateLabel::Gupta => "GUPTA".into(),
            StateLabel::Coulomb => "COULOMB".into(),
            StateLabel::LienardWiechert(c) => format!("LW({},{},{})", c.x, c.y, c.z),
            StateLabel::Custom => "CUSTOM".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ff() -> FormFactor {
        FormFactor::gaussian(0.1).unwrap()
    }

    #[test]
    fn coulomb_is_lienard_wiechert_at_rest() {
        let p = ParticleSpec::at_rest(Vec3::new(0.1, 0.0, 0.0), 1.0);
        let a = make_state(StateKind::Coulomb, p.clone(), None, ff()).unwrap();
        let b = make_state(StateKind::LienardWiechert, p, Some(Vec3::zeros()), ff()).unwrap();
        assert_eq!(a.shift, b.shift);
        assert_eq!(a.out_shift, b.out_shift);
        assert_eq!(a.in_shift, b.in_shift);
    }

    #[test]
    fn coulomb_out_shift_cancels_at_rest() {
        let p = ParticleSpec::at_rest(Vec3::zeros(), 1.0);
        let a = make_state(StateKind::Coulomb, p, None, ff()).unwrap();
        assert_eq!(a.out_shift, ShiftField::Zero);
        assert_eq!(a.in_shift, ShiftField::Zero);
    }

    #[test]
    fn velocity_checks() {
        let p = ParticleSpec::at_rest(Vec3::zeros(), 1.0);
        assert!(make_state(StateKind::LienardWiechert, p.clone(), Some(Vec3::new(1.0, 0.0, 0.0)), ff()).is_err());
        assert!(make_state(StateKind::LienardWiechert, p.clone(), None, ff()).is_err());
        assert!(make_state(StateKind::Gupta, p, Some(Vec3::zeros()), ff()).is_err());
    }
}

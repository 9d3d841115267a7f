//! Klein-Gordon smearing with free packets and the x₀ → ±∞ limits that
//! define the asymptotic fields.

mod limit;
mod packet;
mod smear;

pub use limit::{in_limit, out_limit, smear, LimitReport, LimitSchedule, LimitStatus, SmearMethod};
pub use packet::{make_wave_packet, Profile, WavePacket};
pub use smear::{kg_smear, kg_smear_momentum, MomentumSmearSpec};

use crate::fields::{ParticleSpec, ShiftField};

/// Reference value of the out-field smear: the free field −C_{v′}, whose
/// pairing is independent of x₀.
pub fn out_field(p: &ParticleSpec) -> ShiftField {
    ShiftField::sum(vec![(-1.0, ShiftField::compensating(p.v_out, p.y))])
}

/// In-field counterpart with the incoming velocity.
pub fn in_field(p: &ParticleSpec) -> ShiftField {
    ShiftField::sum(vec![(-1.0, ShiftField::compensating(p.v_in, p.y))])
}

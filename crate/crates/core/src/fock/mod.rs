//! Finite-mode Fock algebra with the indefinite contraction
//! [a^μ_j, a^{ν†}_l] = −g^{μν} δ_{jl} c_j.

mod algebra;
mod fields;
mod gram;
mod modes;

pub use algebra::{commutator, FockConfig, FockVector, Label, ModeOperator, Word};
pub use fields::{gb_condition_check, point_packet, smear_free_field, FieldKind};
pub use gram::{gram_matrix, observable_gram, word_vector, GramReport};
pub use modes::{Measure, ModeSet};

//! Quasi-free charged states: the Fock vacuum plus a coherent classical
//! shift of the potential.
//!
//! Since the interacting field is the free field plus a c-number that only
//! depends on the particle, every expectation reduces to Wick pairings of
//! free contractions combined with classical shift values. Dirac-type
//! factors act as shifts of the fields by a cut-off compensating field.

mod dirac;
mod expect;
mod gauss;
mod observable;
mod probe;
mod state;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

pub use dirac::{dirac_shift_expect, ir_limit_expect, DiracShiftSpec, IrLimitReport};
pub use expect::{classical_value, expect, free_contractions, ExpectConfig};
pub use gauss::{b_minus_check, gauss_deviation, subsidiary_residual, BMinusReport};
pub use observable::{bump_nodes, Factor, FactorKind, ObservableSpec, Smearing};
pub use probe::{charge_class_probe, factor_in_region, ProbeEntry, ProbeOptions, ProbeRegion, ProbeReport, Verdict};
pub use state::{make_state, QuasiFreeState, StateKind, StateLabel};

use crate::error::Result;
use crate::fock::GramReport;

/// G_ab = ω(w_a* w_b) over a family of words. Positive semi-definite for
/// the Gupta state when the words are built from observables.
pub fn state_gram(state: &QuasiFreeState, words: &[ObservableSpec], cfg: &ExpectConfig) -> Result<GramReport> {
    let n = words.len();
    let entries = (0..n * n)
        .into_par_iter()
        .map(|ij| Ok(expect(state, &words[ij / n].adjoint().then(&words[ij % n]), cfg)?.value))
        .collect::<Result<Vec<Complex64>>>()?;
    let matrix = DMatrix::from_fn(n, n, |i, j| entries[i * n + j]);
    let herm = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let min_eigenvalue = if n == 0 {
        f64::INFINITY
    } else {
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    };
    Ok(GramReport { matrix, min_eigenvalue })
}

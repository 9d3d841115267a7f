use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::algebra::{FockVector, ModeOperator};
use super::fields::{smear_free_field, FieldKind};
use super::modes::ModeSet;
use crate::error::{Error, Result};

/// Gram matrix of a vector family and its smallest eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    pub matrix: DMatrix<Complex64>,
    /// +∞ for an empty family.
    pub min_eigenvalue: f64,
}

/// G_il = ⟨x_i, x_l⟩ with its spectrum bottom.
pub fn gram_matrix(vectors: &[FockVector]) -> Result<GramReport> {
    let n = vectors.len();
    if n == 0 {
        return Ok(GramReport { matrix: DMatrix::zeros(0, 0), min_eigenvalue: f64::INFINITY });
    }
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|l| vectors[i].inner(&vectors[l])).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let matrix = DMatrix::from_fn(n, n, |i, l| rows[i][l]);
    let herm = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigenvalues();
    let min_eigenvalue = eig.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GramReport { matrix, min_eigenvalue })
}

/// X_1 ⋯ X_n Ψ_F, applying the rightmost factor first.
pub fn word_vector(modes: &Arc<ModeSet>, word: &[ModeOperator]) -> Result<FockVector> {
    let mut v = FockVector::vacuum(modes);
    for op in word.iter().rev() {
        v = op.apply(&v)?;
    }
    Ok(v)
}

/// Gram matrix of the one-field vectors X_i Ψ_F, X_i = kind_i(packet_i).
pub fn observable_gram(modes: &Arc<ModeSet>, packets: &[Vec<Complex64>], kinds: &[FieldKind]) -> Result<GramReport> {
    if packets.len() != kinds.len() {
        return Err(Error::Domain("one field kind per packet is required".into()));
    }
    let vectors = packets
        .par_iter()
        .zip(kinds.par_iter())
        .map(|(p, k)| word_vector(modes, &[smear_free_field(modes, *k, p)?]))
        .collect::<Result<Vec<_>>>()?;
    gram_matrix(&vectors)
}

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::observable::{Factor, FactorKind, ObservableSpec, Role, Smearing};
use super::state::QuasiFreeState;
use crate::error::{domain, Error, Result};
use crate::fields::{check_stencil, field_strength_from_jacobian, jacobian, DiffSpec, ShiftField};
use crate::fock::{smear_free_field, FockConfig, ModeSet};
use crate::kernel::quadrature::{gauss_legendre, panels_of_width, Integral};
use crate::kernel::{FormFactor, Vec3};

/// Modes for the free contractions and the differentiation step for
/// field-strength shifts.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectConfig {
    pub modes: Arc<ModeSet>,
    pub fock: FockConfig,
    /// `None` picks h = σ_eff/2 with four levels.
    pub diff: Option<DiffSpec>,
    /// Gauss-Legendre nodes in cos θ for the inverse-square weight; twice
    /// as many are used in φ.
    pub angular_nodes: usize,
}

impl ExpectConfig {
    pub fn new(modes: Arc<ModeSet>) -> Self {
        Self { modes, fock: FockConfig::default(), diff: None, angular_nodes: 12 }
    }

    /// Spherical rule reaching the form-factor cut-off.
    pub fn for_form_factor(ff: &FormFactor) -> Result<Self> {
        Ok(Self::new(ModeSet::spherical(ff.k_cut(), 24, 12, 12)?))
    }

    fn diff_for(&self, ff: &FormFactor) -> DiffSpec {
        self.diff.unwrap_or_else(|| DiffSpec::for_form_factor(ff))
    }
}

impl QuasiFreeState {
    pub(crate) fn field_for(&self, role: Role) -> &ShiftField {
        match role {
            Role::Interacting => &self.shift,
            Role::Out => &self.out_shift,
            Role::In => &self.in_shift,
        }
    }
}

/// Value at one point of the quantity a factor kind measures.
fn pointwise(field: &ShiftField, ff: &FormFactor, kind: FactorKind, x: &Vec3, t: f64, diff: &DiffSpec) -> Result<Integral> {
    use FactorKind::*;
    if *field == ShiftField::Zero {
        return Ok(Integral::zero());
    }
    match kind {
        Potential(m) | OutPotential(m) | InPotential(m) => {
            let v = field.eval(ff, x, t)?;
            Ok(Integral { value: v.value.0[m], error: v.error })
        }
        Divergence | OutDivergence | InDivergence => Ok(Integral { value: field.divergence(ff, x, t)?, error: 0.0 }),
        FieldStrength(m, n) => {
            let (j, err) = jacobian(field, ff, x, t, diff)?;
            Ok(Integral { value: field_strength_from_jacobian(&j)[m][n], error: 2.0 * err })
        }
    }
}

/// Classical shift of one factor per unit charge for a given field.
pub(crate) fn shift_value(field: &ShiftField, ff: &FormFactor, f: &Factor, cfg: &ExpectConfig) -> Result<Integral> {
    match f.smearing {
        Smearing::Gaussian { width } => {
            let eff = if width > 0.0 { ff.convolved(width) } else { *ff };
            if width > 0.0 && field.has_cutoff() {
                // Exact when the Gaussian, up to a 1e-15 tail, sees the
                // cut-off profile as constant.
                let reach = FormFactor::gaussian(width)?.r_eff(1e-15) + 2.0 * cfg.diff_for(&eff).reach();
                let Some(resolved) = field.without_cutoffs_near(&f.x, reach) else {
                    return domain("Gaussian factor overlaps the transition layer of a cut-off field; use a bump");
                };
                return pointwise(&resolved, &eff, f.kind, &f.x, f.t, &cfg.diff_for(&eff));
            }
            pointwise(field, &eff, f.kind, &f.x, f.t, &cfg.diff_for(&eff))
        }
        Smearing::Bump { radius } => {
            let diff = cfg.diff_for(ff);
            let mut acc = Integral::zero();
            for (x, w) in super::observable::bump_nodes(&f.x, radius) {
                let v = pointwise(field, ff, f.kind, &x, f.t, &diff)?;
                acc = acc + Integral { value: v.value * w, error: v.error * w };
            }
            Ok(acc)
        }
        Smearing::InverseSquare { inner } => inverse_square(field, ff, f, inner, cfg),
    }
}

/// ∫_{|x − x_c| > inner} d³x q(x)/|x − x_c|² over the support of the field.
fn inverse_square(field: &ShiftField, ff: &FormFactor, f: &Factor, inner: f64, cfg: &ExpectConfig) -> Result<Integral> {
    if *field == ShiftField::Zero {
        return Ok(Integral::zero());
    }
    let Some((c, r)) = field.support() else {
        return domain("the inverse-square weight needs a shift of bounded support");
    };
    let outer = (f.x - c).norm() + r;
    if outer <= inner {
        return Ok(Integral::zero());
    }
    let diff = cfg.diff_for(ff);
    let radial = field.is_radial_about(&f.x) && matches!(f.kind, FactorKind::OutPotential(0) | FactorKind::Potential(0) | FactorKind::InPotential(0));
    let directions: Vec<(Vec3, f64)> = if radial {
        vec![(Vec3::z(), 4.0 * PI)]
    } else {
        let n = cfg.angular_nodes.max(2);
        let n_phi = 2 * n;
        let dphi = 2.0 * PI / n_phi as f64;
        let mut d = Vec::with_capacity(n * n_phi);
        for (u, wu) in gauss_legendre(n).mapped(-1.0, 1.0) {
            let s = (1.0 - u * u).sqrt();
            for p in 0..n_phi {
                let phi = (p as f64 + 0.5) * dphi;
                d.push((Vec3::new(s * phi.cos(), s * phi.sin(), u), wu * dphi));
            }
        }
        d
    };
    let mut failure = None;
    let mut q = |rho: f64| -> f64 {
        let mut s = 0.0;
        for (n, w) in &directions {
            match pointwise(field, ff, f.kind, &(f.x + n * rho), f.t, &diff) {
                Ok(v) => s += w * v.value,
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        s
    };
    let out = panels_of_width(&mut q, inner, outer, 0.5 * ff.sigma());
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// e·(shift seen by the factor), averaged over the particle packet.
pub fn classical_value(state: &QuasiFreeState, f: &Factor, cfg: &ExpectConfig) -> Result<Integral> {
    f.validate()?;
    let p = &state.particle;
    let field = state.field_for(f.kind.role());
    let mut acc = Integral::zero();
    for (y, w) in p.positions() {
        let v = shift_value(&field.translated(&(y - p.y)), &state.form_factor, f, cfg)?;
        acc = acc + Integral { value: v.value * w, error: v.error * w };
    }
    Ok(Integral { value: acc.value * p.charge, error: acc.error * p.charge.abs() })
}

/// Free two-point contractions W_ab = ω_F(X_a X_b), a < b.
pub fn free_contractions(obs: &ObservableSpec, cfg: &ExpectConfig) -> Result<Vec<Vec<Complex64>>> {
    let n = obs.len();
    let ops = obs
        .factors
        .par_iter()
        .map(|f| smear_free_field(&cfg.modes, f.kind.free_kind(), &f.packet(&cfg.modes)?))
        .collect::<Result<Vec<_>>>()?;
    let mut w = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for a in 0..n {
        for b in a + 1..n {
            w[a][b] = ops[a].two_point(&ops[b])?;
        }
    }
    Ok(w)
}

/// Sum over pairings of the ordered index list.
fn pairings(idx: &[usize], w: &[Vec<Complex64>]) -> Complex64 {
    match idx.len() {
        0 => Complex64::new(1.0, 0.0),
        n if n % 2 == 1 => Complex64::new(0.0, 0.0),
        _ => {
            let a = idx[0];
            let mut s = Complex64::new(0.0, 0.0);
            for k in 1..idx.len() {
                let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|(i, _)| i + 1 != k).map(|(_, v)| *v).collect();
                s += w[a][idx[k]] * pairings(&rest, w);
            }
            s
        }
    }
}

/// Σ over subsets S of Π_{i∈S} s_i times the pairing sum of the rest,
/// with a first-order propagated error.
fn wick_sum(shifts: &[Integral], w: &[Vec<Complex64>]) -> Integral<Complex64> {
    let n = shifts.len();
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for mask in 0u32..(1 << n) {
        let (inside, outside): (Vec<usize>, Vec<usize>) = (0..n).partition(|i| mask & (1 << i) != 0);
        if outside.len() % 2 == 1 {
            continue;
        }
        let pair = pairings(&outside, w);
        let prod: f64 = inside.iter().map(|i| shifts[*i].value).product();
        value += pair * prod;
        let mut e = 0.0;
        for i in &inside {
            let others: f64 = inside.iter().filter(|j| *j != i).map(|j| shifts[*j].value.abs()).product();
            e += shifts[*i].error * others;
        }
        error += e * pair.norm();
    }
    Integral { value, error }
}

/// ω(X_1 ⋯ X_n) for the quasi-free state: free Wick pairings combined with
/// the classical shifts, averaged over the particle packet.
pub fn expect(state: &QuasiFreeState, obs: &ObservableSpec, cfg: &ExpectConfig) -> Result<Integral<Complex64>> {
    obs.validate()?;
    let n = obs.len();
    if n > cfg.fock.degree_cap {
        return Err(Error::DegreeOverflow { degree: n, cap: cfg.fock.degree_cap });
    }
    if n == 0 {
        return Ok(Integral { value: Complex64::new(1.0, 0.0), error: 0.0 });
    }
    let ff = &state.form_factor;
    for f in &obs.factors {
        if let (FactorKind::FieldStrength(..), Smearing::Gaussian { width }) = (f.kind, f.smearing) {
            let eff = if width > 0.0 { ff.convolved(width) } else { *ff };
            if *state.field_for(f.kind.role()) != ShiftField::Zero {
                check_stencil(&eff, &cfg.diff_for(&eff), &state.particle, &f.x, f.t)?;
            }
        }
    }
    let w = if n >= 2 { free_contractions(obs, cfg)? } else { vec![vec![]] };
    let p = &state.particle;
    let per_node = p
        .positions()
        .par_iter()
        .map(|(y, wy)| {
            let d = y - p.y;
            let shifts = obs
                .factors
                .iter()
                .map(|f| {
                    let v = shift_value(&state.field_for(f.kind.role()).translated(&d), ff, f, cfg)?;
                    Ok(Integral { value: v.value * p.charge, error: v.error * p.charge.abs() })
                })
                .collect::<Result<Vec<_>>>()?;
            let s = wick_sum(&shifts, &w);
            Ok(Integral { value: s.value * *wy, error: s.error * wy })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_node.into_iter().fold(Integral::zero(), |a, b| a + b))
}

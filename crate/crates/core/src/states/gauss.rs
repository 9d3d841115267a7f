use std::sync::Arc;

use num_complex::Complex64;

use super::observable::{FactorKind, ObservableSpec, Smearing};
use super::state::QuasiFreeState;
use crate::error::{domain, Result};
use crate::fields::{check_stencil, div_f_minus, first_derivative, second_derivative, DiffSpec, ShiftField};
use crate::fock::{point_packet, smear_free_field, word_vector, FieldKind, Measure, ModeSet};
use crate::kernel::form_factor::INV_TWO_PI_3_2;
use crate::kernel::quadrature::{Integral, V4};
use crate::kernel::{Vec3, METRIC};

fn sampler(field: &ShiftField, state: &QuasiFreeState) -> impl Fn([f64; 4]) -> Result<V4> {
    let ff = state.form_factor;
    let field = field.clone();
    move |q: [f64; 4]| Ok(field.eval(&ff, &Vec3::new(q[1], q[2], q[3]), q[0])?.value)
}

/// ω(∂_μF^{μν}(x, t)) − ω_ch(j^ν(x, t)): the interacting Maxwell operator
/// applied to the shift by second differences, minus the particle current.
pub fn gauss_deviation(state: &QuasiFreeState, nu: usize, x: &Vec3, t: f64, diff: &DiffSpec) -> Result<Integral> {
    if nu >= 4 {
        return domain("Lorentz index out of range");
    }
    let ff = &state.form_factor;
    let p = &state.particle;
    check_stencil(ff, diff, p, x, t)?;
    let at = [t, x.x, x.y, x.z];
    let vb = p.four_velocity(t);
    let mut acc = Integral::zero();
    for (y, w) in p.positions() {
        let field = state.shift.translated(&(y - p.y));
        let f = sampler(&field, state);
        let mut value = 0.0;
        let mut error = 0.0;
        if field != ShiftField::Zero {
            for mu in 0..4 {
                let d = second_derivative(diff, at, mu, mu, &f)?;
                value += METRIC[mu] * d.value.0[nu];
                error += d.error;
                let m = second_derivative(diff, at, nu, mu, &f)?;
                value -= METRIC[nu] * m.value.0[mu];
                error += m.error;
            }
        }
        let current = vb.component(nu) * ff.rho((x - y - p.branch_velocity(t) * t).norm());
        acc = acc + Integral { value: w * (value - current), error: w * error };
    }
    Ok(Integral { value: acc.value * p.charge, error: acc.error * p.charge.abs() })
}

/// ω(∂·A(x, t)) = e·∂·S by central differences of the shift.
pub fn subsidiary_residual(state: &QuasiFreeState, x: &Vec3, t: f64, diff: &DiffSpec) -> Result<Integral> {
    let ff = &state.form_factor;
    let p = &state.particle;
    check_stencil(ff, diff, p, x, t)?;
    let at = [t, x.x, x.y, x.z];
    let mut acc = Integral::zero();
    for (y, w) in p.positions() {
        let field = state.shift.translated(&(y - p.y));
        if field == ShiftField::Zero {
            continue;
        }
        let f = sampler(&field, state);
        for mu in 0..4 {
            let d = first_derivative(diff, at, mu, &f)?;
            acc = acc + Integral { value: w * d.value.0[mu], error: w * d.error };
        }
    }
    Ok(Integral { value: acc.value * p.charge, error: acc.error * p.charge.abs() })
}

/// Classical eigenvalue of B⁽⁻⁾ on the positive subspace, two ways, and
/// the free annihilation residual on the probe vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct BMinusReport {
    /// e·κ·(∂·F)⁽⁻⁾ as a sum over the configured modes.
    pub mode_sum: Complex64,
    /// The same from the radial momentum integral.
    pub radial: Integral<Complex64>,
    /// max |⟨φ_a, B₀⁽⁻⁾ φ_b⟩| over the probe vectors.
    pub free_residual: f64,
    /// Smallest Gram eigenvalue of the probe vectors.
    pub gram_min: f64,
}

/// B⁽⁻⁾ smeared with a Gaussian of width `width` at (x, t). The shift
/// contributes e·κ·(∂·F)⁽⁻⁾ where ∂·S = κ·∂·F, summed over `eigen_modes`;
/// the free part, built on `probe_modes`, must annihilate every vector
/// obtained from field strengths on the vacuum.
pub fn b_minus_check(
    state: &QuasiFreeState,
    x: &Vec3,
    t: f64,
    width: f64,
    probes: &[ObservableSpec],
    eigen_modes: &Arc<ModeSet>,
    probe_modes: &Arc<ModeSet>,
) -> Result<BMinusReport> {
    let Some(kappa) = state.shift.divergence_weight() else {
        return domain("the divergence of a cut-off shift is not a multiple of ∂·F");
    };
    if eigen_modes.measure() != Measure::Continuum {
        return domain("the mode-sum eigenvalue needs continuum-normalised modes");
    }
    let p = &state.particle;
    let eff = state.form_factor.convolved(width);
    let i = Complex64::new(0.0, 1.0);
    let mut mode_sum = Complex64::new(0.0, 0.0);
    let mut radial = Integral::<Complex64>::zero();
    for (y, wy) in p.positions() {
        let d = x - y;
        for (j, k) in eigen_modes.nodes().iter().enumerate() {
            let km = k.norm();
            let phase = Complex64::from_polar(1.0, k.dot(&d) - km * t);
            mode_sum += i * phase * (wy * eigen_modes.weight(j) * INV_TWO_PI_3_2 * eff.rho_tilde(km) / (2.0 * km));
        }
        let r = div_f_minus(&eff, d.norm(), t);
        radial = radial + Integral { value: r.value * wy, error: r.error * wy };
    }
    let scale = p.charge * kappa;
    let b = smear_free_field(probe_modes, FieldKind::DivergenceMinus, &point_packet(probe_modes, x, t, width))?;
    let mut vectors = Vec::with_capacity(probes.len());
    for w in probes {
        let mut ops = Vec::with_capacity(w.len());
        for f in &w.factors {
            if !matches!(f.kind, FactorKind::FieldStrength(..)) || matches!(f.smearing, Smearing::InverseSquare { .. }) {
                return domain("probe vectors must be built from smeared field strengths");
            }
            ops.push(smear_free_field(probe_modes, f.kind.free_kind(), &f.packet(probe_modes)?)?);
        }
        vectors.push(word_vector(probe_modes, &ops)?);
    }
    let mut free_residual = 0.0f64;
    for phi in &vectors {
        for psi in &vectors {
            free_residual = free_residual.max(phi.inner(&b.apply(psi)?)?.norm());
        }
    }
    let gram_min = crate::fock::gram_matrix(&vectors)?.min_eigenvalue;
    Ok(BMinusReport {
        mode_sum: mode_sum * scale,
        radial: Integral { value: radial.value * scale, error: radial.error * scale.abs() },
        free_residual,
        gram_min,
    })
}

use num_complex::Complex64;

use super::expect::{expect, ExpectConfig};
use super::observable::ObservableSpec;
use super::state::QuasiFreeState;
use crate::error::{domain, Result};
use crate::fields::ShiftField;
use crate::kernel::quadrature::Integral;
use crate::kernel::Vec3;

/// Regularised Dirac factor: the compensating field `base` cut off by
/// χ(|x − center|/R), with χ ≡ 1 on [0, ½] and zero beyond 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracShiftSpec {
    pub radius: f64,
    pub base: ShiftField,
    pub center: Vec3,
}

impl DiracShiftSpec {
    pub fn new(radius: f64, base: ShiftField, center: Vec3) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return domain("the cut-off radius must be positive");
        }
        if base.has_cutoff() {
            return domain("the base field is already cut off");
        }
        Ok(Self { radius, base, center })
    }

    /// C_R = C·χ_R.
    pub fn field(&self) -> Result<ShiftField> {
        self.base.clone().cutoff(self.radius, self.center)
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(radius, self.base.clone(), self.center)
    }
}

/// Expectation under the automorphism A_out → A_out + e·C_R, which moves
/// every field by the same c-number.
pub fn dirac_shift_expect(
    state: &QuasiFreeState,
    spec: &DiracShiftSpec,
    obs: &ObservableSpec,
    cfg: &ExpectConfig,
) -> Result<Integral<Complex64>> {
    expect(&state.with_shift_added(spec.field()?), obs, cfg)
}

/// Values along a schedule of increasing cut-off radii.
#[derive(Clone, Debug, PartialEq)]
pub struct IrLimitReport {
    pub values: Vec<(f64, Integral<Complex64>)>,
    /// Value from the first stabilised radius on, if any.
    pub value: Option<Complex64>,
    /// Smallest scheduled radius after which every later value agrees
    /// with it within the tolerance; never the last radius alone.
    pub stabilization_radius: Option<f64>,
    pub tolerance: f64,
}

impl IrLimitReport {
    pub fn stabilized(&self) -> bool {
        self.stabilization_radius.is_some()
    }
}

/// Runs [`dirac_shift_expect`] over `radii` (strictly increasing) and looks
/// for exact stabilisation.
pub fn ir_limit_expect(
    state: &QuasiFreeState,
    spec: &DiracShiftSpec,
    radii: &[f64],
    obs: &ObservableSpec,
    cfg: &ExpectConfig,
    tolerance: f64,
) -> Result<IrLimitReport> {
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return domain("the radius schedule needs at least two strictly increasing entries");
    }
    if !(tolerance > 0.0) {
        return domain("tolerance must be positive");
    }
    let values = radii
        .iter()
        .map(|r| Ok((*r, dirac_shift_expect(state, &spec.with_radius(*r)?, obs, cfg)?)))
        .collect::<Result<Vec<_>>>()?;
    let n = values.len();
    let first = (0..n - 1).find(|&i| values[i + 1..].iter().all(|(_, v)| (v.value - values[i].1.value).norm() <= tolerance));
    Ok(IrLimitReport {
        value: first.map(|i| values[i].1.value),
        stabilization_radius: first.map(|i| values[i].0),
        values,
        tolerance,
    })
}

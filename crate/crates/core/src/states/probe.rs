use num_complex::Complex64;
use rayon::prelude::*;

use super::expect::{expect, ExpectConfig};
use super::observable::{Factor, ObservableSpec, Role};
use super::state::QuasiFreeState;
use crate::error::{domain, Result};
use crate::kernel::quadrature::Integral;
use crate::kernel::{Region, RegionSpec};

/// Where the probe packets live relative to the charge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProbeRegion {
    /// Inside the forward tangent cone O₊.
    Future,
    /// Inside the backward tangent cone O₋.
    Past,
    /// Causally disjoint from the charge.
    Spacelike,
}

impl ProbeRegion {
    pub fn name(&self) -> &'static str {
        match self {
            ProbeRegion::Future => "O+",
            ProbeRegion::Past => "O-",
            ProbeRegion::Spacelike => "spacelike",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Fock,
    NonFock,
}

/// One compared quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeEntry {
    pub label: String,
    pub a: Integral<Complex64>,
    pub b: Integral<Complex64>,
}

impl ProbeEntry {
    pub fn difference(&self) -> f64 {
        (self.a.value - self.b.value).norm()
    }

    pub fn error(&self) -> f64 {
        self.a.error + self.b.error
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub region: ProbeRegion,
    pub one_point: Vec<ProbeEntry>,
    pub truncated: Vec<ProbeEntry>,
    pub one_point_max_diff: f64,
    pub truncated_max_diff: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Tolerance for the verdict and the safety band δ of the region test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeOptions {
    pub tolerance: f64,
    pub delta: f64,
}

/// Checks that the factor's support, widened by the charge radius, lies in
/// the region for every particle position.
pub fn factor_in_region(state: &QuasiFreeState, f: &Factor, region: ProbeRegion, delta: f64) -> bool {
    let reach = state.form_factor.r_eff(1e-10) + f.radius();
    if !reach.is_finite() {
        return false;
    }
    state.particle.positions().iter().all(|(y, _)| {
        let spec = RegionSpec { center: *y, r_eff: reach, delta };
        match (spec.classify(&f.x, f.t), region) {
            (Region::Interior, ProbeRegion::Future) => f.t > 0.0,
            (Region::Interior, ProbeRegion::Past) => f.t < 0.0,
            (Region::Spacelike, ProbeRegion::Spacelike) => true,
            _ => false,
        }
    })
}

/// Compares one-point values and truncated two-point functions of the
/// asymptotic-field factors (outgoing on O₊, incoming on O₋, either on
/// the spacelike region) in states `a` and `b`. FOCK when both agree within
/// tolerance: for quasi-free states that is the coherent-shift criterion
/// for unitary equivalence on the region.
pub fn charge_class_probe(
    a: &QuasiFreeState,
    b: &QuasiFreeState,
    region: ProbeRegion,
    factors: &[Factor],
    cfg: &ExpectConfig,
    opts: ProbeOptions,
) -> Result<ProbeReport> {
    if !(opts.tolerance > 0.0) || !(opts.delta >= 0.0) {
        return domain("probe tolerance must be positive and the band non-negative");
    }
    for f in factors {
        f.validate()?;
        let role = f.kind.role();
        let allowed = match region {
            ProbeRegion::Future => role == Role::Out,
            ProbeRegion::Past => role == Role::In,
            ProbeRegion::Spacelike => role != Role::Interacting,
        };
        if !allowed {
            return domain(format!("factor {} is not an asymptotic field usable on region {}", f.label(), region.name()));
        }
        for s in [a, b] {
            if !factor_in_region(s, f, region, opts.delta) {
                return domain(format!("factor {} is not localised in region {}", f.label(), region.name()));
            }
        }
    }
    let one = |s: &QuasiFreeState, f: &Factor| expect(s, &ObservableSpec::single(*f), cfg);
    let one_point = factors
        .par_iter()
        .map(|f| Ok(ProbeEntry { label: f.label(), a: one(a, f)?, b: one(b, f)? }))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..factors.len()).flat_map(|i| (0..factors.len()).map(move |j| (i, j))).collect();
    let truncated = pairs
        .par_iter()
        .map(|&(i, j)| {
            let obs = ObservableSpec::new(vec![factors[i], factors[j]]);
            let t = |s: &QuasiFreeState, o: &[ProbeEntry], pick: fn(&ProbeEntry) -> Integral<Complex64>| -> Result<Integral<Complex64>> {
                let full = expect(s, &obs, cfg)?;
                let (x, y) = (pick(&o[i]), pick(&o[j]));
                Ok(Integral {
                    value: full.value - x.value * y.value,
                    error: full.error + x.error * y.value.norm() + y.error * x.value.norm(),
                })
            };
            Ok(ProbeEntry {
                label: format!("{} {}", factors[i].label(), factors[j].label()),
                a: t(a, &one_point, |e| e.a)?,
                b: t(b, &one_point, |e| e.b)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max = |v: &[ProbeEntry]| v.iter().map(ProbeEntry::difference).fold(0.0, f64::max);
    let one_point_max_diff = max(&one_point);
    let truncated_max_diff = max(&truncated);
    let verdict = if one_point_max_diff <= opts.tolerance && truncated_max_diff <= opts.tolerance {
        Verdict::Fock
    } else {
        Verdict::NonFock
    };
    Ok(ProbeReport {
        region,
        one_point,
        truncated,
        one_point_max_diff,
        truncated_max_diff,
        tolerance: opts.tolerance,
        verdict,
    })
}

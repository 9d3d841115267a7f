//! Browser bindings for three interactive views of the model. Each call
//! returns a flat row-major `Float64Array`; the row layout is documented on
//! the function.

use bnlab::fields::{chi_kernel_lhs, chi_kernel_rhs, ParticleSpec, ShiftField};
use bnlab::kernel::{FormFactor, Region, RegionSpec, Vec3};
use bnlab::states::{expect, make_state, ExpectConfig, Factor, FactorKind, ObservableSpec, QuasiFreeState, StateKind};
use wasm_bindgen::prelude::*;

const REGION_DELTA: f64 = 0.05;

fn err(e: bnlab::Error) -> String {
    e.to_string()
}

fn region_code(r: Region) -> f64 {
    match r {
        Region::Interior => 0.0,
        Region::Spacelike => 1.0,
        Region::Shell => 2.0,
    }
}

fn ray(r_max: f64, n: usize) -> Result<impl Iterator<Item = f64>, String> {
    if n < 2 || !(r_max > 0.0) {
        return Err("need at least two points and r_max > 0".into());
    }
    Ok((0..n).map(move |i| r_max * i as f64 / (n - 1) as f64))
}

/// Shift field per unit charge along the +x ray from a charge at the
/// origin. `field` is one of `interior`, `exterior`, `coulomb`, `lw`; the
/// velocity is the outgoing one for interior/exterior and c for `lw`.
///
/// Rows: `[r, region, A⁰, A¹, A², A³]` with region 0 interior, 1
/// spacelike, 2 shell.
#[wasm_bindgen]
pub fn field_profile(field: &str, sigma: f64, vx: f64, vy: f64, vz: f64, t: f64, r_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let ff = FormFactor::gaussian(sigma).map_err(err)?;
    let v = Vec3::new(vx, vy, vz);
    if !(v.norm() < 1.0) {
        return Err("speed must be below 1".into());
    }
    let y = Vec3::zeros();
    let shift = match field {
        "interior" => ShiftField::interior(y, Vec3::zeros(), v),
        "exterior" => ShiftField::exterior(y, Vec3::zeros(), v),
        "coulomb" => ShiftField::compensating(Vec3::zeros(), y),
        "lw" => ShiftField::compensating(v, y),
        other => return Err(format!("unknown field {other:?}")),
    };
    let spec = RegionSpec { center: y, r_eff: ff.r_eff(1e-10), delta: REGION_DELTA };
    let mut out = Vec::with_capacity(6 * n);
    for r in ray(r_max, n)? {
        let x = Vec3::new(r, 0.0, 0.0);
        let a = shift.eval(&ff, &x, t).map_err(err)?.value.0;
        out.extend([r, region_code(spec.classify(&x, t)), a[0], a[1], a[2], a[3]]);
    }
    Ok(out)
}

/// Both sides of the characteristic-function identity on radii in
/// (0, r_max]. Rows: `[r, quadrature, closed form]`.
#[wasm_bindgen]
pub fn chi_identity(t: f64, r_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(3 * n);
    for r in ray(r_max, n + 1)?.skip(1) {
        let x = Vec3::new(0.0, 0.0, r);
        // The closed form jumps at r = |t|; the quadrature is not asked there.
        if (r - t.abs()).abs() < 1e-9 {
            continue;
        }
        out.extend([r, chi_kernel_lhs(&x, t).map_err(err)?.value, chi_kernel_rhs(&x, t).map_err(err)?]);
    }
    Ok(out)
}

/// ω(A_out⁰(x, t)) along the +x ray for a unit charge at rest in the
/// state `gupta`, `coulomb`, `lw` (velocity c) or `vacuum`. Away from the
/// origin a non-zero value at spacelike points marks a state outside the
/// vacuum's charge class.
///
/// Rows: `[r, region, ω(A_out⁰), −Coulomb potential]`.
#[wasm_bindgen]
pub fn charge_class_profile(state: &str, cx: f64, cy: f64, cz: f64, sigma: f64, t: f64, r_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let ff = FormFactor::gaussian(sigma).map_err(err)?;
    let p = ParticleSpec::at_rest(Vec3::zeros(), 1.0);
    let s = match state {
        "gupta" => make_state(StateKind::Gupta, p, None, ff),
        "coulomb" => make_state(StateKind::Coulomb, p, None, ff),
        "lw" => make_state(StateKind::LienardWiechert, p, Some(Vec3::new(cx, cy, cz)), ff),
        "vacuum" => QuasiFreeState::vacuum(p, ff),
        other => return Err(format!("unknown state {other:?}")),
    }
    .map_err(err)?;
    let cfg = ExpectConfig::for_form_factor(&ff).map_err(err)?;
    let spec = RegionSpec { center: Vec3::zeros(), r_eff: ff.r_eff(1e-10), delta: REGION_DELTA };
    let mut out = Vec::with_capacity(4 * n);
    for r in ray(r_max, n)? {
        let x = Vec3::new(r, 0.0, 0.0);
        let obs = ObservableSpec::single(Factor::point(FactorKind::OutPotential(0), x, t));
        let v = expect(&s, &obs, &cfg).map_err(err)?.value.re;
        out.extend([r, region_code(spec.classify(&x, t)), v, -ff.coulomb(r)]);
    }
    Ok(out)
}

//! Plot-ready scans: one CSV row per probe point.

use std::path::{Path, PathBuf};

use anyhow::Context as _;
use bnlab::asymptotics::{out_limit, MomentumSmearSpec, SmearMethod};
use bnlab::fields::{DiffSpec, ShiftField};
use bnlab::kernel::quadrature::Quadrable;
use bnlab::kernel::{FormFactor, QuadratureSpec, Region, RegionSpec, Vec3};
use bnlab::states::*;
use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::SCHEMA_VERSION;
use crate::verify::Context;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    FieldProfile,
    AsymptoticConvergence,
    SubsidiaryVsSigma,
    ChargeClass,
}

impl ScanKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScanKind::FieldProfile => "field-profile",
            ScanKind::AsymptoticConvergence => "asymptotic-convergence",
            ScanKind::SubsidiaryVsSigma => "subsidiary-vs-sigma",
            ScanKind::ChargeClass => "charge-class",
        }
    }
}

fn region_tag(r: Region) -> &'static str {
    match r {
        Region::Interior => "interior",
        Region::Spacelike => "spacelike",
        Region::Shell => "shell",
    }
}

/// Runs one scan and writes `<kind>.csv` into `dir`; returns the path.
pub fn run_scan(ctx: &Context, kind: ScanKind, dir: &Path) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(format!("{}.csv", kind.name()));
    let mut w = csv::Writer::from_path(&path)?;
    match kind {
        ScanKind::FieldProfile => field_profile(ctx)?.iter().try_for_each(|r| w.serialize(r))?,
        ScanKind::AsymptoticConvergence => asymptotic_convergence(ctx)?.iter().try_for_each(|r| w.serialize(r))?,
        ScanKind::SubsidiaryVsSigma => subsidiary_vs_sigma(ctx)?.iter().try_for_each(|r| w.serialize(r))?,
        ScanKind::ChargeClass => charge_class(ctx)?.iter().try_for_each(|r| w.serialize(r))?,
    }
    w.flush()?;
    Ok(path)
}

#[derive(Debug, Serialize)]
pub struct ProfileRow {
    pub schema_version: u32,
    pub field: String,
    pub r: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
    pub region: &'static str,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub error: f64,
}

pub fn profile_field(ctx: &Context) -> ShiftField {
    let p = &ctx.particle;
    match ctx.cfg.probes.field.as_str() {
        "interior" => ShiftField::interior(p.y, p.v_in, p.v_out),
        "coulomb" => ShiftField::compensating(Vec3::zeros(), p.y),
        "lw" => ShiftField::compensating(ctx.cfg.states.lw_velocities.last().map_or(Vec3::zeros(), |c| Vec3::from(*c)), p.y),
        _ => ShiftField::exterior(p.y, p.v_in, p.v_out),
    }
}

fn field_profile(ctx: &Context) -> bnlab::Result<Vec<ProfileRow>> {
    let pr = &ctx.cfg.probes;
    let field = profile_field(ctx);
    let dir = Vec3::from(pr.ray).normalize();
    let spec = RegionSpec { center: ctx.particle.y, r_eff: ctx.ff.r_eff(1e-10), delta: ctx.cfg.kernel.region_delta };
    (0..pr.n_ray)
        .into_par_iter()
        .map(|i| {
            let r = pr.r_max * i as f64 / (pr.n_ray - 1) as f64;
            let x = ctx.particle.y + dir * r;
            let v = field.eval(&ctx.ff, &x, pr.time)?;
            Ok(ProfileRow {
                schema_version: SCHEMA_VERSION,
                field: pr.field.clone(),
                r,
                x: x.x,
                y: x.y,
                z: x.z,
                t: pr.time,
                region: region_tag(spec.classify(&x, pr.time)),
                a0: v.value.0[0],
                a1: v.value.0[1],
                a2: v.value.0[2],
                a3: v.value.0[3],
                error: v.error,
            })
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ConvergenceRow {
    pub schema_version: u32,
    pub packet: usize,
    pub t: f64,
    pub x0: f64,
    pub smear0_re: f64,
    pub smear0_im: f64,
    pub smear_norm: f64,
    pub distance_to_limit: f64,
    pub error: f64,
    pub limit_status: String,
    pub decay_exponent: Option<f64>,
}

fn asymptotic_convergence(ctx: &Context) -> bnlab::Result<Vec<ConvergenceRow>> {
    let p = &ctx.particle;
    let field = ShiftField::interior(p.y, p.v_in, p.v_out);
    let at_rest = p.v_in == Vec3::zeros() && p.v_out == Vec3::zeros();
    let method = if at_rest { SmearMethod::Spatial(QuadratureSpec::default()) } else { SmearMethod::Momentum(MomentumSmearSpec::default()) };
    let mut rows = Vec::new();
    for (i, pc) in ctx.cfg.asymptotics.packets.iter().enumerate() {
        let g = pc.build()?;
        let sched = ctx.cfg.asymptotics.schedule(&g);
        for &t in &ctx.cfg.asymptotics.times {
            let r = out_limit(&field, &ctx.ff, &g, t, &sched, &method)?;
            for (x0, s) in &r.raw {
                rows.push(ConvergenceRow {
                    schema_version: SCHEMA_VERSION,
                    packet: i,
                    t,
                    x0: *x0,
                    smear0_re: s.value.0[0].re,
                    smear0_im: s.value.0[0].im,
                    smear_norm: s.value.magnitude(),
                    distance_to_limit: (s.value - r.value).magnitude(),
                    error: s.error,
                    limit_status: format!("{:?}", r.status),
                    decay_exponent: r.decay_exponent,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
pub struct SubsidiaryRow {
    pub schema_version: u32,
    pub sigma: f64,
    pub state: String,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
    pub residual: f64,
    pub error: f64,
    /// Over the σ sequence of this state and point: decreasing, increasing or mixed.
    pub trend: &'static str,
}

fn subsidiary_vs_sigma(ctx: &Context) -> bnlab::Result<Vec<SubsidiaryRow>> {
    let p = &ctx.particle;
    let (x, t) = (p.y + Vec3::new(0.4, 0.1, 0.0), 1.5);
    let mut kinds = vec![("COULOMB".to_string(), StateKind::Coulomb, None)];
    for c in &ctx.cfg.states.lw_velocities {
        let c = Vec3::from(*c);
        kinds.push((format!("LW({:.3},{:.3},{:.3})", c.x, c.y, c.z), StateKind::LienardWiechert, Some(c)));
    }
    let mut rows = Vec::new();
    for (name, kind, c) in kinds {
        let mut block = Vec::new();
        for &sigma in &ctx.cfg.probes.sigmas {
            let ff = FormFactor::gaussian(sigma)?;
            let s = make_state(kind, p.clone(), c, ff)?;
            let r = subsidiary_residual(&s, &x, t, &DiffSpec::for_form_factor(&ff))?;
            block.push(SubsidiaryRow {
                schema_version: SCHEMA_VERSION,
                sigma,
                state: name.clone(),
                x: x.x,
                y: x.y,
                z: x.z,
                t,
                residual: r.value,
                error: r.error,
                trend: "",
            });
        }
        let mags: Vec<f64> = block.iter().map(|r| r.residual.abs()).collect();
        let trend = if mags.windows(2).all(|w| w[1] <= w[0]) {
            "decreasing"
        } else if mags.windows(2).all(|w| w[1] >= w[0]) {
            "increasing"
        } else {
            "mixed"
        };
        rows.extend(block.into_iter().map(|r| SubsidiaryRow { trend, ..r }));
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
pub struct ProbeRow {
    pub schema_version: u32,
    pub state: String,
    pub region: &'static str,
    pub observable: String,
    pub state_re: f64,
    pub state_im: f64,
    pub vacuum_re: f64,
    pub vacuum_im: f64,
    pub difference: f64,
    pub error: f64,
    pub verdict: String,
}

fn charge_class(ctx: &Context) -> bnlab::Result<Vec<ProbeRow>> {
    let ff = ctx.ff;
    let rest = bnlab::fields::ParticleSpec::at_rest(ctx.particle.y, ctx.particle.charge);
    let y = rest.y;
    let cfg = ExpectConfig::for_form_factor(&ff)?;
    let vac = QuasiFreeState::vacuum(rest.clone(), ff)?;
    let opts = ProbeOptions { tolerance: ctx.tol.probe, delta: ctx.cfg.kernel.region_delta };
    let mut states = vec![
        ("GUPTA".to_string(), make_state(StateKind::Gupta, rest.clone(), None, ff)?),
        ("COULOMB".to_string(), make_state(StateKind::Coulomb, rest.clone(), None, ff)?),
    ];
    for c in &ctx.cfg.states.lw_velocities {
        let c = Vec3::from(*c);
        states.push((format!("LW({:.3},{:.3},{:.3})", c.x, c.y, c.z), make_state(StateKind::LienardWiechert, rest.clone(), Some(c), ff)?));
    }
    let future = vec![
        Factor::gaussian(FactorKind::OutPotential(0), y + Vec3::new(0.3, -0.1, 0.2), 2.0, 0.1),
        Factor::gaussian(FactorKind::OutPotential(2), y, 3.0, 0.15),
    ];
    let past: Vec<Factor> = future.iter().map(|f| Factor { kind: FactorKind::InPotential(0), t: -f.t, ..*f }).collect();
    let space = vec![
        Factor::point(FactorKind::OutPotential(0), y + Vec3::new(2.0, 0.0, 0.0), 0.5),
        Factor::gaussian(FactorKind::OutPotential(0), y + Vec3::new(0.0, -2.5, 1.0), -0.5, 0.1),
    ];
    let mut rows = Vec::new();
    for (name, s) in &states {
        for (region, factors) in [(ProbeRegion::Future, &future), (ProbeRegion::Past, &past), (ProbeRegion::Spacelike, &space)] {
            let rep = charge_class_probe(s, &vac, region, factors, &cfg, opts)?;
            for e in rep.one_point.iter().chain(&rep.truncated) {
                rows.push(ProbeRow {
                    schema_version: SCHEMA_VERSION,
                    state: name.clone(),
                    region: region.name(),
                    observable: e.label.clone(),
                    state_re: e.a.value.re,
                    state_im: e.a.value.im,
                    vacuum_re: e.b.value.re,
                    vacuum_im: e.b.value.im,
                    difference: e.difference(),
                    error: e.error(),
                    verdict: format!("{:?}", rep.verdict),
                });
            }
        }
    }
    Ok(rows)
}

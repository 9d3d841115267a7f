//! Command-line scenario runner for the bnlab verification suite.

pub mod config;
pub mod report;
pub mod scan;
pub mod verify;

use std::path::PathBuf;

use bnlab::fields::{chi_kernel_lhs, chi_kernel_rhs, DiffSpec};
use bnlab::kernel::{RegionSpec, Vec3};
use bnlab::states::*;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::{ScenarioConfig, SCHEMA_VERSION};
use report::{Report, Status};
use scan::ScanKind;
use verify::Context;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "bnlab", version, about = "Verification runs and scans for the Bloch-Nordsieck infrared QED model")]
pub struct Cli {
    /// Scenario configuration (TOML).
    #[arg(long, global = true, env = "BNLAB_CONFIG")]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Random seed for sampled probe points; overrides `output.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Multiplies every check tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Runs the full invariant suite and writes report.json and checks.csv.
    Verify,
    /// Writes one plot-ready table.
    Scan {
        #[arg(value_enum)]
        kind: ScanKind,
    },
    /// Compares both sides of the characteristic-function identity at a
    /// point, or on a default grid when no point is given.
    ChiIdentity {
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true)]
        x: Option<Vec<f64>>,
        #[arg(long, allow_negative_numbers = true, requires = "x")]
        t: Option<f64>,
    },
    /// One-point data of a charged state at a spacetime point, as JSON.
    ChargedState {
        #[arg(long, value_enum, default_value_t = StateChoice::Gupta)]
        kind: StateChoice,
        /// Velocity of the Liénard-Wiechert state.
        #[arg(long, num_args = 3, value_names = ["CX", "CY", "CZ"], allow_negative_numbers = true)]
        c: Option<Vec<f64>>,
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true, required = true)]
        x: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateChoice {
    Vacuum,
    Gupta,
    Coulomb,
    Lw,
}

/// A failed run: usage and configuration problems exit with 2, library
/// failures with 3.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Numeric(anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(e) => write!(f, "configuration error: {e:#}"),
            Failure::Numeric(e) => write!(f, "numeric failure: {e:#}"),
        }
    }
}

/// Writes a line to stdout; a closed pipe is not an error worth a panic.
fn say(args: std::fmt::Arguments) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{args}");
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

/// Domain errors come from bad inputs; everything else is numeric.
fn library(e: bnlab::Error) -> Failure {
    match e {
        bnlab::Error::Domain(_) => Failure::Usage(e.into()),
        _ => Failure::Numeric(e.into()),
    }
}

fn io(e: anyhow::Error) -> Failure {
    Failure::Numeric(e)
}

/// Parses the configuration and runs the command; returns the exit code
/// on success of the run itself.
pub fn run(cli: Cli) -> Result<u8, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p).map_err(usage)?,
        None => ScenarioConfig::default(),
    };
    if let Some(o) = &cli.out {
        cfg.output.dir = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.output.seed = s;
    }
    if !(cli.tolerance_scale > 0.0 && cli.tolerance_scale.is_finite()) {
        return Err(usage(anyhow::anyhow!("--tolerance-scale must be positive")));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build().map_err(|e| io(e.into()))?;
    let seed = cfg.output.seed;
    let ctx = Context::new(cfg, cli.tolerance_scale, seed).map_err(usage)?;
    pool.install(|| dispatch(&cli, &ctx))
}

fn dispatch(cli: &Cli, ctx: &Context) -> Result<u8, Failure> {
    let dir = ctx.cfg.output.dir.clone();
    match &cli.command {
        Command::Verify => {
            let checks = verify::run_verify(ctx);
            let report = Report::new("verify", ctx.cfg.clone(), cli.tolerance_scale, checks);
            report.write(&dir).map_err(io)?;
            let s = &report.summary;
            say(format_args!(
                "verify: {:?} ({} checks: {} passed, {} failed, {} skipped) -> {}",
                report.status,
                s.total,
                s.passed,
                s.failed,
                s.skipped,
                dir.join("report.json").display()
            ));
            for c in report.checks.iter().filter(|c| c.status == Status::Fail) {
                say(format_args!("  FAIL {} [{}] deviation {:e} > {:e} {}", c.id, c.inputs, c.deviation, c.tolerance, c.note));
            }
            Ok(if s.numeric_failures > 0 {
                EXIT_NUMERIC
            } else if s.failed > 0 {
                EXIT_CHECK_FAILURE
            } else {
                EXIT_PASS
            })
        }
        Command::Scan { kind } => {
            let path = scan::run_scan(ctx, *kind, &dir).map_err(|e| match e.downcast::<bnlab::Error>() {
                Ok(b) => library(b),
                Err(e) => io(e),
            })?;
            say(format_args!("scan {}: wrote {}", kind.name(), path.display()));
            Ok(EXIT_PASS)
        }
        Command::ChiIdentity { x, t } => chi_identity(x.as_deref(), *t, ctx),
        Command::ChargedState { kind, c, x, t } => charged_state(ctx, *kind, c.as_deref(), x, *t),
    }
}

#[derive(Serialize)]
struct ChiRow {
    schema_version: u32,
    r: f64,
    t: f64,
    lhs: f64,
    rhs: f64,
    abs_error: f64,
    quadrature_error: f64,
}

fn chi_row(x: &Vec3, t: f64) -> Result<ChiRow, Failure> {
    let lhs = chi_kernel_lhs(x, t).map_err(library)?;
    let rhs = chi_kernel_rhs(x, t).map_err(library)?;
    Ok(ChiRow { schema_version: SCHEMA_VERSION, r: x.norm(), t, lhs: lhs.value, rhs, abs_error: (lhs.value - rhs).abs(), quadrature_error: lhs.error })
}

fn chi_identity(x: Option<&[f64]>, t: Option<f64>, ctx: &Context) -> Result<u8, Failure> {
    if let Some(x) = x {
        let t = t.ok_or_else(|| usage(anyhow::anyhow!("--t is required with --x")))?;
        let row = chi_row(&Vec3::new(x[0], x[1], x[2]), t)?;
        say(format_args!("{}", serde_json::to_string(&row).map_err(|e| io(e.into()))?));
        return Ok(EXIT_PASS);
    }
    let dir = &ctx.cfg.output.dir;
    std::fs::create_dir_all(dir).map_err(|e| io(e.into()))?;
    let path = dir.join("chi-identity.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| io(e.into()))?;
    for t in [-2.0, -0.5, 0.5, 1.0, 2.0] {
        for i in 0..=40 {
            let r = 0.01 + 3.0 * i as f64 / 40.0;
            if (r - f64::abs(t)).abs() < 0.02 {
                continue;
            }
            w.serialize(chi_row(&Vec3::new(0.0, 0.0, r), t)?).map_err(|e| io(e.into()))?;
        }
    }
    w.flush().map_err(|e| io(e.into()))?;
    say(format_args!("chi-identity: wrote {}", path.display()));
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct StateSummary {
    schema_version: u32,
    state: String,
    x: [f64; 3],
    t: f64,
    region: String,
    potential: [f64; 4],
    divergence: f64,
    /// F^{01}, F^{02}, F^{03}, F^{12}, F^{13}, F^{23}.
    field_strength: [f64; 6],
    out_potential: [f64; 4],
    in_potential: [f64; 4],
    /// ω(∂_μF^{μν}) − ω(j^ν) for ν = 0..3; null where the stencil meets the shell.
    gauss_deviation: [Option<f64>; 4],
}

fn charged_state(ctx: &Context, kind: StateChoice, c: Option<&[f64]>, x: &[f64], t: f64) -> Result<u8, Failure> {
    let ff = ctx.ff;
    let p = ctx.particle.clone();
    let state = match kind {
        StateChoice::Vacuum => QuasiFreeState::vacuum(p.clone(), ff),
        StateChoice::Gupta => make_state(StateKind::Gupta, p.clone(), None, ff),
        StateChoice::Coulomb => make_state(StateKind::Coulomb, p.clone(), None, ff),
        StateChoice::Lw => {
            let c = c.ok_or_else(|| usage(anyhow::anyhow!("--c is required for the lw state")))?;
            make_state(StateKind::LienardWiechert, p.clone(), Some(Vec3::new(c[0], c[1], c[2])), ff)
        }
    }
    .map_err(library)?;
    let x = Vec3::new(x[0], x[1], x[2]);
    let cfg = ExpectConfig::for_form_factor(&ff).map_err(library)?;
    let one = |k: FactorKind| -> Result<f64, Failure> { Ok(expect(&state, &ObservableSpec::single(Factor::point(k, x, t)), &cfg).map_err(library)?.value.re) };
    let four = |f: fn(usize) -> FactorKind| -> Result<[f64; 4], Failure> { Ok([one(f(0))?, one(f(1))?, one(f(2))?, one(f(3))?]) };
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut field_strength = [0.0; 6];
    for (slot, (m, n)) in field_strength.iter_mut().zip(pairs) {
        *slot = one(FactorKind::FieldStrength(m, n))?;
    }
    let diff = DiffSpec::for_form_factor(&ff);
    let mut gauss = [None; 4];
    for (nu, g) in gauss.iter_mut().enumerate() {
        *g = match gauss_deviation(&state, nu, &x, t, &diff) {
            Ok(v) => Some(v.value),
            Err(bnlab::Error::Proximity(_)) => None,
            Err(e) => return Err(library(e)),
        };
    }
    let spec = RegionSpec { center: p.y, r_eff: ff.r_eff(1e-10), delta: ctx.cfg.kernel.region_delta };
    let summary = StateSummary {
        schema_version: SCHEMA_VERSION,
        state: format!("{:?}", state.label),
        x: [x.x, x.y, x.z],
        t,
        region: format!("{:?}", spec.classify(&x, t)).to_lowercase(),
        potential: four(FactorKind::Potential)?,
        divergence: one(FactorKind::Divergence)?,
        field_strength,
        out_potential: four(FactorKind::OutPotential)?,
        in_potential: four(FactorKind::InPotential)?,
        gauss_deviation: gauss,
    };
    say(format_args!("{}", serde_json::to_string_pretty(&summary).map_err(|e| io(e.into()))?));
    Ok(EXIT_PASS)
}

//! Scenario configuration: a TOML document whose sections follow the
//! library modules. Every section is optional, every key has a default and
//! unknown keys are rejected.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use bnlab::asymptotics::{make_wave_packet, LimitSchedule, Profile, WavePacket};
use bnlab::fields::ParticleSpec;
use bnlab::kernel::{FormFactor, Vec3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kernel: KernelSection,
    pub fields: FieldsSection,
    pub fock: FockSection,
    pub asymptotics: AsymptoticsSection,
    pub states: StatesSection,
    pub probes: ProbesSection,
    pub tolerances: Tolerances,
    pub output: OutputSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSection {
    /// Width of the Gaussian charge form factor.
    pub sigma: f64,
    /// Safety band around the smeared light-cone shell.
    pub region_delta: f64,
}

impl Default for KernelSection {
    fn default() -> Self {
        Self { sigma: 0.1, region_delta: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldsSection {
    pub y: [f64; 3],
    pub v_in: [f64; 3],
    pub v_out: [f64; 3],
    pub charge: f64,
    /// Optional position packet: rows of [x, y, z, weight].
    pub packet: Vec<[f64; 4]>,
}

impl Default for FieldsSection {
    fn default() -> Self {
        Self { y: [0.0; 3], v_in: [0.0; 3], v_out: [0.0; 3], charge: 0.7, packet: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FockSection {
    /// Radial cut-off of the spherical mode rule; 0 picks the form-factor cut-off.
    pub k_max: f64,
    pub n_k: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for FockSection {
    fn default() -> Self {
        Self { k_max: 0.0, n_k: 24, n_theta: 12, n_phi: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    /// Centre and width of the Gaussian annulus in |k|.
    pub k_center: f64,
    pub k_width: f64,
    pub at: [f64; 3],
    pub amplitude: [f64; 2],
}

impl PacketConfig {
    pub fn build(&self) -> bnlab::Result<WavePacket> {
        make_wave_packet(
            Profile::gaussian_annulus(self.k_center, self.k_width),
            Vec3::from(self.at),
            Complex64::new(self.amplitude[0], self.amplitude[1]),
            1.0,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AsymptoticsSection {
    /// Explicit x₀ schedule; empty means "start beyond each packet's reach".
    pub x0: Vec<f64>,
    pub order: usize,
    pub tolerance: f64,
    pub times: Vec<f64>,
    pub packets: Vec<PacketConfig>,
}

impl Default for AsymptoticsSection {
    fn default() -> Self {
        let d = LimitSchedule::default();
        Self {
            x0: Vec::new(),
            order: d.order,
            tolerance: d.tolerance,
            times: vec![-1.0, 0.0, 5.0],
            packets: vec![
                PacketConfig { k_center: 3.0, k_width: 0.3, at: [0.0; 3], amplitude: [1.0, 0.5] },
                PacketConfig { k_center: 2.5, k_width: 0.25, at: [0.0, 0.0, 1.0], amplitude: [0.3, -1.0] },
            ],
        }
    }
}

impl AsymptoticsSection {
    pub fn schedule(&self, g: &WavePacket) -> LimitSchedule {
        let base = if self.x0.is_empty() { LimitSchedule::clearing(g) } else { LimitSchedule { x0: self.x0.clone(), ..Default::default() } };
        LimitSchedule { order: self.order, tolerance: self.tolerance, ..base }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatesSection {
    /// Velocities c of the Liénard-Wiechert states that are compared.
    pub lw_velocities: Vec<[f64; 3]>,
    /// Cut-off radii of the Dirac-factor schedule, as multiples of the
    /// observable radius.
    pub dirac_radii: Vec<f64>,
}

impl Default for StatesSection {
    fn default() -> Self {
        Self { lw_velocities: vec![[0.0; 3], [0.3, 0.0, 0.0], [0.0, 0.0, -0.6]], dirac_radii: vec![2.0, 2.5, 4.0, 8.0, 16.0] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbesSection {
    /// Random points per randomised check family.
    pub random_points: usize,
    /// Radial ray for the field-profile scan.
    pub ray: [f64; 3],
    pub r_max: f64,
    pub n_ray: usize,
    pub time: f64,
    /// Which field the profile scan samples: interior, exterior, coulomb or lw.
    pub field: String,
    /// Form-factor widths of the subsidiary-vs-sigma scan.
    pub sigmas: Vec<f64>,
}

impl Default for ProbesSection {
    fn default() -> Self {
        Self {
            random_points: 20,
            ray: [1.0, 0.0, 0.0],
            r_max: 4.0,
            n_ray: 81,
            time: 1.0,
            field: "exterior".into(),
            sigmas: vec![0.05, 0.1, 0.2, 0.4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub identity: f64,
    pub chi_relative: f64,
    pub chi_absolute: f64,
    pub closed_form: f64,
    pub localization: f64,
    pub gauss: f64,
    pub limit: f64,
    pub probe: f64,
    pub stabilization: f64,
    pub free_wave: f64,
    pub gram: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-8,
            chi_relative: 1e-5,
            chi_absolute: 1e-6,
            closed_form: 1e-4,
            localization: 1e-10,
            gauss: 1e-6,
            limit: 1e-4,
            probe: 1e-8,
            stabilization: 1e-12,
            free_wave: 1e-8,
            gram: 1e-10,
        }
    }
}

impl Tolerances {
    fn all(&self) -> [(&'static str, f64); 11] {
        [
            ("identity", self.identity),
            ("chi_relative", self.chi_relative),
            ("chi_absolute", self.chi_absolute),
            ("closed_form", self.closed_form),
            ("localization", self.localization),
            ("gauss", self.gauss),
            ("limit", self.limit),
            ("probe", self.probe),
            ("stabilization", self.stabilization),
            ("free_wave", self.free_wave),
            ("gram", self.gram),
        ]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            identity: self.identity * s,
            chi_relative: self.chi_relative * s,
            chi_absolute: self.chi_absolute * s,
            closed_form: self.closed_form * s,
            localization: self.localization * s,
            gauss: self.gauss * s,
            limit: self.limit * s,
            probe: self.probe * s,
            stabilization: self.stabilization * s,
            free_wave: self.free_wave * s,
            gram: self.gram * s,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub seed: u64,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("bnlab-out"), seed: 20240917 }
    }
}

impl ScenarioConfig {
    /// Parses TOML text; the error names the offending line and key.
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| anyhow::anyhow!("{e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.form_factor()?;
        self.particle()?;
        if !(self.kernel.region_delta > 0.0) {
            bail!("kernel.region_delta must be positive");
        }
        for (name, v) in self.tolerances.all() {
            if !(v > 0.0 && v.is_finite()) {
                bail!("tolerances.{name} must be positive, got {v}");
            }
        }
        if !(self.asymptotics.tolerance > 0.0) {
            bail!("asymptotics.tolerance must be positive");
        }
        if self.fock.n_k == 0 || self.fock.n_theta == 0 || self.fock.n_phi == 0 || self.fock.k_max < 0.0 {
            bail!("fock mode counts must be positive and k_max non-negative");
        }
        for p in &self.asymptotics.packets {
            p.build().map_err(|e| anyhow::anyhow!("asymptotics.packets: {e}"))?;
        }
        if self.asymptotics.packets.is_empty() {
            bail!("asymptotics.packets must not be empty");
        }
        if !self.asymptotics.x0.is_empty() {
            LimitSchedule { x0: self.asymptotics.x0.clone(), order: self.asymptotics.order, tolerance: self.asymptotics.tolerance }
                .validate()
                .map_err(|e| anyhow::anyhow!("asymptotics.x0: {e}"))?;
        }
        if self.states.lw_velocities.iter().any(|c| Vec3::from(*c).norm() >= 1.0) {
            bail!("states.lw_velocities must have speed below 1");
        }
        if self.states.dirac_radii.len() < 2 || self.states.dirac_radii.windows(2).any(|w| !(w[1] > w[0])) || self.states.dirac_radii[0] <= 1.0 {
            bail!("states.dirac_radii must be strictly increasing multiples greater than 1");
        }
        if self.probes.n_ray < 2 || !(self.probes.r_max > 0.0) || Vec3::from(self.probes.ray).norm() == 0.0 {
            bail!("probes: ray must be non-zero, r_max positive and n_ray at least 2");
        }
        if !["interior", "exterior", "coulomb", "lw"].contains(&self.probes.field.as_str()) {
            bail!("probes.field must be one of interior, exterior, coulomb, lw");
        }
        if self.probes.sigmas.iter().any(|s| !(*s > 0.0)) {
            bail!("probes.sigmas must be positive");
        }
        Ok(())
    }

    pub fn form_factor(&self) -> anyhow::Result<FormFactor> {
        FormFactor::gaussian(self.kernel.sigma).map_err(|e| anyhow::anyhow!("kernel.sigma: {e}"))
    }

    pub fn particle(&self) -> anyhow::Result<ParticleSpec> {
        let f = &self.fields;
        let p = ParticleSpec::new(Vec3::from(f.y), Vec3::from(f.v_in), Vec3::from(f.v_out), f.charge).map_err(|e| anyhow::anyhow!("fields: {e}"))?;
        if f.packet.is_empty() {
            return Ok(p);
        }
        let nodes = f.packet.iter().map(|r| (Vec3::new(r[0], r[1], r[2]), r[3])).collect();
        p.with_packet(nodes).map_err(|e| anyhow::anyhow!("fields.packet: {e}"))
    }

    pub fn k_max(&self, ff: &FormFactor) -> f64 {
        if self.fock.k_max > 0.0 {
            self.fock.k_max
        } else {
            ff.k_cut()
        }
    }
}

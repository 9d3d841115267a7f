use crate::error::{domain, Result};
use crate::kernel::{FourVector, Vec3};

/// The charged particle: position (or a normalised position packet),
/// incoming and outgoing velocities and charge.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticleSpec {
    pub y: Vec3,
    pub v_in: Vec3,
    pub v_out: Vec3,
    pub charge: f64,
    /// Optional |ψ(y)|² quadrature: nodes and weights summing to one.
    pub packet: Option<Vec<(Vec3, f64)>>,
}

impl ParticleSpec {
    pub fn at_rest(y: Vec3, charge: f64) -> Self {
        Self { y, v_in: Vec3::zeros(), v_out: Vec3::zeros(), charge, packet: None }
    }

    pub fn new(y: Vec3, v_in: Vec3, v_out: Vec3, charge: f64) -> Result<Self> {
        let p = Self { y, v_in, v_out, charge, packet: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_packet(mut self, nodes: Vec<(Vec3, f64)>) -> Result<Self> {
        self.packet = Some(nodes);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [&self.v_in, &self.v_out] {
            if !(v.norm() < 1.0) {
                return domain(format!("particle speed must be below 1, got {}", v.norm()));
            }
        }
        if !self.charge.is_finite() {
            return domain("charge must be finite");
        }
        if let Some(p) = &self.packet {
            let total: f64 = p.iter().map(|(_, w)| w).sum();
            if p.is_empty() || p.iter().any(|(_, w)| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
                return domain("particle packet weights must be non-negative and sum to 1");
            }
        }
        Ok(())
    }

    /// Velocity of the current at time t: outgoing for t ≥ 0, incoming before.
    pub fn branch_velocity(&self, t: f64) -> Vec3 {
        if t >= 0.0 {
            self.v_out
        } else {
            self.v_in
        }
    }

    pub fn four_velocity(&self, t: f64) -> FourVector {
        FourVector::velocity(self.branch_velocity(t))
    }

    /// Position nodes with weights; a point particle yields one node.
    pub fn positions(&self) -> Vec<(Vec3, f64)> {
        match &self.packet {
            Some(p) => p.clone(),
            None => vec![(self.y, 1.0)],
        }
    }

    pub fn with_position(&self, y: Vec3) -> Self {
        Self { y, packet: None, ..self.clone() }
    }
}

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{domain, Result};
use crate::kernel::quadrature::gauss_legendre;
use crate::kernel::Vec3;

/// How a contraction is normalised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// [a_j, a_j†] = −g: exact algebra.
    Raw,
    /// [a_j, a_j†] = −g·w_j/(2|k_j|): packets stand for continuum smearings.
    Continuum,
}

/// Discrete momentum nodes with positive quadrature weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSet {
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    measure: Measure,
}

impl ModeSet {
    pub fn new(nodes: Vec<Vec3>, weights: Vec<f64>, measure: Measure) -> Result<Arc<Self>> {
        if nodes.len() != weights.len() {
            return domain("node and weight counts differ");
        }
        for (k, w) in nodes.iter().zip(&weights) {
            if !(k.norm() > 0.0) || !k.iter().all(|c| c.is_finite()) {
                return domain("mode momenta must be finite and non-zero");
            }
            if !(*w > 0.0 && w.is_finite()) {
                return domain("mode weights must be positive");
            }
        }
        let mut keys: Vec<[u64; 3]> = nodes.iter().map(|k| [k.x.to_bits(), k.y.to_bits(), k.z.to_bits()]).collect();
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return domain("mode momenta must be distinct");
        }
        Ok(Arc::new(Self { nodes, weights, measure }))
    }

    /// Unit-weight modes for exact algebra.
    pub fn raw(nodes: Vec<Vec3>) -> Result<Arc<Self>> {
        let w = vec![1.0; nodes.len()];
        Self::new(nodes, w, Measure::Raw)
    }

    /// Product rule over the ball |k| ≤ k_max: Gauss-Legendre in |k| and
    /// cos θ, trapezoid in φ, polar axis along z.
    pub fn spherical(k_max: f64, n_k: usize, n_theta: usize, n_phi: usize) -> Result<Arc<Self>> {
        if !(k_max > 0.0) || n_k == 0 || n_theta == 0 || n_phi == 0 {
            return domain("spherical mode rule needs k_max > 0 and positive node counts");
        }
        let rk = gauss_legendre(n_k);
        let ru = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_k * n_theta * n_phi);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for (k, wk) in rk.mapped(0.0, k_max) {
            for (u, wu) in ru.mapped(-1.0, 1.0) {
                let s = (1.0 - u * u).sqrt();
                for p in 0..n_phi {
                    let phi = (p as f64 + 0.5) * dphi;
                    nodes.push(Vec3::new(k * s * phi.cos(), k * s * phi.sin(), k * u));
                    weights.push(wk * k * k * wu * dphi);
                }
            }
        }
        Self::new(nodes, weights, Measure::Continuum)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn k(&self, j: usize) -> Vec3 {
        self.nodes[j]
    }

    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    /// The factor c_j in [a_j^μ, a_j^{ν†}] = −g^{μν} c_j.
    pub fn contraction(&self, j: usize) -> f64 {
        match self.measure {
            Measure::Raw => 1.0,
            Measure::Continuum => self.weights[j] / (2.0 * self.nodes[j].norm()),
        }
    }
}

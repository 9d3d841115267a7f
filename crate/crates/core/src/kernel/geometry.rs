use nalgebra::{Matrix4, Vector4};

use crate::error::{domain, Result};

pub type Vec3 = nalgebra::Vector3<f64>;

/// Diagonal of the metric, signature (+,−,−,−).
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Contravariant four-vector (t, x, y, z) in natural units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVector(pub Vector4<f64>);

impl FourVector {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self(Vector4::new(t, x, y, z))
    }

    pub fn from_parts(t: f64, x: Vec3) -> Self {
        Self::new(t, x.x, x.y, x.z)
    }

    /// The non-normalised four-velocity (1, **v**) used in the current.
    pub fn velocity(v: Vec3) -> Self {
        Self::from_parts(1.0, v)
    }

    /// Light-like momentum (|**k**|, **k**).
    pub fn on_shell(k: Vec3) -> Self {
        Self::from_parts(k.norm(), k)
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> Vec3 {
        Vec3::new(self.0[1], self.0[2], self.0[3])
    }

    pub fn component(&self, mu: usize) -> f64 {
        self.0[mu]
    }

    /// Covariant components a_μ = g_μν a^ν.
    pub fn lower(&self) -> [f64; 4] {
        [self.0[0], -self.0[1], -self.0[2], -self.0[3]]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        minkowski_dot(self, other)
    }
}

#[must_use]
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

/// Lorentz factor; callers guarantee |v| < 1.
pub fn gamma(v: &Vec3) -> f64 {
    1.0 / (1.0 - v.norm_squared()).sqrt()
}

/// Pure boost Λ_v mapping (1,0,0,0) to γ(1, **v**).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostMatrix(pub Matrix4<f64>);

impl BoostMatrix {
    pub fn apply(&self, a: &FourVector) -> FourVector {
        FourVector(self.0 * a.0)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// Largest entry of |ΛᵀgΛ − g|.
    pub fn isometry_defect(&self) -> f64 {
        let g = Matrix4::from_diagonal(&Vector4::from(METRIC));
        (self.0.transpose() * g * self.0 - g).abs().max()
    }
}

pub fn boost_from_velocity(v: &Vec3) -> Result<BoostMatrix> {
    let v2 = v.norm_squared();
    if !v2.is_finite() || v2 >= 1.0 {
        return domain(format!("boost velocity must satisfy |v| < 1, got |v| = {}", v2.sqrt()));
    }
    let g = 1.0 / (1.0 - v2).sqrt();
    let mut m = Matrix4::identity();
    m[(0, 0)] = g;
    for i in 0..3 {
        m[(0, i + 1)] = g * v[i];
        m[(i + 1, 0)] = g * v[i];
    }
    if v2 > 0.0 {
        // (γ−1)/v² written as γ²/(γ+1) stays accurate for tiny |v|.
        let c = g * g / (g + 1.0);
        for i in 0..3 {
            for j in 0..3 {
                m[(i + 1, j + 1)] += c * v[i] * v[j];
            }
        }
    }
    Ok(BoostMatrix(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_null_vectors() {
        let e0 = FourVector::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(minkowski_dot(&e0, &e0), 1.0);
        let n = FourVector::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(minkowski_dot(&n, &n), 0.0);
    }

    #[test]
    fn boost_of_rest_vector() {
        let b = boost_from_velocity(&Vec3::new(0.6, 0.0, 0.0)).unwrap();
        let r = b.apply(&FourVector::new(1.0, 0.0, 0.0, 0.0));
        assert!((r.t() - 1.25).abs() < 1e-15);
        assert!((r.0[1] - 0.75).abs() < 1e-15);
        assert_eq!(r.0[2], 0.0);
    }

    #[test]
    fn zero_velocity_is_identity() {
        let b = boost_from_velocity(&Vec3::zeros()).unwrap();
        assert_eq!(b.0, Matrix4::identity());
    }

    #[test]
    fn superluminal_rejected() {
        assert!(boost_from_velocity(&Vec3::new(0.6, 0.8, 0.0)).is_err());
        assert!(boost_from_velocity(&Vec3::new(f64::NAN, 0.0, 0.0)).is_err());
    }
}

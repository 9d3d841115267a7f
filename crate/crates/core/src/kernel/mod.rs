//! Shared infrastructure: geometry, form factor, quadrature and regions.

pub mod form_factor;
pub mod geometry;
pub mod quadrature;
pub mod region;

pub use form_factor::FormFactor;
pub use geometry::{boost_from_velocity, gamma, minkowski_dot, BoostMatrix, FourVector, Vec3, METRIC};
pub use quadrature::{Integral, QuadratureSpec};
pub use region::{region_classify, Region, RegionSpec};

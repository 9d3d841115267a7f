use super::geometry::Vec3;

/// Causal position of a spacetime point relative to the smeared charge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// Inside the forward (t > 0) or backward (t < 0) tangent cone.
    Interior,
    /// Causally disjoint from the charge's localisation region.
    Spacelike,
    /// Within the smeared light-cone shell; nothing is asserted there.
    Shell,
}

/// Particle centre, effective radius and safety band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionSpec {
    pub center: Vec3,
    pub r_eff: f64,
    pub delta: f64,
}

impl RegionSpec {
    pub fn classify(&self, x: &Vec3, t: f64) -> Region {
        region_classify(x, t, self)
    }
}

pub fn region_classify(x: &Vec3, t: f64, spec: &RegionSpec) -> Region {
    let d = (x - spec.center).norm();
    if d + spec.r_eff < t.abs() - spec.delta {
        Region::Interior
    } else if d - spec.r_eff > t.abs() + spec.delta {
        Region::Spacelike
    } else {
        Region::Shell
    }
}

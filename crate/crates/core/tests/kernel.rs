use std::f64::consts::PI;

use bnlab::kernel::form_factor::form_factor_tilde;
use bnlab::kernel::quadrature::{gauss_legendre, panels_of_width};
use bnlab::kernel::{boost_from_velocity, minkowski_dot, region_classify, FormFactor, FourVector, Region, RegionSpec, Vec3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn component_dot(a: &FourVector, b: &FourVector) -> f64 {
    let g = [1.0, -1.0, -1.0, -1.0];
    (0..4).map(|m| g[m] * a.component(m) * b.component(m)).sum()
}

#[test]
fn dot_products() {
    let e0 = FourVector::new(1.0, 0.0, 0.0, 0.0);
    assert_eq!(minkowski_dot(&e0, &e0), 1.0);
    let n = FourVector::new(1.0, 1.0, 0.0, 0.0);
    assert_eq!(minkowski_dot(&n, &n), 0.0);
    let v = Vec3::new(0.3, -0.2, 0.5);
    let u = FourVector::velocity(v);
    assert!((minkowski_dot(&u, &u) - (1.0 - v.norm_squared())).abs() < 1e-15);
    assert!((minkowski_dot(&u, &u) - component_dot(&u, &u)).abs() < 1e-15);
}

#[test]
fn boost_examples() {
    assert_eq!(*boost_from_velocity(&Vec3::zeros()).unwrap().matrix(), nalgebra::Matrix4::identity());
    let b = boost_from_velocity(&Vec3::new(0.6, 0.0, 0.0)).unwrap();
    let r = b.apply(&FourVector::new(1.0, 0.0, 0.0, 0.0));
    assert!((r.t() - 1.25).abs() < 1e-15 && (r.component(1) - 0.75).abs() < 1e-15);
    assert!(boost_from_velocity(&Vec3::new(1.0, 0.0, 0.0)).is_err());
}

#[test]
fn boost_isometry_on_ten_thousand_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let mut v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        v *= rng.random_range(0.0..0.99) / v.norm().max(1e-12);
        let mut four = || FourVector::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let (a, c) = (four(), four());
        let b = boost_from_velocity(&v).unwrap();
        let lhs = minkowski_dot(&b.apply(&a), &b.apply(&c));
        worst = worst.max((lhs - minkowski_dot(&a, &c)).abs() / (1.0 + minkowski_dot(&a, &c).abs()));
    }
    assert!(worst < 1e-12, "worst isometry defect {worst:e}");
}

proptest! {
    #[test]
    fn boost_preserves_metric(vx in -0.5f64..0.5, vy in -0.5f64..0.5, vz in -0.5f64..0.5) {
        let b = boost_from_velocity(&Vec3::new(vx, vy, vz)).unwrap();
        prop_assert!(b.isometry_defect() < 1e-12);
    }

    #[test]
    fn interior_and_spacelike_are_disjoint(r in 0.0f64..5.0, t in -5.0f64..5.0, reff in 0.0f64..1.0, delta in 1e-6f64..0.5) {
        let x = Vec3::new(r, 0.0, 0.0);
        let spec = RegionSpec { center: Vec3::zeros(), r_eff: reff, delta };
        let d = r;
        let interior = d + reff < t.abs() - delta;
        let spacelike = d - reff > t.abs() + delta;
        prop_assert!(!(interior && spacelike));
        let tag = region_classify(&x, t, &spec);
        prop_assert_eq!(tag == Region::Interior, interior);
        prop_assert_eq!(tag == Region::Spacelike, spacelike);
    }
}

/// ρ̃(k) by direct radial quadrature of (2π)^{-3/2} ∫ ρ(r) sin(kr)/(kr) 4πr² dr.
fn radial_transform(ff: &FormFactor, k: f64) -> f64 {
    let hi = 12.0 * ff.sigma();
    let f = |r: f64| {
        let j0 = if k * r < 1e-8 { 1.0 } else { (k * r).sin() / (k * r) };
        4.0 * PI * r * r * ff.rho(r) * j0
    };
    (2.0 * PI).powf(-1.5) * panels_of_width(f, 0.0, hi, 0.05 * ff.sigma()).value
}

#[test]
fn form_factor_transform_matches_radial_quadrature() {
    for sigma in [0.05, 0.3, 1.0] {
        let ff = FormFactor::gaussian(sigma).unwrap();
        for k in [0.0, 0.5, 2.0, 7.0] {
            let exact = (2.0 * PI).powf(-1.5) * (-0.5 * sigma * sigma * k * k).exp();
            let tilde = form_factor_tilde(&ff, k).unwrap();
            assert!((tilde - exact).abs() < 1e-16);
            assert!((radial_transform(&ff, k) - exact).abs() < 1e-12, "σ={sigma} k={k}");
        }
    }
    let narrow = FormFactor::gaussian(1e-9).unwrap();
    assert!((form_factor_tilde(&narrow, 3.0).unwrap() - (2.0 * PI).powf(-1.5)).abs() < 1e-15);
}

#[test]
fn form_factor_is_normalised_in_three_dimensions() {
    // Off-centre Cartesian product rule, independent of the radial reduction.
    let ff = FormFactor::gaussian(0.4).unwrap();
    let rule = gauss_legendre(48);
    let nodes: Vec<(f64, f64)> = rule.mapped(-4.0, 4.0).collect();
    let c = Vec3::new(0.1, -0.2, 0.05);
    let mut total = 0.0;
    for (x, wx) in &nodes {
        for (y, wy) in &nodes {
            for (z, wz) in &nodes {
                total += wx * wy * wz * ff.rho((Vec3::new(*x, *y, *z) - c).norm());
            }
        }
    }
    assert!((total - 1.0).abs() < 1e-9, "mass {total}");
}

#[test]
fn region_examples() {
    let spec = RegionSpec { center: Vec3::zeros(), r_eff: 0.2, delta: 0.01 };
    assert_eq!(region_classify(&Vec3::zeros(), 10.0, &spec), Region::Interior);
    assert_eq!(region_classify(&Vec3::new(10.0, 0.0, 0.0), 1.0, &spec), Region::Spacelike);
    assert_eq!(region_classify(&Vec3::new(0.0, 0.0, 2.0), 2.0, &spec), Region::Shell);
}

#[test]
fn effective_radius_bounds_tail() {
    for sigma in [0.02, 0.1, 1.0] {
        let ff = FormFactor::gaussian(sigma).unwrap();
        let r = ff.r_eff(1e-10);
        assert!(ff.tail_mass(r) < 1e-10 && ff.tail_mass(0.999 * r) >= 1e-10);
    }
}

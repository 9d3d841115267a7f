use std::sync::Arc;

use bnlab::fock::*;
use bnlab::kernel::{Vec3, METRIC};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_modes(rng: &mut ChaCha8Rng, n: usize) -> Arc<ModeSet> {
    let nodes = (0..n)
        .map(|_| Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(0.1..2.0)))
        .collect();
    ModeSet::raw(nodes).unwrap()
}

fn random_vector(rng: &mut ChaCha8Rng, m: &Arc<ModeSet>) -> FockVector {
    let mut v = FockVector::vacuum(m).scaled(c(rng.random_range(-1.0..1.0), 0.0));
    for _ in 0..4 {
        let deg = rng.random_range(1..=3);
        let labels: Vec<Label> = (0..deg).map(|_| Label::new(rng.random_range(0..m.len()), rng.random_range(0..4))).collect();
        let coef = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        v = v.add(&FockVector::monomial(m, &labels, coef).unwrap()).unwrap();
    }
    v
}

/// Packet supported on a few random modes.
fn sparse_packet(rng: &mut ChaCha8Rng, n: usize, support: usize) -> Vec<Complex64> {
    let mut h = vec![c(0.0, 0.0); n];
    for _ in 0..support {
        h[rng.random_range(0..n)] = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    h
}

#[test]
fn inner_product_examples() {
    let m = ModeSet::raw(vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 1.0)]).unwrap();
    let vac = FockVector::vacuum(&m);
    assert_eq!(vac.inner(&vac).unwrap(), c(1.0, 0.0));
    let scalar = FockVector::monomial(&m, &[Label::new(0, 0)], c(1.0, 0.0)).unwrap();
    assert_eq!(scalar.inner(&scalar).unwrap(), c(-1.0, 0.0));
    // Only the pairing (1,1)(2,2) survives: (−g¹¹)(−g²²) = +1.
    let two = FockVector::monomial(&m, &[Label::new(0, 1), Label::new(1, 2)], c(1.0, 0.0)).unwrap();
    assert_eq!(two.inner(&two).unwrap(), c(1.0, 0.0));

    let cont = ModeSet::spherical(2.0, 2, 2, 2).unwrap();
    let s = FockVector::monomial(&cont, &[Label::new(3, 0)], c(1.0, 0.0)).unwrap();
    let factor = cont.weight(3) / (2.0 * cont.k(3).norm());
    assert!((s.inner(&s).unwrap() - c(-factor, 0.0)).norm() < 1e-15);
}

#[test]
fn inner_product_is_hermitian_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = random_modes(&mut rng, 6);
    for _ in 0..1000 {
        let u = random_vector(&mut rng, &m);
        let v = random_vector(&mut rng, &m);
        let d = u.inner(&v).unwrap() - v.inner(&u).unwrap().conj();
        assert!(d.norm() < 1e-12);
    }
}

#[test]
fn smeared_field_structure() {
    let m = ModeSet::raw(vec![Vec3::new(0.3, -0.4, 1.2)]).unwrap();
    let h = c(0.7, -0.2);
    let a = smear_free_field(&m, FieldKind::Potential(2), &[h]).unwrap();
    assert_eq!(a.terms().len(), 2);
    assert_eq!(a.adjoint(), a);

    let i = c(0.0, 1.0);
    let k = m.k(0);
    let km = k.norm();
    for axis in 1..4 {
        let f = smear_free_field(&m, FieldKind::FieldStrength(0, axis), &[h]).unwrap();
        let cre = |mu: usize| Word { creators: vec![Label::new(0, mu)], annihilators: vec![] };
        let got_i = f.terms().get(&cre(axis)).copied().unwrap_or_default();
        let got_0 = f.terms().get(&cre(0)).copied().unwrap_or_default();
        assert!((got_i - i * h * km).norm() < 1e-15);
        assert!((got_0 + i * h * k[axis - 1]).norm() < 1e-15);
        assert_eq!(f.adjoint(), f);
    }

    // The creation part of B0 carries i h k_μ with k·k = 0 on shell.
    let b = smear_free_field(&m, FieldKind::Divergence, &[h]).unwrap();
    let lower = [km, -k.x, -k.y, -k.z];
    let on_shell: f64 = (0..4).map(|mu| METRIC[mu] * lower[mu] * lower[mu]).sum();
    assert!(on_shell.abs() < 1e-15);
    for mu in 0..4 {
        let w = Word { creators: vec![Label::new(0, mu)], annihilators: vec![] };
        assert!((b.terms()[&w] - i * h * lower[mu]).norm() < 1e-15);
    }
}

#[test]
fn commutator_examples() {
    let m = ModeSet::raw(vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 2.0, 0.0)]).unwrap();
    for mu in 0..4 {
        for nu in 0..4 {
            let cm = commutator(&ModeOperator::annihilator(&m, Label::new(1, mu)), &ModeOperator::creator(&m, Label::new(1, nu))).unwrap();
            let want = if mu == nu { -METRIC[mu] } else { 0.0 };
            assert_eq!(cm.vacuum_expectation(), c(want, 0.0));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = sparse_packet(&mut rng, 2, 2);
    let a1 = smear_free_field(&m, FieldKind::Potential(1), &f).unwrap();
    assert!(commutator(&a1, &a1).unwrap().is_zero());
}

#[test]
fn field_strength_commutes_with_divergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let m = random_modes(&mut rng, 12);
    for _ in 0..40 {
        let g = sparse_packet(&mut rng, 12, 4);
        let f = sparse_packet(&mut rng, 12, 4);
        let (rho, sigma) = (rng.random_range(0..4), rng.random_range(0..4));
        let fs = smear_free_field(&m, FieldKind::FieldStrength(rho, sigma), &g).unwrap();
        let b = smear_free_field(&m, FieldKind::Divergence, &f).unwrap();
        assert!(commutator(&fs, &b).unwrap().is_zero());
    }
}

#[test]
fn divergence_minus_annihilates_field_strength_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let m = random_modes(&mut rng, 10);
    let b = smear_free_field(&m, FieldKind::DivergenceMinus, &sparse_packet(&mut rng, 10, 10)).unwrap();
    for deg in 1..=3 {
        let word: Vec<ModeOperator> = (0..deg)
            .map(|_| {
                let (mu, nu) = (rng.random_range(0..4), rng.random_range(0..4));
                smear_free_field(&m, FieldKind::FieldStrength(mu, nu), &sparse_packet(&mut rng, 10, 3)).unwrap()
            })
            .collect();
        let psi = word_vector(&m, &word).unwrap();
        assert!(b.apply(&psi).unwrap().is_zero());
        assert_eq!(gb_condition_check(&psi).unwrap(), 0.0);
    }
}

fn random_operator(rng: &mut ChaCha8Rng, m: &Arc<ModeSet>) -> ModeOperator {
    let mut terms = Vec::new();
    for _ in 0..3 {
        let nc = rng.random_range(0..=1);
        let na = rng.random_range(0..=2 - nc);
        let mut w = Word::default();
        for _ in 0..nc {
            w.creators.push(Label::new(rng.random_range(0..m.len()), rng.random_range(0..4)));
        }
        for _ in 0..na {
            w.annihilators.push(Label::new(rng.random_range(0..m.len()), rng.random_range(0..4)));
        }
        w.creators.sort();
        w.annihilators.sort();
        terms.push((w, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
    }
    ModeOperator::from_terms(m, terms)
}

#[test]
fn jacobi_identity_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let m = random_modes(&mut rng, 3);
    for _ in 0..200 {
        let (a, b, cc) = (random_operator(&mut rng, &m), random_operator(&mut rng, &m), random_operator(&mut rng, &m));
        let j1 = commutator(&a, &commutator(&b, &cc).unwrap()).unwrap();
        let j2 = commutator(&b, &commutator(&cc, &a).unwrap()).unwrap();
        let j3 = commutator(&cc, &commutator(&a, &b).unwrap()).unwrap();
        let s = j1.add(&j2).unwrap().add(&j3).unwrap();
        assert!(s.max_coefficient() < 1e-12, "Jacobi defect {}", s.max_coefficient());
    }
}

#[test]
fn gram_examples() {
    let m = ModeSet::spherical(3.0, 4, 4, 2).unwrap();
    assert!(m.len() >= 32);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let packets: Vec<Vec<Complex64>> = (0..6).map(|_| sparse_packet(&mut rng, m.len(), 5)).collect();
    let kinds: Vec<FieldKind> = (0..6).map(|i| FieldKind::FieldStrength(i % 4, (i + 1) % 4)).collect();
    assert!(observable_gram(&m, &packets, &kinds).unwrap().min_eigenvalue >= -1e-10);
    let scalar = observable_gram(&m, &packets[..2], &[FieldKind::Potential(0); 2]).unwrap();
    assert!((0..2).any(|i| scalar.matrix[(i, i)].re < 0.0));
    let empty = observable_gram(&m, &[], &[]).unwrap();
    assert_eq!(empty.min_eigenvalue, f64::INFINITY);
}

#[test]
fn scalar_photon_family_is_indefinite() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let m = random_modes(&mut rng, 8);
    let packets: Vec<Vec<Complex64>> = (0..4).map(|_| sparse_packet(&mut rng, 8, 3)).collect();
    let r = observable_gram(&m, &packets, &[FieldKind::Potential(0); 4]).unwrap();
    assert!(r.min_eigenvalue < 0.0);
}

#[test]
fn subsidiary_condition_examples() {
    let m = ModeSet::raw(vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 1.0, 0.0)]).unwrap();
    assert_eq!(gb_condition_check(&FockVector::vacuum(&m)).unwrap(), 0.0);
    let f01 = smear_free_field(&m, FieldKind::FieldStrength(0, 1), &[c(1.0, 0.0), c(0.0, 0.5)]).unwrap();
    let x = word_vector(&m, &[f01]).unwrap();
    assert_eq!(gb_condition_check(&x).unwrap(), 0.0);
    let scalar = FockVector::monomial(&m, &[Label::new(0, 0)], c(1.0, 0.0)).unwrap();
    assert!(gb_condition_check(&scalar).unwrap() > 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smearing_is_real_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_modes(&mut rng, 5);
        let f = sparse_packet(&mut rng, 5, 3);
        let g = sparse_packet(&mut rng, 5, 3);
        let fg: Vec<Complex64> = f.iter().zip(&g).map(|(x, y)| x * a + y * b).collect();
        let kind = FieldKind::FieldStrength(0, 2);
        let lhs = smear_free_field(&m, kind, &fg).unwrap();
        let rhs = smear_free_field(&m, kind, &f).unwrap().scaled(c(a, 0.0))
            .add(&smear_free_field(&m, kind, &g).unwrap().scaled(c(b, 0.0))).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_coefficient() < 1e-12);
    }

    #[test]
    fn two_point_is_hermitian(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_modes(&mut rng, 6);
        let x = smear_free_field(&m, FieldKind::FieldStrength(1, 3), &sparse_packet(&mut rng, 6, 4)).unwrap();
        let y = smear_free_field(&m, FieldKind::FieldStrength(0, 2), &sparse_packet(&mut rng, 6, 4)).unwrap();
        let w1 = x.two_point(&y).unwrap();
        let w2 = y.two_point(&x).unwrap();
        prop_assert!((w1 - w2.conj()).norm() < 1e-12);
    }
}

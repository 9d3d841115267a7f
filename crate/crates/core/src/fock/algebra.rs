use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::modes::ModeSet;
use crate::error::{Error, Result};
use crate::kernel::METRIC;

/// A single creation or annihilation label: mode index and Lorentz index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub mode: u32,
    pub mu: u8,
}

impl Label {
    pub fn new(mode: usize, mu: usize) -> Self {
        Self { mode: mode as u32, mu: mu as u8 }
    }
}

/// Normal-ordered word a†…a† a…a with both label lists sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    pub creators: Vec<Label>,
    pub annihilators: Vec<Label>,
}

impl Word {
    pub fn degree(&self) -> usize {
        self.creators.len() + self.annihilators.len()
    }
}

/// Engine settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockConfig {
    pub degree_cap: usize,
    /// A combined coefficient is treated as zero when it is smaller than
    /// this fraction of the largest contribution that produced it.
    pub zero_threshold: f64,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self { degree_cap: 8, zero_threshold: 1e-14 }
    }
}

/// Sums keyed contributions, dropping cancellations below the threshold.
struct Accumulator<K: Ord> {
    map: BTreeMap<K, (Complex64, f64)>,
}

impl<K: Ord> Accumulator<K> {
    fn new() -> Self {
        Self { map: BTreeMap::new() }
    }

    fn add(&mut self, key: K, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let e = self.map.entry(key).or_insert((Complex64::new(0.0, 0.0), 0.0));
        e.0 += c;
        e.1 = e.1.max(c.norm());
    }

    fn finish(self, threshold: f64) -> BTreeMap<K, Complex64> {
        self.map
            .into_iter()
            .filter(|(_, (c, m))| c.norm() > threshold * m)
            .map(|(k, (c, _))| (k, c))
            .collect()
    }
}

/// Value of [a_l, a_m†] for an annihilator label l and creator label m.
fn contraction(modes: &ModeSet, l: Label, m: Label) -> f64 {
    if l != m {
        return 0.0;
    }
    -METRIC[l.mu as usize] * modes.contraction(l.mode as usize)
}

/// Calls `visit(weight, unmatched_annihilators, unmatched_creators)` for every
/// partial matching between `ann` and `cre` by position. With `total` set,
/// every annihilator must be matched.
fn matchings(
    modes: &ModeSet,
    ann: &[Label],
    cre: &[Label],
    total: bool,
    visit: &mut dyn FnMut(f64, &[Label], &[Label]),
) {
    fn rec(
        modes: &ModeSet,
        ann: &[Label],
        cre: &[Label],
        total: bool,
        i: usize,
        used: &mut Vec<bool>,
        left: &mut Vec<Label>,
        weight: f64,
        visit: &mut dyn FnMut(f64, &[Label], &[Label]),
    ) {
        if i == ann.len() {
            let rest: Vec<Label> = cre.iter().zip(used.iter()).filter(|(_, u)| !**u).map(|(c, _)| *c).collect();
            visit(weight, left, &rest);
            return;
        }
        if !total {
            left.push(ann[i]);
            rec(modes, ann, cre, total, i + 1, used, left, weight, visit);
            left.pop();
        }
        for j in 0..cre.len() {
            if used[j] {
                continue;
            }
            let c = contraction(modes, ann[i], cre[j]);
            if c == 0.0 {
                continue;
            }
            used[j] = true;
            rec(modes, ann, cre, total, i + 1, used, left, weight * c, visit);
            used[j] = false;
        }
    }
    let mut used = vec![false; cre.len()];
    let mut left = Vec::new();
    rec(modes, ann, cre, total, 0, &mut used, &mut left, 1.0, visit);
}

fn merged(a: &[Label], b: &[Label]) -> Vec<Label> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v.sort_unstable();
    v
}

fn check_modes(a: &Arc<ModeSet>, b: &Arc<ModeSet>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::ModeSetMismatch)
    }
}

/// Finite linear combination of creation monomials applied to the vacuum Ψ_F.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    modes: Arc<ModeSet>,
    terms: BTreeMap<Vec<Label>, Complex64>,
    config: FockConfig,
}

impl FockVector {
    pub fn vacuum(modes: &Arc<ModeSet>) -> Self {
        Self::vacuum_with(modes, FockConfig::default())
    }

    pub fn vacuum_with(modes: &Arc<ModeSet>, config: FockConfig) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), Complex64::new(1.0, 0.0));
        Self { modes: modes.clone(), terms, config }
    }

    /// c · a†(l_1)…a†(l_n) Ψ_F.
    pub fn monomial(modes: &Arc<ModeSet>, labels: &[Label], c: Complex64) -> Result<Self> {
        let config = FockConfig::default();
        if labels.len() > config.degree_cap {
            return Err(Error::DegreeOverflow { degree: labels.len(), cap: config.degree_cap });
        }
        let mut key = labels.to_vec();
        key.sort_unstable();
        let mut terms = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            terms.insert(key, c);
        }
        Ok(Self { modes: modes.clone(), terms, config })
    }

    pub fn modes(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Label>, Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.clone(), c * s)).filter(|(_, c)| c.norm() > 0.0).collect();
        Self { modes: self.modes.clone(), terms, config: self.config }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_modes(&self.modes, &other.modes)?;
        let mut acc = Accumulator::new();
        for (k, c) in self.terms.iter().chain(other.terms.iter()) {
            acc.add(k.clone(), *c);
        }
        Ok(Self { modes: self.modes.clone(), terms: acc.finish(self.config.zero_threshold), config: self.config })
    }

    /// Indefinite inner product ⟨self, other⟩, antilinear in `self`, summing
    /// over complete pairings of the creators of both monomials.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_modes(&self.modes, &other.modes)?;
        let mut s = Complex64::new(0.0, 0.0);
        for (k, a) in &self.terms {
            // Pairings force the label multisets to coincide.
            let Some(b) = other.terms.get(k) else { continue };
            let mut w = 0.0;
            matchings(&self.modes, k, k, true, &mut |x, _, _| w += x);
            s += a.conj() * b * w;
        }
        Ok(s)
    }
}

/// Normal-ordered polynomial in the mode operators.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeOperator {
    modes: Arc<ModeSet>,
    terms: BTreeMap<Word, Complex64>,
    config: FockConfig,
}

impl ModeOperator {
    pub fn zero(modes: &Arc<ModeSet>) -> Self {
        Self { modes: modes.clone(), terms: BTreeMap::new(), config: FockConfig::default() }
    }

    pub fn identity(modes: &Arc<ModeSet>) -> Self {
        Self::zero(modes).with_term(Word::default(), Complex64::new(1.0, 0.0))
    }

    pub fn creator(modes: &Arc<ModeSet>, l: Label) -> Self {
        Self::zero(modes).with_term(Word { creators: vec![l], annihilators: vec![] }, Complex64::new(1.0, 0.0))
    }

    pub fn annihilator(modes: &Arc<ModeSet>, l: Label) -> Self {
        Self::zero(modes).with_term(Word { creators: vec![], annihilators: vec![l] }, Complex64::new(1.0, 0.0))
    }

    /// Builds an operator from words that are sorted on entry.
    pub fn from_terms(modes: &Arc<ModeSet>, terms: impl IntoIterator<Item = (Word, Complex64)>) -> Self {
        let mut acc = Accumulator::new();
        for (mut w, c) in terms {
            w.creators.sort_unstable();
            w.annihilators.sort_unstable();
            acc.add(w, c);
        }
        let config = FockConfig::default();
        Self { modes: modes.clone(), terms: acc.finish(config.zero_threshold), config }
    }

    pub fn with_config(mut self, config: FockConfig) -> Self {
        self.config = config;
        self
    }

    fn with_term(mut self, w: Word, c: Complex64) -> Self {
        self.terms.insert(w, c);
        self
    }

    pub fn modes(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn terms(&self) -> &BTreeMap<Word, Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Coefficient of the identity: the Fock-vacuum expectation.
    pub fn vacuum_expectation(&self) -> Complex64 {
        self.terms.get(&Word::default()).copied().unwrap_or_default()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.clone(), c * s)).filter(|(_, c)| c.norm() > 0.0).collect();
        Self { modes: self.modes.clone(), terms, config: self.config }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    fn combine(&self, other: &Self, s: Complex64) -> Result<Self> {
        check_modes(&self.modes, &other.modes)?;
        let mut acc = Accumulator::new();
        for (k, c) in &self.terms {
            acc.add(k.clone(), *c);
        }
        for (k, c) in &other.terms {
            acc.add(k.clone(), c * s);
        }
        Ok(Self { modes: self.modes.clone(), terms: acc.finish(self.config.zero_threshold), config: self.config })
    }

    /// Hermitian adjoint.
    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (Word { creators: w.annihilators.clone(), annihilators: w.creators.clone() }, c.conj()))
            .collect();
        Self { modes: self.modes.clone(), terms, config: self.config }
    }

    /// Normal-ordered product self·other.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_modes(&self.modes, &other.modes)?;
        let cap = self.config.degree_cap;
        let mut acc = Accumulator::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let c = c1 * c2;
                let mut overflow = None;
                matchings(&self.modes, &w1.annihilators, &w2.creators, false, &mut |x, a_left, c_left| {
                    let word = Word {
                        creators: merged(&w1.creators, c_left),
                        annihilators: merged(a_left, &w2.annihilators),
                    };
                    if word.degree() > cap {
                        overflow = Some(word.degree());
                        return;
                    }
                    acc.add(word, c * x);
                });
                if let Some(degree) = overflow {
                    return Err(Error::DegreeOverflow { degree, cap });
                }
            }
        }
        Ok(Self { modes: self.modes.clone(), terms: acc.finish(self.config.zero_threshold), config: self.config })
    }

    /// Applies the operator to a vector.
    pub fn apply(&self, x: &FockVector) -> Result<FockVector> {
        check_modes(&self.modes, &x.modes)?;
        let cap = self.config.degree_cap;
        let mut acc = Accumulator::new();
        for (w, c) in &self.terms {
            for (m, cx) in &x.terms {
                if w.annihilators.len() > m.len() {
                    continue;
                }
                let coeff = c * cx;
                let mut overflow = None;
                matchings(&self.modes, &w.annihilators, m, true, &mut |v, _, rest| {
                    let key = merged(&w.creators, rest);
                    if key.len() > cap {
                        overflow = Some(key.len());
                        return;
                    }
                    acc.add(key, coeff * v);
                });
                if let Some(degree) = overflow {
                    return Err(Error::DegreeOverflow { degree, cap });
                }
            }
        }
        Ok(FockVector { modes: x.modes.clone(), terms: acc.finish(x.config.zero_threshold), config: x.config })
    }

    /// Fock-vacuum expectation of self·other. Operators of degree at most one
    /// are contracted directly; anything else goes through the product.
    pub fn two_point(&self, other: &Self) -> Result<Complex64> {
        check_modes(&self.modes, &other.modes)?;
        if self.degree() > 1 || other.degree() > 1 {
            return Ok(self.mul(other)?.vacuum_expectation());
        }
        let mut s = self.vacuum_expectation() * other.vacuum_expectation();
        for (w1, c1) in &self.terms {
            let [l] = w1.annihilators[..] else { continue };
            let key = Word { creators: vec![l], annihilators: vec![] };
            if let Some(c2) = other.terms.get(&key) {
                s += c1 * c2 * contraction(&self.modes, l, l);
            }
        }
        Ok(s)
    }
}

/// Normal-ordered commutator [p, q].
pub fn commutator(p: &ModeOperator, q: &ModeOperator) -> Result<ModeOperator> {
    p.mul(q)?.sub(&q.mul(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Vec3;

    fn modes() -> Arc<ModeSet> {
        ModeSet::raw(vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 2.0, 0.0)]).unwrap()
    }

    #[test]
    fn ccr_signs() {
        let m = modes();
        for mu in 0..4 {
            for nu in 0..4 {
                let a = ModeOperator::annihilator(&m, Label::new(0, mu));
                let ad = ModeOperator::creator(&m, Label::new(0, nu));
                let c = commutator(&a, &ad).unwrap();
                let expect = if mu == nu { -METRIC[mu] } else { 0.0 };
                assert_eq!(c.vacuum_expectation(), Complex64::new(expect, 0.0));
                assert!(c.terms().len() <= 1);
            }
        }
    }

    #[test]
    fn bosonic_multiplicity() {
        let m = modes();
        let l = Label::new(1, 2);
        let x = FockVector::monomial(&m, &[l, l], Complex64::new(1.0, 0.0)).unwrap();
        let n = x.inner(&x).unwrap();
        assert_eq!(n, Complex64::new(2.0, 0.0));
        let a = ModeOperator::annihilator(&m, l);
        let y = a.apply(&x).unwrap();
        assert_eq!(y.terms().get(&vec![l]).copied(), Some(Complex64::new(2.0, 0.0)));
    }

    #[test]
    fn mismatched_sets_rejected() {
        let m1 = modes();
        let m2 = ModeSet::raw(vec![Vec3::new(3.0, 0.0, 0.0)]).unwrap();
        let x = FockVector::vacuum(&m1);
        let y = FockVector::vacuum(&m2);
        assert_eq!(x.inner(&y), Err(Error::ModeSetMismatch));
    }

    #[test]
    fn degree_cap_enforced() {
        let m = modes();
        let a = ModeOperator::creator(&m, Label::new(0, 1));
        let mut p = a.clone();
        for _ in 0..7 {
            p = p.mul(&a).unwrap();
        }
        assert_eq!(p.degree(), 8);
        assert!(matches!(p.mul(&a), Err(Error::DegreeOverflow { .. })));
    }
}

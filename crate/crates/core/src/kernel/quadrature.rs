use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// An integral value with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral<V = f64> {
    pub value: V,
    pub error: f64,
}

impl<V: Quadrable> Integral<V> {
    pub fn zero() -> Self {
        Self { value: V::zero(), error: 0.0 }
    }
}

impl<V: Quadrable> Add for Integral<V> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { value: self.value + rhs.value, error: self.error + rhs.error }
    }
}

/// Values that can be accumulated by the quadrature rules.
pub trait Quadrable: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Quadrable for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Quadrable for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Four real components, the shape of a potential.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct V4(pub [f64; 4]);

impl Add for V4 {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        V4(std::array::from_fn(|i| self.0[i] + r.0[i]))
    }
}
impl Sub for V4 {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        V4(std::array::from_fn(|i| self.0[i] - r.0[i]))
    }
}
impl Mul<f64> for V4 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        V4(self.0.map(|x| x * s))
    }
}
impl Quadrable for V4 {
    fn zero() -> Self {
        V4([0.0; 4])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// Four complex components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C4(pub [Complex64; 4]);

impl Add for C4 {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        C4(std::array::from_fn(|i| self.0[i] + r.0[i]))
    }
}
impl Sub for C4 {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        C4(std::array::from_fn(|i| self.0[i] - r.0[i]))
    }
}
impl Mul<f64> for C4 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        C4(self.0.map(|x| x * s))
    }
}
impl Quadrable for C4 {
    fn zero() -> Self {
        C4([Complex64::new(0.0, 0.0); 4])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.norm()))
    }
}

/// Gauss-Legendre nodes and weights on [−1, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, h * w))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule with `n` nodes, cached process-wide.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = cache.read().expect("rule cache poisoned").get(&n) {
        return r.clone();
    }
    let rule = Arc::new(GaussRule::compute(n.max(1)));
    cache.write().expect("rule cache poisoned").entry(n).or_insert(rule).clone()
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Gauss-Kronrod 7/15 on one panel; the error is |K15 − G7|.
pub fn gk15<V: Quadrable>(f: &mut impl FnMut(f64) -> V, a: f64, b: f64) -> Integral<V> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let d = h * XGK[j];
        let s = f(c - d) + f(c + d);
        k = k + s * WGK[j];
        if j % 2 == 1 {
            g = g + s * WG[j / 2];
        }
    }
    Integral { value: k * h, error: ((k - g) * h).magnitude() }
}

/// Fixed composite Gauss-Kronrod rule with `panels` equal panels.
pub fn composite_gk15<V: Quadrable>(mut f: impl FnMut(f64) -> V, a: f64, b: f64, panels: usize) -> Integral<V> {
    let n = panels.max(1);
    let h = (b - a) / n as f64;
    let mut acc = Integral::zero();
    for i in 0..n {
        let lo = a + h * i as f64;
        let hi = if i + 1 == n { b } else { lo + h };
        acc = acc + gk15(&mut f, lo, hi);
    }
    acc
}

/// Composite rule with panels no wider than `max_width`.
pub fn panels_of_width<V: Quadrable>(f: impl FnMut(f64) -> V, a: f64, b: f64, max_width: f64) -> Integral<V> {
    if b <= a {
        return Integral::zero();
    }
    let n = ((b - a) / max_width).ceil().max(1.0) as usize;
    composite_gk15(f, a, b, n)
}

/// Globally adaptive Gauss-Kronrod integration on a finite interval.
pub fn adaptive_gk15<V: Quadrable>(
    mut f: impl FnMut(f64) -> V,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<Integral<V>> {
    if !(a.is_finite() && b.is_finite()) {
        return domain("adaptive quadrature needs finite limits");
    }
    let first = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, first)];
    let mut total = first;
    loop {
        let tol = abs_tol.max(rel_tol * total.value.magnitude());
        if total.error <= tol {
            return Ok(total);
        }
        if panels.len() >= max_panels {
            return Err(Error::NonConvergence {
                context: "adaptive Gauss-Kronrod".into(),
                estimate: total.error,
                tolerance: tol,
            });
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .expect("non-empty panel list");
        let (lo, hi, old) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let left = gk15(&mut f, lo, mid);
        let right = gk15(&mut f, mid, hi);
        total = Integral {
            value: total.value - old.value + left.value + right.value,
            error: total.error - old.error + left.error + right.error,
        };
        panels.push((lo, mid, left));
        panels.push((mid, hi, right));
        if panels.len() % 64 == 0 {
            // Refresh the running sums to stop cancellation drift.
            total = panels.iter().fold(Integral::zero(), |acc, p| acc + p.2);
        }
    }
}

/// Node-count and tolerance settings shared by the integrators.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Radial momentum rule: k_max = `k_cut_sigmas`/σ, panel widths as a
    /// fraction of the shortest oscillation half-period.
    pub k_min: f64,
    pub k_cut_sigmas: f64,
    pub radial_panels_per_half_period: usize,
    /// Angular rule: Gauss-Legendre in cos θ times trapezoid in φ.
    pub n_theta: usize,
    pub n_phi: usize,
    /// Spatial convolution rule: radial panel widths in units of σ near sharp
    /// features and in units of the packet wavelength elsewhere.
    pub fine_panel_sigmas: f64,
    pub coarse_panel_wavelengths: f64,
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            k_min: 0.0,
            k_cut_sigmas: 9.1,
            radial_panels_per_half_period: 1,
            n_theta: 48,
            n_phi: 16,
            fine_panel_sigmas: 0.5,
            coarse_panel_wavelengths: 0.25,
            tolerance: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta == 0 || self.n_phi == 0 || self.radial_panels_per_half_period == 0 {
            return domain("quadrature node counts must be at least 1");
        }
        if !(self.k_min >= 0.0) || !(self.k_cut_sigmas > 0.0) {
            return domain("momentum range must satisfy 0 <= k_min < k_max");
        }
        if !(self.fine_panel_sigmas > 0.0 && self.coarse_panel_wavelengths > 0.0 && self.tolerance > 0.0) {
            return domain("panel widths and tolerance must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 10, 33] {
            let r = gauss_legendre(n);
            let deg = 2 * n - 1;
            let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((s - exact).abs() < 1e-13, "n={n}: {s} vs {exact}");
        }
    }

    #[test]
    fn kronrod_exact_on_degree_22() {
        let r = gk15(&mut |x: f64| x.powi(22), 0.0, 1.0);
        assert!((r.value - 1.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peak() {
        let f = |x: f64| 1.0 / (1e-4 + (x - 0.3) * (x - 0.3));
        let exact = (0.7f64 / 1e-2).atan() / 1e-2 + (0.3f64 / 1e-2).atan() / 1e-2;
        let r = adaptive_gk15(f, 0.0, 1.0, 1e-12, 1e-13, 2000).unwrap();
        assert!((r.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn adaptive_reports_failure() {
        let f = |x: f64| (1.0 / x.max(1e-300)).sin() / x.max(1e-300);
        assert!(matches!(
            adaptive_gk15(f, 0.0, 1.0, 1e-14, 1e-14, 20),
            Err(Error::NonConvergence { .. })
        ));
    }
}

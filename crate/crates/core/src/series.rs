//! Truncated complex power series and the products used on them.
//!
//! A [`TruncatedSeries`] of order `N` holds `a_0 … a_N`. Binary operations on
//! series of different orders truncate to the shorter one; nothing is ever
//! zero-padded upward.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::besselgen::BesselParams;
use crate::complexfn::{near_nonpositive_integer, POLE_TOL};
use crate::{Error, Result};
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 64;

/// Relative tolerance for coefficient identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Absolute floor used when scaling relative comparisons.
pub const ABS_FLOOR: f64 = 1e-300;

/// Tolerance on `a_0 = 0`, `a_1 = 1` when checking class-A normalization.
pub const NORMALIZATION_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    class_a: bool,
}

/// Equality compares coefficients; the class-A tag is bookkeeping.
impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl TruncatedSeries {
    /// Series with the given coefficients `a_0 … a_N`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a series needs at least one coefficient"));
        }
        if coeffs.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite("series coefficient"));
        }
        Ok(TruncatedSeries { coeffs, class_a: false })
    }

    /// Series flagged as normalized class A: `a_0 = 0` and `a_1 = 1`.
    pub fn class_a(coeffs: Vec<Complex64>) -> Result<Self> {
        let mut s = Self::new(coeffs)?;
        s.check_class_a()?;
        s.class_a = true;
        Ok(s)
    }

    /// Real coefficients, convenience for tests and examples.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![ZERO; order + 1],
            class_a: false,
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, ONE, order)
    }

    /// `scale · z^k`, truncated at `order` (zero if `k > order`).
    pub fn monomial(k: usize, scale: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        if k <= order {
            coeffs[k] = scale;
        }
        let class_a = k == 1 && scale == ONE && order >= 1;
        TruncatedSeries { coeffs, class_a }
    }

    /// The identity function `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(1, ONE, order)
    }

    /// `z/(1-z)` truncated: the identity element of the Hadamard product on
    /// class A.
    pub fn geometric(order: usize) -> Self {
        let mut coeffs = vec![ONE; order + 1];
        coeffs[0] = ZERO;
        TruncatedSeries {
            coeffs,
            class_a: order >= 1,
        }
    }

    fn check_class_a(&self) -> Result<()> {
        let a0 = self.coeff(0);
        if a0.norm() > NORMALIZATION_TOL {
            return Err(Error::Normalization { index: 0, value: a0 });
        }
        let a1 = self.coeff(1);
        if (a1 - ONE).norm() > NORMALIZATION_TOL {
            return Err(Error::Normalization { index: 1, value: a1 });
        }
        Ok(())
    }

    /// Whether the coefficients are normalized as `z + a_2 z² + …`, whether or
    /// not the flag was set at construction.
    pub fn satisfies_class_a(&self) -> bool {
        self.check_class_a().is_ok()
    }

    pub fn is_class_a(&self) -> bool {
        self.class_a
    }

    /// Truncation degree `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a_n`, or zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
            class_a: self.class_a && order >= 1,
        }
    }

    fn from_raw(coeffs: Vec<Complex64>) -> Self {
        TruncatedSeries { coeffs, class_a: false }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self::from_raw(self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| op(a, b)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_raw(self.coeffs.iter().map(|&a| a * factor).collect())
    }

    /// `c_n = Σ_{j≤n} a_j b_{n-j}`, truncated at the smaller order.
    pub fn cauchy_product(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..=order)
            .map(|n| (0..=n).fold(ZERO, |acc, j| acc + a[j] * b[n - j]))
            .collect();
        Self::from_raw(coeffs)
    }

    /// Coefficientwise product. Both arguments must vanish at the origin.
    pub fn hadamard_product(&self, other: &Self) -> Result<Self> {
        for s in [self, other] {
            let a0 = s.coeff(0);
            if a0.norm() > NORMALIZATION_TOL {
                return Err(Error::Normalization { index: 0, value: a0 });
            }
        }
        let mut out = self.zip_with(other, |a, b| a * b);
        out.coeffs[0] = ZERO;
        out.class_a = self.class_a && other.class_a;
        Ok(out)
    }

    /// `f′`, of order `N - 1` (order 0 stays order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_raw(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &a)| a * n as f64)
                .collect(),
        )
    }

    /// `z f′`: coefficients `n a_n`, same order.
    pub fn z_times_derivative(&self) -> Self {
        Self::from_raw(self.coeffs.iter().enumerate().map(|(n, &a)| a * n as f64).collect())
    }

    /// `z² f″`: coefficients `n(n-1) a_n`, same order.
    pub fn z2_times_second_derivative(&self) -> Self {
        Self::from_raw(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &a)| a * (n as f64 * (n as f64 - 1.0)))
                .collect(),
        )
    }

    /// `f(z)/z` for `f(0) = 0`, of order `N - 1`.
    pub fn div_by_z(&self) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0 != ZERO {
            return Err(Error::Normalization { index: 0, value: a0 });
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Ok(Self::from_raw(self.coeffs[1..].to_vec()))
    }

    /// `z f(z)`, of order `N + 1`.
    pub fn times_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_raw(coeffs)
    }

    /// `f(λz)`: coefficients `a_n λ^n`.
    pub fn scale_argument(&self, lambda: Complex64) -> Self {
        let mut power = ONE;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let out = a * power;
                power *= lambda;
                out
            })
            .collect();
        Self::from_raw(coeffs)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
    }

    /// `(f(z), f′(z), f″(z))` in one Horner pass.
    pub fn evaluate_with_derivatives(&self, z: Complex64) -> [Complex64; 3] {
        let mut p = ZERO;
        let mut d1 = ZERO;
        let mut d2 = ZERO;
        for &a in self.coeffs.iter().rev() {
            d2 = d2 * z + d1;
            d1 = d1 * z + p;
            p = p * z + a;
        }
        [p, d1, d2 * 2.0]
    }

    /// Sampled `max_{|z|=r} |f(z)|` over `samples` equally spaced angles.
    pub fn sup_on_circle(&self, r: f64, samples: usize) -> SupEstimate {
        sup_on_circle_of(|z| self.evaluate(z), r, samples)
    }

    /// [`Self::sup_on_circle`] followed by a golden-section search on the
    /// bracket around the sampled maximizer.
    pub fn sup_on_circle_refined(&self, r: f64, samples: usize) -> SupEstimate {
        refine_sup(|z| self.evaluate(z), r, samples, self.sup_on_circle(r, samples))
    }

    /// Maximum coefficientwise relative difference, see [`relative_diff`].
    pub fn max_relative_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| relative_diff(a, b))
            .fold(0.0, f64::max)
    }
}

/// `|a - b| / max(|a|, |b|, ABS_FLOOR)`.
pub fn relative_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(ABS_FLOOR)
}

/// Sampled supremum of `|f|` on a circle, with the maximizing angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub theta: f64,
}

impl SupEstimate {
    pub fn point(&self, r: f64) -> Complex64 {
        Complex64::from_polar(r, self.theta)
    }
}

pub fn sup_on_circle_of(f: impl Fn(Complex64) -> Complex64, r: f64, samples: usize) -> SupEstimate {
    let step = 2.0 * PI / samples as f64;
    let mut best = SupEstimate {
        value: f64::NEG_INFINITY,
        theta: 0.0,
    };
    for j in 0..samples {
        let theta = step * j as f64;
        let v = f(Complex64::from_polar(r, theta)).norm();
        if v > best.value {
            best = SupEstimate { value: v, theta };
        }
    }
    best
}

fn refine_sup(f: impl Fn(Complex64) -> Complex64, r: f64, samples: usize, coarse: SupEstimate) -> SupEstimate {
    let step = 2.0 * PI / samples as f64;
    let g = |t: f64| f(Complex64::from_polar(r, t)).norm();
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (coarse.theta - step, coarse.theta + step);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..60 {
        if g1 < g2 {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = g(x1);
        }
    }
    let (theta, value) = if g1 > g2 { (x1, g1) } else { (x2, g2) };
    if value > coarse.value {
        SupEstimate {
            value,
            theta: theta - 2.0 * PI * (theta / (2.0 * PI)).floor(),
        }
    } else {
        coarse
    }
}

/// Radii and angle counts used to discretize the open unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angular_samples: usize,
}

impl DiskGrid {
    pub const MAX_RADIUS: f64 = 0.999;
    pub const MIN_SAMPLES: usize = 256;

    pub fn new(radii: Vec<f64>, angular_samples: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::Invalid("grid needs at least one radius"));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r <= Self::MAX_RADIUS)) {
            return Err(Error::Invalid("grid radii must lie in (0, 0.999]"));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("grid radii must be strictly increasing"));
        }
        if angular_samples < Self::MIN_SAMPLES {
            return Err(Error::Invalid("grid needs at least 256 angular samples"));
        }
        Ok(DiskGrid { radii, angular_samples })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angular_samples(&self) -> usize {
        self.angular_samples
    }

    pub fn max_radius(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angular_samples
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid points, radius-major, angles increasing from 0.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let step = 2.0 * PI / self.angular_samples as f64;
        self.radii
            .iter()
            .flat_map(move |&r| (0..self.angular_samples).map(move |j| Complex64::from_polar(r, step * j as f64)))
    }
}

impl Default for DiskGrid {
    /// Radii {0.5, 0.9, 0.99, 0.999} × 4096 angles.
    fn default() -> Self {
        DiskGrid {
            radii: vec![0.5, 0.9, 0.99, 0.999],
            angular_samples: 4096,
        }
    }
}

/// Upper bound on `Σ_{n≥N} |φ-coefficient_{n+1}| r^{n+1}`, i.e. on what an
/// order-`N` truncation of `φ_{κ,c}` (or of any `B_κ^c f` with `|a_n| ≤ 1`)
/// drops on `|z| ≤ r`.
///
/// Terms are summed explicitly until the term ratio `|c| r / (4 |κ+n| (n+1))`
/// drops to 1/2 past the point where it is monotone, and the rest is bounded
/// by a geometric series.
pub fn tail_bound(params: &BesselParams, r: f64, order: usize) -> Result<f64> {
    let kappa = params.kappa();
    if near_nonpositive_integer(kappa, POLE_TOL) {
        return Err(Error::Domain {
            what: "kappa is a nonpositive integer",
            value: kappa,
        });
    }
    let c = params.c().norm();
    if c == 0.0 {
        return Ok(0.0);
    }
    let ratio = |n: usize| c * r / (4.0 * (kappa + n as f64).norm() * (n as f64 + 1.0));
    // |κ+n| increases for n ≥ -Re κ, and so does n+1; past that the ratio is decreasing.
    let monotone_from = (-kappa.re).ceil().max(0.0) as usize;
    // term_n = |c|^n r^{n+1} / (4^n |(κ)_n| n!)
    let mut term = r;
    let mut n = 0usize;
    while n < order {
        term *= ratio(n);
        n += 1;
    }
    let mut sum = 0.0;
    loop {
        sum += term;
        let q = ratio(n);
        if n >= monotone_from && q <= 0.5 {
            sum += term * q / (1.0 - q);
            break;
        }
        term *= q;
        n += 1;
    }
    Ok(sum * (1.0 + 1e-12))
}

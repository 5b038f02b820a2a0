//! Sampling auditor for the disk-case admissibility conditions.
//!
//! A functional `φ(u, v, w; z)` is admissible for a class when its value
//! avoids a region `Ω` at every boundary point `(u, v, w)` the class
//! prescribes. The boundary points come from a pre-image triple
//! `(r, s, t) = (q(e^{iθ}), k e^{iθ} q'(e^{iθ}), L)` pushed through the
//! transformation that links `p, zp', z²p''` to the operator values.
//! The audit samples `(θ, k, L)` and reports what it finds; it can expose a
//! violation but never certify admissibility.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::complexfn::POLE_TOL;
use crate::{Error, Result};
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative tolerance on region boundaries and on the `L` constraint.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// `|1 + M e^{iθ}|` (and the other `H1` denominators) below this is degenerate.
pub const DEGENERATE_TOL: f64 = 1e-9;

/// `Re(L e^{-iθ}) ≥ (k-1) k M`, returned as `(lhs, rhs)`.
pub fn constraint_sides(theta: f64, k: f64, l: Complex64, m: f64) -> (f64, f64) {
    ((l * Complex64::from_polar(1.0, -theta)).re, (k - 1.0) * k * m)
}

/// A sample `(θ, k, L, M, κ)` of the boundary set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissiblePoint {
    theta: f64,
    k: f64,
    l: Complex64,
    m: f64,
    kappa: Complex64,
}

impl AdmissiblePoint {
    /// `θ` is reduced to `[0, 2π)`.
    pub fn new(theta: f64, k: f64, l: Complex64, m: f64, kappa: Complex64) -> Result<Self> {
        if !theta.is_finite() || !l.is_finite() || !kappa.is_finite() {
            return Err(Error::Invalid("admissible point has non-finite inputs"));
        }
        if !(k >= 1.0 && k.is_finite()) {
            return Err(Error::Invalid("k must be a finite real >= 1"));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Invalid("M must be positive"));
        }
        let (lhs, rhs) = constraint_sides(theta, k, l, m);
        if lhs < rhs - BOUNDARY_TOL * rhs.abs().max(1.0) {
            return Err(Error::Constraint { lhs, rhs });
        }
        let turn = 2.0 * PI;
        let theta = theta - turn * (theta / turn).floor();
        Ok(AdmissiblePoint { theta, k, l, m, kappa })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l(&self) -> Complex64 {
        self.l
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn kappa(&self) -> Complex64 {
        self.kappa
    }

    fn e(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

/// Values fed to `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple {
    pub u: Complex64,
    pub v: Complex64,
    pub w: Complex64,
}

/// Which boundary set, and hence which transformation, is in play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdmissibleClass {
    /// `q(z) = Mz`; `(u, v, w) = (B_{κ+1}f, B_κ f, B_{κ-1}f)`.
    H,
    /// `q(z) = 1 + Mz`; `(u, v, w)` are consecutive ratios `B_{j}f / B_{j+1}f`.
    H1,
    /// `q(z) = 1 + Mz`; `(u, v, w) = (B_{κ+1}f, B_κ f, B_{κ-1}f) / z`.
    H2,
}

impl AdmissibleClass {
    pub const ALL: [AdmissibleClass; 3] = [AdmissibleClass::H, AdmissibleClass::H1, AdmissibleClass::H2];

    pub fn name(self) -> &'static str {
        match self {
            AdmissibleClass::H => "H",
            AdmissibleClass::H1 => "H1",
            AdmissibleClass::H2 => "H2",
        }
    }
}

impl fmt::Display for AdmissibleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdmissibleClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or(Error::Invalid("unknown admissibility class"))
    }
}

fn check_kappa(kappa: Complex64, excluded: &[f64]) -> Result<()> {
    for &n in excluded {
        if (kappa - n).norm() <= POLE_TOL {
            return Err(Error::Domain {
                what: "kappa is excluded for this class",
                value: kappa,
            });
        }
    }
    Ok(())
}

/// `u = r`, `v = (s + (κ-1) r)/κ`, `w = (t + 2(κ-1)s + (κ-1)(κ-2) r)/(κ(κ-1))`.
pub fn transform_h(r: Complex64, s: Complex64, t: Complex64, kappa: Complex64) -> Result<Triple> {
    check_kappa(kappa, &[0.0, 1.0])?;
    let km1 = kappa - 1.0;
    Ok(Triple {
        u: r,
        v: (s + km1 * r) / kappa,
        w: (t + 2.0 * km1 * s + km1 * (kappa - 2.0) * r) / (kappa * km1),
    })
}

/// `u = r`, `v = (s/r + κr - 1)/(κ-1)`,
/// `w = (s/r + κr - 2 + (s/r + t/r - (s/r)² + κs)/(s/r + κr - 1))/(κ-2)`.
pub fn transform_h1(r: Complex64, s: Complex64, t: Complex64, kappa: Complex64) -> Result<Triple> {
    check_kappa(kappa, &[0.0, 1.0, 2.0])?;
    if r.norm() < DEGENERATE_TOL {
        return Err(Error::DegenerateDenominator { modulus: r.norm() });
    }
    let sr = s / r;
    let base = sr + kappa * r - 1.0;
    if base.norm() < DEGENERATE_TOL {
        return Err(Error::DegenerateDenominator { modulus: base.norm() });
    }
    Ok(Triple {
        u: r,
        v: base / (kappa - 1.0),
        w: (base - 1.0 + (sr + t / r - sr * sr + kappa * s) / base) / (kappa - 2.0),
    })
}

/// `u = r`, `v = (s + κr)/κ`, `w = (t + 2κs + κ(κ-1) r)/(κ(κ-1))`.
pub fn transform_h2(r: Complex64, s: Complex64, t: Complex64, kappa: Complex64) -> Result<Triple> {
    check_kappa(kappa, &[0.0, 1.0])?;
    Ok(Triple {
        u: r,
        v: (s + kappa * r) / kappa,
        w: (t + 2.0 * kappa * s + kappa * (kappa - 1.0) * r) / (kappa * (kappa - 1.0)),
    })
}

/// Boundary point for `q(z) = Mz`: `(r, s, t) = (M e^{iθ}, k M e^{iθ}, L)`.
pub fn build_point_h(pt: &AdmissiblePoint) -> Result<Triple> {
    let me = pt.m * pt.e();
    transform_h(me, pt.k * me, pt.l, pt.kappa)
}

/// Boundary point for `q(z) = 1 + Mz` with the ratio transformation.
pub fn build_point_h1(pt: &AdmissiblePoint) -> Result<Triple> {
    let me = pt.m * pt.e();
    let r = ONE + me;
    if r.norm() < DEGENERATE_TOL {
        return Err(Error::DegenerateDenominator { modulus: r.norm() });
    }
    transform_h1(r, pt.k * me, pt.l, pt.kappa)
}

/// Boundary point for `q(z) = 1 + Mz` with the `B f / z` transformation.
pub fn build_point_h2(pt: &AdmissiblePoint) -> Result<Triple> {
    let me = pt.m * pt.e();
    transform_h2(ONE + me, pt.k * me, pt.l, pt.kappa)
}

pub fn build_point(class: AdmissibleClass, pt: &AdmissiblePoint) -> Result<Triple> {
    match class {
        AdmissibleClass::H => build_point_h(pt),
        AdmissibleClass::H1 => build_point_h1(pt),
        AdmissibleClass::H2 => build_point_h2(pt),
    }
}

/// A functional `φ(u, v, w; z)`.
#[derive(Clone, Copy)]
pub enum Functional3 {
    V,
    VMinusU,
    VMinusOne,
    Custom {
        name: &'static str,
        eval: fn(Complex64, Complex64, Complex64, Complex64) -> Complex64,
    },
}

impl Functional3 {
    pub const NAMED: [Functional3; 3] = [Functional3::V, Functional3::VMinusU, Functional3::VMinusOne];

    pub fn name(&self) -> &'static str {
        match self {
            Functional3::V => "v",
            Functional3::VMinusU => "v-u",
            Functional3::VMinusOne => "v-1",
            Functional3::Custom { name, .. } => name,
        }
    }

    pub fn eval(&self, t: &Triple, z: Complex64) -> Complex64 {
        match self {
            Functional3::V => t.v,
            Functional3::VMinusU => t.v - t.u,
            Functional3::VMinusOne => t.v - ONE,
            Functional3::Custom { eval, .. } => eval(t.u, t.v, t.w, z),
        }
    }
}

impl fmt::Debug for Functional3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functional3({})", self.name())
    }
}

impl PartialEq for Functional3 {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Functional3::Custom { name: a, eval: f }, Functional3::Custom { name: b, eval: g }) => {
                a == b && core::ptr::fn_addr_eq(*f, *g)
            }
            _ => self.name() == other.name(),
        }
    }
}

impl FromStr for Functional3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMED
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or(Error::Invalid("unknown functional"))
    }
}

/// The region `Ω` a functional must avoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionSpec {
    /// `|w - center| < radius`.
    Disk { center: Complex64, radius: f64 },
    /// `|w - center| ≥ radius`.
    ComplementDisk { center: Complex64, radius: f64 },
    /// `Re(conj(normal)·w) > offset`.
    HalfPlane { normal: Complex64, offset: f64 },
}

impl RegionSpec {
    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Invalid("region radius must be positive"));
        }
        Ok(RegionSpec::Disk { center, radius })
    }

    pub fn complement_disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Invalid("region radius must be positive"));
        }
        Ok(RegionSpec::ComplementDisk { center, radius })
    }

    pub fn half_plane(normal: Complex64, offset: f64) -> Result<Self> {
        if normal.norm() == 0.0 || !offset.is_finite() {
            return Err(Error::Invalid("half-plane needs a nonzero normal and finite offset"));
        }
        Ok(RegionSpec::HalfPlane { normal, offset })
    }

    /// Membership with boundary points counted as outside: only values
    /// clearly inside by [`BOUNDARY_TOL`] (relative) register as a hit.
    pub fn contains(&self, w: Complex64) -> bool {
        match *self {
            RegionSpec::Disk { center, radius } => (w - center).norm() < radius * (1.0 - BOUNDARY_TOL),
            RegionSpec::ComplementDisk { center, radius } => (w - center).norm() > radius * (1.0 + BOUNDARY_TOL),
            RegionSpec::HalfPlane { normal, offset } => {
                (normal.conj() * w).re - offset > BOUNDARY_TOL * offset.abs().max(normal.norm())
            }
        }
    }

    /// The region a named functional is expected to avoid, if any.
    pub fn for_functional(phi: &Functional3, class: AdmissibleClass, m: f64, kappa: Complex64) -> Option<Result<Self>> {
        let zero = Complex64::new(0.0, 0.0);
        let radius = match (phi, class) {
            (Functional3::V, AdmissibleClass::H) => m,
            (Functional3::VMinusU, AdmissibleClass::H | AdmissibleClass::H2) => m / kappa.norm(),
            (Functional3::VMinusU, AdmissibleClass::H1) => m * m / ((kappa - 1.0).norm() * (1.0 + m)),
            (Functional3::VMinusOne, AdmissibleClass::H2) => m,
            _ => return None,
        };
        Some(Self::disk(zero, radius))
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionSpec::Disk { center, radius } => write!(f, "disk({center}, {radius})"),
            RegionSpec::ComplementDisk { center, radius } => {
                write!(f, "complement_disk({center}, {radius})")
            }
            RegionSpec::HalfPlane { normal, offset } => write!(f, "halfplane({normal}, {offset})"),
        }
    }
}

/// Sampling resolution of an audit.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub theta_samples: usize,
    /// Sorted ascending, all `≥ 1`.
    pub k_grid: Vec<f64>,
    /// Offsets `t/M` along the ray `L = ((k-1)kM + t) e^{iθ}`.
    pub ray_offsets: Vec<f64>,
    /// Also probe `L ± iM e^{iθ}` at each ray point.
    pub imaginary_perturbation: bool,
    /// The `z` argument passed to `φ`.
    pub z: Complex64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            theta_samples: 360,
            k_grid: alloc::vec![1.0, 1.25, 1.5, 2.0, 4.0, 10.0],
            ray_offsets: alloc::vec![0.0, 1.0, 10.0],
            imaginary_perturbation: true,
            z: Complex64::new(0.0, 0.0),
        }
    }
}

impl SampleSpec {
    fn validate(&self) -> Result<()> {
        if self.theta_samples == 0 || self.k_grid.is_empty() || self.ray_offsets.is_empty() {
            return Err(Error::Invalid("audit sample grid is empty"));
        }
        if self.k_grid[0] < 1.0 || self.k_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(
                "k grid must be strictly increasing and start at or above 1",
            ));
        }
        if self.ray_offsets.iter().any(|t| t.is_nan() || *t < 0.0) {
            return Err(Error::Invalid("ray offsets must be nonnegative"));
        }
        Ok(())
    }

    fn l_samples(&self, theta: f64, k: f64, m: f64) -> Vec<Complex64> {
        let e = Complex64::from_polar(1.0, theta);
        let base = (k - 1.0) * k * m;
        let mut out = Vec::new();
        for &t in &self.ray_offsets {
            let along = base + t * m;
            out.push(along * e);
            if self.imaginary_perturbation {
                out.push(Complex64::new(along, m) * e);
                out.push(Complex64::new(along, -m) * e);
            }
        }
        out
    }
}

/// A sampled point where `φ` lands in `Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub theta: f64,
    pub k: f64,
    pub l: Complex64,
    pub phi: Complex64,
}

/// Outcome of an audit.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub functional: &'static str,
    pub class: AdmissibleClass,
    pub region: RegionSpec,
    pub m: f64,
    pub kappa: Complex64,
    pub points_checked: usize,
    /// Points skipped because a denominator vanished.
    pub degenerate_points: usize,
    /// In lexicographic `(θ index, k, L index)` order.
    pub violations: Vec<Violation>,
    /// Per `θ` sample: smallest grid `k` from which every larger grid `k`
    /// avoids `Ω`; `None` if even the largest `k` lands in `Ω`.
    pub min_k_per_theta: Vec<Option<f64>>,
    pub k_grid: Vec<f64>,
}

impl AuditReport {
    /// Largest per-`θ` min-k, or `None` if some `θ` never avoids `Ω`.
    pub fn min_k(&self) -> Option<f64> {
        self.min_k_per_theta
            .iter()
            .try_fold(f64::NEG_INFINITY, |acc, k| k.map(|k| acc.max(k)))
    }

    /// Width of the grid interval `(k_prev, min_k]` the avoidance threshold
    /// lies in; 0 when avoidance starts at the first grid point.
    pub fn min_k_resolution(&self) -> Option<f64> {
        let k = self.min_k()?;
        let i = self.k_grid.iter().position(|&g| g == k)?;
        Some(if i == 0 { 0.0 } else { k - self.k_grid[i - 1] })
    }

    pub fn violation_free(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "phi={} class={} region={} M={} kappa={}: ",
            self.functional, self.class, self.region, self.m, self.kappa
        )?;
        match self.violations.first() {
            None => write!(f, "no violation found at resolution {} points", self.points_checked),
            Some(v) => write!(
                f,
                "{} violations; first at theta={} k={} L={} phi={}",
                self.violations.len(),
                v.theta,
                v.k,
                v.l,
                v.phi
            ),
        }
    }
}

/// Samples the boundary set of `class` and records where `φ` enters `region`.
pub fn audit(
    phi: &Functional3,
    region: &RegionSpec,
    class: AdmissibleClass,
    m: f64,
    kappa: Complex64,
    spec: &SampleSpec,
) -> Result<AuditReport> {
    spec.validate()?;
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Invalid("M must be positive"));
    }
    let excluded: &[f64] = if class == AdmissibleClass::H1 {
        &[0.0, 1.0, 2.0]
    } else {
        &[0.0, 1.0]
    };
    check_kappa(kappa, excluded)?;

    let mut report = AuditReport {
        functional: phi.name(),
        class,
        region: *region,
        m,
        kappa,
        points_checked: 0,
        degenerate_points: 0,
        violations: Vec::new(),
        min_k_per_theta: Vec::with_capacity(spec.theta_samples),
        k_grid: spec.k_grid.clone(),
    };

    for i in 0..spec.theta_samples {
        let theta = 2.0 * PI * i as f64 / spec.theta_samples as f64;
        let mut hit_at_k = alloc::vec![false; spec.k_grid.len()];
        for (ki, &k) in spec.k_grid.iter().enumerate() {
            for l in spec.l_samples(theta, k, m) {
                let pt = AdmissiblePoint::new(theta, k, l, m, kappa)?;
                let triple = match build_point(class, &pt) {
                    Ok(t) => t,
                    Err(Error::DegenerateDenominator { .. }) => {
                        report.degenerate_points += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                report.points_checked += 1;
                let value = phi.eval(&triple, spec.z);
                if region.contains(value) {
                    hit_at_k[ki] = true;
                    report.violations.push(Violation {
                        theta,
                        k,
                        l,
                        phi: value,
                    });
                }
            }
        }
        let min_k = match hit_at_k.iter().rposition(|&h| h) {
            None => Some(spec.k_grid[0]),
            Some(last) => spec.k_grid.get(last + 1).copied(),
        };
        report.min_k_per_theta.push(min_k);
    }
    Ok(report)
}

//! Seeded test-function families and the default `(p, b, c)` sweep box.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::besselgen::BesselParams;
use crate::series::TruncatedSeries;
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

/// Bumped whenever the random family changes shape, so reports can record
/// which generator produced their inputs.
pub const FAMILY_VERSION: u32 = 1;

/// Default seed for the random members of the family.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// A named class-A test function.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub label: String,
    pub series: TruncatedSeries,
}

/// Class-A series `z + Σ_{n≥2} a_n z^n` with `a_n` uniform in the closed
/// unit disk, drawn from a ChaCha8 stream keyed by `(seed, index)`.
pub fn random_class_a(seed: u64, index: u64, order: usize) -> TruncatedSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Complex64::new(0.0, 0.0));
    if order >= 1 {
        coeffs.push(Complex64::new(1.0, 0.0));
    }
    for _ in 2..=order {
        let r = rng.gen::<f64>().sqrt();
        let theta = 2.0 * PI * rng.gen::<f64>();
        coeffs.push(Complex64::from_polar(r, theta));
    }
    TruncatedSeries::class_a(coeffs).expect("a_0 = 0 and a_1 = 1 by construction")
}

/// `z/(1-z)`, `z + z²/2`, then `random_count` seeded random series.
pub fn standard_family(seed: u64, random_count: usize, order: usize) -> Vec<TestFunction> {
    let mut out = Vec::with_capacity(random_count + 2);
    out.push(TestFunction {
        label: "z/(1-z)".into(),
        series: TruncatedSeries::geometric(order),
    });
    let mut half = TruncatedSeries::identity(order).into_coeffs();
    if order >= 2 {
        half[2] = Complex64::new(0.5, 0.0);
    }
    out.push(TestFunction {
        label: "z+z^2/2".into(),
        series: TruncatedSeries::class_a(half).expect("normalized"),
    });
    for i in 0..random_count {
        out.push(TestFunction {
            label: format!("random[{seed}:{i}]"),
            series: random_class_a(seed, i as u64, order),
        });
    }
    out
}

/// The seven-member family: two fixed functions and five random ones.
pub fn default_family(seed: u64, order: usize) -> Vec<TestFunction> {
    standard_family(seed, 5, order)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Default `p` values of the sweep box.
pub fn default_p_values() -> Vec<Complex64> {
    alloc::vec![c(0.0, 0.0), c(0.5, 0.0), c(1.25, 0.0), c(2.0, 0.0), c(0.75, 0.5)]
}

/// Default `b` values of the sweep box.
pub fn default_b_values() -> Vec<Complex64> {
    alloc::vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(1.0, -0.5)]
}

/// Default `c` values of the sweep box, all with `|c| ≤ 2`.
pub fn default_c_values() -> Vec<Complex64> {
    alloc::vec![c(-2.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.2, 1.2)]
}

/// Cartesian product `p × b × c` in that nesting order, dropping points whose
/// `κ` hits a pole.
pub fn parameter_box(ps: &[Complex64], bs: &[Complex64], cs: &[Complex64]) -> Vec<BesselParams> {
    let mut out = Vec::with_capacity(ps.len() * bs.len() * cs.len());
    for &p in ps {
        for &b in bs {
            for &c in cs {
                if let Ok(params) = BesselParams::new(p, b, c) {
                    out.push(params);
                }
            }
        }
    }
    out
}

/// The 125-point default box; every member has `Re κ ∈ [0.5, 4]` and `|c| ≤ 2`.
pub fn default_parameter_box() -> Vec<BesselParams> {
    parameter_box(&default_p_values(), &default_b_values(), &default_c_values())
}

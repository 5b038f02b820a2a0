//! Complex Gamma and Pochhammer symbols.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

/// Scalar type for every coefficient, argument and parameter.
pub type ComplexScalar = Complex64;

/// Absolute distance to a nonpositive integer below which a point is a pole.
pub const POLE_TOL: f64 = 1e-12;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
// sqrt(2π)
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// True when `z` lies within `tol` of one of `0, -1, -2, …`.
pub fn near_nonpositive_integer(z: Complex64, tol: f64) -> bool {
    let n = z.re.round().min(0.0);
    (z - n).norm() <= tol
}

/// `Γ(z)`.
///
/// Lanczos approximation (g = 7, nine terms) on `Re z ≥ 1/2`, reflection
/// `Γ(z) Γ(1-z) = π / sin(πz)` below that.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("gamma argument"));
    }
    if near_nonpositive_integer(z, POLE_TOL) {
        return Err(Error::Pole { at: z });
    }
    let value = if z.re < 0.5 {
        let reflected = lanczos(Complex64::new(1.0, 0.0) - z);
        Complex64::new(PI, 0.0) / (sin_pi(z) * reflected)
    } else {
        lanczos(z)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("gamma overflow"))
    }
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    ((z + 0.5) * t.ln() - t).exp() * x * SQRT_TWO_PI
}

/// `sin(πz)` with the real part reduced modulo 2 first, so that values near
/// integers keep their relative accuracy.
fn sin_pi(z: Complex64) -> Complex64 {
    let x = z.re - 2.0 * (z.re / 2.0).round();
    let y = PI * z.im;
    let (s, c) = (PI * x).sin_cos();
    Complex64::new(s * y.cosh(), c * y.sinh())
}

/// Rising factorial `(λ)_n = λ(λ+1)…(λ+n-1)`, with `(λ)_0 = 1` for every `λ`.
///
/// Always the direct product: `(λ)_{n+1}` is `(λ)_n · (λ+n)` in exactly one
/// multiply.
pub fn pochhammer(lambda: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..n {
        acc *= lambda + j as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let g = gamma(c(0.5, 0.0)).unwrap();
        assert!(rel(g, c(PI.sqrt(), 0.0)) < 1e-14);
    }

    #[test]
    fn gamma_factorials() {
        let mut fact = 1.0;
        for n in 1..20 {
            let g = gamma(c(n as f64, 0.0)).unwrap();
            assert!(rel(g, c(fact, 0.0)) < 1e-13, "n={n}");
            fact *= n as f64;
        }
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
    }

    #[test]
    fn gamma_poles() {
        for n in 0..6 {
            let z = c(-(n as f64), 0.0);
            assert!(matches!(gamma(z), Err(Error::Pole { .. })));
        }
        assert!(matches!(gamma(c(-3.0 + 5e-13, 0.0)), Err(Error::Pole { .. })));
        assert!(gamma(c(-3.0 + 1e-9, 0.0)).is_ok());
        // Positive integers are not poles.
        assert!(!near_nonpositive_integer(c(1.0, 0.0), POLE_TOL));
        assert!(near_nonpositive_integer(c(0.0, 1e-13), POLE_TOL));
    }

    #[test]
    fn pochhammer_zero_length_is_one() {
        for lambda in [c(0.0, 0.0), c(-3.0, 0.0), c(2.5, -1.0)] {
            assert_eq!(pochhammer(lambda, 0), c(1.0, 0.0));
        }
    }

    #[test]
    fn pochhammer_of_one_is_factorial() {
        assert_eq!(pochhammer(c(1.0, 0.0), 5), c(120.0, 0.0));
    }

    #[test]
    fn pochhammer_step_is_single_multiply() {
        let lambda = c(0.3, -1.7);
        for n in 0..25 {
            let step = pochhammer(lambda, n) * (lambda + n as f64);
            assert_eq!(pochhammer(lambda, n + 1), step);
        }
    }

    #[test]
    fn gamma_recurrence_on_grid() {
        for i in 0..12 {
            for j in 0..9 {
                let z = c(-5.3 + 0.9 * i as f64, -4.0 + 1.0 * j as f64);
                let lhs = gamma(z + 1.0).unwrap();
                let rhs = z * gamma(z).unwrap();
                assert!(rel(lhs, rhs) < 1e-11, "z={z}");
            }
        }
    }

    #[test]
    fn pochhammer_matches_gamma_ratio() {
        for lambda in [c(0.7, 0.0), c(-2.5, 1.5), c(3.0, -4.0), c(9.5, 2.0), c(0.2, 7.0)] {
            for n in 0..=30 {
                let direct = pochhammer(lambda, n);
                let ratio = gamma(lambda + n as f64).unwrap() / gamma(lambda).unwrap();
                assert!(rel(ratio, direct) < 1e-10, "lambda={lambda} n={n}");
            }
        }
    }
}

//! Series operations against exact rational recomputation at order 8.

use bessel_subord_core::besselgen::{BesselParams, HypergeometricParams};
use bessel_subord_core::operator::{apply, bessel_operator, OperatorSpec};
use bessel_subord_core::series::TruncatedSeries;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Q = Complex<BigRational>;

const ORDER: usize = 8;
const TOL: f64 = 1e-13;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn q(re: (i64, i64), im: (i64, i64)) -> Q {
    Complex::new(rat(re.0, re.1), rat(im.0, im.1))
}

fn to_f64(x: &Q) -> Complex64 {
    Complex64::new(x.re.to_f64().unwrap(), x.im.to_f64().unwrap())
}

fn exact(x: Complex64) -> Q {
    Complex::new(
        BigRational::from_float(x.re).unwrap(),
        BigRational::from_float(x.im).unwrap(),
    )
}

fn qnorm_f64(x: &Q) -> f64 {
    to_f64(x).norm()
}

/// Largest relative error of `approx` against exact coefficients, with the
/// difference formed in exact arithmetic.
fn max_rel_err(approx: &TruncatedSeries, truth: &[Q]) -> f64 {
    assert_eq!(approx.coeffs().len(), truth.len());
    let scale = truth.iter().map(qnorm_f64).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    approx
        .coeffs()
        .iter()
        .zip(truth)
        .map(|(&a, t)| {
            let diff = qnorm_f64(&(exact(a) - t.clone()));
            if t.is_zero() {
                diff / scale
            } else {
                diff / qnorm_f64(t)
            }
        })
        .fold(0.0, f64::max)
}

/// Small-denominator rational test coefficients, with `a_0 = 0`, `a_1 = 1`
/// when `class_a` is set.
fn rational_series(seed: i64, class_a: bool) -> Vec<Q> {
    (0..=ORDER as i64)
        .map(|n| {
            if class_a && n == 0 {
                Q::zero()
            } else if class_a && n == 1 {
                Q::one()
            } else {
                q(((seed * 7 + n * 3) % 11 - 5, 4 + n % 3), ((seed + 5 * n) % 9 - 4, 8))
            }
        })
        .collect()
}

fn to_series(coeffs: &[Q]) -> TruncatedSeries {
    TruncatedSeries::new(coeffs.iter().map(to_f64).collect()).unwrap()
}

fn exact_phi(kappa: &Q, c: &Q) -> Vec<Q> {
    let mut out = vec![Q::zero(), Q::one()];
    let four = q((4, 1), (0, 1));
    for n in 0..(ORDER - 1) {
        let k = q((n as i64, 1), (0, 1));
        let next = out[n + 1].clone() * (-c.clone()) / (four.clone() * (kappa.clone() + k.clone()) * (k + Q::one()));
        out.push(next);
    }
    out
}

#[test]
fn cauchy_matches_exact() {
    for seed in 0..5 {
        let a = rational_series(seed, false);
        let b = rational_series(seed + 11, false);
        let truth: Vec<Q> = (0..=ORDER)
            .map(|n| (0..=n).fold(Q::zero(), |acc, j| acc + a[j].clone() * b[n - j].clone()))
            .collect();
        let err = max_rel_err(&to_series(&a).cauchy_product(&to_series(&b)), &truth);
        assert!(err < TOL, "seed {seed}: {err:e}");
    }
}

#[test]
fn hadamard_matches_exact() {
    for seed in 0..5 {
        let a = rational_series(seed, true);
        let b = rational_series(seed + 3, true);
        let truth: Vec<Q> = a.iter().zip(&b).map(|(x, y)| x.clone() * y.clone()).collect();
        let err = max_rel_err(&to_series(&a).hadamard_product(&to_series(&b)).unwrap(), &truth);
        assert!(err < TOL, "seed {seed}: {err:e}");
    }
}

#[test]
fn derivatives_match_exact() {
    for seed in 0..5 {
        let a = rational_series(seed, false);
        let f = to_series(&a);
        let n = |k: usize| q((k as i64, 1), (0, 1));
        let d1: Vec<Q> = (1..=ORDER).map(|k| a[k].clone() * n(k)).collect();
        let zd1: Vec<Q> = (0..=ORDER).map(|k| a[k].clone() * n(k)).collect();
        let z2d2: Vec<Q> = (0..=ORDER)
            .map(|k| a[k].clone() * n(k) * q((k as i64 - 1, 1), (0, 1)))
            .collect();
        assert!(max_rel_err(&f.derivative(), &d1) < TOL);
        assert!(max_rel_err(&f.z_times_derivative(), &zd1) < TOL);
        assert!(max_rel_err(&f.z2_times_second_derivative(), &z2d2) < TOL);
    }
}

#[test]
fn bessel_operator_matches_exact() {
    // (p, b, c) with exactly representable rationals; κ = p + (b+1)/2.
    let cases = [
        ((1, 2), (1, 1), (1, 1), (0, 1)),
        ((3, 4), (2, 1), (-3, 4), (1, 2)),
        ((-1, 4), (3, 1), (5, 4), (-1, 4)),
        ((5, 2), (0, 1), (-2, 1), (0, 1)),
    ];
    for (seed, &(p, b, c_re, c_im)) in cases.iter().enumerate() {
        let pq = q(p, (0, 1));
        let bq = q(b, (0, 1));
        let cq = q(c_re, c_im);
        let kappa = pq.clone() + (bq.clone() + Q::one()) / q((2, 1), (0, 1));
        let phi = exact_phi(&kappa, &cq);
        let a = rational_series(seed as i64, true);
        let truth: Vec<Q> = phi.iter().zip(&a).map(|(x, y)| x.clone() * y.clone()).collect();
        let params = BesselParams::new(to_f64(&pq), to_f64(&bq), to_f64(&cq)).unwrap();
        let got = bessel_operator(&params, &to_series(&a)).unwrap();
        let err = max_rel_err(&got, &truth);
        assert!(err < TOL, "case {seed}: {err:e}");
    }
}

#[test]
fn dziok_srivastava_matches_exact() {
    // z · 2F1(3/2, 1/4; 5/2; z) ∗ f
    let alphas = [q((3, 2), (0, 1)), q((1, 4), (0, 1))];
    let betas = [q((5, 2), (0, 1))];
    let mut t = vec![Q::one()];
    for n in 0..ORDER {
        let k = q((n as i64, 1), (0, 1));
        let num = alphas.iter().fold(Q::one(), |acc, a| acc * (a.clone() + k.clone()));
        let den = betas.iter().fold(Q::one(), |acc, b| acc * (b.clone() + k.clone()));
        t.push(t[n].clone() * num / (den * (k + Q::one())));
    }
    let kernel: Vec<Q> = std::iter::once(Q::zero()).chain(t.into_iter().take(ORDER)).collect();
    let a = rational_series(4, true);
    let truth: Vec<Q> = kernel.iter().zip(&a).map(|(x, y)| x.clone() * y.clone()).collect();
    let spec = OperatorSpec::DziokSrivastava(
        HypergeometricParams::new(alphas.iter().map(to_f64).collect(), betas.iter().map(to_f64).collect()).unwrap(),
    );
    let err = max_rel_err(&apply(&spec, &to_series(&a)).unwrap(), &truth);
    assert!(err < TOL, "{err:e}");
}

#[test]
fn oracle_detects_perturbation() {
    let a = rational_series(1, false);
    let mut coeffs: Vec<Complex64> = a.iter().map(to_f64).collect();
    coeffs[3] *= 1.0 + 1e-10;
    let err = max_rel_err(&TruncatedSeries::new(coeffs).unwrap(), &a);
    assert!(err > 1e-11 && err.is_finite());
    assert!(a.iter().any(|x| x.re.is_negative()));
}

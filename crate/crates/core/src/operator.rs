//! The convolution operator `B_κ^c f = φ_{κ,c} ∗ f`, its Bessel, modified and
//! spherical special cases, the Dziok–Srivastava operator, and the
//! three-term recursion `z [B_{κ+1} f]′ = κ B_κ f - (κ-1) B_{κ+1} f` together
//! with the identities derived from it.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::besselgen::{phi_coefficients, BesselParams, HypergeometricParams};
use crate::complexfn::{near_nonpositive_integer, POLE_TOL};
use crate::series::{relative_diff, DiskGrid, TruncatedSeries, ABS_FLOOR};
use crate::{Error, Result};

/// Which convolution operator to apply.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    General(BesselParams),
    /// `J_p`: `b = c = 1`.
    BesselJ(Complex64),
    /// `I_p`: `b = 1`, `c = -1`.
    ModifiedI(Complex64),
    /// `S_p`: `b = 2`, `c = 1`.
    SphericalS(Complex64),
    DziokSrivastava(HypergeometricParams),
}

impl OperatorSpec {
    /// The `(p, b, c)` behind the Bessel-type kinds.
    pub fn bessel_params(&self) -> Option<Result<BesselParams>> {
        let c = |x: f64| Complex64::new(x, 0.0);
        match self {
            OperatorSpec::General(p) => Some(Ok(*p)),
            OperatorSpec::BesselJ(p) => Some(BesselParams::new(*p, c(1.0), c(1.0))),
            OperatorSpec::ModifiedI(p) => Some(BesselParams::new(*p, c(1.0), c(-1.0))),
            OperatorSpec::SphericalS(p) => Some(BesselParams::new(*p, c(2.0), c(1.0))),
            OperatorSpec::DziokSrivastava(_) => None,
        }
    }

    /// Multipliers `λ_0 … λ_order`: coefficient `n` of the result is
    /// `λ_n a_n`. `λ_0 = 0`, `λ_1 = 1`.
    pub fn multipliers(&self, order: usize) -> Result<Vec<Complex64>> {
        match self.bessel_params() {
            Some(params) => {
                let params = params?;
                phi_coefficients(params.kappa(), params.c(), order)
            }
            None => {
                let OperatorSpec::DziokSrivastava(hyp) = self else {
                    unreachable!()
                };
                let mut out = Vec::with_capacity(order + 1);
                out.push(Complex64::new(0.0, 0.0));
                out.extend(hyp.coefficients(order.saturating_sub(1)));
                Ok(out)
            }
        }
    }

    /// The operator's kernel series (`φ_{κ,c}` or `z·qFs(z)`).
    pub fn kernel(&self, order: usize) -> Result<TruncatedSeries> {
        let coeffs = self.multipliers(order)?;
        if order == 0 {
            return TruncatedSeries::new(coeffs);
        }
        TruncatedSeries::class_a(coeffs)
    }
}

/// Applies the operator to a class-A `f`.
pub fn apply(spec: &OperatorSpec, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !f.satisfies_class_a() {
        let index = if f.coeff(0).norm() > 0.0 { 0 } else { 1 };
        return Err(Error::Normalization {
            index,
            value: f.coeff(index),
        });
    }
    spec.kernel(f.order())?.hadamard_product(f)
}

/// The raw coefficient map `a_n ↦ λ_n a_n`, without the class-A check.
/// Linear in `f`.
pub fn apply_linear(spec: &OperatorSpec, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let lambda = spec.multipliers(f.order())?;
    TruncatedSeries::new(f.coeffs().iter().zip(&lambda).map(|(&a, &l)| a * l).collect())
}

/// `B_κ^c f`.
pub fn bessel_operator(params: &BesselParams, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    apply(&OperatorSpec::General(*params), f)
}

fn require_kappa(kappa: Complex64, what: &'static str) -> Result<()> {
    if near_nonpositive_integer(kappa, POLE_TOL) {
        Err(Error::Domain { what, value: kappa })
    } else {
        Ok(())
    }
}

/// Largest coefficientwise relative residual of
/// `z [B_{κ+1} f]′ - (κ B_κ f - (κ-1) B_{κ+1} f)`.
pub fn recursion_residual(params: &BesselParams, f: &TruncatedSeries) -> Result<f64> {
    let kappa = params.kappa();
    let upper = params.shift_kappa(1.0)?;
    require_kappa(upper.kappa(), "kappa + 1 is a nonpositive integer")?;
    let b_k = bessel_operator(params, f)?;
    let b_k1 = bessel_operator(&upper, f)?;
    let lhs = b_k1.z_times_derivative();
    let rhs = b_k.scale(kappa).sub(&b_k1.scale(kappa - 1.0));
    Ok(lhs.max_relative_diff(&rhs))
}

/// `B_{κ-steps} f` straight from the convolution definition, `steps ∈ {1, 2}`.
pub fn lower_shift(params: &BesselParams, f: &TruncatedSeries, steps: u32) -> Result<TruncatedSeries> {
    if !(1..=2).contains(&steps) {
        return Err(Error::Invalid("lower_shift supports steps 1 and 2"));
    }
    let shifted = params.shift_kappa(-(steps as f64)).map_err(|_| Error::Domain {
        what: "shifted kappa is a nonpositive integer",
        value: params.kappa() - steps as f64,
    })?;
    bessel_operator(&shifted, f)
}

fn nonzero(v: Complex64, what: &'static str) -> Result<Complex64> {
    if v.norm() < POLE_TOL {
        Err(Error::Domain { what, value: v })
    } else {
        Ok(v)
    }
}

/// `B_κ f` (steps = 1) or `B_{κ-1} f` (steps = 2) rebuilt from derivatives of
/// `p = B_{κ+1} f`:
///
/// * `B_κ f = (z p′ + (κ-1) p) / κ`
/// * `B_{κ-1} f = (z² p″ + 2(κ-1) z p′ + (κ-1)(κ-2) p) / (κ(κ-1))`
pub fn from_upper_combination(params: &BesselParams, f: &TruncatedSeries, steps: u32) -> Result<TruncatedSeries> {
    let kappa = params.kappa();
    let p = bessel_operator(&params.shift_kappa(1.0)?, f)?;
    let zp1 = p.z_times_derivative();
    match steps {
        1 => {
            let k = nonzero(kappa, "kappa must be nonzero")?;
            Ok(zp1.add(&p.scale(kappa - 1.0)).scale(k.inv()))
        }
        2 => {
            let k = nonzero(kappa, "kappa must be nonzero")?;
            let k1 = nonzero(kappa - 1.0, "kappa must differ from 1")?;
            let zp2 = p.z2_times_second_derivative();
            let num = zp2
                .add(&zp1.scale((kappa - 1.0) * 2.0))
                .add(&p.scale((kappa - 1.0) * (kappa - 2.0)));
            Ok(num.scale((k * k1).inv()))
        }
        _ => Err(Error::Invalid("combination supports steps 1 and 2")),
    }
}

/// `B_κ f / z` (steps = 1) or `B_{κ-1} f / z` (steps = 2) rebuilt from
/// `q = B_{κ+1} f / z`:
///
/// * `B_κ f / z = (z q′ + κ q) / κ`
/// * `B_{κ-1} f / z = (z² q″ + 2κ z q′ + κ(κ-1) q) / (κ(κ-1))`
pub fn normalized_combination(params: &BesselParams, f: &TruncatedSeries, steps: u32) -> Result<TruncatedSeries> {
    let kappa = params.kappa();
    let q = bessel_operator(&params.shift_kappa(1.0)?, f)?.div_by_z()?;
    let zq1 = q.z_times_derivative();
    match steps {
        1 => {
            let k = nonzero(kappa, "kappa must be nonzero")?;
            Ok(zq1.add(&q.scale(kappa)).scale(k.inv()))
        }
        2 => {
            let k = nonzero(kappa, "kappa must be nonzero")?;
            let k1 = nonzero(kappa - 1.0, "kappa must differ from 1")?;
            let zq2 = q.z2_times_second_derivative();
            let num = zq2.add(&zq1.scale(kappa * 2.0)).add(&q.scale(kappa * (kappa - 1.0)));
            Ok(num.scale((k * k1).inv()))
        }
        _ => Err(Error::Invalid("combination supports steps 1 and 2")),
    }
}

/// Outcome of a pointwise ratio identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioCheck {
    pub max_relative_residual: f64,
    pub worst_z: Complex64,
    pub skipped: usize,
    pub total: usize,
}

/// Pointwise check of the ratio identities, with `p = B_κ f / B_{κ+1} f`:
///
/// * steps = 1: `B_{κ-1} f / B_κ f = (z p′/p + κ p - 1) / (κ-1)`
/// * steps = 2: `B_{κ-2} f / B_{κ-1} f = (z p′/p + κ p - 2 + (z p′/p + z² p″/p - (z p′/p)² + κ z p′) / (z p′/p + κ p - 1)) / (κ-2)`
///
/// Grid points where any of the involved `|B_· f|` falls below `guard` are
/// skipped. More than `max_skip_fraction` skipped points is an error.
pub fn ratio_identity_check(
    params: &BesselParams,
    f: &TruncatedSeries,
    grid: &DiskGrid,
    steps: u32,
    guard: f64,
    max_skip_fraction: f64,
) -> Result<RatioCheck> {
    if !(1..=2).contains(&steps) {
        return Err(Error::Invalid("ratio identity supports steps 1 and 2"));
    }
    let kappa = params.kappa();
    nonzero(kappa - 1.0, "kappa must differ from 1")?;
    if steps == 2 {
        nonzero(kappa - 2.0, "kappa must differ from 2")?;
    }
    let b_k = bessel_operator(params, f)?;
    let b_k1 = bessel_operator(&params.shift_kappa(1.0)?, f)?;
    let b_km1 = lower_shift(params, f, 1)?;
    let b_km2 = if steps == 2 {
        Some(lower_shift(params, f, 2)?)
    } else {
        None
    };

    let mut worst = 0.0f64;
    let mut worst_z = Complex64::new(0.0, 0.0);
    let mut skipped = 0;
    let mut total = 0;
    for z in grid.points() {
        total += 1;
        let [a, a1, a2] = b_k.evaluate_with_derivatives(z);
        let [b, b1, b2] = b_k1.evaluate_with_derivatives(z);
        let lower1 = b_km1.evaluate(z);
        let lower_guard = if steps == 2 { lower1.norm() } else { f64::INFINITY };
        if a.norm() < guard || b.norm() < guard || lower_guard < guard {
            skipped += 1;
            continue;
        }
        // p = a/b, zp′/p = z(a′/a - b′/b), z²p″/p from the quotient rule.
        let la = a1 / a;
        let lb = b1 / b;
        let p = a / b;
        let zp_over_p = z * (la - lb);
        let (lhs, rhs) = if steps == 1 {
            (lower1 / a, (zp_over_p + kappa * p - 1.0) / (kappa - 1.0))
        } else {
            let z2p2_over_p = z * z * (a2 / a - b2 / b - lb * (la - lb) * 2.0);
            let zp1 = zp_over_p * p;
            let inner = zp_over_p + kappa * p - 1.0;
            let frac = (zp_over_p + z2p2_over_p - zp_over_p * zp_over_p + kappa * zp1) / inner;
            let lower2 = b_km2.as_ref().unwrap().evaluate(z);
            (lower2 / lower1, (zp_over_p + kappa * p - 2.0 + frac) / (kappa - 2.0))
        };
        let r = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(ABS_FLOOR);
        if r > worst {
            worst = r;
            worst_z = z;
        }
    }
    if skipped as f64 > max_skip_fraction * total as f64 {
        return Err(Error::RatioGuard { skipped, total });
    }
    Ok(RatioCheck {
        max_relative_residual: worst,
        worst_z,
        skipped,
        total,
    })
}

/// Largest coefficientwise relative gap between two series, exposed for
/// cross-module consistency checks.
pub fn coefficient_gap(a: &TruncatedSeries, b: &TruncatedSeries) -> f64 {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(&x, &y)| relative_diff(x, y))
        .fold(0.0, f64::max)
}

/// `f ∗ (z/(1-z))`: a no-op on class A, used to check that the operator
/// commutes with the Hadamard identity.
pub fn convolve_with_identity(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    f.hadamard_product(&TruncatedSeries::geometric(f.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::besselgen::{phi_series, ClosedForm};
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_f(order: usize) -> TruncatedSeries {
        let mut coeffs: Vec<Complex64> = (0..=order)
            .map(|n| Complex64::from_polar(1.0 / (1.0 + 0.1 * n as f64), 0.9 * n as f64))
            .collect();
        coeffs[0] = c(0.0, 0.0);
        coeffs[1] = c(1.0, 0.0);
        TruncatedSeries::class_a(coeffs).unwrap()
    }

    #[test]
    fn apply_to_geometric_is_phi() {
        let params = BesselParams::new(c(0.2, 0.1), c(1.5, 0.0), c(-0.8, 1.1)).unwrap();
        let out = bessel_operator(&params, &TruncatedSeries::geometric(32)).unwrap();
        assert_eq!(out, phi_series(&params, 32).unwrap());
    }

    #[test]
    fn zero_c_gives_z() {
        let params = BesselParams::real(0.7, 1.0, 0.0).unwrap();
        let out = bessel_operator(&params, &sample_f(20)).unwrap();
        assert_eq!(out, TruncatedSeries::identity(20));
    }

    #[test]
    fn bessel_j_half_is_sin_half() {
        let out = apply(&OperatorSpec::BesselJ(c(0.5, 0.0)), &TruncatedSeries::geometric(24)).unwrap();
        let expected = phi_series(&ClosedForm::SinHalf.params(), 24).unwrap();
        assert_eq!(out, expected);
        for k in 0..10 {
            let z = Complex64::from_polar(0.9, 0.6 * k as f64);
            assert!(relative_diff(out.evaluate(z), ClosedForm::SinHalf.eval(z)) < 1e-13);
        }
    }

    #[test]
    fn special_kinds_delegate() {
        let f = sample_f(16);
        let p = c(0.3, 0.2);
        let cases = [
            (
                OperatorSpec::BesselJ(p),
                BesselParams::new(p, c(1.0, 0.0), c(1.0, 0.0)).unwrap(),
            ),
            (
                OperatorSpec::ModifiedI(p),
                BesselParams::new(p, c(1.0, 0.0), c(-1.0, 0.0)).unwrap(),
            ),
            (
                OperatorSpec::SphericalS(p),
                BesselParams::new(p, c(2.0, 0.0), c(1.0, 0.0)).unwrap(),
            ),
        ];
        for (spec, params) in cases {
            assert_eq!(apply(&spec, &f).unwrap(), bessel_operator(&params, &f).unwrap());
        }
    }

    #[test]
    fn dziok_srivastava_with_0f1_matches_bessel() {
        let params = BesselParams::real(0.25, 1.0, 1.0).unwrap();
        // ₀F₁(κ; z) ∗ f needs the -c/4 scaling folded into the argument, so
        // compare with the scaled multipliers instead.
        let hyp = HypergeometricParams::new(vec![], vec![params.kappa()]).unwrap();
        let ds = OperatorSpec::DziokSrivastava(hyp).multipliers(20).unwrap();
        let bessel = OperatorSpec::General(params).multipliers(20).unwrap();
        for n in 1..=20 {
            let scaled = ds[n] * (-params.c() / 4.0).powu(n as u32 - 1);
            assert!(relative_diff(scaled, bessel[n]) < 1e-13);
        }
    }

    #[test]
    fn apply_requires_class_a() {
        let params = BesselParams::real(0.5, 1.0, 1.0).unwrap();
        let not_normalized = TruncatedSeries::from_real(&[0.0, 2.0, 1.0]).unwrap();
        assert!(matches!(
            bessel_operator(&params, &not_normalized),
            Err(Error::Normalization { index: 1, .. })
        ));
        let shifted = TruncatedSeries::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            bessel_operator(&params, &shifted),
            Err(Error::Normalization { index: 0, .. })
        ));
        assert!(apply_linear(&OperatorSpec::General(params), &not_normalized).is_ok());
    }

    #[test]
    fn recursion_examples() {
        let params = BesselParams::with_kappa(c(1.5, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(recursion_residual(&params, &TruncatedSeries::identity(8)).unwrap(), 0.0);
        assert!(recursion_residual(&params, &TruncatedSeries::geometric(32)).unwrap() < 1e-12);
        let complex = BesselParams::new(c(1.1, -0.7), c(0.4, 0.3), c(2.0, -1.0)).unwrap();
        assert!(recursion_residual(&complex, &sample_f(32)).unwrap() < 1e-11);
    }

    #[test]
    fn lower_shift_inverts_upper_shift() {
        let params = BesselParams::new(c(1.1, -0.7), c(0.4, 0.3), c(2.0, -1.0)).unwrap();
        let upper = params.shift_kappa(1.0).unwrap();
        let f = sample_f(24);
        let back = lower_shift(&upper, &f, 1).unwrap();
        assert!(coefficient_gap(&back, &bessel_operator(&params, &f).unwrap()) < 1e-15);
    }

    #[test]
    fn lower_shift_rejects_poles() {
        let params = BesselParams::with_kappa(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let f = sample_f(8);
        assert!(matches!(lower_shift(&params, &f, 1), Err(Error::Domain { .. })));
        let two = BesselParams::with_kappa(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(lower_shift(&two, &f, 1).is_ok());
        assert!(matches!(lower_shift(&two, &f, 2), Err(Error::Domain { .. })));
        assert!(lower_shift(&two, &f, 3).is_err());
    }

    #[test]
    fn upper_combinations_match_direct() {
        let f = sample_f(32);
        for params in [
            BesselParams::new(c(1.1, -0.7), c(0.4, 0.3), c(2.0, -1.0)).unwrap(),
            BesselParams::with_kappa(c(3.5, 0.0), c(-1.5, 0.0)).unwrap(),
        ] {
            let direct_k = bessel_operator(&params, &f).unwrap();
            let direct_km1 = lower_shift(&params, &f, 1).unwrap();
            assert!(coefficient_gap(&from_upper_combination(&params, &f, 1).unwrap(), &direct_k) < 1e-11);
            assert!(coefficient_gap(&from_upper_combination(&params, &f, 2).unwrap(), &direct_km1) < 1e-11);
            let direct_k_z = direct_k.div_by_z().unwrap();
            let direct_km1_z = direct_km1.div_by_z().unwrap();
            assert!(coefficient_gap(&normalized_combination(&params, &f, 1).unwrap(), &direct_k_z) < 1e-11);
            assert!(coefficient_gap(&normalized_combination(&params, &f, 2).unwrap(), &direct_km1_z) < 1e-11);
        }
    }

    #[test]
    fn combinations_reject_degenerate_kappa() {
        let f = sample_f(8);
        let k1 = BesselParams::with_kappa(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(from_upper_combination(&k1, &f, 1).is_ok());
        assert!(matches!(from_upper_combination(&k1, &f, 2), Err(Error::Domain { .. })));
        assert!(matches!(normalized_combination(&k1, &f, 2), Err(Error::Domain { .. })));
    }

    #[test]
    fn ratio_identities_hold_pointwise() {
        let grid = DiskGrid::new(vec![0.5, 0.9], 256).unwrap();
        let f = TruncatedSeries::geometric(48);
        let params = BesselParams::with_kappa(c(3.5, 0.5), c(1.0, 0.0)).unwrap();
        let one = ratio_identity_check(&params, &f, &grid, 1, 1e-6, 0.05).unwrap();
        assert!(one.max_relative_residual < 1e-8, "{one:?}");
        let two = ratio_identity_check(&params, &f, &grid, 2, 1e-6, 0.05).unwrap();
        assert!(two.max_relative_residual < 1e-8, "{two:?}");
        assert_eq!(one.total, 512);
    }

    #[test]
    fn ratio_guard_trips_when_denominators_vanish() {
        let grid = DiskGrid::new(vec![0.5], 256).unwrap();
        let f = TruncatedSeries::geometric(16);
        let params = BesselParams::with_kappa(c(2.5, 0.0), c(1.0, 0.0)).unwrap();
        let err = ratio_identity_check(&params, &f, &grid, 1, 10.0, 0.05).unwrap_err();
        assert_eq!(
            err,
            Error::RatioGuard {
                skipped: 256,
                total: 256
            }
        );
    }

    #[test]
    fn identity_convolver_is_transparent() {
        let params = BesselParams::new(c(0.3, 0.4), c(1.2, -0.5), c(-1.1, 0.7)).unwrap();
        let f = sample_f(30);
        let lhs = bessel_operator(&params, &convolve_with_identity(&f).unwrap()).unwrap();
        assert_eq!(lhs, bessel_operator(&params, &f).unwrap());
    }
}

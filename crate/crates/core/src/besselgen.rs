//! Generalized Bessel functions `ω_{p,b,c}`, their normalized form `φ_{p,b,c}`,
//! the generalized hypergeometric series, and an ODE residual check.
//!
//! `φ` is a class-A power series and is stored as a [`TruncatedSeries`]. `ω`
//! carries the non-integer exponents `2n + p` and is only evaluated pointwise.
//! All fractional powers use the principal logarithm.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::complexfn::{gamma, near_nonpositive_integer, POLE_TOL};
use crate::series::{relative_diff, TruncatedSeries};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Order `p`, coefficients `b`, `c` of the generalized Bessel equation.
///
/// `κ = p + (b+1)/2` must stay away from `0, -1, -2, …`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselParams {
    p: Complex64,
    b: Complex64,
    c: Complex64,
}

impl BesselParams {
    pub fn new(p: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        for v in [p, b, c] {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite("bessel parameter"));
            }
        }
        let params = BesselParams { p, b, c };
        let kappa = params.kappa();
        if near_nonpositive_integer(kappa, POLE_TOL) {
            return Err(Error::Domain {
                what: "kappa = p + (b+1)/2 is a nonpositive integer",
                value: kappa,
            });
        }
        Ok(params)
    }

    pub fn real(p: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(Complex64::new(p, 0.0), Complex64::new(b, 0.0), Complex64::new(c, 0.0))
    }

    /// Parameters with the given `κ` and `c`, taking `b = 1` so `p = κ - 1`.
    pub fn with_kappa(kappa: Complex64, c: Complex64) -> Result<Self> {
        Self::new(kappa - 1.0, ONE, c)
    }

    pub fn p(&self) -> Complex64 {
        self.p
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn kappa(&self) -> Complex64 {
        self.p + (self.b + 1.0) / 2.0
    }

    /// Same `b`, `c` with `p` (and hence `κ`) moved by `delta`.
    pub fn shift_kappa(&self, delta: f64) -> Result<Self> {
        Self::new(self.p + delta, self.b, self.c)
    }
}

impl fmt::Display for BesselParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} b={} c={} kappa={}", self.p, self.b, self.c, self.kappa())
    }
}

/// Numerator and denominator parameters of `qFs`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricParams {
    alphas: Vec<Complex64>,
    betas: Vec<Complex64>,
}

impl HypergeometricParams {
    pub fn new(alphas: Vec<Complex64>, betas: Vec<Complex64>) -> Result<Self> {
        if alphas.len() > betas.len() + 1 {
            return Err(Error::Invalid("qFs needs q <= s + 1"));
        }
        if let Some(&beta) = betas.iter().find(|&&b| near_nonpositive_integer(b, POLE_TOL)) {
            return Err(Error::Domain {
                what: "hypergeometric beta is a nonpositive integer",
                value: beta,
            });
        }
        Ok(HypergeometricParams { alphas, betas })
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[Complex64] {
        &self.betas
    }

    /// `t_0 … t_order` with `t_n = Π(α)_n / Π(β)_n / n!`.
    pub fn coefficients(&self, order: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(order + 1);
        let mut t = ONE;
        for n in 0..=order {
            out.push(t);
            let k = n as f64;
            let num = self.alphas.iter().fold(ONE, |acc, &a| acc * (a + k));
            let den = self.betas.iter().fold(ONE, |acc, &b| acc * (b + k));
            t = t * num / (den * (k + 1.0));
        }
        out
    }
}

/// Coefficients `a_0 … a_order` of `φ_{κ,c}`: `a_0 = 0`, `a_1 = 1`,
/// `a_{n+2} = a_{n+1} · (-c) / (4 (κ+n) (n+1))`.
pub fn phi_coefficients(kappa: Complex64, c: Complex64, order: usize) -> Result<Vec<Complex64>> {
    if near_nonpositive_integer(kappa, POLE_TOL) {
        return Err(Error::Domain {
            what: "kappa is a nonpositive integer",
            value: kappa,
        });
    }
    let mut out = Vec::with_capacity(order + 1);
    out.push(ZERO);
    if order == 0 {
        return Ok(out);
    }
    let mut a = ONE;
    out.push(a);
    for n in 0..order.saturating_sub(1) {
        a = a * (-c) / ((kappa + n as f64) * (4.0 * (n as f64 + 1.0)));
        out.push(a);
    }
    Ok(out)
}

/// `φ_{p,b,c}(z) = z + Σ (-c)^n / (4^n (κ)_n n!) z^{n+1}`, truncated at `order`.
pub fn phi_series(params: &BesselParams, order: usize) -> Result<TruncatedSeries> {
    let coeffs = phi_coefficients(params.kappa(), params.c(), order)?;
    if order == 0 {
        return TruncatedSeries::new(coeffs);
    }
    TruncatedSeries::class_a(coeffs)
}

/// Partial sum of `ω_{p,b,c}(z) = Σ_{n<terms} (-c)^n / (n! Γ(κ+n)) (z/2)^{2n+p}`.
pub fn omega_eval(params: &BesselParams, z: Complex64, terms: usize) -> Result<Complex64> {
    let p = params.p();
    let kappa = params.kappa();
    let c = params.c();
    if z == ZERO {
        if p == ZERO {
            return Ok(if terms == 0 { ZERO } else { gamma(kappa)?.inv() });
        }
        if p.re > 0.0 {
            return Ok(ZERO);
        }
        return Err(Error::Domain {
            what: "omega at z = 0 needs Re p > 0 or p = 0",
            value: p,
        });
    }
    let log_half = (z / 2.0).ln();
    let mut sum = ZERO;
    let mut minus_c_pow = ONE;
    let mut fact = 1.0;
    for n in 0..terms {
        let k = n as f64;
        if n > 0 {
            minus_c_pow *= -c;
            fact *= k;
        }
        let power = ((p + 2.0 * k) * log_half).exp();
        sum += minus_c_pow * power / (gamma(kappa + k)? * fact);
    }
    Ok(sum)
}

/// `2^p Γ(κ) z^{1-p/2} ω(√z)`, the normalizing transform from `ω` to `φ`.
pub fn phi_from_omega(params: &BesselParams, z: Complex64, terms: usize) -> Result<Complex64> {
    if z == ZERO {
        return Ok(ZERO);
    }
    let p = params.p();
    let log_z = z.ln();
    let sqrt_z = (log_z / 2.0).exp();
    let prefactor = (p * core::f64::consts::LN_2).exp() * gamma(params.kappa())? * ((ONE - p / 2.0) * log_z).exp();
    Ok(prefactor * omega_eval(params, sqrt_z, terms)?)
}

/// The six elementary instances of `φ` with `b = 1`, `c = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosedForm {
    /// `√z sin√z`: `p = 1/2`, `c = 1`.
    SinHalf,
    /// `z cos√z`: `p = -1/2`, `c = 1`.
    CosNegHalf,
    /// `3 sin√z/√z - 3 cos√z`: `p = 3/2`, `c = 1`.
    SinThreeHalves,
    /// `√z sinh√z`: `p = 1/2`, `c = -1`.
    SinhHalf,
    /// `z cosh√z`: `p = -1/2`, `c = -1`.
    CoshNegHalf,
    /// `3 cosh√z - 3 sinh√z/√z`: `p = 3/2`, `c = -1`.
    SinhThreeHalves,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 6] = [
        ClosedForm::SinHalf,
        ClosedForm::CosNegHalf,
        ClosedForm::SinThreeHalves,
        ClosedForm::SinhHalf,
        ClosedForm::CoshNegHalf,
        ClosedForm::SinhThreeHalves,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::SinHalf => "sin_half",
            ClosedForm::CosNegHalf => "cos_negh",
            ClosedForm::SinThreeHalves => "sin_3h",
            ClosedForm::SinhHalf => "sinh_half",
            ClosedForm::CoshNegHalf => "cosh_negh",
            ClosedForm::SinhThreeHalves => "sinh_3h",
        }
    }

    pub fn expression(self) -> &'static str {
        match self {
            ClosedForm::SinHalf => "sqrt(z) sin(sqrt(z))",
            ClosedForm::CosNegHalf => "z cos(sqrt(z))",
            ClosedForm::SinThreeHalves => "3 sin(sqrt(z))/sqrt(z) - 3 cos(sqrt(z))",
            ClosedForm::SinhHalf => "sqrt(z) sinh(sqrt(z))",
            ClosedForm::CoshNegHalf => "z cosh(sqrt(z))",
            ClosedForm::SinhThreeHalves => "3 cosh(sqrt(z)) - 3 sinh(sqrt(z))/sqrt(z)",
        }
    }

    /// `(p, b, c)` of the matching `φ_{p,b,c}`.
    pub fn params(self) -> BesselParams {
        let (p, c) = match self {
            ClosedForm::SinHalf => (0.5, 1.0),
            ClosedForm::CosNegHalf => (-0.5, 1.0),
            ClosedForm::SinThreeHalves => (1.5, 1.0),
            ClosedForm::SinhHalf => (0.5, -1.0),
            ClosedForm::CoshNegHalf => (-0.5, -1.0),
            ClosedForm::SinhThreeHalves => (1.5, -1.0),
        };
        BesselParams::real(p, 1.0, c).expect("closed-form parameters are off the poles")
    }

    /// The closed form whose `(κ, c)` matches, if any.
    pub fn matching(kappa: Complex64, c: Complex64) -> Option<ClosedForm> {
        Self::ALL.into_iter().find(|cf| {
            let p = cf.params();
            (p.kappa() - kappa).norm() < 1e-14 && (p.c() - c).norm() < 1e-14
        })
    }

    /// Evaluates the closed form at `z`; for `|z| < 1e-4` the removable
    /// singularity is replaced by the series `z + a_2 z² + a_3 z³`.
    pub fn eval(self, z: Complex64) -> Complex64 {
        if z.norm() < 1e-4 {
            let p = self.params();
            let (kappa, c) = (p.kappa(), p.c());
            let a2 = -c / (kappa * 4.0);
            let a3 = a2 * (-c) / ((kappa + 1.0) * 8.0);
            return z * (ONE + z * (a2 + z * a3));
        }
        let s = z.sqrt();
        match self {
            ClosedForm::SinHalf => s * s.sin(),
            ClosedForm::CosNegHalf => z * s.cos(),
            ClosedForm::SinThreeHalves => s.sin() * 3.0 / s - s.cos() * 3.0,
            ClosedForm::SinhHalf => s * s.sinh(),
            ClosedForm::CoshNegHalf => z * s.cosh(),
            ClosedForm::SinhThreeHalves => s.cosh() * 3.0 - s.sinh() * 3.0 / s,
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|cf| cf.name() == s)
            .ok_or(Error::Invalid("unknown closed form"))
    }
}

/// Free function form of [`ClosedForm::eval`].
pub fn closed_form_eval(case: ClosedForm, z: Complex64) -> Complex64 {
    case.eval(z)
}

/// `qFs(α; β; z)` as a series truncated at `order` (constant term 1).
pub fn hypergeometric_series(params: &HypergeometricParams, order: usize) -> Result<TruncatedSeries> {
    TruncatedSeries::new(params.coefficients(order))
}

/// `z · ₀F₁(κ; -c z / 4)`, which coincides with `φ_{κ,c}`.
pub fn phi_via_hypergeometric(params: &BesselParams, order: usize) -> Result<TruncatedSeries> {
    let hyp = HypergeometricParams::new(Vec::new(), alloc::vec![params.kappa()])?;
    let series = hypergeometric_series(&hyp, order.saturating_sub(1))?;
    Ok(series.scale_argument(-params.c() / 4.0).times_z())
}

/// Largest relative residual of the coefficient recurrence
/// `[(2n+p)(2n+p-1) + b(2n+p) - p² + (1-b)p] d_n + c d_{n-1} = 0` over
/// `1 ≤ n ≤ terms - 1`, where `d_n = (-c)^n / (n! Γ(κ+n) 2^{2n+p})` are the
/// coefficients of `ω(z) = z^p Σ d_n z^{2n}`.
///
/// `d_n` goes through [`gamma`] for every `n` independently, so the residual
/// measures how well the series solves the equation rather than restating
/// the recurrence.
pub fn ode_residual(params: &BesselParams, terms: usize) -> Result<f64> {
    let (p, b, c) = (params.p(), params.b(), params.c());
    let kappa = params.kappa();
    let two_pow_p = (p * core::f64::consts::LN_2).exp();
    let mut d = Vec::with_capacity(terms);
    let mut minus_c_pow = ONE;
    let mut scale = 1.0; // n! 4^n
    for n in 0..terms {
        if n > 0 {
            minus_c_pow *= -c;
            scale *= 4.0 * n as f64;
        }
        d.push(minus_c_pow / (gamma(kappa + n as f64)? * scale * two_pow_p));
    }
    let mut worst: f64 = 0.0;
    for n in 1..terms {
        let m = p + 2.0 * n as f64;
        let indicial = m * (m - 1.0) + b * m - p * p + (ONE - b) * p;
        let lhs = indicial * d[n];
        let rhs = -(c * d[n - 1]);
        worst = worst.max(relative_diff(lhs, rhs));
    }
    Ok(worst)
}

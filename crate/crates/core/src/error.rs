use core::fmt;

use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Gamma evaluated at (or within tolerance of) a nonpositive integer.
    Pole { at: Complex64 },
    /// A parameter falls outside the domain an operation is defined on.
    Domain { what: &'static str, value: Complex64 },
    /// A series was expected to be normalized (`a_0 = 0`, optionally `a_1 = 1`).
    Normalization { index: usize, value: Complex64 },
    /// `p(0)` does not equal the centre of the target disk.
    CenterMismatch { expected: Complex64, found: Complex64 },
    /// Too many grid points were dropped because a denominator vanished.
    RatioGuard { skipped: usize, total: usize },
    /// `Re(L e^{-iθ}) ≥ (k-1) k M` does not hold.
    Constraint { lhs: f64, rhs: f64 },
    /// `1 + M e^{iθ}` (or another admissibility denominator) vanishes.
    DegenerateDenominator { modulus: f64 },
    /// Malformed input (empty series, bad grid, wrong parameter counts).
    Invalid(&'static str),
    /// A computation overflowed or produced NaN.
    NonFinite(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { at } => write!(f, "pole error: gamma has a pole at {at}"),
            Error::Domain { what, value } => write!(f, "domain error: {what} (value {value})"),
            Error::Normalization { index, value } => {
                write!(f, "normalization error: coefficient a_{index} = {value}")
            }
            Error::CenterMismatch { expected, found } => {
                write!(f, "center mismatch: p(0) = {found}, expected {expected}")
            }
            Error::RatioGuard { skipped, total } => write!(
                f,
                "ratio guard: {skipped} of {total} grid points had vanishing denominators"
            ),
            Error::Constraint { lhs, rhs } => {
                write!(f, "constraint error: Re(L e^(-i theta)) = {lhs} < (k-1)kM = {rhs}")
            }
            Error::DegenerateDenominator { modulus } => {
                write!(f, "degenerate denominator: modulus {modulus:e}")
            }
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::NonFinite(msg) => write!(f, "non-finite result: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

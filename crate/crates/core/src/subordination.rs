//! Subordination to disks and the implication checks behind the corollaries.
//!
//! Every implication check has the shape "if `sup |premise| < g(M)` then
//! `sup |conclusion| < M`". A check samples the premise over a [`DiskGrid`],
//! picks the smallest `M` for which the premise holds with a relative slack
//! `ε_M`, and tests the conclusion against that `M`. Sampling can only
//! falsify an implication, never prove it.

use alloc::boxed::Box;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::besselgen::{BesselParams, ClosedForm};
use crate::operator::{bessel_operator, lower_shift};
use crate::series::{DiskGrid, TruncatedSeries, ABS_FLOOR};
use crate::{Error, Result};
#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The disk `{w : |w - center| < radius}`, image of `q(z) = center + radius·z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskTarget {
    center: Complex64,
    radius: f64,
}

impl DiskTarget {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Invalid("disk radius M must be positive"));
        }
        Ok(DiskTarget { center, radius })
    }

    /// `q(z) = M z`.
    pub fn origin(radius: f64) -> Result<Self> {
        Self::new(ZERO, radius)
    }

    /// `q(z) = 1 + M z`.
    pub fn unit(radius: f64) -> Result<Self> {
        Self::new(ONE, radius)
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// `p ≺ q` for the disk map `q`: `p(0) = q(0)` and `sup_grid |p - center| < M`.
/// Returns the verdict and the margin `M - sup`.
pub fn subordinate_to_disk(p: &TruncatedSeries, target: &DiskTarget, grid: &DiskGrid) -> Result<(bool, f64)> {
    let p0 = p.coeff(0);
    if (p0 - target.center).norm() > 1e-12 {
        return Err(Error::CenterMismatch {
            expected: target.center,
            found: p0,
        });
    }
    let sup = grid
        .points()
        .map(|z| (p.evaluate(z) - target.center).norm())
        .fold(0.0, f64::max);
    let margin = target.radius - sup;
    Ok((margin > 0.0, margin))
}

/// Which implication a [`VerifyCase`] exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    /// `|B_κ f| < M ⇒ |B_{κ+1} f| < M`.
    C2_4,
    /// `|B_κ f - B_{κ+1} f| < M/|κ| ⇒ |B_{κ+1} f| < M`.
    C2_5,
    /// `|B_{κ-1}f/B_κf - B_κf/B_{κ+1}f| < M²/(|κ-1|(1+M)) ⇒ |B_κf/B_{κ+1}f - 1| < M`.
    C2_8,
    /// `|B_κ f/z - B_{κ+1} f/z| < M/|κ| ⇒ |B_{κ+1} f/z - 1| < M`.
    C2_11,
    /// `|B_κ f/z - 1| < M ⇒ |B_{κ+1} f/z - 1| < M`.
    C2_12,
    /// `|φ_κ| < M ⇒ |φ_{κ+1}| < M`.
    Chain2_111,
    /// `|φ_κ/z - 1| < M ⇒ |φ_{κ+1}/z - 1| < M`.
    Chain4_10,
    /// `|z cos√z| < M ⇒ |√z sin√z| < M`, on the closed forms.
    TrigChainSin,
    /// `|z cosh√z - √z sinh√z| < 2M ⇒ |√z sinh√z| < M`, on the closed forms.
    TrigChainSinh,
}

impl CaseId {
    pub const ALL: [CaseId; 9] = [
        CaseId::C2_4,
        CaseId::C2_5,
        CaseId::C2_8,
        CaseId::C2_11,
        CaseId::C2_12,
        CaseId::Chain2_111,
        CaseId::Chain4_10,
        CaseId::TrigChainSin,
        CaseId::TrigChainSinh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::C2_4 => "C2_4",
            CaseId::C2_5 => "C2_5",
            CaseId::C2_8 => "C2_8",
            CaseId::C2_11 => "C2_11",
            CaseId::C2_12 => "C2_12",
            CaseId::Chain2_111 => "chain_2_111",
            CaseId::Chain4_10 => "chain_4_10",
            CaseId::TrigChainSin => "trig_chain_sin",
            CaseId::TrigChainSinh => "trig_chain_sinh",
        }
    }

    /// Cases whose `f` is fixed to `z/(1-z)` or whose functions are closed forms.
    pub fn has_fixed_function(self) -> bool {
        matches!(
            self,
            CaseId::Chain2_111 | CaseId::Chain4_10 | CaseId::TrigChainSin | CaseId::TrigChainSinh
        )
    }

    /// Cases whose parameters are fixed by the closed forms they compare.
    pub fn has_fixed_params(self) -> bool {
        matches!(self, CaseId::TrigChainSin | CaseId::TrigChainSinh)
    }

    /// Smallest `M` with `g(M) ≥ s`, where `g` is the premise bound.
    fn invert_premise_bound(self, s: f64, kappa: Complex64) -> f64 {
        match self {
            CaseId::C2_5 | CaseId::C2_11 => kappa.norm() * s,
            // κ = 1/2 instance of C2_5: premise bound 2M.
            CaseId::TrigChainSinh => s / 2.0,
            CaseId::C2_8 => {
                // M² = a(1 + M), a = s |κ-1|
                let a = s * (kappa - 1.0).norm();
                (a + (a * a + 4.0 * a).sqrt()) / 2.0
            }
            _ => s,
        }
    }

    /// `g(M)`.
    pub fn premise_bound(self, m: f64, kappa: Complex64) -> f64 {
        match self {
            CaseId::C2_5 | CaseId::C2_11 => m / kappa.norm(),
            CaseId::TrigChainSinh => 2.0 * m,
            CaseId::C2_8 => m * m / ((kappa - 1.0).norm() * (1.0 + m)),
            _ => m,
        }
    }

    /// Whether the parameters satisfy the implication's side conditions, using
    /// the `k = 1` instance where the hypothesis quantifies over `k`.
    pub fn hypothesis_holds(self, params: &BesselParams) -> bool {
        let kappa = params.kappa();
        match self {
            CaseId::C2_4 | CaseId::Chain2_111 => kappa.re >= 0.0,
            CaseId::C2_5 | CaseId::C2_11 => kappa.norm() > 0.0,
            CaseId::C2_8 => (kappa - 1.0).norm() > 0.0,
            CaseId::C2_12 | CaseId::Chain4_10 => kappa.re >= -0.5 && kappa.norm() > 0.0,
            CaseId::TrigChainSin | CaseId::TrigChainSinh => true,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or(Error::Invalid("unknown case id"))
    }
}

/// One implication check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyCase {
    pub id: CaseId,
    pub params: BesselParams,
    pub f: TruncatedSeries,
    pub grid: DiskGrid,
}

impl VerifyCase {
    /// A case with the given `f`. Cases with a fixed function replace `f` by
    /// `z/(1-z)` at the same order; the trig chains also fix their parameters.
    pub fn new(id: CaseId, params: BesselParams, f: TruncatedSeries, grid: DiskGrid) -> Self {
        let f = if id.has_fixed_function() {
            TruncatedSeries::geometric(f.order())
        } else {
            f
        };
        let params = match id {
            CaseId::TrigChainSin => ClosedForm::CosNegHalf.params(),
            CaseId::TrigChainSinh => ClosedForm::CoshNegHalf.params(),
            _ => params,
        };
        VerifyCase { id, params, f, grid }
    }

    pub fn chain(id: CaseId, params: BesselParams, order: usize, grid: DiskGrid) -> Self {
        Self::new(id, params, TruncatedSeries::geometric(order), grid)
    }

    /// The trig chains; `order` only matters for the unused series slot.
    pub fn trig(id: CaseId, grid: DiskGrid) -> Self {
        let params = ClosedForm::CosNegHalf.params();
        Self::new(id, params, TruncatedSeries::geometric(8), grid)
    }
}

/// Thresholds for [`verify_implication`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `ε_M`: the premise bound is set to `premise_sup · (1 + ε_M)`.
    pub premise_margin: f64,
    /// Relative slack on the conclusion: pass iff `sup < M_eff (1 + tol)`.
    pub implication_tol: f64,
    /// Grid points with a ratio denominator below this are skipped.
    pub denominator_guard: f64,
    /// Fraction of skipped points above which a check errors out.
    pub max_skip_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            premise_margin: 1e-6,
            implication_tol: 1e-9,
            denominator_guard: 1e-6,
            max_skip_fraction: 0.05,
        }
    }
}

/// Outcome of one implication check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub case: CaseId,
    pub params: BesselParams,
    /// Sampled sup of the premise quantity.
    pub premise_sup: f64,
    /// Sampled sup of the conclusion quantity.
    pub conclusion_sup: f64,
    /// `M_eff`: the smallest `M` whose premise bound covers `premise_sup (1 + ε_M)`.
    pub bound: f64,
    /// `bound - conclusion_sup`.
    pub margin: f64,
    /// Grid point where the conclusion quantity peaks.
    pub worst_z: Complex64,
    pub pass: bool,
    pub skipped_points: usize,
    pub total_points: usize,
    /// Whether the implication's side conditions on `κ` hold.
    pub in_hypothesis: bool,
}

type Quantities = Box<dyn Fn(Complex64) -> Option<(Complex64, Complex64)>>;

/// Premise and conclusion quantities of a case, as pointwise evaluators.
/// `None` marks a grid point dropped by the denominator guard.
fn quantities(case: &VerifyCase, guard: f64) -> Result<Quantities> {
    let params = case.params;
    let f = &case.f;
    let upper = || params.shift_kappa(1.0);
    Ok(match case.id {
        CaseId::C2_4 | CaseId::Chain2_111 => {
            let b_k = bessel_operator(&params, f)?;
            let b_k1 = bessel_operator(&upper()?, f)?;
            Box::new(move |z| Some((b_k.evaluate(z), b_k1.evaluate(z))))
        }
        CaseId::C2_5 => {
            let b_k = bessel_operator(&params, f)?;
            let b_k1 = bessel_operator(&upper()?, f)?;
            let diff = b_k.sub(&b_k1);
            Box::new(move |z| Some((diff.evaluate(z), b_k1.evaluate(z))))
        }
        CaseId::C2_11 => {
            let b_k = bessel_operator(&params, f)?.div_by_z()?;
            let b_k1 = bessel_operator(&upper()?, f)?.div_by_z()?;
            let diff = b_k.sub(&b_k1);
            Box::new(move |z| Some((diff.evaluate(z), b_k1.evaluate(z) - ONE)))
        }
        CaseId::C2_12 | CaseId::Chain4_10 => {
            let b_k = bessel_operator(&params, f)?.div_by_z()?;
            let b_k1 = bessel_operator(&upper()?, f)?.div_by_z()?;
            Box::new(move |z| Some((b_k.evaluate(z) - ONE, b_k1.evaluate(z) - ONE)))
        }
        CaseId::C2_8 => {
            let b_km1 = lower_shift(&params, f, 1)?;
            let b_k = bessel_operator(&params, f)?;
            let b_k1 = bessel_operator(&upper()?, f)?;
            Box::new(move |z| {
                let (lo, mid, hi) = (b_km1.evaluate(z), b_k.evaluate(z), b_k1.evaluate(z));
                if mid.norm() < guard || hi.norm() < guard {
                    return None;
                }
                let ratio = mid / hi;
                Some((lo / mid - ratio, ratio - ONE))
            })
        }
        CaseId::TrigChainSin => Box::new(|z| Some((ClosedForm::CosNegHalf.eval(z), ClosedForm::SinHalf.eval(z)))),
        CaseId::TrigChainSinh => Box::new(|z| {
            let upper = ClosedForm::SinhHalf.eval(z);
            Some((ClosedForm::CoshNegHalf.eval(z) - upper, upper))
        }),
    })
}

struct Sweep {
    premise_sup: f64,
    conclusion_sup: f64,
    worst_z: Complex64,
    skipped: usize,
    total: usize,
}

fn sweep(case: &VerifyCase, tol: &Tolerances) -> Result<Sweep> {
    let eval = quantities(case, tol.denominator_guard)?;
    let mut s = Sweep {
        premise_sup: 0.0,
        conclusion_sup: 0.0,
        worst_z: ZERO,
        skipped: 0,
        total: 0,
    };
    for z in case.grid.points() {
        s.total += 1;
        let Some((premise, conclusion)) = eval(z) else {
            s.skipped += 1;
            continue;
        };
        s.premise_sup = s.premise_sup.max(premise.norm());
        let c = conclusion.norm();
        if c > s.conclusion_sup || s.total == 1 {
            s.conclusion_sup = c;
            s.worst_z = z;
        }
    }
    if s.skipped as f64 > tol.max_skip_fraction * s.total as f64 {
        return Err(Error::RatioGuard {
            skipped: s.skipped,
            total: s.total,
        });
    }
    if !(s.premise_sup.is_finite() && s.conclusion_sup.is_finite()) {
        return Err(Error::NonFinite("premise or conclusion overflowed on the grid"));
    }
    Ok(s)
}

/// Runs one implication check.
pub fn verify_implication(case: &VerifyCase, tol: &Tolerances) -> Result<VerifyReport> {
    let s = sweep(case, tol)?;
    let kappa = case.params.kappa();
    let bound = case
        .id
        .invert_premise_bound(s.premise_sup * (1.0 + tol.premise_margin), kappa)
        .max(ABS_FLOOR);
    let pass = s.conclusion_sup < bound * (1.0 + tol.implication_tol);
    Ok(VerifyReport {
        case: case.id,
        params: case.params,
        premise_sup: s.premise_sup,
        conclusion_sup: s.conclusion_sup,
        bound,
        margin: bound - s.conclusion_sup,
        worst_z: s.worst_z,
        pass,
        skipped_points: s.skipped,
        total_points: s.total,
        in_hypothesis: case.id.hypothesis_holds(&case.params),
    })
}

/// `conclusion_sup / M`, with `M` the exact inverse of the premise bound at
/// `premise_sup` (no `ε_M`). Values near 1 across a family indicate the
/// dominant is tight. Observational only.
pub fn sharpness_probe(case: &VerifyCase, tol: &Tolerances) -> Result<f64> {
    let s = sweep(case, tol)?;
    let m = case.id.invert_premise_bound(s.premise_sup, case.params.kappa());
    if m == 0.0 {
        return Ok(if s.conclusion_sup == 0.0 { 1.0 } else { f64::INFINITY });
    }
    Ok(s.conclusion_sup / m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid() -> DiskGrid {
        DiskGrid::new(vec![0.5, 0.9, 0.999], 1024).unwrap()
    }

    #[test]
    fn linear_map_subordination() {
        let m = 3.0;
        let p = TruncatedSeries::monomial(1, c(m / 2.0, 0.0), 4);
        let (ok, margin) = subordinate_to_disk(&p, &DiskTarget::origin(m).unwrap(), &DiskGrid::default()).unwrap();
        assert!(ok);
        assert!((margin - m * (1.0 - 0.999 / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn doubled_map_fails() {
        let m = 0.7;
        let mut coeffs = vec![ONE, c(2.0 * m, 0.0)];
        coeffs.extend([ZERO; 3]);
        let p = TruncatedSeries::new(coeffs).unwrap();
        let grid = DiskGrid::new(vec![0.51], 512).unwrap();
        let (ok, _) = subordinate_to_disk(&p, &DiskTarget::unit(m).unwrap(), &grid).unwrap();
        assert!(!ok);
    }

    #[test]
    fn center_mismatch() {
        let p = TruncatedSeries::identity(3);
        let err = subordinate_to_disk(&p, &DiskTarget::unit(1.0).unwrap(), &grid()).unwrap_err();
        assert!(matches!(err, Error::CenterMismatch { .. }));
        assert!(DiskTarget::origin(0.0).is_err());
    }

    #[test]
    fn subordination_monotone_in_radius() {
        let phi = crate::besselgen::phi_series(&ClosedForm::SinThreeHalves.params(), 48).unwrap();
        let g = grid();
        let sup = g.points().map(|z| phi.evaluate(z).norm()).fold(0.0, f64::max);
        let eps = 1e-9;
        let (ok, margin) = subordinate_to_disk(&phi, &DiskTarget::origin(sup + eps).unwrap(), &g).unwrap();
        assert!(ok);
        assert!((margin - eps).abs() < 1e-12);
        for m in [sup + 1e-6, sup * 2.0, 10.0] {
            assert!(
                subordinate_to_disk(&phi, &DiskTarget::origin(m).unwrap(), &g)
                    .unwrap()
                    .0
            );
        }
        assert!(
            !subordinate_to_disk(&phi, &DiskTarget::origin(sup * 0.99).unwrap(), &g)
                .unwrap()
                .0
        );
    }

    #[test]
    fn case_names_round_trip() {
        for id in CaseId::ALL {
            assert_eq!(id.name().parse::<CaseId>().unwrap(), id);
        }
        assert!("C9_9".parse::<CaseId>().is_err());
    }

    #[test]
    fn premise_bound_inversion() {
        let kappa = c(1.7, -0.4);
        for id in CaseId::ALL {
            for s in [1e-3, 0.2, 1.0, 7.5] {
                let m = id.invert_premise_bound(s, kappa);
                assert!((id.premise_bound(m, kappa) - s).abs() <= 1e-12 * s, "{id} s={s}");
            }
        }
    }

    #[test]
    fn chain_2_111_trig_instance() {
        let params = BesselParams::real(-0.5, 1.0, 1.0).unwrap();
        let case = VerifyCase::chain(CaseId::Chain2_111, params, 64, grid());
        let report = verify_implication(&case, &Tolerances::default()).unwrap();
        assert!(report.pass, "{report:?}");
        let trig = verify_implication(&VerifyCase::trig(CaseId::TrigChainSin, grid()), &Tolerances::default()).unwrap();
        assert!(trig.pass);
        assert!((trig.premise_sup - report.premise_sup).abs() < 1e-12);
        assert!((trig.conclusion_sup - report.conclusion_sup).abs() < 1e-12);
    }

    #[test]
    fn chain_4_10_cos_instance() {
        let params = BesselParams::real(-0.5, 1.0, 1.0).unwrap();
        let report = verify_implication(
            &VerifyCase::chain(CaseId::Chain4_10, params, 64, grid()),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(report.pass);
        // |cos√z - 1| and |sin√z/√z - 1| directly.
        let g = grid();
        let premise = g.points().map(|z| (z.sqrt().cos() - 1.0).norm()).fold(0.0, f64::max);
        let conclusion = g
            .points()
            .map(|z| (z.sqrt().sin() / z.sqrt() - 1.0).norm())
            .fold(0.0, f64::max);
        assert!((report.premise_sup - premise).abs() < 1e-12);
        assert!((report.conclusion_sup - conclusion).abs() < 1e-12);
    }

    #[test]
    fn zero_c_degenerates_to_equality() {
        let params = BesselParams::real(0.5, 1.0, 0.0).unwrap();
        let f = crate::family::random_class_a(1, 0, 32);
        let report = verify_implication(
            &VerifyCase::new(CaseId::C2_4, params, f, grid()),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(report.pass);
        assert_eq!(report.premise_sup, report.conclusion_sup);
        assert!((report.premise_sup - 0.999).abs() < 1e-15);
        let case = VerifyCase::chain(CaseId::C2_4, params, 32, grid());
        assert_eq!(sharpness_probe(&case, &Tolerances::default()).unwrap(), 1.0);
    }

    #[test]
    fn c2_5_fails_on_identity() {
        // B_κ z - B_{κ+1} z ≡ 0, so the premise holds for every M while
        // |B_{κ+1} z| = |z| does not shrink.
        let params = BesselParams::real(0.5, 1.0, 1.0).unwrap();
        let report = verify_implication(
            &VerifyCase::new(CaseId::C2_5, params, TruncatedSeries::identity(16), grid()),
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(report.premise_sup, 0.0);
        assert!(!report.pass);
    }

    #[test]
    fn c2_11_and_c2_12_hold_on_geometric() {
        let params = BesselParams::with_kappa(c(1.5, 0.3), c(1.0, -0.5)).unwrap();
        for id in [CaseId::C2_11, CaseId::C2_12] {
            let report =
                verify_implication(&VerifyCase::chain(id, params, 48, grid()), &Tolerances::default()).unwrap();
            assert!(report.pass, "{report:?}");
            assert!(report.in_hypothesis);
        }
    }

    #[test]
    fn c2_8_runs_with_guard() {
        let params = BesselParams::with_kappa(c(3.0, 0.5), c(1.0, 0.0)).unwrap();
        let report = verify_implication(
            &VerifyCase::chain(CaseId::C2_8, params, 48, grid()),
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(report.skipped_points, 0);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn hypothesis_flags() {
        let neg = BesselParams::with_kappa(c(-0.25, 0.0), c(1.0, 0.0)).unwrap();
        assert!(!CaseId::C2_4.hypothesis_holds(&neg));
        assert!(CaseId::C2_12.hypothesis_holds(&neg));
    }

    #[test]
    fn sharpness_ratio_for_identity() {
        let params = BesselParams::real(1.0, 1.0, 1.0).unwrap();
        let case = VerifyCase::new(CaseId::C2_4, params, TruncatedSeries::identity(8), grid());
        assert_eq!(sharpness_probe(&case, &Tolerances::default()).unwrap(), 1.0);
    }
}

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use bessel_subord_core::admissibility::{audit, AdmissibleClass, AuditReport, Functional3, RegionSpec};
use bessel_subord_core::besselgen::{ode_residual, phi_series, BesselParams, ClosedForm};
use bessel_subord_core::family::{self, TestFunction};
use bessel_subord_core::operator::recursion_residual;
use bessel_subord_core::series::{relative_diff, TruncatedSeries};
use bessel_subord_core::subordination::{verify_implication, CaseId, Tolerances, VerifyCase};
use bessel_subord_core::DiskGrid;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::args::{AuditArgs, Command, CommonArgs, EvalArgs, ParamArgs, SweepKind, VerifyArgs};
use crate::config::{format_complex, parse_complex, RunConfig};
use crate::report::{
    write_report, write_rows, AuditRecord, CheckRecord, EvalRecord, ReportFormat, Row, ViolationRecord,
};
use crate::{Cli, CliError, Outcome};

/// Closed forms and `φ` agree when their relative difference is below this.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Audit(args) => cmd_audit(args),
    }
}

/// Config file (if any) with command-line overrides applied.
pub fn resolve_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(n) = common.order {
        cfg.order = n;
    }
    if let Some(radii) = &common.grid_radii {
        cfg.grid.radii = radii.clone();
    }
    if let Some(angles) = common.grid_angles {
        cfg.grid.angles = angles;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(format) = common.format {
        cfg.format = format;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parameters from `--p/--b/--c/--kappa`, with `p = 1/2`, `b = 1`, `c = 1`
/// filling in whatever is missing.
pub fn resolve_params(args: &ParamArgs) -> Result<BesselParams, CliError> {
    let get = |v: &Option<String>, default: f64| match v {
        Some(s) => parse_complex(s),
        None => Ok(Complex64::new(default, 0.0)),
    };
    let b = get(&args.b, 1.0)?;
    let c = get(&args.c, 1.0)?;
    let p = match &args.kappa {
        Some(k) => parse_complex(k)? - (b + 1.0) / 2.0,
        None => get(&args.p, 0.5)?,
    };
    Ok(BesselParams::new(p, b, c)?)
}

fn emit<R: Row>(common: &CommonArgs, format: ReportFormat, rows: &[R]) -> Result<(), CliError> {
    match &common.out {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            write_report(&mut out, format, rows)?;
            out.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            write_report(&mut out, format, rows)?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn eval_records(params: &BesselParams, order: usize, points: &[Complex64]) -> Result<Vec<EvalRecord>, CliError> {
    let phi = phi_series(params, order)?;
    let closed = ClosedForm::matching(params.kappa(), params.c());
    Ok(points
        .iter()
        .map(|&z| {
            let value = phi.evaluate(z);
            let (name, closed_value, diff) = match closed {
                Some(form) => {
                    let exact = form.eval(z);
                    (
                        Some(form.expression().to_string()),
                        Some(format_complex(exact)),
                        Some(relative_diff(value, exact)),
                    )
                }
                None => (None, None, None),
            };
            EvalRecord {
                z: format_complex(z),
                phi: format_complex(value),
                closed_form: name,
                closed_value,
                relative_diff: diff,
                matching: diff.map(|d| d < CLOSED_FORM_TOL),
            }
        })
        .collect())
}

fn cmd_eval(args: &EvalArgs) -> Result<Outcome, CliError> {
    let cfg = resolve_config(&args.common)?;
    let params = resolve_params(&args.params)?;
    let points = args.z.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>, _>>()?;
    let records = eval_records(&params, cfg.order, &points)?;
    emit(&args.common, cfg.format, &records)?;
    Ok(Outcome::from_pass(records.iter().all(|r| r.matching != Some(false))))
}

/// A check requested by name on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Implication(CaseId),
    Recursion,
    OdeResidual,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Implication(id) => id.name(),
            CheckKind::Recursion => "recursion",
            CheckKind::OdeResidual => "ode_residual",
        }
    }

    pub fn all() -> Vec<CheckKind> {
        CaseId::ALL
            .into_iter()
            .map(CheckKind::Implication)
            .chain([CheckKind::Recursion, CheckKind::OdeResidual])
            .collect()
    }
}

/// Expands `all` and rejects unknown or missing case names.
pub fn parse_cases(names: &[String]) -> Result<Vec<CheckKind>, CliError> {
    let mut out = Vec::new();
    for name in names.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        match name {
            "all" => out.extend(CheckKind::all()),
            "recursion" => out.push(CheckKind::Recursion),
            "ode_residual" => out.push(CheckKind::OdeResidual),
            other => {
                let id = other
                    .parse::<CaseId>()
                    .map_err(|_| CliError::Usage(format!("unknown case {other:?}")))?;
                out.push(CheckKind::Implication(id));
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no cases given; pass --case".into()));
    }
    Ok(out)
}

/// Everything a sweep needs, shared read-only across workers.
pub struct SweepContext {
    pub order: usize,
    pub grid: DiskGrid,
    pub tolerances: Tolerances,
    pub identity_tol: f64,
    pub family: Vec<TestFunction>,
}

impl SweepContext {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, CliError> {
        Ok(SweepContext {
            order: cfg.order,
            grid: cfg.disk_grid()?,
            tolerances: cfg.tolerances(),
            identity_tol: cfg.tolerances.identity,
            family: family::standard_family(cfg.seed, cfg.sweep.random_functions, cfg.order),
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Job<'a> {
    Implication(CaseId, BesselParams, &'a TestFunction),
    Trig(CaseId),
    Recursion(BesselParams, &'a TestFunction),
    Ode(BesselParams),
}

fn describe(params: &BesselParams, f: Option<&TestFunction>) -> String {
    let mut s = format!(
        "p={} b={} c={}",
        format_complex(params.p()),
        format_complex(params.b()),
        format_complex(params.c())
    );
    if let Some(f) = f {
        s.push_str(" f=");
        s.push_str(&f.label);
    }
    s
}

fn failed_record(case: &str, params: String, err: bessel_subord_core::Error, enforced: bool) -> CheckRecord {
    CheckRecord {
        case: case.to_string(),
        params: format!("{params}; {err}"),
        premise_sup: None,
        conclusion_sup: None,
        bound: None,
        margin: None,
        worst_z: None,
        pass: false,
        enforced,
    }
}

fn identity_record(case: &str, params: String, residual: f64, tol: f64) -> CheckRecord {
    CheckRecord {
        case: case.to_string(),
        params,
        premise_sup: None,
        conclusion_sup: Some(residual),
        bound: Some(tol),
        margin: Some(tol - residual),
        worst_z: None,
        pass: residual < tol,
        enforced: true,
    }
}

fn implication_record(case: &VerifyCase, label: String, ctx: &SweepContext) -> CheckRecord {
    let id = case.id;
    let in_hypothesis = id.hypothesis_holds(&case.params);
    match verify_implication(case, &ctx.tolerances) {
        Ok(r) => CheckRecord {
            case: id.name().to_string(),
            params: if in_hypothesis {
                label
            } else {
                format!("{label}; outside hypothesis")
            },
            premise_sup: Some(r.premise_sup),
            conclusion_sup: Some(r.conclusion_sup),
            bound: Some(r.bound),
            margin: Some(r.margin),
            worst_z: Some(format_complex(r.worst_z)),
            pass: r.pass,
            enforced: in_hypothesis,
        },
        Err(e) => failed_record(id.name(), label, e, in_hypothesis),
    }
}

impl Job<'_> {
    fn run(&self, ctx: &SweepContext) -> CheckRecord {
        match *self {
            Job::Implication(id, params, f) => {
                let case = VerifyCase::new(id, params, f.series.clone(), ctx.grid.clone());
                implication_record(&case, describe(&params, Some(f)), ctx)
            }
            Job::Trig(id) => {
                let case = VerifyCase::trig(id, ctx.grid.clone());
                let label = describe(&case.params, None);
                implication_record(&case, label, ctx)
            }
            Job::Recursion(params, f) => {
                let label = describe(&params, Some(f));
                match recursion_residual(&params, &f.series) {
                    Ok(res) => identity_record("recursion", label, res, ctx.identity_tol),
                    Err(e) => failed_record("recursion", label, e, true),
                }
            }
            Job::Ode(params) => {
                let label = describe(&params, None);
                match ode_residual(&params, ctx.order) {
                    Ok(res) => identity_record("ode_residual", label, res, ctx.identity_tol),
                    Err(e) => failed_record("ode_residual", label, e, true),
                }
            }
        }
    }
}

/// Runs `checks` over `params`, in order: check, then parameter point, then
/// test function. Records come back in that order whatever the thread count.
pub fn run_checks(checks: &[CheckKind], params: &[BesselParams], ctx: &SweepContext) -> Vec<CheckRecord> {
    let geometric = TestFunction {
        label: "z/(1-z)".into(),
        series: TruncatedSeries::geometric(ctx.order),
    };
    let mut jobs = Vec::new();
    for &check in checks {
        match check {
            CheckKind::Implication(id) if id.has_fixed_params() => jobs.push(Job::Trig(id)),
            CheckKind::Implication(id) if id.has_fixed_function() => {
                jobs.extend(params.iter().map(|&p| Job::Implication(id, p, &geometric)))
            }
            CheckKind::Implication(id) => {
                for &p in params {
                    jobs.extend(ctx.family.iter().map(|f| Job::Implication(id, p, f)));
                }
            }
            CheckKind::Recursion => {
                for &p in params {
                    jobs.extend(ctx.family.iter().map(|f| Job::Recursion(p, f)));
                }
            }
            CheckKind::OdeResidual => jobs.extend(params.iter().map(|&p| Job::Ode(p))),
        }
    }
    jobs.par_iter().map(|job| job.run(ctx)).collect()
}

pub fn sweep_params(
    cfg: &RunConfig,
    args: &ParamArgs,
    sweep: Option<SweepKind>,
) -> Result<Vec<BesselParams>, CliError> {
    let kind = sweep.unwrap_or(if args.any() {
        SweepKind::Single
    } else {
        SweepKind::Default
    });
    match kind {
        SweepKind::Single => Ok(vec![resolve_params(args)?]),
        SweepKind::Default => {
            if args.any() {
                return Err(CliError::Usage(
                    "--sweep default cannot be combined with --p/--b/--c/--kappa".into(),
                ));
            }
            let [p, b, c] = cfg.sweep_box()?;
            let out = family::parameter_box(&p, &b, &c);
            if out.is_empty() {
                return Err(CliError::Usage("the sweep box has no valid parameter points".into()));
            }
            Ok(out)
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let checks = parse_cases(&args.case)?;
    let cfg = resolve_config(&args.common)?;
    let params = sweep_params(&cfg, &args.params, args.sweep)?;
    let ctx = SweepContext::from_config(&cfg)?;
    let records = run_checks(&checks, &params, &ctx);
    emit(&args.common, cfg.format, &records)?;
    Ok(Outcome::from_pass(records.iter().all(|r| r.pass || !r.enforced)))
}

pub fn audit_record(report: &AuditReport) -> AuditRecord {
    let verdict = match report.violations.first() {
        None => format!(
            "no violation found at resolution {} points over {} theta samples",
            report.points_checked,
            report.min_k_per_theta.len()
        ),
        Some(v) => format!(
            "violation found at theta={} k={} L={} phi={}",
            v.theta,
            v.k,
            format_complex(v.l),
            format_complex(v.phi)
        ),
    };
    AuditRecord {
        functional: report.functional.to_string(),
        class: report.class.to_string(),
        region: report.region.to_string(),
        m: report.m,
        kappa: format_complex(report.kappa),
        points_checked: report.points_checked,
        degenerate_points: report.degenerate_points,
        violations: report.violations.len(),
        min_k: report.min_k(),
        min_k_resolution: report.min_k_resolution(),
        verdict,
    }
}

fn write_violations(path: &Path, report: &AuditReport) -> Result<(), CliError> {
    let rows: Vec<ViolationRecord> = report
        .violations
        .iter()
        .map(|v| ViolationRecord {
            theta: v.theta,
            k: v.k,
            l_re: v.l.re,
            l_im: v.l.im,
            phi_re: v.phi.re,
            phi_im: v.phi.im,
        })
        .collect();
    let mut out = BufWriter::new(File::create(path)?);
    write_rows(&mut out, ReportFormat::Csv, &rows)?;
    out.flush()?;
    Ok(())
}

/// `κ` for an audit: `--kappa`, or `p + (b+1)/2` from `--p/--b`, else 2.
pub fn audit_kappa(args: &ParamArgs) -> Result<Complex64, CliError> {
    if let Some(k) = &args.kappa {
        return parse_complex(k);
    }
    if args.p.is_none() && args.b.is_none() {
        return Ok(Complex64::new(2.0, 0.0));
    }
    let get = |v: &Option<String>, d: f64| v.as_deref().map_or(Ok(Complex64::new(d, 0.0)), parse_complex);
    Ok(get(&args.p, 0.5)? + (get(&args.b, 1.0)? + 1.0) / 2.0)
}

fn cmd_audit(args: &AuditArgs) -> Result<Outcome, CliError> {
    let phi: Functional3 = args
        .phi
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown functional {:?}", args.phi)))?;
    let class: AdmissibleClass = args
        .class
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown class {:?}", args.class)))?;
    let mut cfg = resolve_config(&args.common)?;
    if let Some(m) = args.m {
        cfg.audit.m = m;
        cfg.validate()?;
    }
    let m = cfg.audit.m;
    let kappa = audit_kappa(&args.params)?;
    let region = match args.region_radius {
        Some(r) => RegionSpec::disk(Complex64::new(0.0, 0.0), r)?,
        None => RegionSpec::for_functional(&phi, class, m, kappa).ok_or_else(|| {
            CliError::Usage(format!(
                "no default region for phi={} class={class}; pass --region-radius",
                phi.name()
            ))
        })??,
    };
    let spec = cfg.sample_spec();
    let report = audit(&phi, &region, class, m, kappa, &spec)?;
    emit(&args.common, cfg.format, &[audit_record(&report)])?;
    if let Some(path) = &args.violations {
        write_violations(path, &report)?;
    }
    Ok(Outcome::from_pass(report.violation_free()))
}

//! Run configuration, loaded from TOML and overridden by flags.
//!
//! ```toml
//! order = 64
//! seed = 20240917
//! format = "table"          # table | json-lines | csv
//!
//! [grid]
//! radii = [0.5, 0.9, 0.99, 0.999]
//! angles = 4096
//!
//! [tolerances]
//! identity = 1e-11
//! implication = 1e-9
//! premise_margin = 1e-6
//! denominator_guard = 1e-6
//! max_skip_fraction = 0.05
//!
//! [sweep]
//! p = ["0", "0.5", "1.25", "2", "0.75+0.5i"]
//! b = ["0", "1", "2", "3", "1-0.5i"]
//! c = ["-2", "-1", "0", "1", "1.2+1.2i"]
//! random_functions = 5
//!
//! [audit]
//! m = 1.0
//! theta_samples = 360
//! k_grid = [1.0, 1.25, 1.5, 2.0, 4.0, 10.0]
//! ray_offsets = [0.0, 1.0, 10.0]
//! ```
//!
//! Complex values are strings such as `"1.5"`, `"2i"` or `"0.1-0.2i"`.

use std::path::Path;

use bessel_subord_core::admissibility::SampleSpec;
use bessel_subord_core::family::{self, DEFAULT_SEED};
use bessel_subord_core::series::{DiskGrid, DEFAULT_ORDER};
use bessel_subord_core::subordination::Tolerances;
use num_complex::Complex64;
use serde::Deserialize;

use crate::report::ReportFormat;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub radii: Vec<f64>,
    pub angles: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let grid = DiskGrid::default();
        GridConfig {
            radii: grid.radii().to_vec(),
            angles: grid.angular_samples(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Coefficient identities (recursion, ODE recurrence).
    pub identity: f64,
    pub implication: f64,
    pub premise_margin: f64,
    pub denominator_guard: f64,
    pub max_skip_fraction: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let t = Tolerances::default();
        ToleranceConfig {
            identity: 1e-11,
            implication: t.implication_tol,
            premise_margin: t.premise_margin,
            denominator_guard: t.denominator_guard,
            max_skip_fraction: t.max_skip_fraction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub p: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
    pub random_functions: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let show = |v: Vec<Complex64>| v.into_iter().map(format_complex).collect();
        SweepConfig {
            p: show(family::default_p_values()),
            b: show(family::default_b_values()),
            c: show(family::default_c_values()),
            random_functions: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditConfig {
    pub m: f64,
    pub theta_samples: usize,
    pub k_grid: Vec<f64>,
    pub ray_offsets: Vec<f64>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        let s = SampleSpec::default();
        AuditConfig {
            m: 1.0,
            theta_samples: s.theta_samples,
            k_grid: s.k_grid,
            ray_offsets: s.ray_offsets,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub order: usize,
    pub seed: u64,
    pub format: ReportFormat,
    pub grid: GridConfig,
    pub tolerances: ToleranceConfig,
    pub sweep: SweepConfig,
    pub audit: AuditConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: DEFAULT_ORDER,
            seed: DEFAULT_SEED,
            format: ReportFormat::Table,
            grid: GridConfig::default(),
            tolerances: ToleranceConfig::default(),
            sweep: SweepConfig::default(),
            audit: AuditConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let t = &self.tolerances;
        for (name, v) in [
            ("identity", t.identity),
            ("implication", t.implication),
            ("premise_margin", t.premise_margin),
            ("denominator_guard", t.denominator_guard),
            ("max_skip_fraction", t.max_skip_fraction),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        if self.order < 2 {
            return Err(CliError::Config("order must be at least 2".into()));
        }
        if !(self.audit.m > 0.0 && self.audit.m.is_finite()) {
            return Err(CliError::Config("audit.m must be positive".into()));
        }
        self.disk_grid()?;
        self.sweep_box()?;
        Ok(())
    }

    pub fn disk_grid(&self) -> Result<DiskGrid, CliError> {
        Ok(DiskGrid::new(self.grid.radii.clone(), self.grid.angles)?)
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            premise_margin: self.tolerances.premise_margin,
            implication_tol: self.tolerances.implication,
            denominator_guard: self.tolerances.denominator_guard,
            max_skip_fraction: self.tolerances.max_skip_fraction,
        }
    }

    /// `(p, b, c)` value lists of the sweep box.
    pub fn sweep_box(&self) -> Result<[Vec<Complex64>; 3], CliError> {
        let parse = |v: &[String]| v.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>, _>>();
        Ok([parse(&self.sweep.p)?, parse(&self.sweep.b)?, parse(&self.sweep.c)?])
    }

    pub fn sample_spec(&self) -> SampleSpec {
        SampleSpec {
            theta_samples: self.audit.theta_samples,
            k_grid: self.audit.k_grid.clone(),
            ray_offsets: self.audit.ray_offsets.clone(),
            ..SampleSpec::default()
        }
    }
}

/// Parses `"a"`, `"bi"`, `"a+bi"` or `"a-bi"` (`j` is accepted for `i`).
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    compact
        .parse::<Complex64>()
        .map_err(|_| CliError::Usage(format!("cannot parse complex number {s:?}")))
}

/// `a`, or `a+bi` / `a-bi` when the imaginary part is nonzero.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::ReportFormat;

#[derive(Parser, Debug)]
#[command(
    name = "bessel-subord",
    version,
    about = "Checks for the generalized-Bessel convolution operator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate φ at points and compare with a matching closed form
    Eval(EvalArgs),
    /// Run implication and identity checks
    Verify(VerifyArgs),
    /// Sample an admissibility boundary set for a functional
    Audit(AuditArgs),
}

/// Flags shared by every subcommand. Each overrides the config file.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// TOML run configuration
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Truncation order
    #[arg(long = "N")]
    pub order: Option<usize>,
    /// Comma-separated grid radii, each in (0, 0.999]
    #[arg(long, value_delimiter = ',')]
    pub grid_radii: Option<Vec<f64>>,
    /// Angular samples per radius
    #[arg(long)]
    pub grid_angles: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `(p, b, c)` or `(κ, c)`; complex values as `a+bi`.
#[derive(Args, Debug, Default, Clone)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Sets p = κ - (b+1)/2; conflicts with --p
    #[arg(long, allow_hyphen_values = true, conflicts_with = "p")]
    pub kappa: Option<String>,
}

impl ParamArgs {
    pub fn any(&self) -> bool {
        self.p.is_some() || self.b.is_some() || self.c.is_some() || self.kappa.is_some()
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Evaluation points; repeat the flag or separate with commas
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub z: Vec<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// The configured (p, b, c) box
    Default,
    /// Only the parameters given on the command line
    Single,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Case ids (C2_4, C2_5, C2_8, C2_11, C2_12, chain_2_111, chain_4_10,
    /// trig_chain_sin, trig_chain_sinh, recursion, ode_residual, all)
    #[arg(long, value_delimiter = ',')]
    pub case: Vec<String>,
    /// Parameter sweep; defaults to `single` when parameters are given
    #[arg(long, value_enum)]
    pub sweep: Option<SweepKind>,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Functional: v, v-u or v-1
    #[arg(long)]
    pub phi: String,
    /// Boundary class: H, H1 or H2
    #[arg(long, default_value = "H")]
    pub class: String,
    /// Disk radius M of the dominant
    #[arg(long = "M")]
    pub m: Option<f64>,
    /// Radius of the avoided disk, replacing the functional's default
    #[arg(long)]
    pub region_radius: Option<f64>,
    /// Dump violating points as CSV
    #[arg(long)]
    pub violations: Option<PathBuf>,
}

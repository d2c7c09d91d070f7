use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use singlet_core::simlab::{DEFAULT_ALPHA, DEFAULT_SEED, DEFAULT_TRIALS};

#[derive(Debug, Parser)]
#[command(
    name = "singlet",
    version,
    about = "Compare Braunstein-Caves and random measurement singlet tests"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic expectation tables with the power verdict per scenario.
    Tables(TablesArgs),
    /// Monte Carlo power curves with exact and CLT power.
    Power(PowerArgs),
    /// LHV gap functions and calibration-error thresholds.
    Gaps(GapsArgs),
    /// Oracle cross-checks; exits with status 2 if any fails.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub n_param: u32,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeChoice {
    Bc,
    Rm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThetaPolicy {
    /// θ = π/2N, matching the BC null distribution.
    #[value(name = "pi-over-2N")]
    PiOver2N,
    /// θ = arcsin(2/π), best against Bell's hemisphere model.
    #[value(name = "arcsin2pi")]
    Arcsin2Pi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioChoice {
    Singlet,
    Intercept,
    Transform,
    Werner,
    LhvBell,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[arg(long, value_enum, default_value_t = ScenarioChoice::Intercept)]
    pub scenario: ScenarioChoice,
    /// Intercept basis angle ψ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub psi: f64,
    /// Intercept basis phase β.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Singlet infidelity ε of the transformed state.
    #[arg(long, default_value_t = 0.1, value_parser = unit_interval)]
    pub epsilon: f64,
    /// Φ⁺ weight of the transformed state, at most ε.
    #[arg(long, default_value_t = 0.0, value_parser = unit_interval)]
    pub phi_plus: f64,
    /// Werner noise weight δ.
    #[arg(long, default_value_t = 0.1, value_parser = unit_interval)]
    pub delta: f64,

    #[arg(long, value_enum, default_value_t = SchemeChoice::Both)]
    pub scheme: SchemeChoice,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub n_param: u32,
    /// RM separation in radians (Bloch angle).
    #[arg(long, conflicts_with = "theta_policy", value_parser = theta_range)]
    pub theta: Option<f64>,
    #[arg(long, value_enum)]
    pub theta_policy: Option<ThetaPolicy>,
    #[arg(long, default_value_t = DEFAULT_ALPHA, value_parser = open_unit_interval)]
    pub alpha: f64,
    /// Single sample size instead of the default grid.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct GapsArgs {
    /// Largest N for D(N) and the δ thresholds.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(2..))]
    pub max_n: u32,
    /// Number of θ points for D̃(θ) over [0, π/2].
    #[arg(long, default_value_t = 17, value_parser = clap::value_parser!(u32).range(2..))]
    pub theta_points: u32,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Grid points per axis for the numeric RM integral.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(4..))]
    pub resolution: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Offset added to every closed form, to exercise the failure path.
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub perturb: f64,
    #[command(flatten)]
    pub out: OutArg,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is outside [0, 1]"))
    }
}

fn open_unit_interval(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is outside (0, 1)"))
    }
}

fn theta_range(s: &str) -> Result<f64, String> {
    let x = parse_f64(s)?;
    if (0.0..=std::f64::consts::FRAC_PI_2).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is outside [0, π/2]"))
    }
}

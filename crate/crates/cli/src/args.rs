use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dml_core::model::{
    DEFAULT_A, DEFAULT_ALPHA, DEFAULT_ALPHA1, DEFAULT_BETA, DEFAULT_K, DEFAULT_K1, DEFAULT_K2, DEFAULT_OMEGA,
    DEFAULT_PHI_EXT,
};

#[derive(Debug, Parser)]
#[command(name = "dml", version, about = "Bifurcation analysis and simulation of the denatured Morris-Lecar neuron")]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "DML_OUT_DIR", default_value = "dml-out")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample both nullclines of the two-variable model.
    Nullclines(NullclineArgs),
    /// Find and classify all equilibria.
    Equilibria(EquilibriaArgs),
    /// Continue an equilibrium branch in I or gamma.
    Continue(ContinueArgs),
    /// Fold and Hopf loci in the (I, gamma) plane, with cusp and generalized Hopf points.
    Codim2(Codim2Args),
    /// Locate the cusp point.
    Cusp(CuspArgs),
    /// Locate generalized Hopf points along the Hopf locus.
    Gh(RateArgs),
    /// Classify a grid of (I, gamma) into regions R1 to R4.
    Regions(RegionArgs),
    /// Recover gamma from reported fold and Hopf currents.
    FitGamma(FitArgs),
    /// Integrate either model, from a named scenario or explicit parameters.
    Simulate(SimulateArgs),
    /// Label the firing regime of a series.
    Classify(ClassifyArgs),
    /// Classify the forced model over a range of forcing amplitudes.
    Sweep(SweepArgs),
    /// Named parameter sets.
    Scenario {
        #[command(subcommand)]
        command: ScenarioCommand,
    },
    /// Re-run the command recorded in a manifest.
    Rerun {
        manifest: PathBuf,
    },
    /// Render an SVG figure from output files.
    Render(RenderArgs),
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCommand {
    /// Print every scenario with its parameters.
    List,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct RateArgs {
    #[arg(long = "A", default_value_t = DEFAULT_A, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = DEFAULT_ALPHA, allow_hyphen_values = true)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ModelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long = "I", default_value_t = 0.0, allow_hyphen_values = true)]
    pub current: f64,
    #[command(flatten)]
    pub rate: RateArgs,
}

#[derive(Debug, Args)]
pub struct NullclineArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub x_from: f64,
    #[arg(long, default_value_t = 1.2, allow_hyphen_values = true)]
    pub x_to: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct EquilibriaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = dml_core::equilibria::DEFAULT_X_LO, allow_hyphen_values = true)]
    pub x_lo: f64,
    #[arg(long, default_value_t = dml_core::equilibria::DEFAULT_X_HI, allow_hyphen_values = true)]
    pub x_hi: f64,
    #[arg(long, default_value_t = dml_core::equilibria::DEFAULT_GRID_N)]
    pub grid_n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Free {
    #[value(name = "I")]
    Current,
    #[value(name = "gamma")]
    Gamma,
}

#[derive(Debug, Args)]
pub struct ContinueArgs {
    #[arg(long, value_enum)]
    pub free: Free,
    /// Start value of the free parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    /// End value of the free parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    /// Fixed gamma when continuing in I.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Fixed I when continuing in gamma.
    #[arg(long = "I", allow_hyphen_values = true)]
    pub current: Option<f64>,
    #[command(flatten)]
    pub rate: RateArgs,
    /// Which equilibrium (in increasing x) at the start value to follow.
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
    pub h0: f64,
    #[arg(long, default_value_t = 1e-6, allow_hyphen_values = true)]
    pub hmin: f64,
    #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
    pub hmax: f64,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = -0.02, allow_hyphen_values = true)]
    pub i_from: f64,
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub i_to: f64,
    #[arg(long, default_value_t = 0.15, allow_hyphen_values = true)]
    pub gamma_from: f64,
    #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
    pub gamma_to: f64,
    #[arg(long, default_value_t = 25)]
    pub ni: usize,
    #[arg(long, default_value_t = 25)]
    pub ngamma: usize,
    /// Simulation horizon of each cycle probe.
    #[arg(long, default_value_t = 3000.0, allow_hyphen_values = true)]
    pub horizon: f64,
}

#[derive(Debug, Args)]
pub struct Codim2Args {
    #[command(flatten)]
    pub rate: RateArgs,
    /// Abscissae per locus.
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    /// Also classify a region grid.
    #[arg(long)]
    pub regions: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct CuspArgs {
    #[command(flatten)]
    pub rate: RateArgs,
    /// Gamma at which the fold pair is picked up before tracking it to the cusp.
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub track_from: f64,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub rate: RateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub rate: RateArgs,
    /// Reported point as `fold:<I>` or `hopf:<I>`; repeatable.
    #[arg(long = "target", required = true)]
    pub targets: Vec<String>,
    /// Gamma search interval; defaults to (gamma_cusp, 1/3).
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_to: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub scan: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Original,
    Improved,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Named scenario; explicit parameter flags are ignored when given.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long, value_enum, default_value_t = ModelKind::Improved)]
    pub model: ModelKind,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Constant current of the original model.
    #[arg(long = "I", default_value_t = 0.0, allow_hyphen_values = true)]
    pub current: f64,
    /// Forcing amplitude of the improved model.
    #[arg(long = "I0", default_value_t = 0.0, allow_hyphen_values = true)]
    pub i0: f64,
    #[command(flatten)]
    pub rate: RateArgs,
    #[arg(long, default_value_t = DEFAULT_OMEGA, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = DEFAULT_K, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, default_value_t = DEFAULT_K1, allow_hyphen_values = true)]
    pub k1: f64,
    #[arg(long, default_value_t = DEFAULT_K2, allow_hyphen_values = true)]
    pub k2: f64,
    #[arg(long, default_value_t = DEFAULT_ALPHA1, allow_hyphen_values = true)]
    pub alpha1: f64,
    #[arg(long, default_value_t = DEFAULT_BETA, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = DEFAULT_PHI_EXT, allow_hyphen_values = true)]
    pub phi_ext: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub phi0: f64,
    /// End time; defaults to 20 forcing periods, or 1000 for the original model.
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12, allow_hyphen_values = true)]
    pub atol: f64,
    /// Sample spacing; defaults to 1/2000 of the forcing period, or 0.1.
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Series CSV with columns t, x and optionally y, phi.
    #[arg(long, conflicts_with = "scenario")]
    pub input: Option<PathBuf>,
    /// Simulate and classify a named scenario.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Forcing period; read from the series' meta file when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub period: Option<f64>,
    /// Leading fraction of the series to drop.
    #[arg(long, allow_hyphen_values = true)]
    pub transient: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub i0_from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub i0_to: f64,
    #[arg(long, default_value_t = 11)]
    pub n: usize,
    #[command(flatten)]
    pub rate: RateArgs,
    #[arg(long, default_value_t = DEFAULT_OMEGA, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = DEFAULT_K, allow_hyphen_values = true)]
    pub k: f64,
    /// Horizon in forcing periods.
    #[arg(long, default_value_t = dml_core::simulate::SCENARIO_PERIODS, allow_hyphen_values = true)]
    pub periods: f64,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderKind {
    Nullclines,
    Branch,
    Codim2,
    Series,
    Phase,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(value_enum)]
    pub kind: RenderKind,
    /// Data files: one CSV, or for `codim2` the fold then the Hopf locus CSV.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Output file name inside the output directory.
    #[arg(long)]
    pub output: Option<String>,
}

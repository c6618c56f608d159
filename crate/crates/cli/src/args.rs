use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrecover_core::harness::{EnsembleKind, GridRange, Preset, QMode};
use qrecover_core::TrajectoryMode;

#[derive(Debug, Parser)]
#[command(
    name = "qrecover",
    version,
    about = "Weak-measurement feed-forward recovery of two-qubit states under amplitude damping",
    after_help = "Set QRECOVER_THREADS to cap the number of worker threads.\n\
                  Exit codes: 0 ok, 1 usage error, 2 infeasible parameters, 3 validation failure, 4 I/O error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the protocol once on a single state and print per-branch results.
    Run(RunArgs),
    /// Average fidelity and success over a random ensemble on a parameter grid; writes CSV.
    Sweep(SweepArgs),
    /// Extract the fidelity/success trade-off boundary from a sweep CSV.
    Pareto(ParetoArgs),
    /// Run the built-in invariant checks.
    Validate,
    /// Render CSV columns as an SVG line chart or heatmap.
    Plot(PlotArgs),
}

/// How the post-measurement strength is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QModeArg {
    /// Use the given value or grid.
    Grid,
    /// Use the complete-recovery value for each (p, r).
    Complete,
}

impl From<QModeArg> for QMode {
    fn from(m: QModeArg) -> Self {
        match m {
            QModeArg::Grid => QMode::Grid,
            QModeArg::Complete => QMode::CompleteRecovery,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Keep every damping outcome.
    All,
    /// Keep only the outcome where neither qubit decays.
    Nojump,
}

impl From<ModeArg> for TrajectoryMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::All => TrajectoryMode::All,
            ModeArg::Nojump => TrajectoryMode::NoJumpOnly,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    /// Haar-random pure states.
    Pure,
    /// Hilbert–Schmidt (Ginibre) random density matrices.
    Mixed,
}

impl From<EnsembleArg> for EnsembleKind {
    fn from(e: EnsembleArg) -> Self {
        match e {
            EnsembleArg::Pure => EnsembleKind::Pure,
            EnsembleArg::Mixed => EnsembleKind::Mixed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NamedState {
    /// (|00⟩ + |11⟩)/√2
    Bell,
    /// |00⟩
    Ground,
    /// (|01⟩ + |10⟩)/√2
    WLike,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    /// p at the feasibility bound: highest success.
    MaxSuccess,
    /// p one step below 1: highest fidelity.
    MaxFidelity,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::MaxSuccess => Preset::MaxSuccess,
            PresetArg::MaxFidelity => Preset::MaxFidelity,
        }
    }
}

/// `--q` value: a number in [0, 1] or `complete`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QArg {
    Value(f64),
    Complete,
}

fn parse_q(s: &str) -> Result<QArg, String> {
    if s.eq_ignore_ascii_case("complete") {
        return Ok(QArg::Complete);
    }
    s.parse::<f64>()
        .map(QArg::Value)
        .map_err(|_| format!("expected a number or `complete`, got {s:?}"))
}

fn parse_grid(s: &str) -> Result<GridRange, String> {
    s.parse().map_err(|e: qrecover_core::Error| e.to_string())
}

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false)]
pub struct StateInput {
    /// Named initial state.
    #[arg(long, value_enum)]
    pub state: Option<NamedState>,
    /// Amplitudes as 8 reals: re,im of α, β, γ, δ (basis |00⟩,|01⟩,|10⟩,|11⟩).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub amps: Option<Vec<f64>>,
    /// File with a density matrix: 32 reals, row-major re/im pairs,
    /// separated by whitespace or commas; `#` starts a comment.
    #[arg(long, value_name = "PATH")]
    pub rho_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: StateInput,
    /// Pre-measurement strength.
    #[arg(long)]
    pub p: f64,
    /// Post-measurement strength, or `complete` for the complete-recovery value.
    #[arg(long, value_parser = parse_q)]
    pub q: Option<QArg>,
    /// Damping probability.
    #[arg(long)]
    pub r: f64,
    /// `complete` is the same as `--q complete`.
    #[arg(long, value_enum)]
    pub q_mode: Option<QModeArg>,
    #[arg(long, value_enum, default_value = "all")]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Single damping probability (shorthand for a one-point --r-grid).
    #[arg(long, conflicts_with = "r_grid")]
    pub r: Option<f64>,
    /// Damping grid a:b:step.
    #[arg(long, value_parser = parse_grid)]
    pub r_grid: Option<GridRange>,
    /// Single pre-measurement strength.
    #[arg(long, conflicts_with = "p_grid")]
    pub p: Option<f64>,
    /// Pre-measurement grid a:b:step.
    #[arg(long, value_parser = parse_grid)]
    pub p_grid: Option<GridRange>,
    /// Single post-measurement strength.
    #[arg(long, conflicts_with = "q_grid")]
    pub q: Option<f64>,
    /// Post-measurement grid a:b:step. Not allowed with `--q-mode complete`.
    #[arg(long, value_parser = parse_grid)]
    pub q_grid: Option<GridRange>,
    #[arg(long, value_enum, default_value = "grid")]
    pub q_mode: QModeArg,
    #[arg(long, value_enum, default_value = "all")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "pure")]
    pub ensemble: EnsembleArg,
    /// Number of random initial states.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// For each r, pick p by a named rule and q by complete recovery.
    /// The p grid step sets how close to 1 `max-fidelity` goes.
    #[arg(long, value_enum, conflicts_with_all = ["p", "q", "q_grid"])]
    pub preset: Option<PresetArg>,
    #[arg(long, default_value = "sweep.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ParetoArgs {
    /// Sweep CSV to read.
    #[arg(long = "in", default_value = "sweep.csv")]
    pub input: PathBuf,
    #[arg(long, default_value = "pareto.csv")]
    pub out: PathBuf,
    /// Number of fidelity bins.
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Use only rows with this damping probability.
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Line,
    Heatmap,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// CSV to read (sweep or Pareto output).
    #[arg(long = "in", default_value = "pareto.csv")]
    pub input: PathBuf,
    #[arg(long, default_value = "plot.svg")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "line")]
    pub kind: PlotKind,
    /// Column for the horizontal axis.
    #[arg(long, default_value = "fidelity")]
    pub x: String,
    /// Column for the vertical axis.
    #[arg(long, default_value = "success")]
    pub y: String,
    /// Column giving the heatmap colour.
    #[arg(long, default_value = "fid_mean")]
    pub z: String,
    /// Draw one line per distinct value of this column.
    #[arg(long)]
    pub group: Option<String>,
    /// Chart title.
    #[arg(long)]
    pub title: Option<String>,
}

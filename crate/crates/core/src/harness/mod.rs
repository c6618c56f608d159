//! Monte-Carlo machinery: random state ensembles, parameter sweeps, the
//! uncontrolled baseline, Pareto boundaries, and CSV output.

pub mod baseline;
pub mod csvio;
pub mod ensemble;
pub mod pareto;
pub mod stats;
pub mod sweep;

pub use baseline::{baseline_damped, baseline_ensemble, InitialState};
pub use ensemble::{sample_mixed, sample_pure, Ensemble, EnsembleKind, EnsembleSpec, RNG_ALGORITHM};
pub use pareto::{pareto, ParetoPoint};
pub use sweep::{preset_sweep, sweep, sweep_with, CellStats, GridRange, Preset, QMode, SweepRow, SweepSpec};

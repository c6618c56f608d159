use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channelbank::{RecoveryOperators, Strength};
use crate::conditions::{complete_recovery_q, min_pre_strength, RecoveryParams};
use crate::error::{Error, Result};
use crate::harness::ensemble::{Ensemble, EnsembleKind, EnsembleSpec, EnsembleState};
use crate::harness::stats::summarize;
use crate::mixed_recovery::run_total_mixed_with;
use crate::pure_recovery::{run_total_with, TrajectoryMode};

/// Inclusive `start:end:step` range inside `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) {
            return Err(Error::InvalidGrid(format!("bounds {start}:{end} must lie in [0, 1]")));
        }
        if start > end {
            return Err(Error::InvalidGrid(format!("start {start} exceeds end {end}")));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidGrid(format!("step {step} must be positive")));
        }
        Ok(Self { start, end, step })
    }

    pub fn single(x: f64) -> Result<Self> {
        Self::new(x, x, 1.0)
    }

    /// `start + k·step` for every `k` that stays within `end`, rounded to
    /// 12 decimals so that e.g. `0.06` prints as `0.06`.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| {
                let x = self.start + k as f64 * self.step;
                ((x * 1e12).round() / 1e12).min(self.end)
            })
            .collect()
    }
}

impl FromStr for GridRange {
    type Err = Error;

    /// `a:b:step`, or a single number.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("cannot parse {t:?} in {s:?}")))
        };
        match parts.as_slice() {
            [x] => Self::single(num(x)?),
            [a, b, step] => Self::new(num(a)?, num(b)?, num(step)?),
            _ => Err(Error::InvalidGrid(format!("expected a:b:step, got {s:?}"))),
        }
    }
}

impl fmt::Display for GridRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QMode {
    /// Sweep `q` over its own grid.
    Grid,
    /// Derive `q` from `(p, r)` by the complete-recovery condition.
    CompleteRecovery,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub r_grid: GridRange,
    pub p_grid: GridRange,
    pub q_grid: GridRange,
    pub q_mode: QMode,
    pub mode: TrajectoryMode,
    pub ensemble: EnsembleSpec,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellStats {
    pub fid_mean: f64,
    pub fid_std: f64,
    pub g_mean: f64,
    pub g_std: f64,
    pub n_states: usize,
}

/// One grid cell. `stats` is `None` for infeasible cells: complete recovery
/// impossible (`p < p_min(r)`), or success probability identically zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub p: f64,
    /// `None` where complete recovery has no valid `q`.
    pub q: Option<f64>,
    pub ensemble: EnsembleKind,
    pub seed: u64,
    pub stats: Option<CellStats>,
}

impl SweepRow {
    pub fn feasible(&self) -> bool {
        self.stats.is_some()
    }
}

/// How `p` is picked per damping rate when sweeping `r` alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `p = p_min(r)`: the weakest pre-measurement allowed, best success.
    MaxSuccess,
    /// `p = 1 - step`: the strongest non-degenerate pre-measurement on the
    /// grid, best fidelity.
    MaxFidelity,
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    r: Strength,
    p: Strength,
    q: Option<Strength>,
}

fn evaluate_cell(ensemble: &Ensemble, cell: Cell, mode: TrajectoryMode) -> Result<SweepRow> {
    let spec = ensemble.spec();
    let mut row = SweepRow {
        r: cell.r.get(),
        p: cell.p.get(),
        q: cell.q.map(Strength::get),
        ensemble: spec.kind,
        seed: spec.seed,
        stats: None,
    };
    let Some(q) = cell.q else {
        return Ok(row);
    };
    let ops = RecoveryOperators::new(RecoveryParams {
        p: cell.p,
        q,
        r: cell.r,
    });
    let mut fids = Vec::with_capacity(ensemble.states().len());
    let mut gs = Vec::with_capacity(ensemble.states().len());
    for state in ensemble.states() {
        let res = match state {
            EnsembleState::Pure(psi) => run_total_with(&ops, psi, mode),
            EnsembleState::Mixed(prepared) => run_total_mixed_with(&ops, prepared, mode),
        };
        match res {
            Ok(res) => {
                fids.push(res.fid_total);
                gs.push(res.g_total);
            }
            // The total success probability does not depend on the state,
            // so a vanishing total means the whole cell is empty.
            Err(Error::DegenerateTotal { .. }) => return Ok(row),
            Err(e) => return Err(e),
        }
    }
    let (f, g) = (summarize(&fids), summarize(&gs));
    row.stats = Some(CellStats {
        fid_mean: f.mean,
        fid_std: f.std,
        g_mean: g.mean,
        g_std: g.std,
        n_states: f.n,
    });
    Ok(row)
}

fn evaluate_cells(ensemble: &Ensemble, cells: Vec<Cell>, mode: TrajectoryMode) -> Result<Vec<SweepRow>> {
    if cells.is_empty() {
        return Err(Error::EmptyGrid);
    }
    // Parallel over cells, each cell reduced in fixed state order; `collect`
    // keeps cell order, so output is independent of the thread count.
    cells
        .into_par_iter()
        .map(|cell| evaluate_cell(ensemble, cell, mode))
        .collect()
}

fn strength(name: &'static str, x: f64) -> Result<Strength> {
    Strength::named(name, x)
}

/// Rows ordered by `r`, then `p`, then `q`.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let ensemble = Ensemble::generate(spec.ensemble)?;
    sweep_with(&ensemble, spec)
}

/// [`sweep`] over an already generated ensemble.
pub fn sweep_with(ensemble: &Ensemble, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut cells = Vec::new();
    for r in spec.r_grid.values() {
        let r = strength("r", r)?;
        for p in spec.p_grid.values() {
            let p = strength("p", p)?;
            match spec.q_mode {
                QMode::Grid => {
                    for q in spec.q_grid.values() {
                        cells.push(Cell {
                            r,
                            p,
                            q: Some(strength("q", q)?),
                        });
                    }
                }
                QMode::CompleteRecovery => {
                    let q = match complete_recovery_q(p, r) {
                        Ok(q) => Some(q),
                        Err(Error::Infeasible { .. } | Error::ZeroStrength) => None,
                        Err(e) => return Err(e),
                    };
                    cells.push(Cell { r, p, q });
                }
            }
        }
    }
    evaluate_cells(ensemble, cells, spec.mode)
}

/// The `p` a preset picks at damping rate `r`.
pub fn preset_p(preset: Preset, r: Strength, p_step: f64) -> Result<Strength> {
    match preset {
        Preset::MaxSuccess => Ok(min_pre_strength(r)),
        Preset::MaxFidelity => {
            if !(p_step > 0.0 && p_step < 1.0) {
                return Err(Error::InvalidGrid(format!("p step {p_step} must lie in (0, 1)")));
            }
            strength("p", 1.0 - p_step)
        }
    }
}

/// One complete-recovery row per `r`, with `p` chosen by `preset`.
pub fn preset_sweep(
    ensemble: &Ensemble,
    r_grid: &GridRange,
    preset: Preset,
    p_step: f64,
    mode: TrajectoryMode,
) -> Result<Vec<SweepRow>> {
    let cells = r_grid
        .values()
        .into_iter()
        .map(|r| {
            let r = strength("r", r)?;
            let p = preset_p(preset, r, p_step)?;
            let q = complete_recovery_q(p, r).ok();
            Ok(Cell { r, p, q })
        })
        .collect::<Result<Vec<_>>>()?;
    evaluate_cells(ensemble, cells, mode)
}

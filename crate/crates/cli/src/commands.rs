use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use qrecover_core::conditions::{complete_recovery_q, min_pre_strength};
use qrecover_core::harness::csvio::{format_f, read_sweep_csv, write_pareto_csv, write_sweep_csv, SweepMeta};
use qrecover_core::harness::{
    baseline_damped, pareto, preset_sweep, sweep_with, Ensemble, EnsembleSpec, GridRange, InitialState, QMode,
    SweepRow, SweepSpec,
};
use qrecover_core::mixed_recovery::run_total_mixed;
use qrecover_core::pure_recovery::run_total;
use qrecover_core::validation;
use qrecover_core::{RecoveryParams, RunResult, Strength, TrajectoryMode};

use crate::args::{ParetoArgs, QArg, QModeArg, RunArgs, SweepArgs};
use crate::failure::{Failure, VALIDATION};
use crate::state;

pub type Outcome = Result<(), Failure>;

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::io(path.display(), e))
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| Failure::io(path.display(), e))
}

fn strength(name: &'static str, x: f64) -> Result<Strength, Failure> {
    Ok(Strength::named(name, x)?)
}

fn resolve_q(args: &RunArgs, p: Strength, r: Strength) -> Result<Strength, Failure> {
    match (args.q, args.q_mode) {
        (Some(QArg::Value(_)), Some(QModeArg::Complete)) => {
            Err(Failure::usage("--q <value> and --q-mode complete are mutually exclusive"))
        }
        (Some(QArg::Complete), _) | (None, Some(QModeArg::Complete)) => Ok(complete_recovery_q(p, r)?),
        (Some(QArg::Value(q)), _) => strength("q", q),
        (None, _) => Err(Failure::usage("--q is required (a value in [0, 1] or `complete`)")),
    }
}

pub fn run(args: &RunArgs) -> Outcome {
    let input = state::load(&args.input)?;
    let (p, r) = (strength("p", args.p)?, strength("r", args.r)?);
    let q = resolve_q(args, p, r).map_err(|f| {
        if f.code == crate::failure::INFEASIBLE {
            let bound = min_pre_strength(r).get();
            Failure {
                message: format!("{}\ncomplete recovery requires p >= (1-r)/(2-r) = {}", f.message, format_f(bound)),
                ..f
            }
        } else {
            f
        }
    })?;
    let params = RecoveryParams { p, q, r };
    let mode = TrajectoryMode::from(args.mode);
    let result: Result<RunResult, _> = match &input {
        InitialState::Pure(psi) => run_total(psi, &params, mode),
        InitialState::Mixed(rho) => run_total_mixed(rho, &params, mode),
    };
    let kind = match input {
        InitialState::Pure(_) => "pure",
        InitialState::Mixed(_) => "mixed",
    };
    let mut out = std::io::stdout().lock();
    let mut emit = |line: String| writeln!(out, "{line}").map_err(|e| Failure::io("stdout", e));
    emit(format!("state={kind} p={} q={} r={}", format_f(p.get()), format_f(q.get()), format_f(r.get())))?;
    emit(format!("q={}", format_f(q.get())))?;
    let result = match result {
        Ok(res) => res,
        Err(e) => {
            if p.get() == 1.0 {
                eprintln!("warning: p = 1 is a projective pre-measurement; with complete recovery q = 1 and no outcome survives");
            }
            return Err(e.into());
        }
    };
    for b in &result.per_branch {
        match b.fidelity {
            Some(f) => emit(format!("branch {}: g_fin={} fidelity={}", b.branch, format_f(b.g_fin), format_f(f)))?,
            None => emit(format!("branch {}: g_fin={} fidelity=undefined (branch never succeeds)", b.branch, format_f(b.g_fin)))?,
        }
    }
    emit(format!("fid_total={}", format_f(result.fid_total)))?;
    emit(format!("g_total={}", format_f(result.g_total)))?;
    emit(format!("baseline_fidelity={}", format_f(baseline_damped(&input, r)?)))?;
    Ok(())
}

fn grid_or(single: Option<f64>, grid: Option<GridRange>, default: &str) -> Result<GridRange, Failure> {
    match (single, grid) {
        (Some(x), _) => Ok(GridRange::single(x)?),
        (None, Some(g)) => Ok(g),
        (None, None) => Ok(default.parse()?),
    }
}

pub fn sweep(args: &SweepArgs) -> Outcome {
    let q_mode = QMode::from(args.q_mode);
    let complete = q_mode == QMode::CompleteRecovery || args.preset.is_some();
    if complete && (args.q.is_some() || args.q_grid.is_some()) {
        return Err(Failure::usage("--q/--q-grid cannot be combined with complete-recovery q"));
    }
    let r_grid = grid_or(args.r, args.r_grid, "0.5")?;
    let p_grid = grid_or(args.p, args.p_grid, "0:1:0.02")?;
    let q_grid = grid_or(args.q, args.q_grid, "0:1:0.02")?;
    let mode = TrajectoryMode::from(args.mode);
    let ensemble = Ensemble::generate(EnsembleSpec::new(args.ensemble.into(), args.n, args.seed)?)?;
    let rows = match args.preset {
        Some(preset) => preset_sweep(&ensemble, &r_grid, preset.into(), p_grid.step, mode)?,
        None => sweep_with(
            &ensemble,
            &SweepSpec {
                r_grid,
                p_grid,
                q_grid,
                q_mode,
                mode,
                ensemble: *ensemble.spec(),
            },
        )?,
    };
    let meta = SweepMeta {
        mode,
        q_mode: if complete { QMode::CompleteRecovery } else { q_mode },
    };
    let mut w = create(&args.out)?;
    write_sweep_csv(&mut w, &rows, &meta)?;
    w.flush().map_err(|e| Failure::io(args.out.display(), e))?;
    let feasible = rows.iter().filter(|r| r.feasible()).count();
    eprintln!("wrote {} rows ({feasible} feasible) to {}", rows.len(), args.out.display());
    Ok(())
}

fn select_r(rows: Vec<SweepRow>, r: Option<f64>) -> Vec<SweepRow> {
    match r {
        Some(r) => rows.into_iter().filter(|row| (row.r - r).abs() <= 1e-9).collect(),
        None => rows,
    }
}

pub fn pareto_cmd(args: &ParetoArgs) -> Outcome {
    let rows = select_r(read_sweep_csv(open(&args.input)?)?, args.r);
    let boundary = pareto(&rows, args.bins).map_err(|e| {
        let hint = match e {
            qrecover_core::Error::MixedDamping(_) => " (pass --r to choose one)",
            _ => "",
        };
        Failure::usage(format!("{}: {e}{hint}", args.input.display()))
    })?;
    let mut w = create(&args.out)?;
    write_pareto_csv(&mut w, &boundary)?;
    w.flush().map_err(|e| Failure::io(args.out.display(), e))?;
    eprintln!("wrote {} boundary points to {}", boundary.len(), args.out.display());
    Ok(())
}

pub fn validate() -> Outcome {
    let outcomes = validation::run_all();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    for o in &outcomes {
        println!("[{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    println!("{passed}/{} checks passed", outcomes.len());
    if passed == outcomes.len() {
        Ok(())
    } else {
        Err(Failure {
            code: VALIDATION,
            message: format!("{} check(s) failed", outcomes.len() - passed),
        })
    }
}

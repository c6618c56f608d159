//! Initial-state input: named presets, explicit amplitudes, or a density
//! matrix file. Inputs off from unit norm/trace by more than
//! [`INPUT_TOLERANCE`] are rejected; smaller deviations are rescaled.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qrecover_core::harness::InitialState;
use qrecover_core::{DensityMatrix, Matrix4c, TwoQubitPure};

use crate::args::{NamedState, StateInput};
use crate::failure::Failure;

pub const INPUT_TOLERANCE: f64 = 1e-9;

pub fn load(input: &StateInput) -> Result<InitialState, Failure> {
    if let Some(name) = input.state {
        return Ok(InitialState::Pure(match name {
            NamedState::Bell => TwoQubitPure::bell(),
            NamedState::Ground => TwoQubitPure::ground(),
            NamedState::WLike => TwoQubitPure::w_like(),
        }));
    }
    if let Some(amps) = &input.amps {
        return amplitudes(amps).map(InitialState::Pure);
    }
    if let Some(path) = &input.rho_file {
        return density_file(path).map(InitialState::Mixed);
    }
    Err(Failure::usage("one of --state, --amps, --rho-file is required"))
}

fn amplitudes(reals: &[f64]) -> Result<TwoQubitPure, Failure> {
    let v: [Complex64; 4] = pairs(reals, 4)?
        .try_into()
        .expect("length checked");
    TwoQubitPure::with_tolerance(v, INPUT_TOLERANCE).map_err(|e| Failure::usage(format!("--amps: {e}")))
}

fn pairs(reals: &[f64], n: usize) -> Result<Vec<Complex64>, Failure> {
    if reals.len() != 2 * n {
        return Err(Failure::usage(format!("expected {} reals, got {}", 2 * n, reals.len())));
    }
    Ok(reals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

pub fn parse_density(text: &str) -> Result<DensityMatrix, Failure> {
    let reals = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split(|c: char| c.is_whitespace() || c == ','))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Failure::usage(format!("density matrix: cannot parse {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let z = pairs(&reals, 16)?;
    let mut m = Matrix4c::zeros();
    for (k, v) in z.into_iter().enumerate() {
        m.0[k / 4][k % 4] = v;
    }
    DensityMatrix::with_tolerance(m, INPUT_TOLERANCE).map_err(|e| Failure::usage(format!("density matrix: {e}")))
}

fn density_file(path: &Path) -> Result<DensityMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path.display(), e))?;
    parse_density(&text)
}

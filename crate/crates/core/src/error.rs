use std::io;

use thiserror::Error;

use crate::channelbank::BranchId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("Jacobi iteration did not converge: off-diagonal norm {off_norm:e} after {sweeps} sweeps")]
    NonConvergence { off_norm: f64, sweeps: usize },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("state is not normalized (norm or trace {value}, tolerance {tolerance:e})")]
    NotNormalized { value: f64, tolerance: f64 },

    #[error("input contains a non-finite value")]
    NonFinite,

    #[error("branch {branch} has vanishing success probability {probability:e}")]
    DegenerateBranch { branch: BranchId, probability: f64 },

    #[error("total success probability {probability:e} vanishes")]
    DegenerateTotal { probability: f64 },

    #[error("complete recovery infeasible: p = {p} < p_min(r = {r}) = {p_min}")]
    Infeasible { p: f64, r: f64, p_min: f64 },

    #[error("complete recovery needs a nonzero pre-measurement strength")]
    ZeroStrength,

    #[error("fidelity {0} is outside [0, 1]")]
    FidelityOutOfRange(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("sweep grid is empty")]
    EmptyGrid,

    #[error("no usable rows in input")]
    EmptyInput,

    #[error("rows span several damping rates ({0:?}); select one")]
    MixedDamping(Vec<f64>),

    #[error("ensemble count must be at least 1")]
    EmptyEnsemble,

    #[error("bins must be at least 2, got {0}")]
    TooFewBins(usize),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

//! Recovery of mixed states through the branch maps
//! `ρ ↦ Σ_j K_bj ρ K_bj†` with `K_bj = N_b F_b e_j F_b M_b`.

use crate::channelbank::{BranchId, RecoveryOperators};
use crate::conditions::RecoveryParams;
use crate::error::{Error, Result};
use crate::pure_recovery::{BranchOutcome, RunResult, TrajectoryMode, DEGENERATE_PROBABILITY};
use crate::qmath::{DensityMatrix, FidelityReference, Matrix4c};

#[derive(Clone, Debug)]
pub struct MixedBranchResult {
    pub branch: BranchId,
    /// Output of the branch map before normalization.
    pub rho_unnorm: Matrix4c,
    /// `Tr(rho_unnorm)`
    pub g_fin: f64,
    pub rho_fin: DensityMatrix,
    /// Uhlmann fidelity between the input and `rho_fin`.
    pub fidelity: f64,
}

/// An input state together with its cached `√ρ`, so repeated fidelity
/// evaluations against it cost one eigenvalue solve each.
#[derive(Clone, Debug)]
pub struct PreparedMixed {
    rho: DensityMatrix,
    reference: FidelityReference,
}

impl PreparedMixed {
    pub fn new(rho: DensityMatrix) -> Result<Self> {
        Ok(Self {
            reference: FidelityReference::new(&rho)?,
            rho,
        })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }
}

/// Unnormalized branch output `Σ_j K_bj ρ K_bj†`.
pub fn branch_map(
    ops: &RecoveryOperators,
    rho: &DensityMatrix,
    b: BranchId,
    mode: TrajectoryMode,
) -> Matrix4c {
    mode.jumps()
        .map(|j| ops.get(b, j).sandwich(rho.matrix()))
        .fold(Matrix4c::zeros(), |acc, m| acc + m)
}

fn recover_branch_with(
    ops: &RecoveryOperators,
    input: &PreparedMixed,
    b: BranchId,
    mode: TrajectoryMode,
) -> Result<MixedBranchResult> {
    let rho_unnorm = branch_map(ops, &input.rho, b, mode);
    let g_fin = rho_unnorm.trace().re;
    if !(g_fin >= DEGENERATE_PROBABILITY) {
        return Err(Error::DegenerateBranch {
            branch: b,
            probability: g_fin,
        });
    }
    let rho_fin = DensityMatrix::from_unnormalized(&rho_unnorm)?;
    let fidelity = input.reference.fidelity(rho_fin.matrix())?;
    Ok(MixedBranchResult {
        branch: b,
        rho_unnorm,
        g_fin,
        rho_fin,
        fidelity,
    })
}

pub fn recover_branch(
    rho_in: &DensityMatrix,
    params: &RecoveryParams,
    b: BranchId,
    mode: TrajectoryMode,
) -> Result<MixedBranchResult> {
    let ops = RecoveryOperators::new(*params);
    recover_branch_with(&ops, &PreparedMixed::new(*rho_in)?, b, mode)
}

/// [`run_total_mixed`] with prebuilt operators and a prepared input.
pub fn run_total_mixed_with(
    ops: &RecoveryOperators,
    input: &PreparedMixed,
    mode: TrajectoryMode,
) -> Result<RunResult> {
    let mut per_branch = BranchId::ALL.map(|b| BranchOutcome {
        branch: b,
        g_fin: 0.0,
        fidelity: None,
    });
    for outcome in per_branch.iter_mut() {
        match recover_branch_with(ops, input, outcome.branch, mode) {
            Ok(res) => {
                outcome.g_fin = res.g_fin;
                outcome.fidelity = Some(res.fidelity);
            }
            Err(Error::DegenerateBranch { probability, .. }) => {
                outcome.g_fin = probability.max(0.0);
            }
            Err(e) => return Err(e),
        }
    }
    RunResult::from_branches(per_branch)
}

pub fn run_total_mixed(
    rho_in: &DensityMatrix,
    params: &RecoveryParams,
    mode: TrajectoryMode,
) -> Result<RunResult> {
    run_total_mixed_with(
        &RecoveryOperators::new(*params),
        &PreparedMixed::new(*rho_in)?,
        mode,
    )
}

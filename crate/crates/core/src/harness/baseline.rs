//! Fidelity of the damped state with no measurement or feed-forward at all.

use crate::channelbank::{damping_kraus, Strength};
use crate::error::Result;
use crate::harness::ensemble::{Ensemble, EnsembleState};
use crate::harness::stats::{summarize, Summary};
use crate::pure_recovery::TwoQubitPure;
use crate::qmath::{uhlmann_fidelity, DensityMatrix, Matrix4c};

/// A user-facing initial state of either kind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialState {
    Pure(TwoQubitPure),
    Mixed(DensityMatrix),
}

impl InitialState {
    pub fn density(&self) -> DensityMatrix {
        match self {
            InitialState::Pure(psi) => psi.density(),
            InitialState::Mixed(rho) => *rho,
        }
    }
}

/// `Σ_j e_j ρ e_j†`
pub fn damp(rho: &DensityMatrix, r: Strength) -> Matrix4c {
    damping_kraus(r)
        .iter()
        .map(|e| e.sandwich(rho.matrix()))
        .fold(Matrix4c::zeros(), |a, b| a + b)
}

pub fn baseline_damped(state: &InitialState, r: Strength) -> Result<f64> {
    let rho = state.density();
    let damped = DensityMatrix::from_unnormalized(&damp(&rho, r))?;
    match state {
        InitialState::Pure(psi) => Ok(damped.expectation(psi.amplitudes()).clamp(0.0, 1.0)),
        InitialState::Mixed(rho) => uhlmann_fidelity(rho, &damped),
    }
}

fn baseline_prepared(state: &EnsembleState, r: Strength) -> Result<f64> {
    match state {
        EnsembleState::Pure(psi) => baseline_damped(&InitialState::Pure(*psi), r),
        EnsembleState::Mixed(prepared) => baseline_damped(&InitialState::Mixed(*prepared.rho()), r),
    }
}

/// Mean and spread of the uncontrolled fidelity over an ensemble.
pub fn baseline_ensemble(ensemble: &Ensemble, r: Strength) -> Result<Summary> {
    let values = ensemble
        .states()
        .iter()
        .map(|s| baseline_prepared(s, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(&values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> Strength {
        Strength::new(x).unwrap()
    }

    #[test]
    fn ground_state_is_immune() {
        for r in [0.0, 0.4, 1.0] {
            let f = baseline_damped(&InitialState::Pure(TwoQubitPure::ground()), s(r)).unwrap();
            assert!((f - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn doubly_excited_state() {
        for r in [0.0, 0.2, 0.5, 0.9] {
            let f = baseline_damped(&InitialState::Pure(TwoQubitPure::basis(3)), s(r)).unwrap();
            assert!((f - (1.0 - r) * (1.0 - r)).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_state_half_damping() {
        let f = baseline_damped(&InitialState::Pure(TwoQubitPure::bell()), s(0.5)).unwrap();
        assert!((f - 0.625).abs() < 1e-12);
        // Mixed route through the Uhlmann formula agrees.
        let g = baseline_damped(&InitialState::Mixed(TwoQubitPure::bell().density()), s(0.5)).unwrap();
        assert!((g - 0.625).abs() < 1e-10);
    }

    #[test]
    fn damping_preserves_trace() {
        let rho = DensityMatrix::maximally_mixed();
        let d = damp(&rho, s(0.37));
        assert!((d.trace().re - 1.0).abs() < 1e-15);
    }
}

//! Simulation of weak-measurement feed-forward recovery of two-qubit states
//! subject to amplitude damping.
//!
//! The protocol per pre-measurement outcome `b`: weak measurement `M_b`,
//! bit-flip feed-forward `F_b`, the damping channel, the same flip again,
//! then a weak post-measurement `N_b`. Pure states are treated by
//! trajectory unravelling ([`pure_recovery`]), mixed states by the
//! corresponding branch maps ([`mixed_recovery`]).

pub mod channelbank;
pub mod conditions;
pub mod error;
pub mod harness;
pub mod mixed_recovery;
pub mod pure_recovery;
pub mod qmath;
pub mod validation;

pub use channelbank::{BranchId, JumpId, RecoveryOperators, Strength};
pub use conditions::RecoveryParams;
pub use error::{Error, Result};
pub use pure_recovery::{RunResult, TrajectoryMode, TwoQubitPure};
pub use qmath::{DensityMatrix, Matrix4c};

//! Recovery of pure two-qubit states by unravelling the damping channel into
//! jump / no-jump trajectories.
//!
//! Every `(branch, jump)` pair is one unnormalized vector
//! `N_b F_b e_j F_b M_b |ψ⟩`; its squared norm is the joint probability of
//! that measurement record. A branch's final state is the normalized mixture
//! over jump outcomes.

use num_complex::Complex64;

use crate::channelbank::{recovery_kraus, BranchId, JumpId, RecoveryOperators};
use crate::conditions::RecoveryParams;
use crate::error::{Error, Result};
use crate::qmath::{inner, norm_sqr, DensityMatrix, Matrix4c, Vector4c};

/// Below this a branch (or the whole run) counts as never happening.
pub const DEGENERATE_PROBABILITY: f64 = 1e-14;
pub const NORM_TOLERANCE: f64 = 1e-12;

/// `α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩` with unit norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitPure(Vector4c);

impl TwoQubitPure {
    pub fn new(amplitudes: Vector4c) -> Result<Self> {
        Self::with_tolerance(amplitudes, NORM_TOLERANCE)
    }

    /// Accepts `|‖ψ‖² - 1| <= tolerance` and rescales to unit norm.
    pub fn with_tolerance(amplitudes: Vector4c, tolerance: f64) -> Result<Self> {
        if !amplitudes.iter().all(|z| z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n2 = norm_sqr(&amplitudes);
        if (n2 - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized {
                value: n2.sqrt(),
                tolerance,
            });
        }
        Ok(Self::rescale(amplitudes, n2))
    }

    /// Normalizes any nonzero vector.
    pub fn normalize(amplitudes: Vector4c) -> Result<Self> {
        let n2 = norm_sqr(&amplitudes);
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::NotNormalized {
                value: n2.sqrt(),
                tolerance: 0.0,
            });
        }
        Ok(Self::rescale(amplitudes, n2))
    }

    fn rescale(amplitudes: Vector4c, n2: f64) -> Self {
        let s = 1.0 / n2.sqrt();
        TwoQubitPure(amplitudes.map(|z| z * s))
    }

    fn real(a: [f64; 4]) -> Self {
        Self::normalize(a.map(|x| Complex64::new(x, 0.0))).expect("nonzero preset")
    }

    pub fn basis(index: usize) -> Self {
        let mut a = [0.0; 4];
        a[index] = 1.0;
        Self::real(a)
    }

    pub fn ground() -> Self {
        Self::basis(0)
    }

    /// `(|00⟩ + |11⟩)/√2`
    pub fn bell() -> Self {
        Self::real([1.0, 0.0, 0.0, 1.0])
    }

    /// Single-excitation state `(|01⟩ + |10⟩)/√2`.
    pub fn w_like() -> Self {
        Self::real([0.0, 1.0, 1.0, 0.0])
    }

    pub fn amplitudes(&self) -> &Vector4c {
        &self.0
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(&self.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TrajectoryMode {
    /// Sum over all four damping outcomes.
    #[default]
    All,
    /// Keep only the record where neither qubit jumped.
    NoJumpOnly,
}

impl TrajectoryMode {
    pub fn includes(self, j: JumpId) -> bool {
        match self {
            TrajectoryMode::All => true,
            TrajectoryMode::NoJumpOnly => j == JumpId::NO_JUMP,
        }
    }

    pub fn jumps(self) -> impl Iterator<Item = JumpId> {
        JumpId::ALL.into_iter().filter(move |&j| self.includes(j))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Trajectory {
    pub branch: BranchId,
    pub jump: JumpId,
    pub unnormalized_state: Vector4c,
    /// `‖unnormalized_state‖²`
    pub probability: f64,
}

impl Trajectory {
    pub fn normalized_state(&self) -> Option<Vector4c> {
        if self.probability < DEGENERATE_PROBABILITY {
            return None;
        }
        let s = 1.0 / self.probability.sqrt();
        Some(self.unnormalized_state.map(|z| z * s))
    }
}

fn record(k: &Matrix4c, psi: &TwoQubitPure, b: BranchId, j: JumpId, mode: TrajectoryMode) -> Trajectory {
    let unnormalized_state = if mode.includes(j) {
        k.apply(psi.amplitudes())
    } else {
        [Complex64::new(0.0, 0.0); 4]
    };
    Trajectory {
        branch: b,
        jump: j,
        probability: norm_sqr(&unnormalized_state),
        unnormalized_state,
    }
}

/// One measurement record: pre-measurement `b`, damping outcome `j`.
/// In `NoJumpOnly` mode any `j` other than `00` yields the zero trajectory.
pub fn trajectory(
    psi: &TwoQubitPure,
    params: &RecoveryParams,
    b: BranchId,
    j: JumpId,
    mode: TrajectoryMode,
) -> Trajectory {
    record(&recovery_kraus(params, b, j), psi, b, j, mode)
}

#[derive(Clone, Debug)]
pub struct BranchResult {
    pub branch: BranchId,
    pub rho_fin: DensityMatrix,
    /// Success probability of this branch, summed over jump outcomes.
    pub g_fin: f64,
    /// `⟨ψ_in|ρ_fin|ψ_in⟩`
    pub fidelity: f64,
}

/// Per-branch entry of a [`RunResult`]. `fidelity` is `None` when the
/// branch probability is below [`DEGENERATE_PROBABILITY`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchOutcome {
    pub branch: BranchId,
    pub g_fin: f64,
    pub fidelity: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunResult {
    pub per_branch: [BranchOutcome; 4],
    /// Success-weighted mean of the branch fidelities.
    pub fid_total: f64,
    /// Sum of the branch success probabilities.
    pub g_total: f64,
}

impl RunResult {
    /// Combines branch outcomes; degenerate branches carry no weight.
    pub(crate) fn from_branches(per_branch: [BranchOutcome; 4]) -> Result<Self> {
        let g_total: f64 = per_branch.iter().map(|o| o.g_fin).sum();
        if !(g_total >= DEGENERATE_PROBABILITY) {
            return Err(Error::DegenerateTotal {
                probability: g_total,
            });
        }
        let (weighted, weight) = per_branch
            .iter()
            .filter_map(|o| o.fidelity.map(|f| (o.g_fin * f, o.g_fin)))
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        if weight == 0.0 {
            return Err(Error::DegenerateTotal {
                probability: g_total,
            });
        }
        Ok(RunResult {
            per_branch,
            fid_total: (weighted / weight).clamp(0.0, 1.0),
            g_total,
        })
    }
}

pub fn run_branch(
    psi: &TwoQubitPure,
    params: &RecoveryParams,
    b: BranchId,
    mode: TrajectoryMode,
) -> Result<BranchResult> {
    let ops = RecoveryOperators::new(*params);
    let mut mixture = Matrix4c::zeros();
    let mut g_fin = 0.0;
    for j in mode.jumps() {
        let t = record(ops.get(b, j), psi, b, j, mode);
        mixture = mixture + Matrix4c::outer(&t.unnormalized_state);
        g_fin += t.probability;
    }
    if g_fin < DEGENERATE_PROBABILITY {
        return Err(Error::DegenerateBranch {
            branch: b,
            probability: g_fin,
        });
    }
    let rho_fin = DensityMatrix::from_unnormalized(&mixture)?;
    let fidelity = rho_fin.expectation(psi.amplitudes()).clamp(0.0, 1.0);
    Ok(BranchResult {
        branch: b,
        rho_fin,
        g_fin,
        fidelity,
    })
}

/// Branch probability and fidelity without forming `ρ_fin`:
/// `⟨ψ|ρ_fin|ψ⟩ = Σ_j |⟨ψ|v_j⟩|² / Σ_j ‖v_j‖²`.
fn branch_outcome(
    ops: &RecoveryOperators,
    psi: &TwoQubitPure,
    b: BranchId,
    mode: TrajectoryMode,
) -> BranchOutcome {
    let (mut g, mut overlap) = (0.0, 0.0);
    for j in mode.jumps() {
        let v = ops.get(b, j).apply(psi.amplitudes());
        g += norm_sqr(&v);
        overlap += inner(psi.amplitudes(), &v).norm_sqr();
    }
    BranchOutcome {
        branch: b,
        g_fin: g,
        fidelity: (g >= DEGENERATE_PROBABILITY).then(|| (overlap / g).clamp(0.0, 1.0)),
    }
}

/// [`run_total`] with prebuilt operators, for evaluating many states.
pub fn run_total_with(
    ops: &RecoveryOperators,
    psi: &TwoQubitPure,
    mode: TrajectoryMode,
) -> Result<RunResult> {
    RunResult::from_branches(BranchId::ALL.map(|b| branch_outcome(ops, psi, b, mode)))
}

pub fn run_total(
    psi: &TwoQubitPure,
    params: &RecoveryParams,
    mode: TrajectoryMode,
) -> Result<RunResult> {
    run_total_with(&RecoveryOperators::new(*params), psi, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channelbank::{damping_kraus, feed_forward, post_measurement, pre_measurement};
    use crate::conditions::general_success;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(p: f64, q: f64, r: f64) -> RecoveryParams {
        RecoveryParams::new(p, q, r).unwrap()
    }

    fn sample_state() -> TwoQubitPure {
        TwoQubitPure::normalize([c(0.3, 0.1), c(-0.5, 0.2), c(0.1, -0.6), c(0.4, 0.25)]).unwrap()
    }

    /// Step-by-step unravelling: normalize after every measurement and
    /// multiply the conditional probabilities.
    fn stepwise(psi: &TwoQubitPure, prm: &RecoveryParams, b: BranchId, j: JumpId) -> (Vector4c, f64) {
        let normalize = |v: Vector4c| {
            let n2 = norm_sqr(&v);
            (v.map(|z| z / n2.sqrt()), n2)
        };
        let (s1, g_m) = normalize(pre_measurement(prm.p, b).apply(psi.amplitudes()));
        let s2 = feed_forward(b).apply(&s1);
        let (s3, g_e) = normalize(damping_kraus(prm.r)[j.index()].apply(&s2));
        let s4 = feed_forward(b).apply(&s3);
        let (s5, g_n) = normalize(post_measurement(prm.q, b).apply(&s4));
        (s5, g_m * g_e * g_n)
    }

    #[test]
    fn norm_validation() {
        assert!(TwoQubitPure::new([c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(TwoQubitPure::normalize([c(0.0, 0.0); 4]).is_err());
        let nearly = [c(1.0 + 4e-10, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(TwoQubitPure::new(nearly).is_err());
        let ok = TwoQubitPure::with_tolerance(nearly, 1e-9).unwrap();
        assert!((norm_sqr(ok.amplitudes()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn double_jump_lands_in_ground_state() {
        let psi = sample_state();
        let (p, q, r) = (0.6, 0.3, 0.4);
        let t = trajectory(&psi, &params(p, q, r), BranchId::B00, JumpId::J11, TrajectoryMode::All);
        let d2 = psi.amplitudes()[3].norm_sqr();
        let want: f64 = d2 * r * r * (1.0 - p) * (1.0 - p) * (1.0 - q) * (1.0 - q);
        assert!((t.probability - want).abs() < 1e-15);
        let v = t.normalized_state().unwrap();
        assert!((v[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_jump_branch_00_closed_form() {
        let psi = sample_state();
        let (p, q, r): (f64, f64, f64) = (0.7, 0.35, 0.2);
        let t = trajectory(&psi, &params(p, q, r), BranchId::B00, JumpId::J00, TrajectoryMode::All);
        let a = psi.amplitudes();
        let mid = (p * (1.0 - p) * (1.0 - r) * (1.0 - q)).sqrt();
        let want = [
            a[0] * p * (1.0 - q),
            a[1] * mid,
            a[2] * mid,
            a[3] * (1.0 - p) * (1.0 - r),
        ];
        for (x, y) in t.unnormalized_state.iter().zip(want) {
            assert!((x - y).norm() < 1e-15);
        }
        let g = a[0].norm_sqr() * (p * (1.0 - q)).powi(2)
            + (a[1].norm_sqr() + a[2].norm_sqr()) * p * (1.0 - p) * (1.0 - r) * (1.0 - q)
            + a[3].norm_sqr() * ((1.0 - p) * (1.0 - r)).powi(2);
        assert!((t.probability - g).abs() < 1e-15);
    }

    #[test]
    fn bell_no_jump_returns_bell() {
        let psi = TwoQubitPure::bell();
        let t = trajectory(&psi, &params(0.5, 0.5, 0.5), BranchId::B00, JumpId::J00, TrajectoryMode::All);
        assert!((t.probability - 0.0625).abs() < 1e-15);
        let v = t.normalized_state().unwrap();
        assert!((inner(psi.amplitudes(), &v).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_jump_only_zeroes_jump_trajectories() {
        let psi = sample_state();
        let prm = params(0.6, 0.3, 0.4);
        for j in [JumpId::J01, JumpId::J10, JumpId::J11] {
            let t = trajectory(&psi, &prm, BranchId::B01, j, TrajectoryMode::NoJumpOnly);
            assert_eq!(t.probability, 0.0);
            assert!(t.normalized_state().is_none());
        }
    }

    #[test]
    fn stepwise_oracle_agrees() {
        let psi = sample_state();
        let prm = params(0.55, 0.4, 0.3);
        for b in BranchId::ALL {
            for j in JumpId::ALL {
                let t = trajectory(&psi, &prm, b, j, TrajectoryMode::All);
                let (v, g) = stepwise(&psi, &prm, b, j);
                assert!((t.probability - g).abs() < 1e-14, "b={b} j={j}");
                let w = t.normalized_state().unwrap();
                assert!((inner(&v, &w).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ground_state_is_untouched() {
        let psi = TwoQubitPure::ground();
        for (p, q, r) in [(0.3, 0.2, 0.9), (0.8, 0.6, 0.5)] {
            let res = run_branch(&psi, &params(p, q, r), BranchId::B00, TrajectoryMode::All).unwrap();
            assert!((res.fidelity - 1.0).abs() < 1e-14);
            let g: f64 = (p * (1.0 - q)).powi(2);
            assert!((res.g_fin - g).abs() < 1e-15);
            assert!(res.rho_fin.matrix().max_abs_diff(psi.density().matrix()) < 1e-15);
        }
    }

    #[test]
    fn no_noise_no_post_measurement_is_bare_weak_measurement() {
        // With r = q = 0 the chain collapses to M_b alone.
        let psi = sample_state();
        for p in [0.0, 0.3, 0.5, 0.8, 1.0] {
            let prm = params(p, 0.0, 0.0);
            for b in BranchId::ALL {
                let m = pre_measurement(prm.p, b);
                let v = m.apply(psi.amplitudes());
                let g_m = norm_sqr(&v);
                match run_branch(&psi, &prm, b, TrajectoryMode::All) {
                    Ok(res) => {
                        let want = inner(psi.amplitudes(), &v).norm_sqr() / g_m;
                        assert!((res.fidelity - want).abs() < 1e-12);
                        assert!((res.g_fin - g_m).abs() < 1e-15);
                    }
                    Err(Error::DegenerateBranch { .. }) => assert!(g_m < DEGENERATE_PROBABILITY),
                    Err(e) => panic!("{e}"),
                }
            }
            let tot = run_total(&psi, &prm, TrajectoryMode::All).unwrap();
            assert!((tot.g_total - 1.0).abs() < 1e-12);
            if p == 0.5 {
                assert!((tot.fid_total - 1.0).abs() < 1e-12);
            } else {
                assert!(tot.fid_total < 1.0);
            }
        }
    }

    #[test]
    fn degenerate_branch_is_an_error() {
        // p = 1 makes M_01 project onto |01⟩, which |00⟩ never hits.
        let err = run_branch(&TwoQubitPure::ground(), &params(1.0, 0.2, 0.3), BranchId::B01, TrajectoryMode::All)
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateBranch { branch: BranchId::B01, .. }));
        let tot = run_total(&TwoQubitPure::ground(), &params(1.0, 0.2, 0.3), TrajectoryMode::All).unwrap();
        assert!(tot.per_branch[1].fidelity.is_none());
        assert!((tot.fid_total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_total_is_an_error() {
        // p = q = 1: every branch is projected out by its post-measurement.
        let err = run_total(&sample_state(), &params(1.0, 1.0, 0.4), TrajectoryMode::All).unwrap_err();
        assert!(matches!(err, Error::DegenerateTotal { .. }));
    }

    #[test]
    fn total_success_examples() {
        let tot = run_total(&sample_state(), &params(0.5, 0.5, 0.5), TrajectoryMode::All).unwrap();
        assert!((tot.g_total - 0.390625).abs() < 1e-12);
        let (q, r) = (0.45, 0.7);
        let tot = run_total(&TwoQubitPure::basis(3), &params(0.0, q, r), TrajectoryMode::All).unwrap();
        let want: f64 = (1.0 - q * r) * (1.0 - q * r);
        assert!((tot.g_total - want).abs() < 1e-12);
    }

    #[test]
    fn fast_path_matches_density_path() {
        let psi = sample_state();
        let prm = params(0.65, 0.5, 0.45);
        let tot = run_total(&psi, &prm, TrajectoryMode::All).unwrap();
        for (b, o) in BranchId::ALL.iter().zip(&tot.per_branch) {
            let full = run_branch(&psi, &prm, *b, TrajectoryMode::All).unwrap();
            assert!((full.g_fin - o.g_fin).abs() < 1e-15);
            assert!((full.fidelity - o.fidelity.unwrap()).abs() < 1e-13);
        }
        let g = general_success(prm.p, prm.q, prm.r);
        assert!((tot.g_total - g).abs() < 1e-12);
    }
}

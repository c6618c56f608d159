//! Self-check suite run by `qrecover validate`: operator identities,
//! linear-algebra sanity, and agreement between the closed forms and the
//! simulated pipelines on seeded random states.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channelbank::{
    damping_kraus, feed_forward, pre_measurement, recovery_kraus, BranchId, JumpId, Strength,
};
use crate::conditions::{
    complete_recovery_q, complete_recovery_success, general_success, min_pre_strength,
    RecoveryParams,
};
use crate::error::Result;
use crate::harness::baseline::{baseline_damped, InitialState};
use crate::harness::ensemble::{rng_from_seed, sample_mixed, sample_pure};
use crate::mixed_recovery::{recover_branch, run_total_mixed};
use crate::pure_recovery::{run_total, trajectory, TrajectoryMode, TwoQubitPure};
use crate::qmath::{hermitian_eig, inner, psd_sqrt, uhlmann_fidelity, Matrix4c};

const SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation, or the error that stopped the check.
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("povm completeness", povm_completeness),
    ("kraus completeness", kraus_completeness),
    ("feed-forward unitary and involutive", feed_forward_unitary),
    ("no-jump chain proportional to identity", proportional_recovery),
    ("eigensolver reconstruction", eigensolver_reconstruction),
    ("psd square root", psd_square_root),
    ("fidelity symmetry", fidelity_symmetry),
    ("fidelity pure-state reduction", fidelity_pure_reduction),
    ("success probability state independence", success_state_independence),
    ("unravelling equals branch map", unravelling_matches_map),
    ("complete recovery exactness", complete_recovery_exactness),
    ("closed forms agree", closed_forms_agree),
    ("uncontrolled baseline values", baseline_values),
];

pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, check)| match check() {
            Ok((passed, detail)) => CheckOutcome { name, passed, detail },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}

fn within(worst: f64, tol: f64) -> (bool, String) {
    (worst <= tol, format!("max deviation {worst:.3e} (tolerance {tol:.0e})"))
}

fn grid(n: usize) -> impl Iterator<Item = Strength> {
    (0..=n).map(move |k| Strength::new(k as f64 / n as f64).expect("grid in [0,1]"))
}

fn sum_adjoint_products(ms: impl Iterator<Item = Matrix4c>) -> Matrix4c {
    ms.map(|m| &m.adjoint() * &m).fold(Matrix4c::zeros(), |a, b| a + b)
}

fn povm_completeness() -> Result<(bool, String)> {
    let worst = grid(10)
        .map(|p| {
            sum_adjoint_products(BranchId::ALL.iter().map(|&b| pre_measurement(p, b)))
                .max_abs_diff(&Matrix4c::identity())
        })
        .fold(0.0, f64::max);
    Ok(within(worst, 1e-12))
}

fn kraus_completeness() -> Result<(bool, String)> {
    let worst = grid(10)
        .map(|r| sum_adjoint_products(damping_kraus(r).into_iter()).max_abs_diff(&Matrix4c::identity()))
        .fold(0.0, f64::max);
    Ok(within(worst, 1e-12))
}

fn feed_forward_unitary() -> Result<(bool, String)> {
    let worst = BranchId::ALL
        .iter()
        .map(|&b| {
            let f = feed_forward(b);
            let i = Matrix4c::identity();
            (&f * &f).max_abs_diff(&i).max((&f.adjoint() * &f).max_abs_diff(&i))
        })
        .fold(0.0, f64::max);
    Ok(within(worst, 0.0))
}

fn proportional_recovery() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for r in grid(10) {
        for p in grid(20).filter(|p| p.get() > 0.0) {
            let Ok(params) = RecoveryParams::complete_recovery(p.get(), r.get()) else {
                continue;
            };
            let scale = (1.0 - p.get()) * (1.0 - r.get());
            for b in BranchId::ALL {
                let k = recovery_kraus(&params, b, JumpId::NO_JUMP);
                worst = worst.max(k.max_abs_diff(&Matrix4c::identity().scale(scale)));
            }
        }
    }
    Ok(within(worst, 1e-12))
}

fn random_hermitian<R: Rng>(rng: &mut R) -> Matrix4c {
    let mut g = Matrix4c::zeros();
    for z in g.0.iter_mut().flatten() {
        *z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    g + g.adjoint()
}

fn eigensolver_reconstruction() -> Result<(bool, String)> {
    let mut rng = rng_from_seed(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let h = random_hermitian(&mut rng);
        let e = hermitian_eig(&h)?;
        let v = &e.eigenvectors;
        worst = worst
            .max(e.reconstruct().max_abs_diff(&h))
            .max((&v.adjoint() * v).max_abs_diff(&Matrix4c::identity()));
    }
    Ok(within(worst, 1e-11))
}

fn psd_square_root() -> Result<(bool, String)> {
    let mut rng = rng_from_seed(SEED + 1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = sample_mixed(&mut rng);
        let m = rho.matrix();
        let s = psd_sqrt(m)?;
        worst = worst
            .max((&s * &s).max_abs_diff(m))
            .max((&s * m).max_abs_diff(&(m * &s)));
    }
    Ok(within(worst, 1e-10))
}

fn fidelity_symmetry() -> Result<(bool, String)> {
    let mut rng = rng_from_seed(SEED + 2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = sample_mixed(&mut rng);
        let b = sample_mixed(&mut rng);
        worst = worst.max((uhlmann_fidelity(&a, &b)? - uhlmann_fidelity(&b, &a)?).abs());
    }
    Ok(within(worst, 1e-10))
}

fn fidelity_pure_reduction() -> Result<(bool, String)> {
    let mut rng = rng_from_seed(SEED + 3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let psi = sample_pure(&mut rng);
        let sigma = sample_mixed(&mut rng);
        let direct = sigma.expectation(psi.amplitudes());
        worst = worst.max((uhlmann_fidelity(&psi.density(), &sigma)? - direct).abs());
    }
    Ok(within(worst, 1e-10))
}

fn success_state_independence() -> Result<(bool, String)> {
    let mut rng = rng_from_seed(SEED + 4);
    let pure: Vec<TwoQubitPure> = (0..25).map(|_| sample_pure(&mut rng)).collect();
    let mixed: Vec<_> = (0..25).map(|_| sample_mixed(&mut rng)).collect();
    let mut worst: f64 = 0.0;
    for p in grid(4) {
        for q in grid(4) {
            for r in grid(4) {
                let want = general_success(p, q, r);
                let params = RecoveryParams { p, q, r };
                if want < 1e-14 {
                    continue;
                }
                for psi in &pure {
                    worst = worst.max((run_total(psi, &params, TrajectoryMode::All)?.g_total - want).abs());
                }
                for rho in &mixed {
                    worst = worst.max((run_total_mixed(rho, &params, TrajectoryMode::All)?.g_total - want).abs());
                }
            }
        }
    }
    Ok(within(worst, 1e-10))
}

fn unravelling_matches_map() -> Result<(bool, String)> {
    let mut rng = rng_from_seed(SEED + 5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let psi = sample_pure(&mut rng);
        let params = RecoveryParams::new(rng.random(), rng.random(), rng.random())?;
        for b in BranchId::ALL {
            let mixture = JumpId::ALL
                .iter()
                .map(|&j| Matrix4c::outer(&trajectory(&psi, &params, b, j, TrajectoryMode::All).unnormalized_state))
                .fold(Matrix4c::zeros(), |a, m| a + m);
            match recover_branch(&psi.density(), &params, b, TrajectoryMode::All) {
                Ok(res) => worst = worst.max(res.rho_unnorm.max_abs_diff(&mixture)),
                Err(crate::Error::DegenerateBranch { .. }) => worst = worst.max(mixture.frobenius_norm()),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(within(worst, 1e-12))
}

fn complete_recovery_exactness() -> Result<(bool, String)> {
    let mut rng = rng_from_seed(SEED + 6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let psi = sample_pure(&mut rng);
        let r = Strength::new(rng.random_range(0.0..0.95))?;
        let p_min = min_pre_strength(r).get().max(1e-3);
        let p = Strength::new(rng.random_range(p_min..0.99))?;
        let params = RecoveryParams {
            p,
            q: complete_recovery_q(p, r)?,
            r,
        };
        let want = ((1.0 - p.get()) * (1.0 - r.get())).powi(2);
        for b in BranchId::ALL {
            let t = trajectory(&psi, &params, b, JumpId::NO_JUMP, TrajectoryMode::All);
            let fid = t
                .normalized_state()
                .map_or(0.0, |v| inner(psi.amplitudes(), &v).norm_sqr());
            worst = worst.max(1.0 - fid).max((t.probability - want).abs());
        }
    }
    Ok(within(worst, 1e-10))
}

fn closed_forms_agree() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for p in grid(20).filter(|p| p.get() > 0.0) {
        for r in grid(20) {
            if let Ok(q) = complete_recovery_q(p, r) {
                worst = worst.max((general_success(p, q, r) - complete_recovery_success(p, r)?).abs());
            }
        }
    }
    Ok(within(worst, 1e-12))
}

fn baseline_values() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for r in grid(10) {
        let f = baseline_damped(&InitialState::Pure(TwoQubitPure::basis(3)), r)?;
        worst = worst.max((f - (1.0 - r.get()).powi(2)).abs());
    }
    let bell = baseline_damped(&InitialState::Pure(TwoQubitPure::bell()), Strength::new(0.5)?)?;
    worst = worst.max((bell - 0.625).abs());
    Ok(within(worst, 1e-12))
}

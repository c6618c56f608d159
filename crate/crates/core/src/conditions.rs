//! Closed-form recovery conditions and success probabilities.

use crate::channelbank::Strength;
use crate::error::{Error, Result};

/// Slack on `q >= 0` so that `p` exactly at the feasibility bound is accepted.
const FEASIBILITY_SLACK: f64 = 1e-12;

/// Pre-measurement strength `p`, post-measurement strength `q`, damping `r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveryParams {
    pub p: Strength,
    pub q: Strength,
    pub r: Strength,
}

impl RecoveryParams {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        Ok(Self {
            p: Strength::named("p", p)?,
            q: Strength::named("q", q)?,
            r: Strength::named("r", r)?,
        })
    }

    /// `(p, r)` with `q` set by [`complete_recovery_q`].
    pub fn complete_recovery(p: f64, r: f64) -> Result<Self> {
        let p = Strength::named("p", p)?;
        let r = Strength::named("r", r)?;
        Ok(Self {
            p,
            q: complete_recovery_q(p, r)?,
            r,
        })
    }
}

/// `p_min(r) = (1 - r) / (2 - r)`: below it complete recovery would need `q < 0`.
pub fn min_pre_strength(r: Strength) -> Strength {
    let r = r.get();
    Strength::new((1.0 - r) / (2.0 - r)).expect("(1-r)/(2-r) lies in [0, 1/2]")
}

/// Post-measurement strength that makes the no-jump trajectory of every
/// branch proportional to the identity: `q = 1 - (1-p)(1-r)/p`.
pub fn complete_recovery_q(p: Strength, r: Strength) -> Result<Strength> {
    let (pv, rv) = (p.get(), r.get());
    if pv == 0.0 {
        return Err(Error::ZeroStrength);
    }
    let q = 1.0 - (1.0 - pv) * (1.0 - rv) / pv;
    if q < -FEASIBILITY_SLACK {
        return Err(Error::Infeasible {
            p: pv,
            r: rv,
            p_min: min_pre_strength(r).get(),
        });
    }
    Strength::named("q", q.clamp(0.0, 1.0))
}

/// Total success probability under complete recovery:
/// `(1-p)²(1-r)²(2p + r - pr)² / p²`.
pub fn complete_recovery_success(p: Strength, r: Strength) -> Result<f64> {
    complete_recovery_q(p, r)?;
    let (p, r) = (p.get(), r.get());
    let a = (1.0 - p) * (1.0 - r) * (2.0 * p + r - p * r) / p;
    Ok(a * a)
}

/// Total success probability for arbitrary strengths: `(pq + qr - pqr - 1)²`.
/// Independent of the initial state.
pub fn general_success(p: Strength, q: Strength, r: Strength) -> f64 {
    let (p, q, r) = (p.get(), q.get(), r.get());
    let a = p * q + q * r - p * q * r - 1.0;
    a * a
}

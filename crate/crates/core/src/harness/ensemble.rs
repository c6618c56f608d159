use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::mixed_recovery::PreparedMixed;
use crate::pure_recovery::TwoQubitPure;
use crate::qmath::{DensityMatrix, Matrix4c};

/// Generator behind every ensemble; recorded in CSV metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng";

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnsembleKind {
    Pure,
    Mixed,
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnsembleKind::Pure => "pure",
            EnsembleKind::Mixed => "mixed",
        })
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(EnsembleKind::Pure),
            "mixed" => Ok(EnsembleKind::Mixed),
            other => Err(Error::Parse(format!("unknown ensemble kind {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub count: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::EmptyEnsemble);
        }
        Ok(Self { kind, count, seed })
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state: four standard complex normals, normalized.
pub fn sample_pure<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitPure {
    loop {
        let v = [(); 4].map(|_| complex_normal(rng));
        if let Ok(psi) = TwoQubitPure::normalize(v) {
            return psi;
        }
    }
}

/// Hilbert–Schmidt random density matrix `G G† / Tr(G G†)` with `G` a
/// 4×4 complex Ginibre matrix.
pub fn sample_mixed<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    loop {
        let g = Matrix4c([(); 4].map(|_| [(); 4].map(|_| complex_normal(rng))));
        if let Ok(rho) = DensityMatrix::from_unnormalized(&(&g * &g.adjoint())) {
            return rho;
        }
    }
}

#[derive(Clone, Debug)]
pub enum EnsembleState {
    Pure(TwoQubitPure),
    Mixed(PreparedMixed),
}

/// A materialized list of random initial states. Built sequentially from a
/// single seeded stream, so the sequence never depends on thread count.
#[derive(Clone, Debug)]
pub struct Ensemble {
    spec: EnsembleSpec,
    states: Vec<EnsembleState>,
}

impl Ensemble {
    pub fn generate(spec: EnsembleSpec) -> Result<Self> {
        if spec.count == 0 {
            return Err(Error::EmptyEnsemble);
        }
        let mut rng = rng_from_seed(spec.seed);
        let states = (0..spec.count)
            .map(|_| match spec.kind {
                EnsembleKind::Pure => Ok(EnsembleState::Pure(sample_pure(&mut rng))),
                EnsembleKind::Mixed => PreparedMixed::new(sample_mixed(&mut rng)).map(EnsembleState::Mixed),
            })
            .collect::<Result<_>>()?;
        Ok(Self { spec, states })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn states(&self) -> &[EnsembleState] {
        &self.states
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::norm_sqr;

    #[test]
    fn pure_draws_are_normalized() {
        let mut rng = rng_from_seed(7);
        for _ in 0..1000 {
            let psi = sample_pure(&mut rng);
            assert!((norm_sqr(psi.amplitudes()) - 1.0).abs() < 1e-12);
            assert!((psi.density().purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_first_component_mean() {
        let mut rng = rng_from_seed(11);
        let n = 100_000;
        let mean = (0..n).map(|_| sample_pure(&mut rng).amplitudes()[0].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 0.25).abs() < 0.005, "{mean}");
    }

    #[test]
    fn mixed_draws_are_valid() {
        let mut rng = rng_from_seed(3);
        for _ in 0..1000 {
            let rho = sample_mixed(&mut rng);
            let m = rho.matrix();
            assert!(m.hermitian_deviation() < 1e-12);
            assert!((m.trace().re - 1.0).abs() < 1e-12);
            let w = crate::qmath::hermitian_eigenvalues(m).unwrap();
            assert!(w[0] >= -1e-12);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hilbert_schmidt_mean_purity() {
        let mut rng = rng_from_seed(5);
        let n = 100_000;
        let mean = (0..n).map(|_| sample_mixed(&mut rng).purity()).sum::<f64>() / n as f64;
        assert!((mean - 8.0 / 17.0).abs() < 0.005, "{mean}");
    }

    #[test]
    fn same_seed_same_states() {
        let spec = EnsembleSpec::new(EnsembleKind::Pure, 50, 42).unwrap();
        let a = Ensemble::generate(spec).unwrap();
        let b = Ensemble::generate(spec).unwrap();
        for (x, y) in a.states().iter().zip(b.states()) {
            match (x, y) {
                (EnsembleState::Pure(x), EnsembleState::Pure(y)) => assert_eq!(x, y),
                _ => panic!("kind mismatch"),
            }
        }
        assert!(EnsembleSpec::new(EnsembleKind::Mixed, 0, 1).is_err());
    }
}

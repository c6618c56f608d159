//! Fixed-size complex linear algebra for two-qubit systems.
//!
//! Every 4×4 object uses the computational basis order
//! `|00⟩, |01⟩, |10⟩, |11⟩`; the first tensor factor is the high bit.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Vector4c = [Complex64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
#[cfg(test)]
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// (scaled by the input norm when that exceeds one).
pub const JACOBI_TOLERANCE: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 200;
/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are rounding noise and get clamped.
pub const PSD_TOLERANCE: f64 = 1e-10;
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-12;
const FIDELITY_CLAMP: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2c(pub [[Complex64; 2]; 2]);

impl Matrix2c {
    pub fn from_real(rows: [[f64; 2]; 2]) -> Self {
        Matrix2c(rows.map(|row| row.map(|x| Complex64::new(x, 0.0))))
    }

    pub fn identity() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn pauli_x() -> Self {
        Self::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }
}

#[derive(Clone, Copy, PartialEq)]
pub struct Matrix4c(pub [[Complex64; 4]; 4]);

impl fmt::Debug for Matrix4c {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix4c [")?;
        for row in &self.0 {
            write!(f, "   ")?;
            for z in row {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Default for Matrix4c {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Matrix4c {
    pub fn zeros() -> Self {
        Matrix4c([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diag_real([1.0; 4])
    }

    pub fn diag_real(d: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        Matrix4c(rows.map(|row| row.map(|x| Complex64::new(x, 0.0))))
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &Vector4c) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        Matrix4c(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn diagonal(&self) -> [Complex64; 4] {
        [self.0[0][0], self.0[1][1], self.0[2][2], self.0[3][3]]
    }

    pub fn apply(&self, v: &Vector4c) -> Vector4c {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// `K ρ K†`, skipping the zero entries of `K`. The protocol's Kraus
    /// operators have at most one nonzero per column, so this is ~16 products
    /// instead of 128.
    pub fn sandwich(&self, rho: &Matrix4c) -> Matrix4c {
        let mut nz = [(0usize, 0usize, ZERO); 16];
        let mut n = 0;
        for (i, row) in self.0.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                if z != ZERO {
                    nz[n] = (i, j, z);
                    n += 1;
                }
            }
        }
        let nz = &nz[..n];
        let mut out = Matrix4c::zeros();
        for &(a, x, kax) in nz {
            for &(c, y, kcy) in nz {
                out.0[a][c] += kax * rho.0[x][y] * kcy.conj();
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix4c) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max entrywise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn hermitian_part(&self) -> Matrix4c {
        (*self + self.adjoint()).scale(0.5)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || self.0[i][j] == ZERO))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }
}

impl Index<(usize, usize)> for Matrix4c {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix4c {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl Mul for Matrix4c {
    type Output = Matrix4c;
    fn mul(self, rhs: Matrix4c) -> Matrix4c {
        &self * &rhs
    }
}

impl Mul<&Matrix4c> for &Matrix4c {
    type Output = Matrix4c;
    fn mul(self, rhs: &Matrix4c) -> Matrix4c {
        let mut out = Matrix4c::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl Add for Matrix4c {
    type Output = Matrix4c;
    fn add(mut self, rhs: Matrix4c) -> Matrix4c {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl Sub for Matrix4c {
    type Output = Matrix4c;
    fn sub(mut self, rhs: Matrix4c) -> Matrix4c {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

pub fn inner(a: &Vector4c, b: &Vector4c) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &Vector4c) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Kronecker product `a ⊗ b`; `a` acts on the first (high) qubit.
pub fn kron2(a: &Matrix2c, b: &Matrix2c) -> Matrix4c {
    let mut out = Matrix4c::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: [f64; 4],
    /// Eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: Matrix4c,
}

impl EigenDecomposition {
    /// `V diag(f(λ)) V†`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Matrix4c {
        let v = &self.eigenvectors;
        let w = self.eigenvalues.map(f);
        let mut out = Matrix4c::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = (0..4).map(|k| v.0[i][k] * w[k] * v.0[j][k].conj()).sum();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix4c {
        self.map_spectrum(|x| x)
    }
}

fn off_diagonal_norm(a: &Matrix4c) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += a.0[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi on the Hermitian part of `h`.
fn jacobi(h: &Matrix4c, want_vectors: bool) -> Result<([f64; 4], Matrix4c)> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut a = h.hermitian_part();
    let mut v = Matrix4c::identity();
    let tol = JACOBI_TOLERANCE * a.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.0[p][q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Phase the (p, q) pair real, then do the real symmetric rotation.
                let phase = apq / mag;
                let phase_c = phase.conj();
                let theta = (a.0[q][q].re - a.0[p][p].re) / (2.0 * mag);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..4 {
                    let akp = a.0[k][p];
                    let akq = a.0[k][q];
                    a.0[k][p] = akp * c - akq * phase_c * s;
                    a.0[k][q] = akp * s + akq * phase_c * c;
                }
                for k in 0..4 {
                    let apk = a.0[p][k];
                    let aqk = a.0[q][k];
                    a.0[p][k] = apk * c - aqk * phase * s;
                    a.0[q][k] = apk * s + aqk * phase * c;
                }
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                a.0[p][p].im = 0.0;
                a.0[q][q].im = 0.0;

                if want_vectors {
                    for k in 0..4 {
                        let vkp = v.0[k][p];
                        let vkq = v.0[k][q];
                        v.0[k][p] = vkp * c - vkq * phase_c * s;
                        v.0[k][q] = vkp * s + vkq * phase_c * c;
                    }
                }
            }
        }
    }
    if !converged {
        let off_norm = off_diagonal_norm(&a);
        if off_norm > tol {
            return Err(Error::NonConvergence {
                off_norm,
                sweeps: JACOBI_MAX_SWEEPS,
            });
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
    let eigenvalues = order.map(|i| a.0[i][i].re);
    let mut vectors = Matrix4c::zeros();
    if want_vectors {
        for (col, &src) in order.iter().enumerate() {
            for row in 0..4 {
                vectors.0[row][col] = v.0[row][src];
            }
        }
    }
    Ok((eigenvalues, vectors))
}

/// Eigendecomposition of a Hermitian matrix (the input is symmetrized first).
pub fn hermitian_eig(h: &Matrix4c) -> Result<EigenDecomposition> {
    let (eigenvalues, eigenvectors) = jacobi(h, true)?;
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Ascending eigenvalues only; skips the eigenvector accumulation.
pub fn hermitian_eigenvalues(h: &Matrix4c) -> Result<[f64; 4]> {
    jacobi(h, false).map(|(w, _)| w)
}

fn check_psd(eigenvalues: &[f64; 4]) -> Result<()> {
    let min = eigenvalues[0];
    if min < -PSD_TOLERANCE {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(rho: &Matrix4c) -> Result<Matrix4c> {
    let eig = hermitian_eig(rho)?;
    check_psd(&eig.eigenvalues)?;
    let cutoff = spectral_cutoff(&eig.eigenvalues);
    Ok(eig.map_spectrum(|x| root_above(x, cutoff)))
}

/// Eigenvalues this small relative to the spectrum are rounding noise
/// (observed ~1e-16 on rank-deficient inputs). Their square roots would
/// otherwise inject ~1e-8 errors into rank-deficient fidelities.
pub const SPECTRAL_CUTOFF: f64 = 1e-14;

fn spectral_cutoff(w: &[f64; 4]) -> f64 {
    SPECTRAL_CUTOFF * w.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn root_above(x: f64, cutoff: f64) -> f64 {
    if x <= cutoff {
        0.0
    } else {
        x.sqrt()
    }
}

fn clamp_fidelity(f: f64) -> Result<f64> {
    if (-FIDELITY_CLAMP..=1.0 + FIDELITY_CLAMP).contains(&f) {
        Ok(f.clamp(0.0, 1.0))
    } else {
        Err(Error::FidelityOutOfRange(f))
    }
}

/// Fidelity against a fixed reference state, with `√ρ` computed once.
///
/// `F(ρ, σ) = [Tr √(√ρ σ √ρ)]²`.
#[derive(Clone, Debug)]
pub struct FidelityReference {
    sqrt: Matrix4c,
}

impl FidelityReference {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        Ok(Self {
            sqrt: psd_sqrt(rho.matrix())?,
        })
    }

    /// `sigma` must be a normalized density matrix.
    pub fn fidelity(&self, sigma: &Matrix4c) -> Result<f64> {
        let inner = &(&self.sqrt * sigma) * &self.sqrt;
        let w = hermitian_eigenvalues(&inner)?;
        check_psd(&w)?;
        let cutoff = spectral_cutoff(&w);
        let root_trace: f64 = w.iter().map(|&x| root_above(x, cutoff)).sum();
        clamp_fidelity(root_trace * root_trace)
    }
}

pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    FidelityReference::new(rho)?.fidelity(sigma.matrix())
}

/// Hermitian, positive semidefinite, unit-trace 4×4 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Matrix4c);

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity.
    pub fn new(m: Matrix4c) -> Result<Self> {
        Self::with_tolerance(m, TRACE_TOLERANCE.max(HERMITIAN_TOLERANCE))
    }

    /// Like [`DensityMatrix::new`] with a looser Hermiticity/trace
    /// tolerance; inputs inside it are symmetrized and renormalized exactly.
    pub fn with_tolerance(m: Matrix4c, tolerance: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = m.hermitian_deviation();
        if deviation > tolerance {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > tolerance || trace.im.abs() > tolerance {
            return Err(Error::NotNormalized {
                value: trace.re,
                tolerance,
            });
        }
        let m = m.hermitian_part().scale(1.0 / trace.re);
        check_psd(&hermitian_eigenvalues(&m)?)?;
        Ok(DensityMatrix(m))
    }

    /// Normalizes a computed (Hermitian up to rounding) PSD matrix by its
    /// trace. Not for user input: it symmetrizes without complaint.
    pub(crate) fn from_unnormalized(m: &Matrix4c) -> Result<Self> {
        let trace = m.trace().re;
        if !(trace > 0.0) {
            return Err(Error::NotNormalized {
                value: trace,
                tolerance: 0.0,
            });
        }
        Ok(DensityMatrix(m.hermitian_part().scale(1.0 / trace)))
    }

    pub fn from_pure(v: &Vector4c) -> Self {
        DensityMatrix(Matrix4c::outer(v))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Matrix4c::diag_real([0.25; 4]))
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.0
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation(&self, psi: &Vector4c) -> f64 {
        inner(psi, &self.0.apply(psi)).re
    }
}

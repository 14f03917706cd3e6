//! Dense complex matrix primitives: Hermitian eigendecomposition, PSD matrix
//! powers, traces and entrywise norms.
//!
//! Matrices are stored row-major in a flat `Vec<Complex64>`. The
//! eigendecomposition is a cyclic complex Jacobi iteration, which is exact to
//! machine precision for the small Hermitian matrices this crate works with
//! and has no external dependencies, so results are bit-reproducible across
//! machines.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::Tolerances;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from a flat row-major entry list; `entries.len()` must be `dim^2`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::InvalidDim {
                dim,
                reason: "entry count must equal dim^2 with dim >= 1",
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Rank-1 projector `v v†` (the vector need not be normalized).
    pub fn outer(v: &[Complex64]) -> Self {
        let d = v.len();
        Self::from_fn(d, |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix product");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `v† M v` for a column vector `v`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        assert_eq!(v.len(), self.dim);
        let mut acc = ZERO;
        for i in 0..self.dim {
            let mut row = ZERO;
            for j in 0..self.dim {
                row += self[(i, j)] * v[j];
            }
            acc += v[i].conj() * row;
        }
        acc
    }

    /// `M v` as a new vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max `|m_ij - conj(m_ji)|` over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let dev = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// `(M + M†)/2`; used to scrub round-off before eigendecomposition.
    pub fn symmetrize(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// Result of a Hermitian eigendecomposition: `m = V diag(lambda) V†` with
/// eigenvalues ascending and orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as matrix columns, in the same order as `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let d = self.dim();
        (0..d).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `V diag(f(lambda)) V†`.
    pub fn recompose_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(d);
        for k in 0..d {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..d {
                let vik = v[(i, k)] * fk;
                for j in 0..d {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn recompose(&self) -> ComplexMatrix {
        self.recompose_with(|x| x)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Fails with `NotHermitian` when the input deviates from Hermiticity by more
/// than `tol.hermitian`; smaller deviations are symmetrized away.
pub fn hermitian_eig(m: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    let dev = m.hermiticity_deviation();
    if dev > tol.hermitian {
        return Err(Error::NotHermitian {
            deviation: dev,
            bound: tol.hermitian,
        });
    }
    let d = m.dim();
    let mut a = m.symmetrize();
    let mut v = ComplexMatrix::identity(d);

    if d > 1 {
        let scale = a.max_abs().max(1.0);
        let target = scale * 1e-15;
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..d {
                for q in (p + 1)..d {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off <= target {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<f64> = (0..d).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(d, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation annihilating `a[(p, q)]`; accumulates into `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let norm = apq.norm();
    if norm < 1e-300 {
        return;
    }
    let phase = apq / norm; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = 0.5 * (2.0 * norm).atan2(app - aqq);
    let c = theta.cos();
    let s = theta.sin();

    // Columns of the rotation in the (p, q) plane:
    //   col p: ( c, s e^{-i phi}),  col q: (-s e^{i phi}, c)
    let d = a.dim();
    // A <- A * R
    for k in 0..d {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * (s * phase.conj());
        a[(k, q)] = akp * (-s * phase) + akq * c;
    }
    // A <- R† * A
    for k in 0..d {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * (s * phase);
        a[(q, k)] = apk * (-s * phase.conj()) + aqk * c;
    }
    // Scrub the annihilated pair and keep the diagonal real.
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V <- V * R
    for k in 0..d {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * (s * phase.conj());
        v[(k, q)] = vkp * (-s * phase) + vkq * c;
    }
}

/// `m^alpha` for Hermitian PSD `m`, with the convention `0^alpha = 0`.
///
/// Eigenvalues in `[-tol.psd, 0)` are treated as round-off and clipped to 0;
/// anything lower fails with `NotPSD`. `alpha <= 0` is rejected.
pub fn psd_power(m: &ComplexMatrix, alpha: f64, tol: &Tolerances) -> Result<ComplexMatrix> {
    if alpha <= 0.0 || alpha.is_nan() {
        return Err(Error::InvalidAlpha {
            alpha,
            reason: "matrix power requires alpha > 0",
        });
    }
    let eig = hermitian_eig(m, tol)?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(Error::NotPSD {
            min_eigenvalue: min,
            bound: tol.psd,
        });
    }
    let floor = tol.eig_zero_floor;
    Ok(eig.recompose_with(|l| if l <= floor { 0.0 } else { l.powf(alpha) }))
}

/// Principal square root of a Hermitian PSD matrix.
pub fn psd_sqrt(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    psd_power(m, 0.5, tol)
}

//! State model: density matrices, pure states, the non-texture state `f`,
//! the `{|f>, f-perp}` basis, generalized Bloch decomposition, and seeded
//! random sampling.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, ONE, ZERO};
use crate::rng;
use crate::tol::Tolerances;

/// Unit-norm complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wrap an amplitude vector, requiring unit norm within `tol.trace_one`.
    pub fn new(amplitudes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDim {
                dim: 0,
                reason: "pure state needs at least one amplitude",
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol.trace_one {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-150 {
            return Err(Error::NotNormalized { norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Projector `|psi><psi|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    /// Density matrix of the projector.
    pub fn density(&self, tol: &Tolerances) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.projector(), tol)
    }
}

/// Validated d x d complex Hermitian PSD trace-1 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }

    /// Numerical rank: eigenvalues above `tol.psd`.
    pub fn rank(&self, tol: &Tolerances) -> usize {
        let eig = hermitian_eig(&self.matrix, tol).expect("density is Hermitian");
        eig.eigenvalues.iter().filter(|&&l| l > tol.psd).count()
    }

    /// Wrap a matrix already known to be a valid density (skips eigenvalue
    /// checks, still symmetrizes round-off). Internal constructor for outputs
    /// of operations that preserve validity.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix, _tol: &Tolerances) -> Self {
        Self {
            matrix: matrix.symmetrize(),
        }
    }
}

/// Validate a matrix as a density operator.
///
/// Checks, in order: Hermiticity (`tol.hermitian`), positive semi-definiteness
/// (min eigenvalue >= `-tol.psd`), unit trace (`tol.trace_one`). The error
/// names the violated bound.
pub fn validate_density(m: &ComplexMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    let dev = m.hermiticity_deviation();
    if dev > tol.hermitian {
        return Err(Error::NotHermitian {
            deviation: dev,
            bound: tol.hermitian,
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
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol.trace_one || tr.im.abs() > tol.trace_one {
        return Err(Error::TraceNotOne {
            trace: tr.re,
            bound: tol.trace_one,
        });
    }
    Ok(DensityMatrix {
        matrix: m.symmetrize(),
    })
}

/// The non-texture state `|f> = d^{-1/2} sum_i |i>`.
pub fn nontexture_state(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "non-texture state requires d >= 2",
        });
    }
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    Ok(PureState {
        amplitudes: vec![amp; d],
    })
}

/// The free state `f = |f><f|` as a density matrix.
pub fn nontexture_projector(d: usize, tol: &Tolerances) -> Result<DensityMatrix> {
    Ok(nontexture_state(d)?.density(tol))
}

/// Orthonormal basis whose first element is `|f>`; the rest span the
/// orthogonal complement. Built by Gram-Schmidt over the computational basis,
/// so for d = 2 the second element is exactly `(|0> - |1>)/sqrt(2)`.
pub fn f_basis(d: usize) -> Result<Vec<PureState>> {
    let f = nontexture_state(d)?;
    let mut basis: Vec<Vec<Complex64>> = vec![f.amplitudes.clone()];
    let mut k = 0usize;
    while basis.len() < d && k < d {
        let mut v = vec![ZERO; d];
        v[k] = ONE;
        for b in &basis {
            let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= overlap * bi;
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for vi in &mut v {
                *vi /= norm;
            }
            basis.push(v);
        }
        k += 1;
    }
    debug_assert_eq!(basis.len(), d);
    Ok(basis
        .into_iter()
        .map(|amplitudes| PureState { amplitudes })
        .collect())
}

/// Unitary whose columns are the `f_basis` vectors; `U† M U` expresses `M`
/// in the `{|f>, f-perp}` frame.
pub fn f_basis_unitary(d: usize) -> Result<ComplexMatrix> {
    let basis = f_basis(d)?;
    Ok(ComplexMatrix::from_fn(d, |i, j| basis[j].amplitudes()[i]))
}

/// Generalized Bloch coefficients in the fixed operator basis
/// `sigma_x(k,l) = |k><l| + |l><k|`, `sigma_y(k,l) = -i|k><l| + i|l><k|`
/// (pairs `(k, l)`, `k < l`, lexicographic) and
/// `sigma_z(k) = |k><k| - |d-1><d-1|` (`k` ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl BlochVector {
    pub fn dim(&self) -> Option<usize> {
        let d = self.z.len() + 1;
        if self.x.len() == d * (d - 1) / 2 && self.y.len() == self.x.len() {
            Some(d)
        } else {
            None
        }
    }
}

/// Ordered `(k, l)` index pairs, `k < l`, lexicographic.
pub fn offdiag_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(d * (d - 1) / 2);
    for k in 0..d {
        for l in (k + 1)..d {
            pairs.push((k, l));
        }
    }
    pairs
}

/// Bloch coefficients of a density matrix.
///
/// Off-diagonal blocks come from orthogonality of the sigma families
/// (`x = 2 Re rho_kl`, `y = 2 Im rho_lk`). The `sigma_z` family is not
/// orthogonal, so the z block solves the Gram system of
/// `{|k><k| - |d-1><d-1|}` against the traceless diagonal `2 rho - (2/d) I`.
pub fn bloch_decompose(rho: &DensityMatrix) -> BlochVector {
    let d = rho.dim();
    let m = rho.matrix();
    let pairs = offdiag_pairs(d);
    let x: Vec<f64> = pairs.iter().map(|&(k, l)| 2.0 * m[(k, l)].re).collect();
    let y: Vec<f64> = pairs.iter().map(|&(k, l)| 2.0 * m[(l, k)].im).collect();

    // Gram matrix of the z family is I + J (all-ones), inverse I - J/d.
    let b: Vec<f64> = (0..d - 1)
        .map(|k| 2.0 * (m[(k, k)].re - m[(d - 1, d - 1)].re))
        .collect();
    let bsum: f64 = b.iter().sum();
    let z: Vec<f64> = b.iter().map(|&bk| bk - bsum / d as f64).collect();
    BlochVector { x, y, z }
}

/// Rebuild a density matrix from Bloch coefficients:
/// `rho = I/d + (1/2)(sum_i x_i sigma_x_i + sum_j y_j sigma_y_j + sum_k z_k sigma_z_k)`.
///
/// Hermiticity and unit trace hold by construction; positivity can fail for
/// coefficients outside the state space, which is reported as `NotPSD`.
pub fn bloch_compose(v: &BlochVector, d: usize, tol: &Tolerances) -> Result<DensityMatrix> {
    let pair_count = d * (d - 1) / 2;
    if d < 2 || v.x.len() != pair_count || v.y.len() != pair_count || v.z.len() != d - 1 {
        return Err(Error::BlochShape {
            x: v.x.len(),
            y: v.y.len(),
            z: v.z.len(),
            dim: d,
        });
    }
    let mut m = ComplexMatrix::zeros(d);
    for i in 0..d {
        m[(i, i)] = Complex64::new(1.0 / d as f64, 0.0);
    }
    for (idx, &(k, l)) in offdiag_pairs(d).iter().enumerate() {
        // (1/2)(x (|k><l| + |l><k|) + y (-i|k><l| + i|l><k|))
        let off = Complex64::new(v.x[idx], -v.y[idx]) * 0.5;
        m[(k, l)] += off;
        m[(l, k)] += off.conj();
    }
    for (k, &zk) in v.z.iter().enumerate() {
        m[(k, k)] += Complex64::new(0.5 * zk, 0.0);
        m[(d - 1, d - 1)] -= Complex64::new(0.5 * zk, 0.0);
    }
    validate_density(&m, tol)
}

/// Kind of state to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Pure,
    Mixed,
}

/// Haar-random pure state as an amplitude vector.
pub fn sample_pure(d: usize, seed: u64) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "sampling requires d >= 2",
        });
    }
    let mut rng = rng::master_stream(seed);
    let v: Vec<Complex64> = (0..d).map(|_| rng::complex_gaussian(&mut rng)).collect();
    PureState::normalized(v)
}

/// Deterministic seeded random density matrix.
///
/// `Pure` draws a Haar-distributed unit vector; `Mixed` draws a `d x rank`
/// complex Gaussian `G` and returns `G G† / tr(G G†)`.
pub fn sample_state(
    d: usize,
    kind: StateKind,
    rank: Option<usize>,
    seed: u64,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "sampling requires d >= 2",
        });
    }
    match kind {
        StateKind::Pure => {
            if let Some(r) = rank {
                if r != 1 {
                    return Err(Error::InvalidRank { rank: r, dim: d });
                }
            }
            Ok(sample_pure(d, seed)?.density(tol))
        }
        StateKind::Mixed => {
            let r = rank.unwrap_or(d);
            if r < 1 || r > d {
                return Err(Error::InvalidRank { rank: r, dim: d });
            }
            let mut rng = rng::master_stream(seed);
            let mut g = vec![vec![ZERO; r]; d];
            for row in g.iter_mut() {
                for entry in row.iter_mut() {
                    *entry = rng::complex_gaussian(&mut rng);
                }
            }
            let mut m = ComplexMatrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    let mut s = ZERO;
                    for k in 0..r {
                        s += g[i][k] * g[j][k].conj();
                    }
                    m[(i, j)] = s;
                }
            }
            let tr = m.trace().re;
            let m = m.scale_re(1.0 / tr);
            Ok(DensityMatrix::from_matrix_unchecked(m, tol))
        }
    }
}

//! Free operations: validation, application and seeded generation of Kraus
//! sets whose operators all fix the ray of `|f>` (`K_n |f> = a_n |f>`), hence
//! fix the free state itself.
//!
//! Channel matrices are generated in the `{|f>, f-perp}` frame, where freeness
//! is block upper-triangularity with respect to the first basis vector, and
//! converted to the computational basis on output.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, psd_sqrt, ComplexMatrix, ONE, ZERO};
use crate::rng;
use crate::states::{f_basis_unitary, nontexture_state, DensityMatrix};
use crate::tol::Tolerances;

/// Whether a Kraus set resolves the identity or only part of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    /// `sum K† K = 1`: a channel.
    Complete,
    /// `sum K† K <= 1`: a stochastic instrument arm.
    Sub,
}

/// Diagnostics from the freeness / completeness check.
#[derive(Debug, Clone)]
pub struct FreenessReport {
    pub free: bool,
    pub completeness: Option<Completeness>,
    /// Index of the operator with the largest freeness residual.
    pub worst_operator: usize,
    /// `max_n || K_n |f> - a_n |f> ||`.
    pub max_freeness_residual: f64,
    /// `|| sum K† K - 1 ||_max` (complete) or the most negative eigenvalue
    /// excess of `1 - sum K† K` (sub).
    pub completeness_residual: f64,
    /// Proportionality constants `a_n = <f| K_n |f>`.
    pub proportionality: Vec<Complex64>,
}

/// Check whether `operators` form a free Kraus set on dimension `dim`.
pub fn is_free_kraus_set(
    dim: usize,
    operators: &[ComplexMatrix],
    tol: &Tolerances,
) -> Result<FreenessReport> {
    if dim < 2 {
        return Err(Error::InvalidDim {
            dim,
            reason: "Kraus sets require d >= 2",
        });
    }
    if operators.is_empty() || operators.iter().any(|k| k.dim() != dim) {
        return Err(Error::DimMismatch {
            left: dim,
            right: operators.first().map_or(0, |k| k.dim()),
        });
    }
    let f = nontexture_state(dim)?;
    let mut worst = 0usize;
    let mut max_res = 0.0f64;
    let mut proportionality = Vec::with_capacity(operators.len());
    for (n, k) in operators.iter().enumerate() {
        let kf = k.apply(f.amplitudes());
        let a: Complex64 = f
            .amplitudes()
            .iter()
            .zip(&kf)
            .map(|(fi, ki)| fi.conj() * ki)
            .sum();
        let res = kf
            .iter()
            .zip(f.amplitudes())
            .map(|(ki, fi)| (ki - a * fi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if res > max_res {
            max_res = res;
            worst = n;
        }
        proportionality.push(a);
    }

    let mut s = ComplexMatrix::zeros(dim);
    for k in operators {
        s = s.add(&k.adjoint().mul(k));
    }
    let identity = ComplexMatrix::identity(dim);
    let id_residual = s.max_abs_diff(&identity);
    let completeness = if id_residual <= tol.suite {
        Some(Completeness::Complete)
    } else {
        let slack = identity.sub(&s);
        let min = hermitian_eig(&slack.symmetrize(), tol)
            .map(|e| e.eigenvalues.first().copied().unwrap_or(0.0))
            .unwrap_or(f64::NEG_INFINITY);
        if min >= -tol.suite {
            Some(Completeness::Sub)
        } else {
            None
        }
    };
    let completeness_residual = match completeness {
        Some(Completeness::Complete) => id_residual,
        _ => {
            let slack = identity.sub(&s);
            hermitian_eig(&slack.symmetrize(), tol)
                .map(|e| (-e.eigenvalues.first().copied().unwrap_or(0.0)).max(0.0))
                .unwrap_or(f64::INFINITY)
        }
    };

    Ok(FreenessReport {
        free: max_res <= tol.suite && completeness.is_some(),
        completeness,
        worst_operator: worst,
        max_freeness_residual: max_res,
        completeness_residual,
        proportionality,
    })
}

/// Validated free Kraus set.
#[derive(Debug, Clone)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<ComplexMatrix>,
    completeness: Completeness,
    proportionality: Vec<Complex64>,
}

impl KrausSet {
    /// Validate and wrap a list of operators. Fails with `NotFree` when the
    /// freeness condition or the (sub-)normalization bound is violated.
    pub fn new(dim: usize, operators: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let report = is_free_kraus_set(dim, &operators, tol)?;
        if !report.free {
            return Err(Error::NotFree {
                diagnostics: format!(
                    "operator {} has freeness residual {:.3e}; completeness class {:?} (residual {:.3e})",
                    report.worst_operator,
                    report.max_freeness_residual,
                    report.completeness,
                    report.completeness_residual,
                ),
            });
        }
        Ok(Self {
            dim,
            operators,
            completeness: report.completeness.expect("free implies classified"),
            proportionality: report.proportionality,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    /// `a_n` with `K_n |f> = a_n |f>`.
    pub fn proportionality(&self) -> &[Complex64] {
        &self.proportionality
    }
}

/// Output of applying a Kraus set.
#[derive(Debug, Clone)]
pub enum ChannelOutput {
    /// Complete set: a valid density matrix.
    Complete(DensityMatrix),
    /// Sub-normalized set: the unnormalized `sum K rho K†` and its trace.
    Sub {
        unnormalized: ComplexMatrix,
        probability: f64,
    },
}

/// Apply a free Kraus set to a state.
pub fn apply_channel(
    ks: &KrausSet,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<ChannelOutput> {
    if ks.dim() != rho.dim() {
        return Err(Error::DimMismatch {
            left: ks.dim(),
            right: rho.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(ks.dim());
    for k in ks.operators() {
        out = out.add(&k.mul(rho.matrix()).mul(&k.adjoint()));
    }
    match ks.completeness() {
        Completeness::Complete => Ok(ChannelOutput::Complete(
            DensityMatrix::from_matrix_unchecked(out, tol),
        )),
        Completeness::Sub => {
            let probability = out.trace().re;
            Ok(ChannelOutput::Sub {
                unnormalized: out,
                probability,
            })
        }
    }
}

/// The replacement channel `rho -> f`, with Kraus operators `K_i = |f><i|`.
pub fn replacement_channel(d: usize, tol: &Tolerances) -> Result<KrausSet> {
    let f = nontexture_state(d)?;
    let ops: Vec<ComplexMatrix> = (0..d)
        .map(|i| ComplexMatrix::from_fn(d, |r, c| if c == i { f.amplitudes()[r] } else { ZERO }))
        .collect();
    KrausSet::new(d, ops, tol)
}

/// Built-in seeded recipes for free channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelRecipe {
    /// Convex mixture of free unitaries `1 (+) Haar(d-1)` in the f-basis.
    UnitaryMixture,
    /// `sqrt(1-eps) * unitary mixture` together with `sqrt(eps) * replacement`.
    PartialReplacement,
    /// The `{K_0 = diag(a, 1), K_1 = sqrt(1 - K_0† K_0)}` instrument family
    /// with a random admissible `a` (d = 2 only).
    TriangularInstrument,
}

impl std::str::FromStr for ChannelRecipe {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unitary_mixture" => Ok(Self::UnitaryMixture),
            "partial_replacement" => Ok(Self::PartialReplacement),
            "triangular_instrument" => Ok(Self::TriangularInstrument),
            other => Err(Error::InvalidRecipe(other.to_string())),
        }
    }
}

impl std::fmt::Display for ChannelRecipe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::UnitaryMixture => "unitary_mixture",
            Self::PartialReplacement => "partial_replacement",
            Self::TriangularInstrument => "triangular_instrument",
        };
        write!(f, "{s}")
    }
}

/// Haar-distributed unitary via Gram-Schmidt of a Ginibre matrix with a
/// positive-diagonal R factor.
fn haar_unitary(dim: usize, rng: &mut rand_chacha::ChaCha12Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| rng::complex_gaussian(rng));
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| (0..dim).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..dim {
        for i in 0..j {
            let prev = cols[i].clone();
            let proj: Complex64 = prev.iter().zip(&cols[j]).map(|(p, c)| p.conj() * c).sum();
            for (cj, pi) in cols[j].iter_mut().zip(&prev) {
                *cj -= proj * pi;
            }
        }
        let norm = cols[j].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for cj in &mut cols[j] {
            *cj /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Free unitary: identity on `|f>`, Haar on the orthogonal complement,
/// expressed in the computational basis.
fn free_unitary(
    d: usize,
    rng: &mut rand_chacha::ChaCha12Rng,
    basis: &ComplexMatrix,
) -> ComplexMatrix {
    let inner = haar_unitary(d - 1, rng);
    let mut block = ComplexMatrix::zeros(d);
    block[(0, 0)] = ONE;
    for i in 0..d - 1 {
        for j in 0..d - 1 {
            block[(i + 1, j + 1)] = inner[(i, j)];
        }
    }
    basis.mul(&block).mul(&basis.adjoint())
}

/// A single free unitary as a one-operator channel (the subclass under which
/// the squared-Frobenius texture is exactly invariant).
pub fn free_unitary_channel(d: usize, seed: u64, tol: &Tolerances) -> Result<KrausSet> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "channels require d >= 2",
        });
    }
    let mut rng = rng::master_stream(seed ^ 0x0f2ee_u64);
    let basis = f_basis_unitary(d)?;
    let u = free_unitary(d, &mut rng, &basis);
    KrausSet::new(d, vec![u], tol)
}

/// Deterministic seeded generation of a free Kraus set.
pub fn sample_free_channel(
    d: usize,
    recipe: ChannelRecipe,
    seed: u64,
    tol: &Tolerances,
) -> Result<KrausSet> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "channels require d >= 2",
        });
    }
    let mut rng = rng::master_stream(seed ^ 0x5eed_c4a5);
    let basis = f_basis_unitary(d)?;
    match recipe {
        ChannelRecipe::UnitaryMixture => {
            let n = rng.gen_range(2..=3usize);
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0f64)).collect();
            let total: f64 = raw.iter().sum();
            let ops: Vec<ComplexMatrix> = raw
                .iter()
                .map(|&w| free_unitary(d, &mut rng, &basis).scale_re((w / total).sqrt()))
                .collect();
            KrausSet::new(d, ops, tol)
        }
        ChannelRecipe::PartialReplacement => {
            let eps = rng.gen_range(0.1..0.9f64);
            let n = rng.gen_range(2..=3usize);
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0f64)).collect();
            let total: f64 = raw.iter().sum();
            let mut ops: Vec<ComplexMatrix> = raw
                .iter()
                .map(|&w| {
                    free_unitary(d, &mut rng, &basis).scale_re(((1.0 - eps) * w / total).sqrt())
                })
                .collect();
            for k in replacement_channel(d, tol)?.operators() {
                ops.push(k.scale_re(eps.sqrt()));
            }
            KrausSet::new(d, ops, tol)
        }
        ChannelRecipe::TriangularInstrument => {
            if d != 2 {
                return Err(Error::InvalidRecipe(format!(
                    "triangular_instrument is defined for d = 2 only (got {d})"
                )));
            }
            let mag = rng.gen_range(0.0..1.0f64);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let a = Complex64::from_polar(mag, phase);
            let k0_f = ComplexMatrix::from_entries(2, vec![a, ZERO, ZERO, ONE]).unwrap();
            let k1_f = ComplexMatrix::diagonal(&[(1.0 - mag * mag).sqrt(), 0.0]);
            let k0 = basis.mul(&k0_f).mul(&basis.adjoint());
            let k1 = basis.mul(&k1_f).mul(&basis.adjoint());
            KrausSet::new(2, vec![k0, k1], tol)
        }
    }
}

/// Complete a sub-normalized free set with `sqrt(1 - sum K† K)`.
///
/// The square root is itself free only when `|f>` is an eigenvector of
/// `S = sum K† K`; that condition is checked and `FreeCompletionUndefined`
/// reported otherwise. All built-in recipes satisfy it by construction.
pub fn complete_free(ks: &KrausSet, tol: &Tolerances) -> Result<KrausSet> {
    let d = ks.dim();
    let mut s = ComplexMatrix::zeros(d);
    for k in ks.operators() {
        s = s.add(&k.adjoint().mul(k));
    }
    let f = nontexture_state(d)?;
    let sf = s.apply(f.amplitudes());
    let eigval: Complex64 = f
        .amplitudes()
        .iter()
        .zip(&sf)
        .map(|(fi, si)| fi.conj() * si)
        .sum();
    let residual = sf
        .iter()
        .zip(f.amplitudes())
        .map(|(si, fi)| (si - eigval * fi).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > tol.suite {
        return Err(Error::FreeCompletionUndefined { residual });
    }
    let slack = ComplexMatrix::identity(d).sub(&s);
    let root = psd_sqrt(&slack.symmetrize(), tol)?;
    let mut ops = ks.operators().to_vec();
    ops.push(root);
    KrausSet::new(d, ops, tol)
}

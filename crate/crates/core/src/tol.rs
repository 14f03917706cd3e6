//! Central numeric tolerance configuration.
//!
//! Every module reads its bounds from [`Tolerances`] so that a single record
//! documents (and, when needed, overrides) all thresholds used by validation,
//! the verification suites, and the CLI.

/// Numeric tolerances shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max allowed `|m_ij - conj(m_ji)|` for a matrix to count as Hermitian.
    pub hermitian: f64,
    /// Eigenvalues below `-psd` fail PSD validation; values in `[-psd, 0)` are
    /// clipped to zero before fractional powers.
    pub psd: f64,
    /// Max allowed `|tr(rho) - 1|`.
    pub trace_one: f64,
    /// Eigendecomposition reconstruction and orthonormality bound.
    pub reconstruction: f64,
    /// Exact-identity checks (arithmetic restatements of the same quantity).
    pub identity: f64,
    /// Monotonicity / convexity slack used by the verification suites.
    pub suite: f64,
    /// Ensemble recomposition bound for convex-roof decompositions.
    pub ensemble: f64,
    /// Overlaps at or below this threshold map to an infinite rugosity.
    pub underflow: f64,
    /// Amplitudes below this magnitude are treated as zero when extracting phases.
    pub phase_floor: f64,
    /// Eigenvalues with modulus below this are exact zeros as far as the
    /// eigensolver can tell; fractional powers would otherwise amplify the
    /// round-off (1e-17 raised to 0.25 is 1e-5 of garbage).
    pub eig_zero_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-9,
            psd: 1e-9,
            trace_one: 1e-9,
            reconstruction: 1e-10,
            identity: 1e-10,
            suite: 1e-9,
            ensemble: 1e-8,
            underflow: 1e-300,
            phase_floor: 1e-12,
            eig_zero_floor: 1e-13,
        }
    }
}

//! Function-based texture measures: exact pure-state values and numerical
//! convex-roof evaluation for mixed states.
//!
//! A screened function `f` with `f(1) = 0`, non-increasing and concave turns
//! `f(|<f|psi>|^2)` into a pure-state quantifier; the mixed-state value is the
//! minimum ensemble average over all pure-state decompositions. Decompositions
//! are parameterized by isometries applied to the scaled eigenvectors
//! (every ensemble of `rho` arises this way), and the minimization is a
//! seeded random-restart local refinement.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, ZERO};
use crate::rng;
use crate::states::{nontexture_state, DensityMatrix, PureState};
use crate::tol::Tolerances;

/// Functions accepted by the roof construction, evaluable on `[0, 1]`.
#[derive(Debug, Clone)]
pub enum RoofFunction {
    /// `g(t) = 1 - t` (the geometric case; carries an exact closed form).
    Linear,
    /// `1 - sqrt(t)` (pure-state infidelity with `f`). Convex, so it fails
    /// the concavity screen; usable only with the screen relaxed.
    OneMinusSqrt,
    /// `-ln t`, `+inf` at `t = 0` (pure-state rugosity). Convex, so it fails
    /// the concavity screen; usable only with the screen relaxed.
    NegLog,
    /// Caller-supplied function.
    Custom { name: String, eval: fn(f64) -> f64 },
}

impl RoofFunction {
    pub fn id(&self) -> &str {
        match self {
            Self::Linear => "g",
            Self::OneMinusSqrt => "one-minus-sqrt",
            Self::NegLog => "neg-log",
            Self::Custom { name, .. } => name,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Linear => 1.0 - t,
            Self::OneMinusSqrt => 1.0 - t.max(0.0).sqrt(),
            Self::NegLog => {
                if t <= 0.0 {
                    f64::INFINITY
                } else {
                    -t.ln()
                }
            }
            Self::Custom { eval, .. } => eval(t),
        }
    }

    /// Screen the Theorem-style conditions on a deterministic sample.
    pub fn screen(&self) -> ScreenReport {
        let grid: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        let unit_zero = self.eval(1.0).abs() <= 1e-12;
        let mut nonincreasing = true;
        for w in grid.windows(2) {
            let (a, b) = (self.eval(w[0]), self.eval(w[1]));
            if b > a + 1e-12 && a.is_finite() {
                nonincreasing = false;
                break;
            }
        }
        let mut max_concavity_violation = 0.0f64;
        let mut rng = rng::master_stream(0x5c_ee_11);
        for _ in 0..1000 {
            let a: f64 = rng.gen_range(0.0..1.0);
            let b: f64 = rng.gen_range(0.0..1.0);
            let mid = self.eval(0.5 * (a + b));
            let avg = 0.5 * (self.eval(a) + self.eval(b));
            if mid.is_finite() && avg.is_finite() {
                max_concavity_violation = max_concavity_violation.max(avg - mid);
            } else if avg.is_infinite() && mid.is_finite() {
                max_concavity_violation = f64::INFINITY;
            }
        }
        ScreenReport {
            unit_zero,
            nonincreasing,
            midpoint_concave: max_concavity_violation <= 1e-12,
            max_concavity_violation,
        }
    }
}

/// Outcome of the function screen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenReport {
    pub unit_zero: bool,
    pub nonincreasing: bool,
    pub midpoint_concave: bool,
    pub max_concavity_violation: f64,
}

impl ScreenReport {
    pub fn passes(&self) -> bool {
        self.unit_zero && self.nonincreasing && self.midpoint_concave
    }
}

fn screen_for(f: &RoofFunction, require_concave: bool) -> Result<()> {
    let report = f.screen();
    let hard_ok = report.unit_zero && report.nonincreasing;
    let ok = hard_ok && (!require_concave || report.midpoint_concave);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidFunction {
            reason: format!(
                "{}: unit_zero={}, nonincreasing={}, midpoint_concave={} (violation {:.3e})",
                f.id(),
                report.unit_zero,
                report.nonincreasing,
                report.midpoint_concave,
                report.max_concavity_violation
            ),
        })
    }
}

/// Pure-state value `f(|<f|psi>|^2)`, enforcing the full screen.
pub fn pure_texture(psi: &PureState, f: &RoofFunction) -> Result<f64> {
    screen_for(f, true)?;
    let fv = nontexture_state(psi.dim())?;
    Ok(f.eval(fv.inner(psi).norm_sqr().clamp(0.0, 1.0)))
}

/// Convex-roof optimizer configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoofConfig {
    /// Ensemble size `m`; 0 selects `2 * rank(rho)`.
    pub ensemble_size: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Improvements smaller than this do not count as progress.
    pub tolerance: f64,
    pub seed: u64,
    /// Enforce the concavity part of the screen (the Theorem conditions).
    /// Relax deliberately to evaluate roofs of screened-out functions.
    pub require_concave: bool,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            ensemble_size: 0,
            restarts: 16,
            max_iterations: 500,
            tolerance: 1e-12,
            seed: 0,
            require_concave: true,
        }
    }
}

impl RoofConfig {
    /// Small configuration for measures whose roof objective is ensemble
    /// independent (the linear function), where restarts add nothing.
    pub fn light(seed: u64) -> Self {
        Self {
            restarts: 2,
            max_iterations: 40,
            seed,
            ..Self::default()
        }
    }
}

/// Convex-roof result: the minimal ensemble average and the ensemble that
/// achieves it.
#[derive(Debug, Clone)]
pub struct RoofOutcome {
    pub value: f64,
    /// `(p_i, |psi_i>)` with `sum_i p_i |psi_i><psi_i| = rho`.
    pub ensemble: Vec<(f64, PureState)>,
    /// Restart that produced the winning ensemble.
    pub best_restart: usize,
    /// Max entrywise deviation of the recomposed ensemble from `rho`.
    pub recompose_residual: f64,
}

/// Columns of `u` (m x r) orthonormalized in place by modified Gram-Schmidt.
fn orthonormalize(u: &mut [Vec<Complex64>]) {
    let r = u.len();
    for j in 0..r {
        for i in 0..j {
            let proj: Complex64 = u[i].iter().zip(&u[j]).map(|(a, b)| a.conj() * b).sum();
            let prev = u[i].clone();
            for (x, p) in u[j].iter_mut().zip(prev) {
                *x -= proj * p;
            }
        }
        let norm = u[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut u[j] {
            *x /= norm;
        }
    }
}

/// Minimize `sum_i p_i f(|<f|psi_i>|^2)` over ensembles of `rho`.
pub fn convex_roof(
    rho: &DensityMatrix,
    f: &RoofFunction,
    cfg: &RoofConfig,
    tol: &Tolerances,
) -> Result<RoofOutcome> {
    screen_for(f, cfg.require_concave)?;
    let d = rho.dim();
    let eig = hermitian_eig(rho.matrix(), tol)?;
    let kept: Vec<(f64, Vec<Complex64>)> = (0..d)
        .filter(|&k| eig.eigenvalues[k] > tol.psd)
        .map(|k| (eig.eigenvalues[k], eig.eigenvector(k)))
        .collect();
    let rank = kept.len();
    let m = if cfg.ensemble_size == 0 {
        2 * rank
    } else {
        cfg.ensemble_size
    };
    if m < rank {
        return Err(Error::EnsembleTooSmall { size: m, rank });
    }

    // scaled eigenvectors w_j = sqrt(lambda_j) |lambda_j>
    let w: Vec<Vec<Complex64>> = kept
        .iter()
        .map(|(l, v)| v.iter().map(|x| x * l.sqrt()).collect())
        .collect();
    let fvec = nontexture_state(d)?;
    let f_dot_w: Vec<Complex64> = w
        .iter()
        .map(|wj| {
            fvec.amplitudes()
                .iter()
                .zip(wj)
                .map(|(a, b)| a.conj() * b)
                .sum()
        })
        .collect();

    // columns of the isometry are length-m; u[j][i] = U_{i j}
    let objective = |u: &[Vec<Complex64>]| -> f64 {
        let mut total = 0.0;
        for i in 0..m {
            // subnormalized member i: sum_j U_{i j} w_j
            let mut p = 0.0;
            // <f|psi~_i> = sum_j U_{i j} <f|w_j>
            let mut overlap = ZERO;
            for j in 0..rank {
                overlap += u[j][i] * f_dot_w[j];
            }
            for k in 0..d {
                let mut amp = ZERO;
                for j in 0..rank {
                    amp += u[j][i] * w[j][k];
                }
                p += amp.norm_sqr();
            }
            if p > 1e-14 {
                total += p * f.eval((overlap.norm_sqr() / p).clamp(0.0, 1.0));
            }
        }
        total
    };

    let run_restart = |restart: usize| -> (f64, Vec<Vec<Complex64>>) {
        let mut rng = rng::child_stream(cfg.seed, restart as u64);
        let mut u: Vec<Vec<Complex64>> = (0..rank)
            .map(|_| (0..m).map(|_| rng::complex_gaussian(&mut rng)).collect())
            .collect();
        orthonormalize(&mut u);
        let mut best = objective(&u);
        let mut step = 0.5f64;
        for iter in 0..cfg.max_iterations {
            let j = rng.gen_range(0..rank);
            let i = rng.gen_range(0..m);
            let mut cand = u.clone();
            cand[j][i] += rng::complex_gaussian(&mut rng) * step;
            orthonormalize(&mut cand);
            let val = objective(&cand);
            if val < best - cfg.tolerance {
                best = val;
                u = cand;
            }
            if iter % 25 == 24 {
                step = (step * 0.85).max(1e-4);
            }
        }
        (best, u)
    };

    let runs: Vec<(f64, Vec<Vec<Complex64>>)> =
        crate::exec::map_indexed(cfg.restarts.max(1), run_restart);
    let (best_restart, (value, u)) = runs
        .into_iter()
        .enumerate()
        .min_by(|(ia, (va, _)), (ib, (vb, _))| {
            va.partial_cmp(vb)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ia.cmp(ib))
        })
        .expect("at least one restart");

    // materialize the achieving ensemble and its recomposition residual
    let mut ensemble = Vec::new();
    let mut recomposed = ComplexMatrix::zeros(d);
    for i in 0..m {
        let mut amp = vec![ZERO; d];
        for j in 0..rank {
            for k in 0..d {
                amp[k] += u[j][i] * w[j][k];
            }
        }
        let p: f64 = amp.iter().map(|x| x.norm_sqr()).sum();
        if p > 1e-14 {
            let psi = PureState::normalized(amp)?;
            recomposed = recomposed.add(&psi.projector().scale_re(p));
            ensemble.push((p, psi));
        }
    }
    let recompose_residual = recomposed.max_abs_diff(rho.matrix());

    Ok(RoofOutcome {
        value,
        ensemble,
        best_restart,
        recompose_residual,
    })
}

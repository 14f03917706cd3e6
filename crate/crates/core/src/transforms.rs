//! Stochastic state conversions under free operations for qubits: the
//! closed-form maximal probabilities for pure -> pure and pure -> mixed
//! targets, explicit optimal instruments, and an independent brute-force
//! maximizer used as an oracle.
//!
//! All instrument algebra happens in the `{|f>, f-perp}` frame, where free
//! operators are upper triangular; results are reported in the computational
//! basis.

use num_complex::Complex64;
use rand::Rng;

use crate::channels::KrausSet;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, ONE, ZERO};
use crate::rng;
use crate::states::{f_basis, f_basis_unitary, nontexture_state, DensityMatrix, PureState};
use crate::tol::Tolerances;

/// Outcome of a conversion computation.
#[derive(Debug, Clone)]
pub struct ConversionResult {
    /// Maximal conversion probability, capped at 1.
    pub probability: f64,
    /// Uncapped texture ratio; equals `probability` when at most 1.
    pub raw_ratio: f64,
    /// Optimal free instrument `{K_0, K_1}` when a valid one exists.
    pub instrument: Option<KrausSet>,
    /// The algebraic `K_0` (computational basis), also kept when it is not
    /// sub-normalized so the conversion identity stays checkable.
    pub k0: Option<ComplexMatrix>,
    /// Coefficient `q` in `K_0 psi psi† K_0† = p sigma + q f` (mixed targets).
    pub residual_q: Option<f64>,
    /// Max entrywise residual of the conversion identity.
    pub identity_residual: Option<f64>,
    /// Whether the instrument output actually matches the target.
    pub achieved: bool,
}

fn phase_or_one(z: Complex64, floor: f64) -> Complex64 {
    let n = z.norm();
    if n < floor {
        ONE
    } else {
        z / n
    }
}

/// `(alpha, beta)` components of `psi` in the `{|f>, f-perp}` basis (d = 2).
fn fb_components(psi: &PureState) -> Result<(Complex64, Complex64)> {
    let basis = f_basis(psi.dim())?;
    Ok((basis[0].inner(psi), basis[1].inner(psi)))
}

fn require_qubit(dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::DimUnsupported(dim));
    }
    Ok(())
}

/// Maximum conversion probability for `|psi> -> |phi>` (d = 2):
/// `p = min{(1 - |<f|psi>|^2) / (1 - |<f|phi>|^2), 1}`, together with an
/// optimal free instrument.
///
/// For `p < 1` the instrument is `K_0 = diag(a, 1)` in the f-basis with
/// `a = beta mu / (alpha nu)` and `K_1 = sqrt(1 - K_0† K_0)`. For `p = 1`
/// (target no more textured than the source) a deterministic two-operator
/// free instrument is built whose first arm alone maps `psi` to `phi` with
/// unit probability.
pub fn max_prob_pure_to_pure(
    psi: &PureState,
    phi: &PureState,
    tol: &Tolerances,
) -> Result<ConversionResult> {
    require_qubit(psi.dim())?;
    require_qubit(phi.dim())?;
    let (alpha, beta) = fb_components(psi)?;
    let (mu, nu) = fb_components(phi)?;
    let target_texture = 1.0 - mu.norm_sqr();
    if target_texture <= 1e-12 {
        return Err(Error::TargetIsFreeState {
            texture: target_texture,
        });
    }
    let raw = (1.0 - alpha.norm_sqr()) / target_texture;
    let probability = raw.min(1.0);
    let floor = tol.phase_floor;
    let basis = f_basis_unitary(2)?;

    let (k0_f, k1_f) = if raw <= 1.0 && alpha.norm() > floor {
        // K_0 = diag(a, 1), a = |beta||mu| / (|alpha||nu|) with phase
        // e^{i[(mu - nu) - (alpha - beta)]}; K_1 completes it diagonally.
        let magnitude = (beta.norm() * mu.norm()) / (alpha.norm() * nu.norm());
        let phase = phase_or_one(mu, floor)
            * phase_or_one(nu, floor).conj()
            * phase_or_one(alpha, floor).conj()
            * phase_or_one(beta, floor);
        let a = phase * magnitude;
        let k0 = ComplexMatrix::from_entries(2, vec![a, ZERO, ZERO, ONE]).unwrap();
        let k1 = ComplexMatrix::diagonal(&[(1.0 - magnitude * magnitude).max(0.0).sqrt(), 0.0]);
        (k0, k1)
    } else {
        // Unit-probability branch. Strip phases with free diagonal unitaries,
        // build the real-frame pair, then restore the phases.
        let (am, bm, mm, nm) = (alpha.norm(), beta.norm(), mu.norm(), nu.norm());
        let (k0_real, k1_real) = if mm <= floor {
            // target is f-perp, so the source must be too; phase fixing only
            (ComplexMatrix::identity(2), ComplexMatrix::zeros(2))
        } else {
            let tau = (am * nm) / (mm * bm);
            let k0 = ComplexMatrix::from_entries(
                2,
                vec![
                    Complex64::new(am / mm, 0.0),
                    Complex64::new((mm * mm * bm * bm - nm * nm * am * am) / (mm * bm), 0.0),
                    ZERO,
                    Complex64::new(nm / bm, 0.0),
                ],
            )
            .unwrap();
            let w = (1.0 - tau * tau).max(0.0).sqrt();
            let k1 = ComplexMatrix::from_entries(
                2,
                vec![
                    Complex64::new(-w * bm, 0.0),
                    Complex64::new(w * am, 0.0),
                    ZERO,
                    ZERO,
                ],
            )
            .unwrap();
            (k0, k1)
        };
        let pre = ComplexMatrix::from_fn(2, |i, j| {
            if i != j {
                ZERO
            } else if i == 0 {
                phase_or_one(alpha, floor).conj()
            } else {
                phase_or_one(beta, floor).conj()
            }
        });
        let post = ComplexMatrix::from_fn(2, |i, j| {
            if i != j {
                ZERO
            } else if i == 0 {
                phase_or_one(mu, floor)
            } else {
                phase_or_one(nu, floor)
            }
        });
        (post.mul(&k0_real).mul(&pre), post.mul(&k1_real).mul(&pre))
    };

    let k0 = basis.mul(&k0_f).mul(&basis.adjoint());
    let k1 = basis.mul(&k1_f).mul(&basis.adjoint());
    let out = ComplexMatrix::outer(&k0.apply(psi.amplitudes()));
    let expected = phi.projector().scale_re(probability);
    let identity_residual = out.max_abs_diff(&expected);
    let achieved = identity_residual <= tol.identity;
    let instrument = KrausSet::new(2, vec![k0.clone(), k1], tol).ok();

    Ok(ConversionResult {
        probability,
        raw_ratio: raw,
        instrument,
        k0: Some(k0),
        residual_q: None,
        identity_residual: Some(identity_residual),
        achieved,
    })
}

/// Maximum conversion probability for `|psi><psi| -> sigma` (d = 2):
/// `p = min{(1 - |<f|psi>|^2) / (1 - <f|sigma|f>), 1}`.
///
/// A pure target delegates to [`max_prob_pure_to_pure`]. For mixed targets
/// the single-operator instrument of the closed-form construction obeys the
/// algebra `K_0 psi psi† K_0† = p sigma + q f` with
/// `q = |beta|^2 (|sigma_12|^2 - sigma_11 sigma_22) / sigma_22^2 <= 0`;
/// since its output is rank one it cannot equal a strictly mixed `sigma`, so
/// `achieved` is false whenever `q != 0` and `p` is reported as the
/// monotonicity-derived upper bound.
pub fn max_prob_pure_to_mixed(
    psi: &PureState,
    sigma: &DensityMatrix,
    tol: &Tolerances,
) -> Result<ConversionResult> {
    require_qubit(psi.dim())?;
    require_qubit(sigma.dim())?;
    let f = nontexture_state(2)?;
    let target_texture = 1.0 - sigma.matrix().quadratic_form(f.amplitudes()).re;
    if target_texture <= 1e-12 {
        return Err(Error::TargetIsFreeState {
            texture: target_texture,
        });
    }

    if sigma.purity() >= 1.0 - tol.suite {
        // pure target: Theorem 5 with the dominant eigenvector
        let eig = hermitian_eig(sigma.matrix(), tol)?;
        let phi = PureState::normalized(eig.eigenvector(1))?;
        let mut result = max_prob_pure_to_pure(psi, &phi, tol)?;
        if let (Some(k0), Some(_)) = (&result.k0, &result.identity_residual) {
            let out = ComplexMatrix::outer(&k0.apply(psi.amplitudes()));
            let p_id = result.raw_ratio.min(1.0);
            let diff = out.sub(&sigma.matrix().scale_re(p_id));
            let q = diff.quadratic_form(f.amplitudes()).re;
            let fproj = f.projector();
            let residual = out.max_abs_diff(&sigma.matrix().scale_re(p_id).add(&fproj.scale_re(q)));
            result.residual_q = Some(q);
            result.identity_residual = Some(residual);
            result.achieved = q.abs() <= tol.identity && residual <= tol.identity;
        }
        return Ok(result);
    }

    let (alpha, beta) = fb_components(psi)?;
    let basis = f_basis_unitary(2)?;
    let s_f = basis.adjoint().mul(sigma.matrix()).mul(&basis);
    let s11 = s_f[(0, 0)].re;
    let s12 = s_f[(0, 1)];
    let s22 = s_f[(1, 1)].re;
    let raw = beta.norm_sqr() / s22;
    let probability = raw.min(1.0);
    let floor = tol.phase_floor;

    if alpha.norm() <= floor {
        // source is f-perp: probability 1, but the closed-form K_0 needs a
        // nonzero f-component to carry the target's off-diagonal phase
        return Ok(ConversionResult {
            probability,
            raw_ratio: raw,
            instrument: None,
            k0: None,
            residual_q: None,
            identity_residual: None,
            achieved: false,
        });
    }

    // a = |sigma_12||beta| / (sigma_22 |alpha|) e^{i[(beta - alpha) + theta]}
    let magnitude = (s12.norm() * beta.norm()) / (s22 * alpha.norm());
    let phase =
        phase_or_one(beta, floor) * phase_or_one(alpha, floor).conj() * phase_or_one(s12, floor);
    let a = phase * magnitude;
    let k0_f = ComplexMatrix::from_entries(2, vec![a, ZERO, ZERO, ONE]).unwrap();
    let k0 = basis.mul(&k0_f).mul(&basis.adjoint());

    let q = beta.norm_sqr() * (s12.norm_sqr() - s11 * s22) / (s22 * s22);
    let out = ComplexMatrix::outer(&k0.apply(psi.amplitudes()));
    let fproj = f.projector();
    let expected = sigma.matrix().scale_re(raw).add(&fproj.scale_re(q));
    let identity_residual = out.max_abs_diff(&expected);

    let instrument = if magnitude <= 1.0 + 1e-12 {
        let k1_f = ComplexMatrix::diagonal(&[(1.0 - magnitude * magnitude).max(0.0).sqrt(), 0.0]);
        let k1 = basis.mul(&k1_f).mul(&basis.adjoint());
        KrausSet::new(2, vec![k0.clone(), k1], tol).ok()
    } else {
        None
    };

    Ok(ConversionResult {
        probability,
        raw_ratio: raw,
        instrument,
        k0: Some(k0),
        residual_q: Some(q),
        identity_residual: Some(identity_residual),
        achieved: q.abs() <= tol.identity && identity_residual <= tol.identity,
    })
}

/// Brute-force maximal conversion probability for pure qubit targets.
///
/// Maximizes `tr(K psi psi† K†)` over free sub-Kraus operators
/// `K = [[a, b], [0, c]]` (f-basis) with `K† K <= 1` and `K psi` proportional
/// to the target. Given the output weight `p = |kappa|^2` (where
/// `K psi = kappa phi`), the second row fixes `|c|`, the first row is an
/// affine line in `(a, b)`, and minimizing the singular-value bound
/// `|a|^2 + |b|^2 + |c|^2 - |a|^2 |c|^2 <= 1` over that line is a weighted
/// least-squares problem. Feasibility is therefore a scalar predicate,
/// monotone in `p`, and the supremum is found by an upward grid scan over
/// `p` in `[0, 1]` (`resolution` points) refined by bisection. Seeded random
/// sub-Kraus probes double-check that no sampled feasible operator beats the
/// reported value. Entirely independent of the closed-form route.
pub fn brute_force_max_prob(
    psi: &PureState,
    target: &PureState,
    resolution: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<f64> {
    require_qubit(psi.dim())?;
    require_qubit(target.dim())?;
    let (alpha, beta) = fb_components(psi)?;
    let (mu, nu) = fb_components(target)?;
    if nu.norm() <= tol.phase_floor {
        return Err(Error::TargetIsFreeState {
            texture: 1.0 - mu.norm_sqr(),
        });
    }
    let asq = alpha.norm_sqr();
    let bsq = beta.norm_sqr();
    let msq = mu.norm_sqr();
    let nsq = nu.norm_sqr();
    if bsq <= tol.phase_floor {
        // source is f itself: K psi lies on the f ray, never on the target
        return Ok(0.0);
    }

    // K triangular with K psi = kappa phi fixes |c|^2 = p nsq / bsq and
    // leaves a alpha + b beta = kappa mu. sigma_max(K) <= 1 is equivalent to
    // |a|^2 + |b|^2 + |c|^2 - |a|^2 |c|^2 <= 1; minimizing the left side over
    // the line gives the feasibility predicate below.
    let feasible = |p: f64| -> bool {
        let c2 = p * nsq / bsq;
        if c2 > 1.0 + 1e-15 {
            return false;
        }
        let w = (1.0 - c2).max(0.0);
        let min_rest = if p * msq == 0.0 {
            0.0
        } else {
            p * msq * w / (asq + w * bsq)
        };
        min_rest + c2 <= 1.0 + 1e-12
    };

    let steps = resolution.max(3);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    if feasible(1.0) {
        return Ok(1.0);
    }
    // coarse upward scan for the feasibility edge
    for i in (0..steps).rev() {
        let p = i as f64 / (steps - 1) as f64;
        if feasible(p) {
            lo = p;
            hi = ((i + 1) as f64 / (steps - 1) as f64).min(1.0);
            break;
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let best = lo;

    // seeded random probes: no sampled feasible triangular K may beat `best`
    let mut rng = rng::master_stream(seed ^ 0x0b57ac1e);
    let floor = tol.phase_floor;
    for _ in 0..256 {
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let a = if alpha.norm() > floor {
            (c * beta * mu / nu - b * beta) / alpha
        } else if (b * beta * nu - c * beta * mu).norm() > 1e-9 {
            continue;
        } else {
            ZERO
        };
        let g11 = a.norm_sqr();
        let g22 = b.norm_sqr() + c.norm_sqr();
        let g12 = a.conj() * b;
        let tr = g11 + g22;
        let det = g11 * g22 - g12.norm_sqr();
        let max_eig = 0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
        if max_eig > 1.0 + 1e-12 {
            continue;
        }
        let p = (a * alpha + b * beta).norm_sqr() + (c * beta).norm_sqr();
        debug_assert!(
            p <= best + 1e-9,
            "random probe beat the feasibility scan: {p} > {best}"
        );
        if p > best + 1e-9 {
            return Ok(p.min(1.0));
        }
    }
    Ok(best.clamp(0.0, 1.0))
}

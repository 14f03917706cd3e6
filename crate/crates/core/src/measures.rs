//! Closed-form quantum-state texture measures and the companion coherence,
//! imaginarity and predictability quantities.
//!
//! Everything here is a pure function of a validated [`DensityMatrix`]. The
//! measures quantify deviation from the non-texture state `f` whose entries
//! are all `1/d` in the computational basis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, psd_power, psd_sqrt};
use crate::states::{bloch_decompose, nontexture_state, DensityMatrix, PureState};
use crate::tol::Tolerances;

/// `<f|rho|f> = (1/d) sum_ij rho_ij`, real, in `[0, 1]`.
pub fn overlap_f(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let m = rho.matrix();
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            sum += m[(i, j)];
        }
    }
    sum.re / d as f64
}

/// State rugosity `-ln <f|rho|f>`; `+inf` once the overlap underflows.
pub fn rugosity(rho: &DensityMatrix, tol: &Tolerances) -> f64 {
    let ov = overlap_f(rho);
    if ov <= tol.underflow {
        f64::INFINITY
    } else {
        -ov.ln()
    }
}

/// `alpha`-affinity `A_alpha(rho, sigma) = tr(rho^alpha sigma^(1-alpha))`,
/// defined for `alpha` in `(0, 1)`.
pub fn alpha_affinity(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    alpha: f64,
    tol: &Tolerances,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha {
            alpha,
            reason: "alpha-affinity requires alpha in (0, 1)",
        });
    }
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let ra = psd_power(rho.matrix(), alpha, tol)?;
    let sa = psd_power(sigma.matrix(), 1.0 - alpha, tol)?;
    Ok(ra.mul(&sa).trace().re)
}

/// Texture from alpha-affinity: `Upsilon_alpha(rho) = 1 - A_alpha(rho, f)`.
pub fn texture_alpha_affinity(rho: &DensityMatrix, alpha: f64, tol: &Tolerances) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha {
            alpha,
            reason: "alpha-affinity texture requires alpha in (0, 1)",
        });
    }
    // tr(rho^alpha f^(1-alpha)) = <f|rho^alpha|f> since f is a projector.
    let f = nontexture_state(rho.dim())?;
    let ra = psd_power(rho.matrix(), alpha, tol)?;
    Ok(1.0 - ra.quadratic_form(f.amplitudes()).re)
}

/// Hellinger-distance texture `D_H(rho, f) = tr(sqrt(rho) - sqrt(f))^2`,
/// computed as `2 Upsilon_{1/2}(rho)`; range `[0, 2]`.
pub fn hellinger_texture(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(2.0 * texture_alpha_affinity(rho, 0.5, tol)?)
}

/// Tsallis relative-alpha-entropy texture `D_alpha(rho || f)`.
///
/// For `alpha` in `(0, 1)` this is `Upsilon_alpha / (1 - alpha)`, finite. For
/// `alpha > 1` the support condition `ran(rho) <= ran(f)` fails for every
/// state except `f` itself (f is rank one), so the value is `+inf` unless
/// `rho = f`, where it is 0. `alpha = 1` (quantum relative entropy) and
/// `alpha <= 0` are rejected.
pub fn tsallis_texture(rho: &DensityMatrix, alpha: f64, tol: &Tolerances) -> Result<f64> {
    if alpha <= 0.0 {
        return Err(Error::InvalidAlpha {
            alpha,
            reason: "Tsallis texture requires alpha > 0",
        });
    }
    if alpha == 1.0 {
        return Err(Error::InvalidAlpha {
            alpha,
            reason: "alpha = 1 is the relative-entropy case, not provided",
        });
    }
    if alpha < 1.0 {
        return Ok(texture_alpha_affinity(rho, alpha, tol)? / (1.0 - alpha));
    }
    let d = rho.dim();
    let f = nontexture_state(d)?.projector();
    if rho.matrix().max_abs_diff(&f) <= tol.suite {
        Ok(0.0)
    } else {
        Ok(f64::INFINITY)
    }
}

/// Geometric texture `1 - <f|rho|f>` (the convex roof of `1 - |<f|psi>|^2`).
pub fn geometric_texture(rho: &DensityMatrix) -> f64 {
    1.0 - overlap_f(rho)
}

/// Bloch-coordinate l1 components (texture, coherence, imaginarity,
/// predictability), all with prefactor `1/d`:
///
/// `texture = (1/d)(sum_i |x_i - 1| + sum_j |y_j| + sum_k |z_k|)`
/// `coherence = (1/d)(sum_i |x_i| + sum_j |y_j|)`
/// `imaginarity = (1/d) sum_j |y_j|`
/// `predictability = (1/d) sum_k |z_k|`
///
/// For d = 2 this is the familiar `(|x - 1| + |y| + |z|)/2` family. These are
/// the coordinate expansions used by the hemisphere identities; the distance
/// measure itself is [`l1_trace_texture`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Components {
    pub texture: f64,
    pub coherence: f64,
    pub imaginarity: f64,
    pub predictability: f64,
}

pub fn l1_components(rho: &DensityMatrix) -> L1Components {
    let d = rho.dim() as f64;
    let v = bloch_decompose(rho);
    let sx: f64 = v.x.iter().map(|x| (x - 1.0).abs()).sum();
    let cx: f64 = v.x.iter().map(|x| x.abs()).sum();
    let sy: f64 = v.y.iter().map(|y| y.abs()).sum();
    let sz: f64 = v.z.iter().map(|z| z.abs()).sum();
    L1Components {
        texture: (sx + sy + sz) / d,
        coherence: (cx + sy) / d,
        imaginarity: sy / d,
        predictability: sz / d,
    }
}

/// Trace-norm texture `D_l1(rho, f) = (1/2) tr|rho - f|`.
///
/// This is the distance-based l1 measure: monotone under free channels and
/// convex. The Bloch-coordinate expansion in [`l1_components`] is a different
/// quantity away from the real axis (the two coincide only when the trace
/// norm and the coordinate 1-norm agree).
pub fn l1_trace_texture(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let d = rho.dim();
    let f = nontexture_state(d)?.projector();
    let diff = rho.matrix().sub(&f);
    let eig = hermitian_eig(&diff, tol)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

/// Entrywise l1 coherence `C_l1(rho) = sum_{i != j} |rho_ij|`, the standard
/// coherence monotone; it upper-bounds `sum_{i != j} Re(rho_ij)` and is the
/// `C_l1` appearing in the measurable lower bounds.
pub fn entrywise_l1_coherence(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let m = rho.matrix();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += m[(i, j)].norm();
            }
        }
    }
    s
}

/// l2 (squared Frobenius) components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L2Components {
    /// `sum_{i != j} |rho_ij|^2`
    pub c_l2: f64,
    /// `sum_i |rho_ii|^2`
    pub p_l2: f64,
    /// `sum_{i != j} |rho_ij - 1/d|^2`
    pub gamma: f64,
    /// `<f|rho|f>`
    pub overlap_f: f64,
    /// `Upsilon_l2 = sum_ij |rho_ij - 1/d|^2`
    pub texture: f64,
}

pub fn l2_components(rho: &DensityMatrix) -> L2Components {
    let d = rho.dim();
    let inv_d = 1.0 / d as f64;
    let m = rho.matrix();
    let mut c_l2 = 0.0;
    let mut p_l2 = 0.0;
    let mut gamma = 0.0;
    let mut texture = 0.0;
    for i in 0..d {
        for j in 0..d {
            let e = m[(i, j)];
            let dev = (e - Complex64::new(inv_d, 0.0)).norm_sqr();
            texture += dev;
            if i == j {
                p_l2 += e.norm_sqr();
            } else {
                c_l2 += e.norm_sqr();
                gamma += dev;
            }
        }
    }
    L2Components {
        c_l2,
        p_l2,
        gamma,
        overlap_f: overlap_f(rho),
        texture,
    }
}

/// Wigner-Yanase skew information `-1/2 tr([sqrt(rho), |k><k|]^2)` for a
/// rank-1 projector, evaluated from the explicit commutator. Equals
/// `<k|rho|k> - <k|sqrt(rho)|k>^2` and is nonnegative.
pub fn skew_information(
    rho: &DensityMatrix,
    projector: &PureState,
    tol: &Tolerances,
) -> Result<f64> {
    if rho.dim() != projector.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: projector.dim(),
        });
    }
    let sqrt_rho = psd_sqrt(rho.matrix(), tol)?;
    let p = projector.projector();
    let comm = sqrt_rho.mul(&p).sub(&p.mul(&sqrt_rho));
    Ok(-0.5 * comm.mul(&comm).trace().re)
}

/// `<f|sqrt(rho)|f>`, the affinity `A(rho, f)`; the measurable quantity in
/// the skew-information identities.
pub fn affinity_f(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let f = nontexture_state(rho.dim())?;
    let sqrt_rho = psd_sqrt(rho.matrix(), tol)?;
    Ok(sqrt_rho.quadratic_form(f.amplitudes()).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::states::{bloch_compose, f_basis};
    use crate::states::{
        nontexture_projector, sample_state, validate_density, BlochVector, StateKind,
    };
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn zero_state() -> DensityMatrix {
        validate_density(&ComplexMatrix::diagonal(&[1.0, 0.0]), &tol()).unwrap()
    }

    fn fperp_state() -> DensityMatrix {
        let basis = f_basis(2).unwrap();
        basis[1].density(&tol())
    }

    fn max_mixed(d: usize) -> DensityMatrix {
        let vals = vec![1.0 / d as f64; d];
        validate_density(&ComplexMatrix::diagonal(&vals), &tol()).unwrap()
    }

    #[test]
    fn overlap_known_values() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(overlap_f(&f), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(overlap_f(&fperp_state()), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(overlap_f(&zero_state()), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn rugosity_known_values() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(rugosity(&f, &t), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rugosity(&zero_state(), &t), 2f64.ln(), epsilon = 1e-12);
        assert!(rugosity(&fperp_state(), &t).is_infinite());
    }

    #[test]
    fn affinity_equal_states_is_one() {
        let t = tol();
        for seed in 0..5u64 {
            let rho = sample_state(3, StateKind::Mixed, None, seed, &t).unwrap();
            let a = alpha_affinity(&rho, &rho, 0.3, &t).unwrap();
            assert_abs_diff_eq!(a, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn affinity_maximally_mixed_vs_f() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        let a = alpha_affinity(&max_mixed(2), &f, 0.5, &t).unwrap();
        assert_abs_diff_eq!(a, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-10);
    }

    #[test]
    fn affinity_pure_state_is_overlap() {
        // projector powers are idempotent, so A_alpha(psi, f) = |<f|psi>|^2
        let t = tol();
        let f = nontexture_projector(3, &t).unwrap();
        for seed in 0..5u64 {
            let psi = crate::states::sample_pure(3, seed).unwrap();
            let rho = psi.density(&t);
            let expected = nontexture_state(3).unwrap().inner(&psi).norm_sqr();
            for alpha in [0.25, 0.5, 0.75] {
                let a = alpha_affinity(&rho, &f, alpha, &t).unwrap();
                assert_abs_diff_eq!(a, expected, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn affinity_rejects_bad_alpha() {
        let t = tol();
        let rho = max_mixed(2);
        for alpha in [0.0, 1.0, -0.5, 1.5] {
            assert!(alpha_affinity(&rho, &rho, alpha, &t).is_err(), "{alpha}");
        }
    }

    #[test]
    fn texture_affinity_known_values() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(
            texture_alpha_affinity(&f, 0.5, &t).unwrap(),
            0.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            texture_alpha_affinity(&max_mixed(2), 0.5, &t).unwrap(),
            1.0 - std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            texture_alpha_affinity(&fperp_state(), 0.7, &t).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn hellinger_known_values() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(hellinger_texture(&f, &t).unwrap(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            hellinger_texture(&max_mixed(2), &t).unwrap(),
            2.0 - std::f64::consts::SQRT_2,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            hellinger_texture(&fperp_state(), &t).unwrap(),
            2.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn hellinger_matches_direct_trace_form() {
        // independent recomputation: tr(sqrt(rho) - sqrt(f))^2
        let t = tol();
        for seed in 0..20u64 {
            for d in [2usize, 3] {
                let rho = sample_state(d, StateKind::Mixed, None, 100 + seed, &t).unwrap();
                let sr = psd_sqrt(rho.matrix(), &t).unwrap();
                let sf = nontexture_state(d).unwrap().projector();
                let diff = sr.sub(&sf);
                let direct = diff.mul(&diff).trace().re;
                let via_affinity = hellinger_texture(&rho, &t).unwrap();
                assert_abs_diff_eq!(direct, via_affinity, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn tsallis_known_values() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(tsallis_texture(&f, 0.5, &t).unwrap(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            tsallis_texture(&max_mixed(2), 0.5, &t).unwrap(),
            2.0 - std::f64::consts::SQRT_2,
            epsilon = 1e-10
        );
        // definitionally forced value (1 - 0)/(1 - 1/2) = 2 at f-perp
        assert_abs_diff_eq!(
            tsallis_texture(&fperp_state(), 0.5, &t).unwrap(),
            2.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn tsallis_support_condition_above_one() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(tsallis_texture(&f, 1.5, &t).unwrap(), 0.0, epsilon = 1e-12);
        assert!(tsallis_texture(&zero_state(), 1.5, &t)
            .unwrap()
            .is_infinite());
        assert!(tsallis_texture(&max_mixed(2), 2.0, &t)
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn tsallis_rejects_bad_alpha() {
        let t = tol();
        let rho = max_mixed(2);
        assert!(matches!(
            tsallis_texture(&rho, 1.0, &t),
            Err(Error::InvalidAlpha { .. })
        ));
        assert!(matches!(
            tsallis_texture(&rho, 0.0, &t),
            Err(Error::InvalidAlpha { .. })
        ));
    }

    #[test]
    fn tsallis_affinity_linkage() {
        let t = tol();
        for seed in 0..20u64 {
            let rho = sample_state(3, StateKind::Mixed, None, 300 + seed, &t).unwrap();
            for alpha in [0.25, 0.5, 0.75] {
                let lhs = tsallis_texture(&rho, alpha, &t).unwrap();
                let rhs = texture_alpha_affinity(&rho, alpha, &t).unwrap() / (1.0 - alpha);
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn geometric_known_values() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(geometric_texture(&f), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(geometric_texture(&zero_state()), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(geometric_texture(&fperp_state()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn l1_components_known_values() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        let c = l1_components(&f);
        assert_abs_diff_eq!(c.texture, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.coherence, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.imaginarity, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.predictability, 0.0, epsilon = 1e-12);

        let v = BlochVector {
            x: vec![0.3],
            y: vec![0.2],
            z: vec![0.4],
        };
        let rho = bloch_compose(&v, 2, &t).unwrap();
        let c = l1_components(&rho);
        assert_abs_diff_eq!(c.texture, 0.65, epsilon = 1e-12);
        assert_abs_diff_eq!(c.coherence, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(c.imaginarity, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(c.predictability, 0.2, epsilon = 1e-12);

        let c = l1_components(&max_mixed(2));
        assert_abs_diff_eq!(c.texture, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.coherence, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn l1_trace_texture_values() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(l1_trace_texture(&f, &t).unwrap(), 0.0, epsilon = 1e-10);
        // I/2 - f = -sigma_x/2: eigenvalues +-1/2, half trace norm = 1/2
        assert_abs_diff_eq!(
            l1_trace_texture(&max_mixed(2), &t).unwrap(),
            0.5,
            epsilon = 1e-10
        );
        // pure state: (1/2) tr|psi psi' - f| = sqrt(1 - |<f|psi>|^2)
        for seed in 0..10u64 {
            let psi = crate::states::sample_pure(2, 40 + seed).unwrap();
            let rho = psi.density(&t);
            let ovl = nontexture_state(2).unwrap().inner(&psi).norm_sqr();
            assert_abs_diff_eq!(
                l1_trace_texture(&rho, &t).unwrap(),
                (1.0 - ovl).sqrt(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn l2_components_known_values() {
        let t = tol();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(l2_components(&f).texture, 0.0, epsilon = 1e-12);

        let c = l2_components(&zero_state());
        assert_abs_diff_eq!(c.texture, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.c_l2, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.p_l2, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.gamma, 0.5, epsilon = 1e-12);

        let c = l2_components(&max_mixed(2));
        assert_abs_diff_eq!(c.texture, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.c_l2, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.p_l2, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c.gamma, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn l2_restates_geometric() {
        // 1 - <f|rho|f> = (texture - c_l2 - p_l2 + 1)/2
        let t = tol();
        for seed in 0..30u64 {
            for d in [2usize, 3, 4] {
                let rho = sample_state(d, StateKind::Mixed, None, 500 + seed, &t).unwrap();
                let c = l2_components(&rho);
                let lhs = geometric_texture(&rho);
                let rhs = (c.texture - c.c_l2 - c.p_l2 + 1.0) / 2.0;
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn skew_information_known_values() {
        let t = tol();
        let f_vec = nontexture_state(2).unwrap();
        let f = nontexture_projector(2, &t).unwrap();
        assert_abs_diff_eq!(
            skew_information(&f, &f_vec, &t).unwrap(),
            0.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            skew_information(&zero_state(), &f_vec, &t).unwrap(),
            0.25,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            skew_information(&max_mixed(2), &f_vec, &t).unwrap(),
            0.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn skew_information_commutator_matches_closed_form() {
        // brute-force commutator oracle vs F - A^2; the closed form with the
        // opposite sign is negative for pure states away from f.
        let t = tol();
        for seed in 0..100u64 {
            let rho = sample_state(2, StateKind::Mixed, None, 900 + seed, &t).unwrap();
            let f_vec = nontexture_state(2).unwrap();
            let i_comm = skew_information(&rho, &f_vec, &t).unwrap();
            let big_f = overlap_f(&rho);
            let a = affinity_f(&rho, &t).unwrap();
            assert_abs_diff_eq!(i_comm, big_f - a * a, epsilon = 1e-9);
            assert!(i_comm >= -1e-10);
        }
    }

    #[test]
    fn skew_information_nonnegative_random() {
        let t = tol();
        for d in [2usize, 3, 4] {
            for seed in 0..334u64 {
                let rho = sample_state(d, StateKind::Mixed, None, 7000 + seed, &t).unwrap();
                let f_vec = nontexture_state(d).unwrap();
                assert!(skew_information(&rho, &f_vec, &t).unwrap() >= -1e-10);
            }
        }
    }

    #[test]
    fn pure_sweep_measures_decrease_in_overlap() {
        // psi(s) = sqrt(s)|f> + sqrt(1-s)|f-perp>: every measure is
        // non-increasing in s = |<f|psi>|^2.
        let t = tol();
        let basis = f_basis(2).unwrap();
        let n = 100usize;
        let mut prev: Option<Vec<f64>> = None;
        for k in 1..n {
            let s = k as f64 / n as f64;
            let amps: Vec<Complex64> = basis[0]
                .amplitudes()
                .iter()
                .zip(basis[1].amplitudes())
                .map(|(fa, pa)| fa * s.sqrt() + pa * (1.0 - s).sqrt())
                .collect();
            let psi = PureState::new(amps, &t).unwrap();
            let rho = psi.density(&t);
            let values = vec![
                rugosity(&rho, &t),
                texture_alpha_affinity(&rho, 0.25, &t).unwrap(),
                texture_alpha_affinity(&rho, 0.5, &t).unwrap(),
                texture_alpha_affinity(&rho, 0.75, &t).unwrap(),
                hellinger_texture(&rho, &t).unwrap(),
                tsallis_texture(&rho, 0.5, &t).unwrap(),
                geometric_texture(&rho),
                l1_trace_texture(&rho, &t).unwrap(),
                l2_components(&rho).texture,
            ];
            if let Some(p) = prev {
                for (i, (cur, old)) in values.iter().zip(&p).enumerate() {
                    assert!(
                        cur <= &(old + 1e-9),
                        "measure {i} increased along the overlap sweep: {old} -> {cur}"
                    );
                }
            }
            prev = Some(values);
        }
    }
}

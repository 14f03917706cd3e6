//! Identity and axiom verifier: evaluates every relation tying texture to
//! coherence, imaginarity, predictability and skew information on seeded
//! random state batches, and runs the measure axiom suites (zero at `f`,
//! nonnegativity, free-channel monotonicity, convexity).
//!
//! Checks come in three kinds. `Asserted` checks gate the suite. `Logged`
//! checks record counterexamples without gating (used where the source
//! relation's hypothesis is ambiguous or known not to hold in general).
//! `ExpectedFail` checks re-evaluate a printed relation whose sign is wrong;
//! the suite documents the failure instead of propagating it.

use num_complex::Complex64;

use crate::channels::{
    apply_channel, free_unitary_channel, sample_free_channel, ChannelOutput, ChannelRecipe,
    KrausSet,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::ComplexMatrix;
use crate::measures::{
    affinity_f, entrywise_l1_coherence, geometric_texture, l1_components, l2_components, overlap_f,
    skew_information,
};
use crate::registry::{evaluate_measure, MeasureId};
use crate::rng;
use crate::states::{
    bloch_decompose, nontexture_state, sample_pure, sample_state, DensityMatrix, StateKind,
};
use crate::tol::Tolerances;
use crate::transforms::{brute_force_max_prob, max_prob_pure_to_mixed, max_prob_pure_to_pure};

/// How a check participates in the suite outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Gates the suite: must pass.
    Asserted,
    /// Counterexamples are recorded; never gates.
    Logged,
    /// A printed relation with the wrong sign; expected not to pass.
    ExpectedFail,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Asserted => "asserted",
            Self::Logged => "logged",
            Self::ExpectedFail => "expected_fail",
        }
    }
}

/// One check outcome inside a report.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub check_id: String,
    pub kind: CheckKind,
    pub max_violation: f64,
    pub tolerance: f64,
    /// `max_violation <= tolerance`.
    pub pass: bool,
    pub samples: usize,
    /// Samples whose violation exceeded the tolerance.
    pub counterexamples: usize,
    /// States reproducing the worst violation (first is the primary state;
    /// checks over mixtures or channel pairs store every state involved).
    pub witness: Vec<DensityMatrix>,
    /// Mixture weights accompanying `witness` for convexity checks.
    pub witness_weights: Vec<f64>,
}

impl CheckResult {
    pub fn worst_state(&self) -> Option<&DensityMatrix> {
        self.witness.first()
    }
}

/// Suite outcome: deterministic for fixed `(suite, dim, samples, seed)`.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub suite_id: String,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// True when every `Asserted` check passes.
    pub fn all_canonical_pass(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::Asserted)
            .all(|c| c.pass)
    }
}

/// Accumulates per-sample violations into a check.
struct ViolationTracker {
    check_id: String,
    kind: CheckKind,
    tolerance: f64,
    max_violation: f64,
    samples: usize,
    counterexamples: usize,
    witness: Vec<DensityMatrix>,
    witness_weights: Vec<f64>,
}

impl ViolationTracker {
    fn new(check_id: &str, kind: CheckKind, tolerance: f64) -> Self {
        Self {
            check_id: check_id.to_string(),
            kind,
            tolerance,
            max_violation: 0.0,
            samples: 0,
            counterexamples: 0,
            witness: Vec::new(),
            witness_weights: Vec::new(),
        }
    }

    fn record(&mut self, violation: f64, witness: &[DensityMatrix], weights: &[f64]) {
        self.samples += 1;
        if violation > self.tolerance {
            self.counterexamples += 1;
        }
        if violation > self.max_violation {
            self.max_violation = violation;
            self.witness = witness.to_vec();
            self.witness_weights = weights.to_vec();
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            pass: self.max_violation <= self.tolerance,
            check_id: self.check_id,
            kind: self.kind,
            max_violation: self.max_violation,
            tolerance: self.tolerance,
            samples: self.samples,
            counterexamples: self.counterexamples,
            witness: self.witness,
            witness_weights: self.witness_weights,
        }
    }
}

/// Deterministic state batch: a mix of full-rank, low-rank and pure states.
fn state_batch(d: usize, samples: usize, seed: u64, tol: &Tolerances) -> Vec<DensityMatrix> {
    exec::map_indexed(samples, |i| {
        let child = rng::child_stream(seed, i as u64).gen_seed();
        match i % 4 {
            0 => sample_state(d, StateKind::Pure, None, child, tol).unwrap(),
            1 => sample_state(d, StateKind::Mixed, Some(1 + i % d), child, tol).unwrap(),
            _ => sample_state(d, StateKind::Mixed, None, child, tol).unwrap(),
        }
    })
}

trait SeedFrom {
    fn gen_seed(&mut self) -> u64;
}

impl SeedFrom for rand_chacha::ChaCha12Rng {
    fn gen_seed(&mut self) -> u64 {
        rand::Rng::gen(self)
    }
}

// ---------------------------------------------------------------------------
// l1 suite (hemisphere identities and the d > 2 range bound)
// ---------------------------------------------------------------------------

/// Verify the Bloch-coordinate l1 identities.
///
/// d = 2: the components identity, and the front/rear hemisphere
/// decompositions split on the sign of the Bloch x coordinate. d > 2: the
/// two-sided range bound, logged with counterexample counts because the
/// source qualifies it by per-coordinate sign cases.
pub fn l1_report(
    samples: usize,
    seed: u64,
    d: usize,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "reports require d >= 2",
        });
    }
    let states = state_batch(d, samples, seed, tol);
    let mut checks = Vec::new();

    if d == 2 {
        let mut components =
            ViolationTracker::new("l1-components-identity", CheckKind::Asserted, tol.identity);
        let mut front =
            ViolationTracker::new("l1-front-hemisphere", CheckKind::Asserted, tol.identity);
        let mut rear =
            ViolationTracker::new("l1-rear-hemisphere", CheckKind::Asserted, tol.identity);
        for rho in &states {
            let v = bloch_decompose(rho);
            let c = l1_components(rho);
            let w = [rho.clone()];
            let x = v.x[0];
            let lhs = c.texture;
            components.record(
                (lhs - ((x - 1.0).abs() / 2.0 + c.imaginarity + c.predictability)).abs(),
                &w,
                &[],
            );
            if x >= 0.0 {
                let rhs = 0.5 - c.coherence + 2.0 * c.imaginarity + c.predictability;
                front.record((lhs - rhs).abs(), &w, &[]);
            } else {
                let rhs = 0.5 + c.coherence + c.predictability;
                rear.record((lhs - rhs).abs(), &w, &[]);
            }
        }
        checks.push(components.finish());
        checks.push(front.finish());
        checks.push(rear.finish());
    } else {
        let mut range = ViolationTracker::new("l1-range-bound", CheckKind::Logged, tol.identity);
        for rho in &states {
            let c = l1_components(rho);
            let lower =
                (d as f64 - 1.0) / 2.0 - c.coherence + 2.0 * c.imaginarity + c.predictability;
            let upper = (d as f64 - 1.0) / 2.0 + c.coherence + c.predictability;
            let violation = (lower - c.texture).max(c.texture - upper).max(0.0);
            range.record(violation, std::slice::from_ref(rho), &[]);
        }
        checks.push(range.finish());
    }

    Ok(VerificationReport {
        suite_id: "l1".into(),
        dim: d,
        samples,
        seed,
        checks,
    })
}

// ---------------------------------------------------------------------------
// l2 suite
// ---------------------------------------------------------------------------

/// Verify the squared-Frobenius decompositions, the corrected bookkeeping
/// identity, the wave-particle relation, the entrywise-coherence inequality,
/// and the exact mixing affinity of the overlap quasi-measure. The printed
/// bookkeeping sign (`... = Upsilon_l2 - 1`) is kept as an expected-fail
/// check.
pub fn l2_report(
    samples: usize,
    seed: u64,
    d: usize,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "reports require d >= 2",
        });
    }
    let states = state_batch(d, samples, seed, tol);
    let inv_d = 1.0 / d as f64;

    let mut split = ViolationTracker::new(
        "l2-diagonal-offdiagonal-split",
        CheckKind::Asserted,
        tol.suite,
    );
    let mut decomposition =
        ViolationTracker::new("l2-cp-decomposition", CheckKind::Asserted, tol.suite);
    let mut bookkeeping =
        ViolationTracker::new("l2-bookkeeping-corrected", CheckKind::Asserted, tol.suite);
    let mut bookkeeping_printed = ViolationTracker::new(
        "l2-bookkeeping-printed-sign",
        CheckKind::ExpectedFail,
        tol.suite,
    );
    let mut wave_particle =
        ViolationTracker::new("l2-wave-particle", CheckKind::Asserted, tol.suite);
    let mut inequality =
        ViolationTracker::new("l2-coherence-inequality", CheckKind::Asserted, tol.suite);

    for rho in &states {
        let comps = l2_components(rho);
        let m = rho.matrix();
        let p_centered: f64 = (0..d)
            .map(|i| (m[(i, i)] - Complex64::new(inv_d, 0.0)).norm_sqr())
            .sum();
        let ov = comps.overlap_f;
        let upsilon = 1.0 - ov;
        let w = [rho.clone()];

        split.record((comps.texture - (p_centered + comps.gamma)).abs(), &w, &[]);
        decomposition.record(
            (comps.texture - (comps.c_l2 + comps.p_l2 + 1.0 - 2.0 * ov)).abs(),
            &w,
            &[],
        );
        bookkeeping.record(
            (comps.c_l2 + comps.p_l2 + 2.0 * upsilon - (comps.texture + 1.0)).abs(),
            &w,
            &[],
        );
        bookkeeping_printed.record(
            (comps.c_l2 + comps.p_l2 + 2.0 * upsilon - (comps.texture - 1.0)).abs(),
            &w,
            &[],
        );
        wave_particle.record(
            (comps.c_l2 + comps.p_l2 - (comps.texture + 2.0 * ov - 1.0)).abs(),
            &w,
            &[],
        );
        let c_l1 = entrywise_l1_coherence(rho);
        let slack =
            comps.c_l2 + comps.p_l2 + (d as f64 - 2.0) * inv_d - comps.texture - 2.0 * inv_d * c_l1;
        inequality.record(slack.max(0.0), &w, &[]);
    }

    // mixing affinity of the overlap quasi-measure: exact linearity
    let mut mixing =
        ViolationTracker::new("l2-overlap-mixing-affinity", CheckKind::Asserted, tol.suite);
    let mixtures = exec::map_indexed(samples, |i| {
        let mut stream = rng::child_stream(seed ^ 0x31f2, i as u64);
        let parts: Vec<DensityMatrix> = (0..3)
            .map(|_| sample_state(d, StateKind::Mixed, None, stream.gen_seed(), tol).unwrap())
            .collect();
        let raw: Vec<f64> = (0..3)
            .map(|_| rand::Rng::gen_range(&mut stream, 0.05..1.0))
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|r| r / total).collect();
        (parts, weights)
    });
    for (parts, weights) in &mixtures {
        let mut mixed = ComplexMatrix::zeros(d);
        for (p, rho) in weights.iter().zip(parts) {
            mixed = mixed.add(&rho.matrix().scale_re(*p));
        }
        let mixed = DensityMatrix::from_matrix_unchecked(mixed, tol);
        let lhs = 1.0 - overlap_f(&mixed);
        let rhs: f64 = weights
            .iter()
            .zip(parts)
            .map(|(p, rho)| p * (1.0 - overlap_f(rho)))
            .sum();
        let mut witness = vec![mixed];
        witness.extend(parts.iter().cloned());
        mixing.record((lhs - rhs).abs(), &witness, weights);
    }

    Ok(VerificationReport {
        suite_id: "l2".into(),
        dim: d,
        samples,
        seed,
        checks: vec![
            split.finish(),
            decomposition.finish(),
            bookkeeping.finish(),
            bookkeeping_printed.finish(),
            wave_particle.finish(),
            inequality.finish(),
            mixing.finish(),
        ],
    })
}

// ---------------------------------------------------------------------------
// skew-information suite
// ---------------------------------------------------------------------------

/// Verify the corrected skew-information identity
/// `<f|rho|f> - A(rho,f)^2 = I(rho, |f><f|)` (commutator route on the right),
/// the printed sign as an expected-fail check, the corrected measurable
/// lower bound for the entrywise l1 coherence, and the reconstruction of the
/// affinity from the two measurable quantities.
pub fn skew_report(
    samples: usize,
    seed: u64,
    d: usize,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "reports require d >= 2",
        });
    }
    let states = state_batch(d, samples, seed, tol);
    let f_vec = nontexture_state(d)?;

    let mut corrected =
        ViolationTracker::new("skew-identity-corrected", CheckKind::Asserted, tol.suite);
    let mut printed = ViolationTracker::new(
        "skew-identity-printed-sign",
        CheckKind::ExpectedFail,
        tol.suite,
    );
    let mut nonneg = ViolationTracker::new("skew-nonnegativity", CheckKind::Asserted, tol.suite);
    let mut bound =
        ViolationTracker::new("skew-coherence-lower-bound", CheckKind::Asserted, tol.suite);
    let mut reconstruct = ViolationTracker::new(
        "skew-affinity-reconstruction",
        CheckKind::Asserted,
        tol.suite,
    );

    for rho in &states {
        let w = [rho.clone()];
        let skew = skew_information(rho, &f_vec, tol)?;
        let a = affinity_f(rho, tol)?;
        let ov = overlap_f(rho);
        corrected.record((ov - a * a - skew).abs(), &w, &[]);
        printed.record((a * a - ov - skew).abs(), &w, &[]);
        nonneg.record((-skew).max(0.0), &w, &[]);
        let c_l1 = entrywise_l1_coherence(rho);
        bound.record(
            (d as f64 * (a * a + skew - 1.0 / d as f64) - c_l1).max(0.0),
            &w,
            &[],
        );
        let rebuilt = (ov - skew).max(0.0).sqrt();
        reconstruct.record((rebuilt - a).abs(), &w, &[]);
    }

    Ok(VerificationReport {
        suite_id: "skew".into(),
        dim: d,
        samples,
        seed,
        checks: vec![
            corrected.finish(),
            printed.finish(),
            nonneg.finish(),
            bound.finish(),
            reconstruct.finish(),
        ],
    })
}

// ---------------------------------------------------------------------------
// axiom suite
// ---------------------------------------------------------------------------

/// Number of free channels paired with the state batch.
pub const AXIOM_CHANNELS: usize = 50;

fn channel_pool(d: usize, count: usize, seed: u64, tol: &Tolerances) -> Vec<KrausSet> {
    exec::map_indexed(count, |i| {
        let child = rng::child_stream(seed ^ 0xc4a2, i as u64).gen_seed();
        let recipe = if d == 2 {
            match i % 3 {
                0 => ChannelRecipe::UnitaryMixture,
                1 => ChannelRecipe::PartialReplacement,
                _ => ChannelRecipe::TriangularInstrument,
            }
        } else if i % 2 == 0 {
            ChannelRecipe::UnitaryMixture
        } else {
            ChannelRecipe::PartialReplacement
        };
        sample_free_channel(d, recipe, child, tol).unwrap()
    })
}

/// Run the measure axioms for one registered measure: value 0 at `f`,
/// nonnegativity, monotonicity under every generated free channel, and
/// convexity under random 3-state mixtures.
///
/// For `l2` the monotonicity check is replaced by exact invariance under
/// single free unitaries (asserted) plus a logged non-increase check over all
/// recipes; for `l1-bloch` monotonicity is logged only.
pub fn axiom_suite(
    measure: MeasureId,
    alpha: Option<f64>,
    samples: usize,
    seed: u64,
    d: usize,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "reports require d >= 2",
        });
    }
    if measure.needs_alpha() && alpha.is_none() {
        return Err(Error::InvalidAlpha {
            alpha: f64::NAN,
            reason: "axiom suite needs an alpha for this measure",
        });
    }
    let states = state_batch(d, samples, seed, tol);
    let channels = channel_pool(d, AXIOM_CHANNELS, seed, tol);
    let eval = |rho: &DensityMatrix| -> Result<f64> {
        Ok(evaluate_measure(measure, alpha, rho, tol)?.value)
    };

    let mut checks = Vec::new();

    // zero at f
    let mut zero = ViolationTracker::new("axiom-zero-at-f", CheckKind::Asserted, tol.suite);
    let f = crate::states::nontexture_projector(d, tol)?;
    zero.record(eval(&f)?.abs(), std::slice::from_ref(&f), &[]);
    checks.push(zero.finish());

    // nonnegativity
    let values: Vec<f64> = {
        let vals = exec::map_indexed(states.len(), |i| eval(&states[i]));
        let mut out = Vec::with_capacity(vals.len());
        for v in vals {
            out.push(v?);
        }
        out
    };
    let mut nonneg = ViolationTracker::new("axiom-nonnegativity", CheckKind::Asserted, tol.suite);
    for (rho, v) in states.iter().zip(&values) {
        let violation = if v.is_finite() { (-v).max(0.0) } else { 0.0 };
        nonneg.record(violation, std::slice::from_ref(rho), &[]);
    }
    checks.push(nonneg.finish());

    // monotonicity over the full (state, channel) product
    let kind = if measure.monotonicity_asserted() {
        CheckKind::Asserted
    } else {
        CheckKind::Logged
    };
    let mut mono = ViolationTracker::new("axiom-monotonicity", kind, tol.suite);
    let pair_results: Vec<(usize, f64, DensityMatrix)> =
        exec::map_indexed(states.len() * channels.len(), |idx| {
            let si = idx / channels.len();
            let ci = idx % channels.len();
            let out = match apply_channel(&channels[ci], &states[si], tol).unwrap() {
                ChannelOutput::Complete(out) => out,
                ChannelOutput::Sub { .. } => unreachable!("pool is complete"),
            };
            let before = values[si];
            let after = eval(&out).unwrap_or(f64::INFINITY);
            let violation = if before.is_finite() && after.is_finite() {
                (after - before).max(0.0)
            } else if before.is_finite() {
                f64::INFINITY
            } else {
                0.0
            };
            (si, violation, out)
        });
    for (si, violation, out) in pair_results {
        mono.record(violation, &[states[si].clone(), out], &[]);
    }
    checks.push(mono.finish());

    if measure == MeasureId::L2 {
        let mut invariance = ViolationTracker::new(
            "axiom-l2-unitary-invariance",
            CheckKind::Asserted,
            tol.suite,
        );
        let unitaries: Vec<KrausSet> = exec::map_indexed(AXIOM_CHANNELS, |i| {
            let child = rng::child_stream(seed ^ 0x0f2e, i as u64).gen_seed();
            free_unitary_channel(d, child, tol).unwrap()
        });
        for (si, rho) in states.iter().enumerate() {
            let ch = &unitaries[si % unitaries.len()];
            let out = match apply_channel(ch, rho, tol)? {
                ChannelOutput::Complete(out) => out,
                _ => unreachable!(),
            };
            let violation = (eval(&out)? - values[si]).abs();
            invariance.record(violation, &[rho.clone(), out], &[]);
        }
        checks.push(invariance.finish());
    }

    // convexity over random 3-state mixtures
    let mut convex = ViolationTracker::new("axiom-convexity", CheckKind::Asserted, tol.suite);
    let mixtures = exec::map_indexed(samples, |i| {
        let mut stream = rng::child_stream(seed ^ 0x90c3, i as u64);
        let parts: Vec<DensityMatrix> = (0..3)
            .map(|_| sample_state(d, StateKind::Mixed, None, stream.gen_seed(), tol).unwrap())
            .collect();
        let raw: Vec<f64> = (0..3)
            .map(|_| rand::Rng::gen_range(&mut stream, 0.05..1.0))
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|r| r / total).collect();
        (parts, weights)
    });
    for (parts, weights) in &mixtures {
        let mut mixed = ComplexMatrix::zeros(d);
        for (p, rho) in weights.iter().zip(parts) {
            mixed = mixed.add(&rho.matrix().scale_re(*p));
        }
        let mixed = DensityMatrix::from_matrix_unchecked(mixed, tol);
        let lhs = eval(&mixed)?;
        let mut rhs = 0.0;
        let mut finite = true;
        for (p, rho) in weights.iter().zip(parts) {
            let v = eval(rho)?;
            if !v.is_finite() {
                finite = false;
                break;
            }
            rhs += p * v;
        }
        let violation = if finite && lhs.is_finite() {
            (lhs - rhs).max(0.0)
        } else if finite {
            f64::INFINITY
        } else {
            0.0
        };
        let mut witness = vec![mixed];
        witness.extend(parts.iter().cloned());
        convex.record(violation, &witness, weights);
    }
    checks.push(convex.finish());

    let suite_id = match alpha {
        Some(a) => format!("axioms/{}@{a}", measure),
        None => format!("axioms/{}", measure),
    };
    Ok(VerificationReport {
        suite_id,
        dim: d,
        samples,
        seed,
        checks,
    })
}

// ---------------------------------------------------------------------------
// transforms suite
// ---------------------------------------------------------------------------

/// Qubit conversion checks: closed form vs brute-force oracle, the
/// geometric-measure ratio form, instrument freeness, the pure-target
/// instrument identity, the mixed-target algebra (with `q = 0` for pure
/// targets and `achieved = false` for strictly mixed ones), and a randomized
/// search for sub-Kraus operators beating the claimed maximum.
pub fn transforms_report(
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let d = 2usize;
    let mut oracle =
        ViolationTracker::new("transforms-oracle-agreement", CheckKind::Asserted, 1e-3);
    let mut ratio = ViolationTracker::new(
        "transforms-measure-ratio",
        CheckKind::Asserted,
        tol.identity,
    );
    let mut freeness = ViolationTracker::new(
        "transforms-instrument-freeness",
        CheckKind::Asserted,
        tol.suite,
    );
    let mut pure_identity = ViolationTracker::new(
        "transforms-pure-instrument-identity",
        CheckKind::Asserted,
        tol.identity,
    );
    let mut mixed_identity = ViolationTracker::new(
        "transforms-mixed-algebra-identity",
        CheckKind::Asserted,
        tol.identity,
    );
    let mut pure_q = ViolationTracker::new(
        "transforms-pure-target-q-zero",
        CheckKind::Asserted,
        tol.identity,
    );
    let mut honesty =
        ViolationTracker::new("transforms-mixed-achieved-flag", CheckKind::Asserted, 0.0);
    let mut soundness = ViolationTracker::new(
        "transforms-upper-bound-soundness",
        CheckKind::Asserted,
        tol.suite,
    );

    struct PairOut {
        psi_rho: DensityMatrix,
        phi_rho: DensityMatrix,
        oracle_gap: f64,
        ratio_gap: f64,
        freeness_residual: f64,
        identity_residual: f64,
    }

    let pure_pairs: Vec<Option<PairOut>> = exec::map_indexed(samples, |i| {
        let mut stream = rng::child_stream(seed ^ 0x7a31, i as u64);
        let psi = sample_pure(d, stream.gen_seed()).unwrap();
        let phi = sample_pure(d, stream.gen_seed()).unwrap();
        let result = match max_prob_pure_to_pure(&psi, &phi, tol) {
            Ok(r) => r,
            Err(_) => return None,
        };
        let brute = brute_force_max_prob(&psi, &phi, 101, stream.gen_seed(), tol).unwrap();
        let psi_rho = psi.density(tol);
        let phi_rho = phi.density(tol);
        let expected_ratio = (geometric_texture(&psi_rho) / geometric_texture(&phi_rho)).min(1.0);
        let freeness_residual = match &result.instrument {
            Some(inst) => {
                let report = crate::channels::is_free_kraus_set(d, inst.operators(), tol).unwrap();
                report
                    .max_freeness_residual
                    .max(report.completeness_residual)
            }
            None => f64::INFINITY,
        };
        Some(PairOut {
            psi_rho,
            phi_rho,
            oracle_gap: (result.probability - brute).abs(),
            ratio_gap: (result.probability - expected_ratio).abs(),
            freeness_residual,
            identity_residual: result.identity_residual.unwrap_or(f64::INFINITY),
        })
    });
    for pair in pure_pairs.into_iter().flatten() {
        let w = [pair.psi_rho, pair.phi_rho];
        oracle.record(pair.oracle_gap, &w, &[]);
        ratio.record(pair.ratio_gap, &w, &[]);
        freeness.record(pair.freeness_residual, &w, &[]);
        pure_identity.record(pair.identity_residual, &w, &[]);
    }

    struct MixedOut {
        psi_rho: DensityMatrix,
        sigma: DensityMatrix,
        identity_residual: f64,
        q_violation: f64,
        achieved_violation: f64,
        is_pure_target: bool,
    }
    let mixed_pairs: Vec<Option<MixedOut>> = exec::map_indexed(samples, |i| {
        let mut stream = rng::child_stream(seed ^ 0x7a32, i as u64);
        let psi = sample_pure(d, stream.gen_seed()).unwrap();
        let is_pure_target = i % 4 == 0;
        let sigma = if is_pure_target {
            sample_state(d, StateKind::Pure, None, stream.gen_seed(), tol).unwrap()
        } else {
            sample_state(d, StateKind::Mixed, None, stream.gen_seed(), tol).unwrap()
        };
        let result = match max_prob_pure_to_mixed(&psi, &sigma, tol) {
            Ok(r) => r,
            Err(_) => return None,
        };
        let strictly_mixed = sigma.purity() < 1.0 - tol.suite;
        Some(MixedOut {
            psi_rho: psi.density(tol),
            identity_residual: result.identity_residual.unwrap_or(f64::INFINITY),
            q_violation: if strictly_mixed {
                0.0
            } else {
                result.residual_q.map_or(f64::INFINITY, f64::abs)
            },
            achieved_violation: if strictly_mixed && result.achieved {
                1.0
            } else {
                0.0
            },
            is_pure_target: !strictly_mixed,
            sigma,
        })
    });
    for pair in mixed_pairs.into_iter().flatten() {
        let w = [pair.psi_rho, pair.sigma];
        mixed_identity.record(pair.identity_residual, &w, &[]);
        if pair.is_pure_target {
            pure_q.record(pair.q_violation, &w, &[]);
        }
        honesty.record(pair.achieved_violation, &w, &[]);
    }

    // randomized soundness probes: any sampled free sub-Kraus realizing some
    // target must not beat the claimed maximum for that target
    let probes: Vec<Option<(f64, DensityMatrix, DensityMatrix)>> =
        exec::map_indexed(samples, |i| {
            let mut stream = rng::child_stream(seed ^ 0x7a33, i as u64);
            let psi = sample_pure(d, stream.gen_seed()).unwrap();
            let basis = crate::states::f_basis_unitary(d).unwrap();
            // random triangular contraction in the f-basis
            let raw = ComplexMatrix::from_entries(
                2,
                vec![
                    rng::complex_gaussian(&mut stream),
                    rng::complex_gaussian(&mut stream),
                    crate::linalg::ZERO,
                    rng::complex_gaussian(&mut stream),
                ],
            )
            .unwrap();
            let gram = raw.adjoint().mul(&raw);
            let scale = crate::linalg::hermitian_eig(&gram, tol)
                .unwrap()
                .eigenvalues
                .last()
                .copied()
                .unwrap()
                .sqrt()
                .max(1e-9);
            let k_f = raw.scale_re(1.0 / scale * rand::Rng::gen_range(&mut stream, 0.3..1.0));
            let k = basis.mul(&k_f).mul(&basis.adjoint());
            let out = ComplexMatrix::outer(&k.apply(psi.amplitudes()));
            let p_achieved = out.trace().re;
            if p_achieved < 1e-6 {
                return None;
            }
            let target = DensityMatrix::from_matrix_unchecked(out.scale_re(1.0 / p_achieved), tol);
            if 1.0 - overlap_f(&target) <= 1e-9 {
                return None;
            }
            let claim = match max_prob_pure_to_mixed(&psi, &target, tol) {
                Ok(r) => r.probability,
                Err(_) => return None,
            };
            Some(((p_achieved - claim).max(0.0), psi.density(tol), target))
        });
    for probe in probes.into_iter().flatten() {
        let (violation, psi_rho, target) = probe;
        soundness.record(violation, &[psi_rho, target], &[]);
    }

    Ok(VerificationReport {
        suite_id: "transforms".into(),
        dim: d,
        samples,
        seed,
        checks: vec![
            oracle.finish(),
            ratio.finish(),
            freeness.finish(),
            pure_identity.finish(),
            mixed_identity.finish(),
            pure_q.finish(),
            honesty.finish(),
            soundness.finish(),
        ],
    })
}

// ---------------------------------------------------------------------------
// per-sample CSV (plotting payload)
// ---------------------------------------------------------------------------

/// Per-sample table over the deterministic state batch: Bloch coordinates and
/// every registered measure, enough to redraw the Bloch-sphere relationship
/// figures externally. Values use 17 significant digits.
pub fn per_sample_csv(samples: usize, seed: u64, d: usize, tol: &Tolerances) -> Result<String> {
    if d < 2 {
        return Err(Error::InvalidDim {
            dim: d,
            reason: "csv emission requires d >= 2",
        });
    }
    let states = state_batch(d, samples, seed, tol);
    let pairs = d * (d - 1) / 2;
    let mut header: Vec<String> = vec!["sample".into()];
    for i in 0..pairs {
        header.push(format!("x{i}"));
    }
    for i in 0..pairs {
        header.push(format!("y{i}"));
    }
    for i in 0..d - 1 {
        header.push(format!("z{i}"));
    }
    header.extend(
        [
            "rugosity",
            "affinity_alpha_0_5",
            "hellinger",
            "tsallis_alpha_0_5",
            "geometric",
            "l1_trace",
            "l1_bloch",
            "l1_coherence",
            "l1_imaginarity",
            "l1_predictability",
            "l2",
            "c_l2",
            "p_l2",
            "gamma",
            "overlap_f",
        ]
        .map(String::from),
    );

    let fmt = crate::io::fmt_f64;
    let rows = exec::map_indexed(states.len(), |i| -> Result<String> {
        let rho = &states[i];
        let v = bloch_decompose(rho);
        let c = l1_components(rho);
        let l2 = l2_components(rho);
        let mut cells: Vec<String> = vec![i.to_string()];
        cells.extend(v.x.iter().map(|x| fmt(*x)));
        cells.extend(v.y.iter().map(|y| fmt(*y)));
        cells.extend(v.z.iter().map(|z| fmt(*z)));
        let rug = crate::measures::rugosity(rho, tol);
        cells.push(if rug.is_finite() {
            fmt(rug)
        } else {
            "inf".into()
        });
        cells.push(fmt(crate::measures::texture_alpha_affinity(rho, 0.5, tol)?));
        cells.push(fmt(crate::measures::hellinger_texture(rho, tol)?));
        cells.push(fmt(crate::measures::tsallis_texture(rho, 0.5, tol)?));
        cells.push(fmt(geometric_texture(rho)));
        cells.push(fmt(crate::measures::l1_trace_texture(rho, tol)?));
        cells.push(fmt(c.texture));
        cells.push(fmt(c.coherence));
        cells.push(fmt(c.imaginarity));
        cells.push(fmt(c.predictability));
        cells.push(fmt(l2.texture));
        cells.push(fmt(l2.c_l2));
        cells.push(fmt(l2.p_l2));
        cells.push(fmt(l2.gamma));
        cells.push(fmt(l2.overlap_f));
        Ok(cells.join(","))
    });
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// re-evaluation of embedded counterexamples
// ---------------------------------------------------------------------------

/// Recompute a check's violation from its embedded witness states. Returns
/// `None` for checks whose inputs are not fully captured by the witness.
pub fn reevaluate_check(suite_id: &str, check: &CheckResult, tol: &Tolerances) -> Option<f64> {
    let rho = check.worst_state()?;
    let d = rho.dim();
    let id = check.check_id.as_str();
    let c = l1_components(rho);
    let l2 = l2_components(rho);
    let inv_d = 1.0 / d as f64;
    let value = match id {
        "l1-components-identity" => {
            let v = bloch_decompose(rho);
            (c.texture - ((v.x[0] - 1.0).abs() / 2.0 + c.imaginarity + c.predictability)).abs()
        }
        "l1-front-hemisphere" => {
            (c.texture - (0.5 - c.coherence + 2.0 * c.imaginarity + c.predictability)).abs()
        }
        "l1-rear-hemisphere" => (c.texture - (0.5 + c.coherence + c.predictability)).abs(),
        "l1-range-bound" => {
            let lower =
                (d as f64 - 1.0) / 2.0 - c.coherence + 2.0 * c.imaginarity + c.predictability;
            let upper = (d as f64 - 1.0) / 2.0 + c.coherence + c.predictability;
            (lower - c.texture).max(c.texture - upper).max(0.0)
        }
        "l2-diagonal-offdiagonal-split" => {
            let m = rho.matrix();
            let p_centered: f64 = (0..d)
                .map(|i| (m[(i, i)] - Complex64::new(inv_d, 0.0)).norm_sqr())
                .sum();
            (l2.texture - (p_centered + l2.gamma)).abs()
        }
        "l2-cp-decomposition" => {
            (l2.texture - (l2.c_l2 + l2.p_l2 + 1.0 - 2.0 * l2.overlap_f)).abs()
        }
        "l2-bookkeeping-corrected" => {
            (l2.c_l2 + l2.p_l2 + 2.0 * (1.0 - l2.overlap_f) - (l2.texture + 1.0)).abs()
        }
        "l2-bookkeeping-printed-sign" => {
            (l2.c_l2 + l2.p_l2 + 2.0 * (1.0 - l2.overlap_f) - (l2.texture - 1.0)).abs()
        }
        "l2-wave-particle" => (l2.c_l2 + l2.p_l2 - (l2.texture + 2.0 * l2.overlap_f - 1.0)).abs(),
        "l2-coherence-inequality" => (l2.c_l2 + l2.p_l2 + (d as f64 - 2.0) * inv_d
            - l2.texture
            - 2.0 * inv_d * entrywise_l1_coherence(rho))
        .max(0.0),
        "skew-identity-corrected" => {
            let f_vec = nontexture_state(d).ok()?;
            let skew = skew_information(rho, &f_vec, tol).ok()?;
            let a = affinity_f(rho, tol).ok()?;
            (overlap_f(rho) - a * a - skew).abs()
        }
        "skew-identity-printed-sign" => {
            let f_vec = nontexture_state(d).ok()?;
            let skew = skew_information(rho, &f_vec, tol).ok()?;
            let a = affinity_f(rho, tol).ok()?;
            (a * a - overlap_f(rho) - skew).abs()
        }
        "skew-nonnegativity" => {
            let f_vec = nontexture_state(d).ok()?;
            (-skew_information(rho, &f_vec, tol).ok()?).max(0.0)
        }
        "skew-coherence-lower-bound" => {
            let f_vec = nontexture_state(d).ok()?;
            let skew = skew_information(rho, &f_vec, tol).ok()?;
            let a = affinity_f(rho, tol).ok()?;
            (d as f64 * (a * a + skew - inv_d) - entrywise_l1_coherence(rho)).max(0.0)
        }
        "skew-affinity-reconstruction" => {
            let f_vec = nontexture_state(d).ok()?;
            let skew = skew_information(rho, &f_vec, tol).ok()?;
            let a = affinity_f(rho, tol).ok()?;
            ((overlap_f(rho) - skew).max(0.0).sqrt() - a).abs()
        }
        _ => {
            // axiom checks carry their full witness; reconstruct from it
            let measure = suite_id.strip_prefix("axioms/")?;
            let (measure, alpha) = match measure.split_once('@') {
                Some((m, a)) => (m, a.parse::<f64>().ok()),
                None => (measure, None),
            };
            let measure: MeasureId = measure.parse().ok()?;
            let eval = |rho: &DensityMatrix| -> Option<f64> {
                Some(evaluate_measure(measure, alpha, rho, tol).ok()?.value)
            };
            match id {
                "axiom-zero-at-f" => eval(rho)?.abs(),
                "axiom-nonnegativity" => (-eval(rho)?).max(0.0),
                "axiom-monotonicity" | "axiom-l2-unitary-invariance" => {
                    let after = check.witness.get(1)?;
                    let (b, a) = (eval(rho)?, eval(after)?);
                    if id == "axiom-monotonicity" {
                        if b.is_finite() && a.is_finite() {
                            (a - b).max(0.0)
                        } else {
                            0.0
                        }
                    } else {
                        (a - b).abs()
                    }
                }
                "axiom-convexity" => {
                    let parts = &check.witness[1..];
                    let lhs = eval(rho)?;
                    let mut rhs = 0.0;
                    for (p, part) in check.witness_weights.iter().zip(parts) {
                        rhs += p * eval(part)?;
                    }
                    (lhs - rhs).max(0.0)
                }
                "l2-overlap-mixing-affinity" => {
                    let parts = &check.witness[1..];
                    let lhs = 1.0 - overlap_f(rho);
                    let mut rhs = 0.0;
                    for (p, part) in check.witness_weights.iter().zip(parts) {
                        rhs += p * (1.0 - overlap_f(part));
                    }
                    (lhs - rhs).abs()
                }
                _ => return None,
            }
        }
    };
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::validate_density;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn l1_identities_hold_for_qubits() {
        let t = tol();
        let report = l1_report(300, 11, 2, &t).unwrap();
        assert!(report.all_canonical_pass(), "{report:?}");
        assert_eq!(report.checks.len(), 3);
    }

    #[test]
    fn hemisphere_arithmetic_at_named_points() {
        // bloch (0.3, 0.2, 0.4): front form 0.5 - 0.25 + 0.2 + 0.2 = 0.65
        // bloch (-0.3, 0.2, 0.4): rear form 0.5 + 0.25 + 0.2 = 0.95
        let t = tol();
        for (x, expected) in [(0.3, 0.65), (-0.3, 0.95)] {
            let v = crate::states::BlochVector {
                x: vec![x],
                y: vec![0.2],
                z: vec![0.4],
            };
            let rho = crate::states::bloch_compose(&v, 2, &t).unwrap();
            let c = l1_components(&rho);
            assert!((c.texture - expected).abs() < 1e-12);
            let rhs = if x >= 0.0 {
                0.5 - c.coherence + 2.0 * c.imaginarity + c.predictability
            } else {
                0.5 + c.coherence + c.predictability
            };
            assert!((c.texture - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn skew_quantities_at_named_points() {
        // f: A = 1, overlap 1, skew 0; I/2: A = 1/sqrt(2), overlap 1/2, skew 0
        let t = tol();
        let f_vec = nontexture_state(2).unwrap();
        let f = crate::states::nontexture_projector(2, &t).unwrap();
        assert!((affinity_f(&f, &t).unwrap() - 1.0).abs() < 1e-10);
        assert!(skew_information(&f, &f_vec, &t).unwrap().abs() < 1e-10);
        let half =
            crate::states::validate_density(&ComplexMatrix::diagonal(&[0.5, 0.5]), &t).unwrap();
        assert!((affinity_f(&half, &t).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!(skew_information(&half, &f_vec, &t).unwrap().abs() < 1e-10);
        assert!((overlap_f(&half) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn l1_range_bound_has_no_counterexamples() {
        let t = tol();
        for d in [3usize, 4] {
            let report = l1_report(200, 5, d, &t).unwrap();
            let range = &report.checks[0];
            assert_eq!(range.kind, CheckKind::Logged);
            assert_eq!(range.counterexamples, 0, "d {d}: {range:?}");
        }
    }

    #[test]
    fn l2_identities_hold_and_printed_sign_fails() {
        let t = tol();
        for d in [2usize, 3, 4] {
            let report = l2_report(200, 21, d, &t).unwrap();
            assert!(report.all_canonical_pass(), "d {d}: {report:?}");
            let printed = report
                .checks
                .iter()
                .find(|c| c.check_id == "l2-bookkeeping-printed-sign")
                .unwrap();
            assert!(!printed.pass);
            // misprint is off by exactly 2 for every state
            assert!((printed.max_violation - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn l2_printed_sign_fails_on_zero_state_witness() {
        let t = tol();
        let zero = validate_density(&ComplexMatrix::diagonal(&[1.0, 0.0]), &t).unwrap();
        let c = l2_components(&zero);
        let upsilon = 1.0 - c.overlap_f;
        let corrected = c.c_l2 + c.p_l2 + 2.0 * upsilon - (c.texture + 1.0);
        let printed = c.c_l2 + c.p_l2 + 2.0 * upsilon - (c.texture - 1.0);
        assert!(corrected.abs() < 1e-12);
        assert!((printed - 2.0).abs() < 1e-12);
    }

    #[test]
    fn skew_identities_hold_and_printed_sign_fails() {
        let t = tol();
        for d in [2usize, 3, 4] {
            let report = skew_report(500, 31, d, &t).unwrap();
            assert!(report.all_canonical_pass(), "d {d}: {report:?}");
            let printed = report
                .checks
                .iter()
                .find(|c| c.check_id == "skew-identity-printed-sign")
                .unwrap();
            assert!(!printed.pass, "d {d}");
        }
    }

    #[test]
    fn skew_printed_sign_witness_is_zero_state() {
        // |0><0|: corrected identity gives +0.25, printed sign gives -0.25
        let t = tol();
        let zero = validate_density(&ComplexMatrix::diagonal(&[1.0, 0.0]), &t).unwrap();
        let f_vec = nontexture_state(2).unwrap();
        let skew = skew_information(&zero, &f_vec, &t).unwrap();
        let a = affinity_f(&zero, &t).unwrap();
        assert!((overlap_f(&zero) - a * a - skew).abs() < 1e-12);
        assert!(((a * a - overlap_f(&zero)) - (-0.25)).abs() < 1e-12);
        assert!((skew - 0.25).abs() < 1e-12);
    }

    #[test]
    fn axiom_suite_passes_for_geometric() {
        let t = tol();
        let report = axiom_suite(MeasureId::Geometric, None, 120, 3, 2, &t).unwrap();
        assert!(report.all_canonical_pass(), "{report:?}");
    }

    #[test]
    fn axiom_suite_passes_for_affinity_d3() {
        let t = tol();
        let report = axiom_suite(MeasureId::AffinityAlpha, Some(0.5), 80, 5, 3, &t).unwrap();
        assert!(report.all_canonical_pass(), "{report:?}");
    }

    #[test]
    fn l2_suite_asserts_unitary_invariance_only() {
        let t = tol();
        let report = axiom_suite(MeasureId::L2, None, 80, 7, 2, &t).unwrap();
        let mono = report
            .checks
            .iter()
            .find(|c| c.check_id == "axiom-monotonicity")
            .unwrap();
        assert_eq!(mono.kind, CheckKind::Logged);
        let inv = report
            .checks
            .iter()
            .find(|c| c.check_id == "axiom-l2-unitary-invariance")
            .unwrap();
        assert_eq!(inv.kind, CheckKind::Asserted);
        assert!(inv.pass, "{inv:?}");
        assert!(report.all_canonical_pass());
    }

    #[test]
    fn bloch_l1_monotonicity_failure_is_documented() {
        let t = tol();
        let report = axiom_suite(MeasureId::L1Bloch, None, 150, 13, 2, &t).unwrap();
        let mono = report
            .checks
            .iter()
            .find(|c| c.check_id == "axiom-monotonicity")
            .unwrap();
        assert_eq!(mono.kind, CheckKind::Logged);
        // the coordinate 1-norm genuinely grows under free unitaries
        assert!(
            mono.max_violation > 1e-3,
            "expected a visible violation, got {:?}",
            mono.max_violation
        );
        // everything else passes, including convexity
        assert!(report.all_canonical_pass(), "{report:?}");
    }

    #[test]
    fn transforms_suite_passes() {
        let t = tol();
        let report = transforms_report(60, 17, &t).unwrap();
        assert!(report.all_canonical_pass(), "{report:?}");
    }

    #[test]
    fn reports_are_deterministic() {
        let t = tol();
        let a = l2_report(50, 9, 3, &t).unwrap();
        let b = l2_report(50, 9, 3, &t).unwrap();
        for (ca, cb) in a.checks.iter().zip(&b.checks) {
            assert_eq!(ca.max_violation, cb.max_violation);
            assert_eq!(ca.counterexamples, cb.counterexamples);
        }
    }

    #[test]
    fn witnesses_reproduce_reported_violations() {
        let t = tol();
        let reports = vec![
            l1_report(100, 41, 2, &t).unwrap(),
            l1_report(100, 41, 3, &t).unwrap(),
            l2_report(100, 42, 3, &t).unwrap(),
            skew_report(100, 43, 2, &t).unwrap(),
            axiom_suite(MeasureId::Hellinger, None, 60, 44, 2, &t).unwrap(),
        ];
        let mut reevaluated = 0;
        for report in &reports {
            for check in &report.checks {
                if check.witness.is_empty() {
                    continue;
                }
                for state in &check.witness {
                    assert!(validate_density(state.matrix(), &t).is_ok());
                }
                if let Some(v) = reevaluate_check(&report.suite_id, check, &t) {
                    assert!(
                        (v - check.max_violation).abs() <= 1e-12,
                        "{}/{}: reevaluated {v} vs reported {}",
                        report.suite_id,
                        check.check_id,
                        check.max_violation
                    );
                    reevaluated += 1;
                }
            }
        }
        assert!(reevaluated >= 10);
    }
}

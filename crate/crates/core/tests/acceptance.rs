//! Acceptance suite: every numbered criterion is one test that prints a
//! PASS/FAIL line. Criteria 1-9 cover the library; criterion 10 (CLI
//! determinism) lives in the CLI crate's acceptance target.

use num_complex::Complex64;

use qst_core::linalg::ComplexMatrix;
use qst_core::measures::{
    geometric_texture, hellinger_texture, l2_components, overlap_f, texture_alpha_affinity,
    tsallis_texture,
};
use qst_core::registry::MeasureId;
use qst_core::relations::{axiom_suite, l1_report, l2_report, skew_report, CheckKind};
use qst_core::rng::child_seed;
use qst_core::roof::{convex_roof, RoofConfig, RoofFunction};
use qst_core::states::{
    f_basis, nontexture_state, sample_pure, sample_state, validate_density, StateKind,
};
use qst_core::transforms::{brute_force_max_prob, max_prob_pure_to_mixed, max_prob_pure_to_pure};
use qst_core::{linalg, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn verdict(criterion: &str, pass: bool, detail: &str) -> bool {
    println!(
        "{} criterion {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

#[test]
fn criterion_01_axiom_suites() {
    let t = tol();
    let samples = 500;
    let mut all_pass = true;
    let mut worst: f64 = 0.0;
    let cases: Vec<(MeasureId, Option<f64>)> = vec![
        (MeasureId::Rugosity, None),
        (MeasureId::AffinityAlpha, Some(0.25)),
        (MeasureId::AffinityAlpha, Some(0.5)),
        (MeasureId::AffinityAlpha, Some(0.75)),
        (MeasureId::Hellinger, None),
        (MeasureId::TsallisAlpha, Some(0.25)),
        (MeasureId::TsallisAlpha, Some(0.5)),
        (MeasureId::TsallisAlpha, Some(0.75)),
        (MeasureId::Geometric, None),
        (MeasureId::L1, None),
        (MeasureId::RoofG, None),
    ];
    for d in [2usize, 3] {
        for (measure, alpha) in &cases {
            let report = axiom_suite(*measure, *alpha, samples, 1_000 + d as u64, d, &t).unwrap();
            for check in &report.checks {
                if check.kind == CheckKind::Asserted {
                    worst = worst.max(check.max_violation);
                    if !check.pass {
                        all_pass = false;
                        eprintln!(
                            "violation: {} {} d={d}: {:.3e}",
                            report.suite_id, check.check_id, check.max_violation
                        );
                    }
                }
            }
        }
    }
    let pass = all_pass && worst <= 1e-9;
    assert!(verdict(
        "1 (axiom suites)",
        pass,
        &format!(
            "nonnegativity, zero at f, monotonicity, convexity over 500 states x 50 channels, d in {{2,3}}; max violation {worst:.3e} (bound 1e-9)"
        ),
    ));
}

#[test]
fn criterion_02_hellinger_linkage() {
    // D_H(rho, f) computed as 2 Upsilon_1/2 agrees with the direct
    // tr(sqrt(rho) - sqrt(f))^2 route
    let t = tol();
    let mut worst: f64 = 0.0;
    for i in 0..500u64 {
        let d = 2 + (i % 3) as usize;
        let rho = sample_state(d, StateKind::Mixed, None, child_seed(2_000, i), &t).unwrap();
        let via_affinity = hellinger_texture(&rho, &t).unwrap();
        let exact_double = 2.0 * texture_alpha_affinity(&rho, 0.5, &t).unwrap();
        assert_eq!(via_affinity, exact_double, "same code path by construction");
        let sqrt_rho = linalg::psd_sqrt(rho.matrix(), &t).unwrap();
        let f_proj = nontexture_state(d).unwrap().projector();
        let diff = sqrt_rho.sub(&f_proj);
        let direct = diff.mul(&diff).trace().re;
        worst = worst.max((direct - via_affinity).abs());
    }
    let pass = worst <= 1e-9;
    assert!(verdict(
        "2 (Hellinger linkage)",
        pass,
        &format!(
            "independent trace-form recomputation on 500 states; max gap {worst:.3e} (bound 1e-9)"
        ),
    ));
}

#[test]
fn criterion_03_tsallis_affinity_linkage() {
    let t = tol();
    let mut worst: f64 = 0.0;
    for i in 0..500u64 {
        let d = 2 + (i % 3) as usize;
        let rho = sample_state(d, StateKind::Mixed, None, child_seed(3_000, i), &t).unwrap();
        for alpha in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let tsallis = tsallis_texture(&rho, alpha, &t).unwrap();
            let affinity = texture_alpha_affinity(&rho, alpha, &t).unwrap();
            worst = worst.max((tsallis - affinity / (1.0 - alpha)).abs());
        }
    }
    let pass = worst <= 1e-10;
    assert!(verdict(
        "3 (Tsallis-affinity linkage)",
        pass,
        &format!("D_alpha = Upsilon_alpha/(1-alpha) on 500 states x 5 alphas; max gap {worst:.3e} (bound 1e-10)"),
    ));
}

#[test]
fn criterion_04_convex_roof_oracle() {
    // roof of g(t) = 1 - t collapses to the closed form 1 - <f|rho|f>
    let t = tol();
    let cfg = RoofConfig {
        restarts: 16,
        ..RoofConfig::default()
    };
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let rho = sample_state(2, StateKind::Mixed, None, child_seed(4_000, i), &t).unwrap();
        let out = convex_roof(&rho, &RoofFunction::Linear, &cfg, &t).unwrap();
        worst = worst.max((out.value - geometric_texture(&rho)).abs());
        assert!(out.recompose_residual <= 1e-8);
    }
    for i in 0..50u64 {
        let rho = sample_state(3, StateKind::Mixed, None, child_seed(4_100, i), &t).unwrap();
        let out = convex_roof(&rho, &RoofFunction::Linear, &cfg, &t).unwrap();
        worst = worst.max((out.value - geometric_texture(&rho)).abs());
        assert!(out.recompose_residual <= 1e-8);
    }
    let pass = worst <= 1e-6;
    assert!(verdict(
        "4 (convex-roof oracle)",
        pass,
        &format!(
            "roof(g) vs closed form on 200 qubits + 50 qutrits; max gap {worst:.3e} (bound 1e-6)"
        ),
    ));
}

#[test]
fn criterion_05_pure_conversion_theorem() {
    let t = tol();
    let mut worst_oracle: f64 = 0.0;
    let mut worst_identity: f64 = 0.0;
    let mut checked = 0u32;
    let mut i = 0u64;
    while checked < 200 {
        let psi = sample_pure(2, child_seed(5_000, 2 * i)).unwrap();
        let phi = sample_pure(2, child_seed(5_000, 2 * i + 1)).unwrap();
        i += 1;
        let result = match max_prob_pure_to_pure(&psi, &phi, &t) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let brute = brute_force_max_prob(&psi, &phi, 101, child_seed(5_500, i), &t).unwrap();
        worst_oracle = worst_oracle.max((result.probability - brute).abs());
        worst_identity = worst_identity.max(result.identity_residual.unwrap());
        assert!(result.instrument.is_some());
        checked += 1;
    }
    let pass = worst_oracle <= 1e-3 && worst_identity <= 1e-10;
    assert!(verdict(
        "5 (pure-to-pure conversions)",
        pass,
        &format!(
            "closed form vs brute force on 200 pairs (max gap {worst_oracle:.3e}, bound 1e-3); instrument identity residual {worst_identity:.3e} (bound 1e-10)"
        ),
    ));
}

#[test]
fn criterion_06_mixed_conversion_algebra() {
    let t = tol();
    let mut worst_identity: f64 = 0.0;
    let mut worst_pure_q: f64 = 0.0;
    let mut honesty_ok = true;
    let mut checked = 0u32;
    let mut i = 0u64;
    while checked < 200 {
        let psi = sample_pure(2, child_seed(6_000, 2 * i)).unwrap();
        let sigma = if i % 4 == 0 {
            sample_state(2, StateKind::Pure, None, child_seed(6_100, i), &t).unwrap()
        } else {
            sample_state(2, StateKind::Mixed, None, child_seed(6_100, i), &t).unwrap()
        };
        i += 1;
        let result = match max_prob_pure_to_mixed(&psi, &sigma, &t) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if let Some(res) = result.identity_residual {
            worst_identity = worst_identity.max(res);
        }
        if sigma.purity() >= 1.0 - 1e-9 {
            worst_pure_q = worst_pure_q.max(result.residual_q.map_or(1.0, f64::abs));
        } else if result.achieved {
            honesty_ok = false;
        }
        checked += 1;
    }
    let pass = worst_identity <= 1e-10 && worst_pure_q <= 1e-10 && honesty_ok;
    assert!(verdict(
        "6 (pure-to-mixed algebra)",
        pass,
        &format!(
            "K0 psi psi' K0' = p sigma + q f on 200 pairs (max residual {worst_identity:.3e}, bound 1e-10); |q| at pure targets {worst_pure_q:.3e}; achieved=false for every strictly mixed target: {honesty_ok}"
        ),
    ));
}

#[test]
fn criterion_07_l1_hemisphere_identities() {
    let t = tol();
    let report = l1_report(1_000, 7_000, 2, &t).unwrap();
    let mut worst: f64 = 0.0;
    let mut front = 0usize;
    let mut rear = 0usize;
    for check in &report.checks {
        worst = worst.max(check.max_violation);
        match check.check_id.as_str() {
            "l1-front-hemisphere" => front = check.samples,
            "l1-rear-hemisphere" => rear = check.samples,
            _ => {}
        }
    }
    let pass = report.all_canonical_pass() && worst <= 1e-10 && front > 100 && rear > 100;

    // d > 2 range bound: counterexample rate is reported, never asserted
    let mut logged = String::new();
    for d in [3usize, 4] {
        let r = l1_report(1_000, 7_000 + d as u64, d, &t).unwrap();
        let range = &r.checks[0];
        assert_eq!(range.kind, CheckKind::Logged);
        logged.push_str(&format!(
            " d={d}: {}/{} counterexamples (max excess {:.3e});",
            range.counterexamples, range.samples, range.max_violation
        ));
    }
    assert!(verdict(
        "7 (l1 hemisphere identities)",
        pass,
        &format!(
            "identities exact on 1000 qubits split {front} front / {rear} rear, max violation {worst:.3e} (bound 1e-10); range bound logged:{logged}"
        ),
    ));
}

#[test]
fn criterion_08_l2_identities() {
    let t = tol();
    let mut worst: f64 = 0.0;
    let mut all_pass = true;
    let mut printed_fails = true;
    for d in [2usize, 3, 4] {
        let report = l2_report(1_000, 8_000 + d as u64, d, &t).unwrap();
        all_pass &= report.all_canonical_pass();
        for check in &report.checks {
            match check.kind {
                CheckKind::Asserted => worst = worst.max(check.max_violation),
                CheckKind::ExpectedFail => printed_fails &= !check.pass,
                CheckKind::Logged => {}
            }
        }
    }
    // the printed bookkeeping sign misses by exactly 2 on the |0><0| witness
    let zero = validate_density(&ComplexMatrix::diagonal(&[1.0, 0.0]), &t).unwrap();
    let c = l2_components(&zero);
    let upsilon = 1.0 - c.overlap_f;
    let printed_gap = (c.c_l2 + c.p_l2 + 2.0 * upsilon - (c.texture - 1.0)).abs();
    let witness_ok = (printed_gap - 2.0).abs() <= 1e-12;

    let pass = all_pass && worst <= 1e-9 && printed_fails && witness_ok;
    assert!(verdict(
        "8 (l2 identities)",
        pass,
        &format!(
            "decompositions, corrected bookkeeping, wave-particle, mixing affinity and coherence inequality on 1000 states per d in {{2,3,4}}; max violation {worst:.3e} (bound 1e-9); printed sign fails on |0><0| by {printed_gap:.1}"
        ),
    ));
}

#[test]
fn criterion_09_skew_information_identities() {
    let t = tol();
    let mut worst: f64 = 0.0;
    let mut all_pass = true;
    let mut printed_fails = true;
    for d in [2usize, 3] {
        let report = skew_report(1_000, 9_000 + d as u64, d, &t).unwrap();
        all_pass &= report.all_canonical_pass();
        for check in &report.checks {
            match check.kind {
                CheckKind::Asserted => worst = worst.max(check.max_violation),
                CheckKind::ExpectedFail => printed_fails &= !check.pass,
                CheckKind::Logged => {}
            }
        }
    }
    // |0><0| witness: corrected identity gives +0.25, printed sign -0.25
    let zero = validate_density(&ComplexMatrix::diagonal(&[1.0, 0.0]), &t).unwrap();
    let f_vec = nontexture_state(2).unwrap();
    let skew = qst_core::measures::skew_information(&zero, &f_vec, &t).unwrap();
    let a = qst_core::measures::affinity_f(&zero, &t).unwrap();
    let corrected = overlap_f(&zero) - a * a;
    let printed = a * a - overlap_f(&zero);
    let witness_ok = (skew - 0.25).abs() <= 1e-12
        && (corrected - 0.25).abs() <= 1e-12
        && (printed + 0.25).abs() <= 1e-12;

    let pass = all_pass && worst <= 1e-9 && printed_fails && witness_ok;
    assert!(verdict(
        "9 (skew-information identities)",
        pass,
        &format!(
            "corrected identity, lower bound and nonnegativity on 1000 states per d in {{2,3}}; max violation {worst:.3e} (bound 1e-9); |0><0| witness: corrected +0.25 vs printed -0.25"
        ),
    ));
}

#[test]
fn reported_behavior_of_the_bloch_l1_expansion() {
    // not a numbered criterion: documents that the coordinate-expansion
    // variant of the l1 texture is not a free-channel monotone, which is why
    // the monotone trace-norm form is the measure under test in criterion 1
    let t = tol();
    let report = axiom_suite(MeasureId::L1Bloch, None, 200, 99, 2, &t).unwrap();
    let mono = report
        .checks
        .iter()
        .find(|c| c.check_id == "axiom-monotonicity")
        .unwrap();
    assert_eq!(mono.kind, CheckKind::Logged);
    println!(
        "INFO bloch-expansion l1: monotonicity violation {:.3e} over {} channel pairs (logged, not gated)",
        mono.max_violation, mono.samples
    );
    assert!(report.all_canonical_pass());
}

#[test]
fn fperp_witness_sanity() {
    // the maximally textured direction used across the criteria
    let t = tol();
    let basis = f_basis(2).unwrap();
    let fperp = basis[1].density(&t);
    assert!((geometric_texture(&fperp) - 1.0).abs() < 1e-12);
    assert!((hellinger_texture(&fperp, &t).unwrap() - 2.0).abs() < 1e-10);
    let c = Complex64::new(0.0, 0.0);
    assert_eq!(c.re, 0.0);
}

//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured runtime (run with `--nocapture` to see them).
//!
//! Criteria, tolerances, and runtime budgets:
//! 1. two-basis scenarios are feasible and unique with
//!    nu = (a/2, (1-a)/2, (1-a)/2, a/2), exactly, for five rational a (< 1 s
//!    total);
//! 2. the exact three-basis instance a = 1/4, b = 3/4 is infeasible with an
//!    exactly verifiable Farkas certificate (< 1 s);
//! 3. seventeen quantum-beta sweep points are all infeasible (< 5 s);
//! 4. the feasibility boundary sits at beta* = (1+a)/2 within 1e-6 and the
//!    quantum beta exceeds it by (sqrt(a)-a)/2 (< 5 s);
//! 5. the delta-distribution description contradicts every sampled
//!    multi-basis scenario and survives a single basis (< 2 s);
//! 6. steering measurements reproduce 100 random orthogonal-pair ensembles
//!    within 1e-10 (< 2 s);
//! 7. 500 random small rational systems: every feasible witness satisfies
//!    the system exactly, every certificate verifies exactly (< 30 s);
//! 8. generated constraint counts match the closed forms exactly.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use qsteer::commands::{report_nu_rationals, run_check, run_ontic};
use qsteer::lp::{
    solve_feasibility, verify_certificate, FeasibilityResult, LinearSystem, Rational,
};
use qsteer::model::{build_constraints, ConstraintCounts, ConstraintSystem};
use qsteer::quantum::{conditional_state, max_entry_dev, steering_povm, Basis, Ensemble, PureState};
use qsteer::report::Verdict;
use qsteer::scenario::{OverlapValue, Scenario};
use qsteer::sweep::{quantum_beta, run_sweep, threshold_search, BetaMode, Grid, SweepConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn exact(n: i64, d: i64) -> OverlapValue {
    OverlapValue::from_rational(rat(n, d)).unwrap()
}

fn report_pass(criterion: u32, detail: &str, elapsed: Duration, budget: Duration) {
    println!(
        "[criterion {криterion}] PASS - {detail} ({:.1} ms, budget {:.0} ms)",
        elapsed.as_secs_f64() * 1e3,
        budget.as_secs_f64() * 1e3,
        криterion = criterion,
    );
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
}

#[test]
fn criterion_1_two_basis_reproduction() {
    let alphas = [(1, 10), (1, 4), (1, 2), (3, 4), (9, 10)];
    let start = Instant::now();
    for &(n, d) in &alphas {
        let alpha = rat(n, d);
        let scenario = Scenario::two_basis(exact(n, d)).unwrap();
        let report = run_check(&scenario).unwrap();
        assert_eq!(report.verdict, Verdict::Feasible, "alpha = {n}/{d}");
        assert_eq!(report.unique, Some(true), "alpha = {n}/{d}");
        let nu = report_nu_rationals(&report).expect("exact nu block");
        let half = rat(1, 2);
        let expected = vec![
            &alpha * &half,
            (Rational::one() - &alpha) * &half,
            (Rational::one() - &alpha) * &half,
            &alpha * &half,
        ];
        assert_eq!(nu, expected, "alpha = {n}/{d}");
    }
    report_pass(
        1,
        "five exact alphas feasible and unique with nu = (a/2, (1-a)/2, (1-a)/2, a/2)",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_three_basis_exact_no_go() {
    let start = Instant::now();
    let scenario = Scenario::three_basis_bisecting(exact(1, 4), exact(3, 4)).unwrap();
    let report = run_check(&scenario).unwrap();
    assert_eq!(report.verdict, Verdict::Infeasible);
    assert_eq!(report.certificate_verified, Some(true));

    // re-verify the certificate against a freshly built system
    let model = build_constraints(&scenario).unwrap();
    let ConstraintSystem::Exact(sys) = model.system() else {
        panic!("expected exact arithmetic");
    };
    let certificate: Vec<Rational> = report
        .certificate
        .as_ref()
        .unwrap()
        .iter()
        .map(|v| v.to_rational().unwrap())
        .collect();
    assert!(verify_certificate(sys, &certificate).unwrap());
    report_pass(
        2,
        "alpha = 1/4, beta = 3/4 infeasible with an exactly verified Farkas certificate",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_3_quantum_beta_sweep_is_all_infeasible() {
    let start = Instant::now();
    let rows = run_sweep(&SweepConfig {
        alpha: Grid {
            start: 0.05,
            stop: 0.85,
            step: 0.05,
        },
        bases: 3,
        beta_mode: BetaMode::Quantum,
        beta: None,
    })
    .unwrap();
    assert_eq!(rows.len(), 17);
    for row in &rows {
        assert_eq!(
            row.verdict,
            Verdict::Infeasible,
            "alpha = {}, beta = {:?}",
            row.alpha,
            row.beta
        );
        assert!((row.beta.unwrap() - quantum_beta(row.alpha)).abs() < 1e-12);
    }
    report_pass(
        3,
        "17 grid points with beta = (1 + sqrt(alpha))/2 all infeasible",
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_4_feasibility_boundary() {
    let start = Instant::now();
    for alpha in [0.25, 0.5] {
        let found = threshold_search(alpha, 1e-6).unwrap();
        let expected_boundary = (1.0 + alpha) / 2.0;
        assert!(
            (found.beta_star - expected_boundary).abs() <= 1e-6,
            "alpha = {alpha}: beta* = {} vs (1+a)/2 = {expected_boundary}",
            found.beta_star
        );
        let expected_excess = (alpha.sqrt() - alpha) / 2.0;
        assert!(found.quantum_excess > 0.0);
        assert!(
            (found.quantum_excess - expected_excess).abs() <= 2e-6,
            "alpha = {alpha}: quantum excess {} vs (sqrt(a)-a)/2 = {expected_excess}",
            found.quantum_excess
        );
    }
    report_pass(
        4,
        "beta* = (1+a)/2 within 1e-6 at a = 1/4, 1/2; quantum beta exceeds it by (sqrt(a)-a)/2",
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_5_ontic_contradiction_family() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for sample in 0..100 {
        let n_bases = rng.gen_range(2..=4usize);
        let n_pairs = n_bases * (n_bases - 1) / 2;
        let pairs: Vec<OverlapValue> = (0..n_pairs)
            .map(|_| OverlapValue::from_f64(rng.gen_range(0.01..0.99)).unwrap())
            .collect();
        let scenario = Scenario::from_pair_overlaps(n_bases, &pairs).unwrap();
        let report = run_ontic(&scenario);
        assert_eq!(
            report.verdict,
            Verdict::Contradiction,
            "sample {sample} with {n_bases} bases"
        );
        assert!(report.ontic_witness.is_some());
    }
    let single = Scenario::from_pair_overlaps(1, &[]).unwrap();
    assert_eq!(run_ontic(&single).verdict, Verdict::Consistent);
    report_pass(
        5,
        "100 sampled multi-basis scenarios all contradict the delta description; N = 1 is consistent",
        start.elapsed(),
        Duration::from_secs(2),
    );
}

#[test]
fn criterion_6_steering_round_trip() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for sample in 0..100 {
        let theta = (1.0 - 2.0 * rng.gen::<f64>()).clamp(-1.0, 1.0).acos();
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        let basis = Basis::from_state(PureState::from_bloch(theta, phi));
        let ensemble = Ensemble::from_basis(&basis);
        let povm = steering_povm(&ensemble).expect("pair ensembles average to I/2");
        for (element, (weight, state)) in povm.elements().iter().zip(ensemble.members()) {
            let (p, rho) = conditional_state(element).unwrap();
            assert!(
                (p - weight).abs() <= 1e-10,
                "sample {sample}: probability off by {}",
                (p - weight).abs()
            );
            let dev = max_entry_dev(rho.matrix(), &state.projector());
            assert!(dev <= 1e-10, "sample {sample}: state deviation {dev}");
        }
    }
    report_pass(
        6,
        "100 random orthogonal-pair ensembles reproduced by their steering POVMs within 1e-10",
        start.elapsed(),
        Duration::from_secs(2),
    );
}

#[test]
fn criterion_7_solver_soundness_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut random_rational = |rng: &mut ChaCha8Rng, min_num: i64| {
        rat(rng.gen_range(min_num..=12), rng.gen_range(1..=12))
    };
    let mut n_feasible = 0usize;
    let mut n_infeasible = 0usize;
    for case in 0..500 {
        let n_vars = rng.gen_range(1..=20usize);
        let n_rows = rng.gen_range(1..=15usize);
        let constructed_feasible = case % 2 == 0;
        let mut sys = LinearSystem::new(n_vars);
        if constructed_feasible {
            // plant a nonnegative solution and derive the right-hand sides
            let planted: Vec<Rational> = (0..n_vars)
                .map(|_| random_rational(&mut rng, 0))
                .collect();
            for _ in 0..n_rows {
                let coeffs: Vec<Rational> = (0..n_vars)
                    .map(|_| random_rational(&mut rng, -12))
                    .collect();
                let rhs = coeffs
                    .iter()
                    .zip(&planted)
                    .fold(rat(0, 1), |acc, (c, x)| acc + c * x);
                sys.add_equality(coeffs, rhs).unwrap();
            }
        } else {
            for _ in 0..n_rows {
                let coeffs = (0..n_vars)
                    .map(|_| random_rational(&mut rng, -12))
                    .collect();
                sys.add_equality(coeffs, random_rational(&mut rng, -12))
                    .unwrap();
            }
        }
        match solve_feasibility(&sys).unwrap() {
            FeasibilityResult::Feasible { assignment } => {
                n_feasible += 1;
                assert!(
                    sys.is_satisfied_by(&assignment),
                    "case {case}: witness violates the system"
                );
            }
            FeasibilityResult::Infeasible { certificate } => {
                n_infeasible += 1;
                assert!(
                    !constructed_feasible,
                    "case {case}: solver missed the planted solution"
                );
                assert!(
                    verify_certificate(&sys, &certificate).unwrap(),
                    "case {case}: certificate failed verification"
                );
            }
        }
    }
    assert!(n_feasible >= 250, "only {n_feasible} feasible cases");
    assert!(n_infeasible >= 50, "only {n_infeasible} infeasible cases");
    report_pass(
        7,
        &format!(
            "500 random rational systems sound ({n_feasible} feasible witnesses, \
             {n_infeasible} verified certificates)"
        ),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_8_constraint_count_audit() {
    let start = Instant::now();
    let cases = [
        (
            Scenario::two_basis(exact(1, 4)).unwrap(),
            ConstraintCounts {
                variables: 20,
                support: 8,
                normalization: 4,
                born: 8,
                mixture: 8,
            },
        ),
        (
            Scenario::three_basis_bisecting(exact(1, 4), exact(3, 4)).unwrap(),
            ConstraintCounts {
                variables: 56,
                support: 24,
                normalization: 6,
                born: 24,
                mixture: 24,
            },
        ),
    ];
    for (scenario, expected) in cases {
        let model = build_constraints(&scenario).unwrap();
        assert_eq!(*model.counts(), expected);
        assert_eq!(
            *model.counts(),
            ConstraintCounts::closed_form(scenario.n_bases())
        );
        assert_eq!(model.system().n_rows(), expected.total_rows());
        assert_eq!(model.system().n_vars(), expected.variables);
    }
    report_pass(
        8,
        "row and variable counts for N = 2, 3 match the closed forms exactly",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

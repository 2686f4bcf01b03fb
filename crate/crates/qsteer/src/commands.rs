//! End-to-end command pipelines behind the CLI: load a file, run the
//! analysis, produce a report. The thin binary and the examples both call
//! these.

use crate::lp::{
    solve_feasibility, unique_solution_if_any, verify_certificate, FeasibilityResult,
    LinearSystem, LpError, Rational, Scalar,
};
use crate::model::{build_constraints, check_ontic_consistency, ConstraintSystem, ModelError, OnticVerdict};
use crate::quantum::{conditional_state, max_entry_dev, steering_povm, Ensemble, QuantumError};
use crate::report::{
    CertCheckReport, EnsembleFile, FileError, PovmReport, ReportValue, ScenarioFile,
    SteeringReport, Verdict,
};
use crate::scenario::Scenario;
use crate::sweep::SweepError;
use std::path::Path;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("report carries no certificate (verdict was {verdict})")]
    NoCertificate { verdict: Verdict },
    #[error("certificate entry {index} is not a number")]
    BadCertificateEntry { index: usize },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FileError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: display.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FileError::Json {
        path: display,
        source,
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CommandError> {
    let file: ScenarioFile = read_json(path)?;
    Ok(file.to_scenario()?)
}

pub fn load_ensemble(path: &Path) -> Result<Ensemble, CommandError> {
    let file: EnsembleFile = read_json(path)?;
    Ok(file.to_ensemble()?)
}

pub fn load_report(path: &Path) -> Result<SteeringReport, CommandError> {
    Ok(read_json(path)?)
}

struct SolveSummary {
    verdict: Verdict,
    witness: Option<Vec<ReportValue>>,
    nu: Option<Vec<ReportValue>>,
    unique: Option<bool>,
    certificate: Option<Vec<ReportValue>>,
    certificate_verified: Option<bool>,
}

fn summarize<T: Scalar>(
    sys: &LinearSystem<T>,
    nu_start: usize,
    to_value: impl Fn(&T) -> ReportValue,
) -> Result<SolveSummary, LpError> {
    match solve_feasibility(sys)? {
        FeasibilityResult::Feasible { assignment } => {
            let unique = unique_solution_if_any(sys)?.is_some();
            let witness: Vec<ReportValue> = assignment.iter().map(&to_value).collect();
            let nu = witness[nu_start..].to_vec();
            Ok(SolveSummary {
                verdict: Verdict::Feasible,
                witness: Some(witness),
                nu: Some(nu),
                unique: Some(unique),
                certificate: None,
                certificate_verified: None,
            })
        }
        FeasibilityResult::Infeasible { certificate } => {
            let verified = verify_certificate(sys, &certificate)?;
            Ok(SolveSummary {
                verdict: Verdict::Infeasible,
                witness: None,
                nu: None,
                unique: None,
                certificate: Some(certificate.iter().map(&to_value).collect()),
                certificate_verified: Some(verified),
            })
        }
    }
}

/// Builds the cell model of a scenario, decides feasibility, and reports.
///
/// Feasible verdicts carry the witness assignment, its `nu` block, and the
/// uniqueness flag; infeasible verdicts carry a Farkas certificate that is
/// re-verified before the report is issued.
pub fn run_check(scenario: &Scenario) -> Result<SteeringReport, CommandError> {
    let start = Instant::now();
    let model = build_constraints(scenario)?;
    let nu_start = model.nu_var(0);
    let summary = match model.system() {
        ConstraintSystem::Exact(sys) => {
            summarize(sys, nu_start, |r| ReportValue::from_rational(r))?
        }
        ConstraintSystem::Floating(sys) => {
            summarize(sys, nu_start, |x| ReportValue::Float(*x))?
        }
    };
    Ok(SteeringReport {
        command: "check".to_string(),
        scenario: scenario.clone(),
        constraints: Some(*model.counts()),
        verdict: summary.verdict,
        witness: summary.witness,
        nu: summary.nu,
        unique: summary.unique,
        certificate: summary.certificate,
        certificate_verified: summary.certificate_verified,
        ontic_witness: None,
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}

/// Runs the delta-distribution consistency check and reports the
/// contradiction witness or consistency.
pub fn run_ontic(scenario: &Scenario) -> SteeringReport {
    let start = Instant::now();
    let (verdict, witness) = match check_ontic_consistency(scenario) {
        OnticVerdict::Consistent => (Verdict::Consistent, None),
        OnticVerdict::Contradiction(w) => (Verdict::Contradiction, Some(w)),
    };
    SteeringReport {
        command: "ontic".to_string(),
        scenario: scenario.clone(),
        constraints: None,
        verdict,
        witness: None,
        nu: None,
        unique: None,
        certificate: None,
        certificate_verified: None,
        ontic_witness: witness,
        elapsed_us: start.elapsed().as_micros() as u64,
    }
}

/// Constructs the steering measurement of an ensemble and checks each
/// outcome's probability and conditional state against the ensemble.
pub fn run_povm(ensemble: &Ensemble) -> Result<PovmReport, CommandError> {
    let start = Instant::now();
    let povm = steering_povm(ensemble)?;
    let mut probabilities = Vec::new();
    let mut max_state_dev: f64 = 0.0;
    let mut max_prob_dev: f64 = 0.0;
    let mut elements = Vec::new();
    for (element, (weight, state)) in povm.elements().iter().zip(ensemble.members()) {
        let (p, rho) = conditional_state(element)?;
        probabilities.push(p);
        max_prob_dev = max_prob_dev.max((p - weight).abs());
        max_state_dev = max_state_dev.max(max_entry_dev(rho.matrix(), &state.projector()));
        elements.push([
            [
                [element[(0, 0)].re, element[(0, 0)].im],
                [element[(0, 1)].re, element[(0, 1)].im],
            ],
            [
                [element[(1, 0)].re, element[(1, 0)].im],
                [element[(1, 1)].re, element[(1, 1)].im],
            ],
        ]);
    }
    Ok(PovmReport {
        command: "povm".to_string(),
        weights: ensemble.members().iter().map(|(w, _)| *w).collect(),
        states: ensemble
            .members()
            .iter()
            .map(|(_, s)| [s.c0().re, s.c0().im, s.c1().re, s.c1().im])
            .collect(),
        elements,
        probabilities,
        max_state_deviation: max_state_dev,
        max_probability_deviation: max_prob_dev,
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}

/// Rebuilds the constraint system from the scenario echoed in a check
/// report and re-verifies the embedded Farkas certificate.
pub fn verify_report_certificate(report: &SteeringReport) -> Result<CertCheckReport, CommandError> {
    let certificate = report
        .certificate
        .as_ref()
        .ok_or(CommandError::NoCertificate {
            verdict: report.verdict,
        })?;
    let model = build_constraints(&report.scenario)?;
    let verified = match model.system() {
        ConstraintSystem::Exact(sys) => {
            let u: Vec<Rational> = certificate
                .iter()
                .enumerate()
                .map(|(index, v)| {
                    v.to_rational()
                        .ok_or(CommandError::BadCertificateEntry { index })
                })
                .collect::<Result<_, _>>()?;
            verify_certificate(sys, &u)?
        }
        ConstraintSystem::Floating(sys) => {
            let u: Vec<f64> = certificate
                .iter()
                .enumerate()
                .map(|(index, v)| {
                    v.to_f64()
                        .filter(|x| x.is_finite())
                        .ok_or(CommandError::BadCertificateEntry { index })
                })
                .collect::<Result<_, _>>()?;
            verify_certificate(sys, &u)?
        }
    };
    Ok(CertCheckReport {
        command: "verify-cert".to_string(),
        verified,
    })
}

/// Reads the nu block of a feasible check report back as rationals.
/// Convenience for exact-mode consumers; `None` when absent or floating.
pub fn report_nu_rationals(report: &SteeringReport) -> Option<Vec<Rational>> {
    let nu = report.nu.as_ref()?;
    nu.iter()
        .map(|v| match v {
            ReportValue::Exact(s) => s.parse().ok(),
            ReportValue::Float(_) => None,
        })
        .collect()
}

/// Converts a report's nu block to floats regardless of mode.
pub fn report_nu_floats(report: &SteeringReport) -> Option<Vec<f64>> {
    let nu = report.nu.as_ref()?;
    nu.iter()
        .map(|v| v.to_f64().and_then(|x| x.is_finite().then_some(x)))
        .collect()
}

//! Parameter sweeps over scenario families, and the feasibility boundary
//! search for the three-basis bisecting model.
//!
//! Sweep points are independent; they are evaluated in parallel and the
//! output rows keep grid order. All sweeps run in floating mode (the
//! quantum bisector overlap `(1 + sqrt(alpha)) / 2` is irrational).

use crate::lp::{solve_feasibility, LpError};
use crate::model::{build_constraints, ConstraintSystem, ModelError};
use crate::report::Verdict;
use crate::scenario::{OverlapValue, Scenario, ScenarioError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

/// Bisection width for the feasibility boundary search.
pub const THRESHOLD_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("cannot parse grid {text:?}: expected start:stop:step")]
    BadGrid { text: String },
    #[error("grid step must be strictly positive")]
    NonPositiveStep,
    #[error("grid is empty or leaves the open interval (0, 1)")]
    EmptyOrOutOfRange,
    #[error("--bases must be 2 or 3, got {got}")]
    BadBases { got: usize },
    #[error("beta mode {text:?} is not one of quantum, grid, threshold-search")]
    BadBetaMode { text: String },
    #[error("beta-mode grid requires a --beta start:stop:step grid")]
    MissingBetaGrid,
    #[error("threshold search expected {expected} at beta = {beta}")]
    BracketFailed { beta: f64, expected: &'static str },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// An inclusive arithmetic grid `start, start+step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for Grid {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SweepError::BadGrid {
            text: s.to_string(),
        };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        Ok(Grid {
            start: nums[0],
            stop: nums[1],
            step: nums[2],
        })
    }
}

impl Grid {
    /// The grid points, generated by index so accumulation error cannot
    /// change the count.
    pub fn values(&self) -> Result<Vec<f64>, SweepError> {
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(SweepError::NonPositiveStep);
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.start > self.stop {
            return Err(SweepError::EmptyOrOutOfRange);
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        let values: Vec<f64> = (0..count)
            .map(|k| self.start + k as f64 * self.step)
            .collect();
        if values.is_empty() || values.iter().any(|&v| v <= 0.0 || v >= 1.0) {
            return Err(SweepError::EmptyOrOutOfRange);
        }
        Ok(values)
    }
}

/// How the third basis's overlap is chosen at each alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaMode {
    /// `beta = (1 + sqrt(alpha)) / 2`, the value quantum mechanics forces
    /// on the bisecting basis.
    Quantum,
    /// An explicit beta grid, crossed with the alpha grid.
    Grid,
    /// Bisect beta at fixed alpha to locate the feasible/infeasible
    /// boundary.
    ThresholdSearch,
}

impl FromStr for BetaMode {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quantum" => Ok(BetaMode::Quantum),
            "grid" => Ok(BetaMode::Grid),
            "threshold-search" => Ok(BetaMode::ThresholdSearch),
            _ => Err(SweepError::BadBetaMode {
                text: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub alpha: Grid,
    pub bases: usize,
    pub beta_mode: BetaMode,
    pub beta: Option<Grid>,
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: Option<f64>,
    pub n_bases: usize,
    pub verdict: Verdict,
}

/// The quantum prediction for the bisecting basis.
pub fn quantum_beta(alpha: f64) -> f64 {
    0.5 * (1.0 + alpha.sqrt())
}

fn two_basis_verdict(alpha: f64) -> Result<Verdict, SweepError> {
    let scenario = Scenario::two_basis(OverlapValue::from_f64(alpha)?)?;
    floating_verdict(&scenario)
}

fn three_basis_verdict(alpha: f64, beta: f64) -> Result<Verdict, SweepError> {
    let scenario = Scenario::three_basis_bisecting(
        OverlapValue::from_f64(alpha)?,
        OverlapValue::from_f64(beta)?,
    )?;
    floating_verdict(&scenario)
}

fn floating_verdict(scenario: &Scenario) -> Result<Verdict, SweepError> {
    let model = build_constraints(scenario)?;
    let ConstraintSystem::Floating(sys) = model.system() else {
        unreachable!("sweeps build floating scenarios");
    };
    Ok(if solve_feasibility(sys)?.is_feasible() {
        Verdict::Feasible
    } else {
        Verdict::Infeasible
    })
}

/// Runs a sweep; rows are ordered by grid index (alpha-major for beta
/// grids) no matter how the parallel evaluation interleaves.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    if config.bases != 2 && config.bases != 3 {
        return Err(SweepError::BadBases { got: config.bases });
    }
    let alphas = config.alpha.values()?;
    if config.bases == 2 {
        return alphas
            .par_iter()
            .map(|&alpha| {
                Ok(SweepRow {
                    alpha,
                    beta: None,
                    n_bases: 2,
                    verdict: two_basis_verdict(alpha)?,
                })
            })
            .collect();
    }
    match config.beta_mode {
        BetaMode::Quantum => alphas
            .par_iter()
            .map(|&alpha| {
                let beta = quantum_beta(alpha);
                Ok(SweepRow {
                    alpha,
                    beta: Some(beta),
                    n_bases: 3,
                    verdict: three_basis_verdict(alpha, beta)?,
                })
            })
            .collect(),
        BetaMode::Grid => {
            let betas = config.beta.ok_or(SweepError::MissingBetaGrid)?.values()?;
            let points: Vec<(f64, f64)> = alphas
                .iter()
                .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
                .collect();
            points
                .par_iter()
                .map(|&(alpha, beta)| {
                    Ok(SweepRow {
                        alpha,
                        beta: Some(beta),
                        n_bases: 3,
                        verdict: three_basis_verdict(alpha, beta)?,
                    })
                })
                .collect()
        }
        BetaMode::ThresholdSearch => alphas
            .par_iter()
            .map(|&alpha| {
                let found = threshold_search(alpha, THRESHOLD_TOL)?;
                Ok(SweepRow {
                    alpha,
                    beta: Some(found.beta_star),
                    n_bases: 3,
                    verdict: found.verdict_at_boundary,
                })
            })
            .collect(),
    }
}

/// Outcome of a feasibility-boundary bisection at fixed alpha.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub alpha: f64,
    /// Located boundary between feasible and infeasible beta.
    pub beta_star: f64,
    /// The quantum prediction `(1 + sqrt(alpha)) / 2` for comparison.
    pub beta_quantum: f64,
    /// `beta_quantum - beta_star`; positive means quantum mechanics demands
    /// more than any local model can deliver.
    pub quantum_excess: f64,
    pub verdict_at_boundary: Verdict,
    pub iterations: usize,
}

/// Bisects beta between 1/2 (feasible for every alpha in (0,1)) and the
/// quantum value (infeasible) until the bracket is narrower than `tol`.
pub fn threshold_search(alpha: f64, tol: f64) -> Result<ThresholdResult, SweepError> {
    if !(0.0..1.0).contains(&alpha) || alpha <= 0.0 {
        return Err(SweepError::EmptyOrOutOfRange);
    }
    let mut lo = 0.5;
    let mut hi = quantum_beta(alpha);
    if three_basis_verdict(alpha, lo)? != Verdict::Feasible {
        return Err(SweepError::BracketFailed {
            beta: lo,
            expected: "feasible",
        });
    }
    if three_basis_verdict(alpha, hi)? != Verdict::Infeasible {
        return Err(SweepError::BracketFailed {
            beta: hi,
            expected: "infeasible",
        });
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match three_basis_verdict(alpha, mid)? {
            Verdict::Feasible => lo = mid,
            _ => hi = mid,
        }
        iterations += 1;
    }
    let beta_star = 0.5 * (lo + hi);
    let beta_quantum = quantum_beta(alpha);
    Ok(ThresholdResult {
        alpha,
        beta_star,
        beta_quantum,
        quantum_excess: beta_quantum - beta_star,
        verdict_at_boundary: three_basis_verdict(alpha, beta_star)?,
        iterations,
    })
}

/// Renders sweep rows as CSV with the header `alpha,beta,n_bases,verdict`.
/// The beta column is empty for two-basis rows.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("alpha,beta,n_bases,verdict\n");
    for row in rows {
        let beta = row.beta.map(|b| b.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.alpha, beta, row.n_bases, row.verdict
        ));
    }
    out
}

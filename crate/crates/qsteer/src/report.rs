//! On-disk file formats and machine-readable reports.
//!
//! Scenario and ensemble files are JSON. Abstract scenario files keep exact
//! arithmetic available by writing overlaps as rational strings `"p/q"`;
//! plain numbers anywhere in the matrix drop the whole scenario to floating
//! mode. Reports echo the scenario, so a check report is self-contained:
//! the constraint system can be rebuilt from it and its certificate
//! re-verified without the original input file.

use crate::lp::Rational;
use crate::model::{ConstraintCounts, OnticContradiction};
use crate::quantum::{Basis, Ensemble, PureState, QuantumError};
use crate::scenario::{OverlapValue, Scenario, ScenarioError};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// A scenario input file.
///
/// Quantum mode lists one state per basis as `(re0, im0, re1, im1)`; the
/// orthogonal partner is completed automatically and all arithmetic is
/// floating. Abstract mode gives the full `2N x 2N` overlap matrix with
/// entries as rational strings or numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ScenarioFile {
    Quantum { bases: Vec<[f64; 4]> },
    Abstract {
        n_bases: usize,
        overlaps: Vec<Vec<OverlapEntry>>,
    },
}

/// One overlap-matrix entry of an abstract scenario file: `"p/q"` or a
/// number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OverlapEntry {
    Text(String),
    Number(f64),
}

impl ScenarioFile {
    pub fn to_scenario(&self) -> Result<Scenario, FileError> {
        match self {
            ScenarioFile::Quantum { bases } => {
                let mut built = Vec::with_capacity(bases.len());
                for amps in bases {
                    let state = PureState::new(
                        Complex64::new(amps[0], amps[1]),
                        Complex64::new(amps[2], amps[3]),
                    )?;
                    built.push(Basis::from_state(state));
                }
                Ok(Scenario::from_bases(&built)?)
            }
            ScenarioFile::Abstract { n_bases, overlaps } => {
                if overlaps.len() != 2 * n_bases {
                    return Err(ScenarioError::MatrixShape {
                        expected: 2 * n_bases,
                    }
                    .into());
                }
                let all_text = overlaps
                    .iter()
                    .flatten()
                    .all(|e| matches!(e, OverlapEntry::Text(_)));
                let mut matrix = Vec::with_capacity(overlaps.len());
                for row in overlaps {
                    let mut out = Vec::with_capacity(row.len());
                    for entry in row {
                        let value = match entry {
                            OverlapEntry::Text(s) => {
                                let exact = OverlapValue::parse_exact(s)?;
                                if all_text {
                                    exact
                                } else {
                                    // mixed entries: exactness is lost anyway
                                    OverlapValue::from_f64(exact.approx())?
                                }
                            }
                            OverlapEntry::Number(x) => OverlapValue::from_f64(*x)?,
                        };
                        out.push(value);
                    }
                    matrix.push(out);
                }
                Ok(Scenario::from_overlap_matrix(matrix)?)
            }
        }
    }
}

/// An ensemble input file: weighted states as `(re0, im0, re1, im1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub members: Vec<EnsembleMember>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMember {
    pub weight: f64,
    pub state: [f64; 4],
}

impl EnsembleFile {
    pub fn to_ensemble(&self) -> Result<Ensemble, FileError> {
        let mut members = Vec::with_capacity(self.members.len());
        for m in &self.members {
            let state = PureState::new(
                Complex64::new(m.state[0], m.state[1]),
                Complex64::new(m.state[2], m.state[3]),
            )?;
            members.push((m.weight, state));
        }
        Ok(Ensemble::new(members)?)
    }
}

/// A numeric value in a report: a rational string in exact mode, a float
/// otherwise. Both forms survive JSON round-trips losslessly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportValue {
    Exact(String),
    Float(f64),
}

impl ReportValue {
    pub fn from_rational(r: &Rational) -> Self {
        ReportValue::Exact(r.to_string())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            ReportValue::Exact(s) => s.parse().ok(),
            ReportValue::Float(x) => Rational::from_float(*x),
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            ReportValue::Exact(s) => s.parse::<Rational>().ok().and_then(|r| r.to_f64()),
            ReportValue::Float(x) => Some(*x),
        }
    }
}

/// Verdicts across all commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Infeasible,
    Contradiction,
    Consistent,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Feasible => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::Contradiction => "contradiction",
            Verdict::Consistent => "consistent",
        };
        f.write_str(s)
    }
}

/// The machine-readable record of a scenario analysis.
///
/// `witness` is the full variable assignment in canonical order (all
/// `mu_s[c]` blocks by state index, then the `nu` block); `nu` repeats the
/// trailing block for convenience. Exactly one of `witness`/`certificate`
/// is present for `check` reports, matching the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteeringReport {
    pub command: String,
    pub scenario: Scenario,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub constraints: Option<ConstraintCounts>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<ReportValue>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nu: Option<Vec<ReportValue>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unique: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Vec<ReportValue>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ontic_witness: Option<OnticContradiction>,
    /// Wall-clock time of the run, microseconds.
    pub elapsed_us: u64,
}

impl SteeringReport {
    /// Serialization with the timing zeroed out: the part of a report that
    /// is bit-deterministic across runs.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.elapsed_us = 0;
        serde_json::to_string(&copy).expect("reports serialize")
    }
}

/// Report of a steering-measurement construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmReport {
    pub command: String,
    pub weights: Vec<f64>,
    /// Ensemble states as `(re0, im0, re1, im1)`.
    pub states: Vec<[f64; 4]>,
    /// POVM elements, row-major with `[re, im]` entries.
    pub elements: Vec<[[[f64; 2]; 2]; 2]>,
    pub probabilities: Vec<f64>,
    /// Largest entrywise deviation of any conditional state from its
    /// ensemble member.
    pub max_state_deviation: f64,
    /// Largest deviation of any outcome probability from its weight.
    pub max_probability_deviation: f64,
    pub elapsed_us: u64,
}

/// Result of re-verifying the certificate embedded in a check report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertCheckReport {
    pub command: String,
    pub verified: bool,
}

//! Does a local hidden-variable model exist for a qubit steering scenario?
//!
//! Steering a remote qubit with a choice between *two* orthogonal
//! measurements can be described by a local, preparation-noncontextual
//! hidden-variable model: partition the ontic space into cells by the
//! certain outcome of each measurement, give each steered state a
//! distribution over its cells, and the quantum predictions pin every mass
//! uniquely. Adding a *third* generic measurement makes the constraint
//! system infeasible over nonnegative masses — no local model remains, and
//! the solver hands back a Farkas certificate proving it.
//!
//! The crate is organized around that pipeline:
//!
//! - [`quantum`]: qubit algebra, the steering theorem's verification and
//!   measurement construction, bisecting states;
//! - [`scenario`]: overlap matrices of N-basis scenarios, exact or floating;
//! - [`model`]: the cell model and its constraint families, plus the
//!   delta-distribution (pure-states-as-points) contradiction;
//! - [`lp`]: exact rational phase-1 simplex with Bland's rule, Farkas
//!   certificates, uniqueness certification;
//! - [`sweep`]: parameter scans and the feasibility-boundary search;
//! - [`report`] and [`commands`]: JSON file formats, machine-readable
//!   reports, and the pipelines behind the `qsteer` binary.
//!
//! Every operation is deterministic, and everything is immutable after
//! construction, so scenarios, models, and solves can be fanned out across
//! threads freely (the sweep module does exactly that).
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod commands;
pub mod lp;
pub mod model;
pub mod quantum;
pub mod report;
pub mod scenario;
pub mod sweep;

pub use commands::{
    load_ensemble, load_report, load_scenario, run_check, run_ontic, run_povm,
    verify_report_certificate, CommandError,
};
pub use lp::{
    solve_feasibility, unique_solution_if_any, verify_certificate, FeasibilityResult,
    LinearSystem, LpError, Rational,
};
pub use model::{
    build_constraints, check_ontic_consistency, enumerate_cells, Cell, CellModel,
    ConstraintCounts, ConstraintSystem, ModelError, OnticContradiction, OnticVerdict,
};
pub use quantum::{
    bisecting_state, conditional_state, density_from_ensemble, inner, orthocomplement, overlap,
    steering_povm, verify_steering_ensemble, Basis, DensityMatrix, Ensemble, Povm, PureState,
    QuantumError,
};
pub use report::{
    EnsembleFile, PovmReport, ReportValue, ScenarioFile, SteeringReport, Verdict,
};
pub use scenario::{ArithmeticMode, OverlapValue, Scenario, ScenarioError};
pub use sweep::{
    quantum_beta, rows_to_csv, run_sweep, threshold_search, BetaMode, Grid, SweepConfig,
    SweepError, SweepRow, ThresholdResult,
};

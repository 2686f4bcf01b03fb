//! The hidden-variable cell model for a steering scenario.
//!
//! Outcome determinism partitions the ontic space into `2^N` cells, one
//! outcome per basis; cell `(0,..,0)` is the intersection of all "unbarred"
//! certainty sets. Each steered state `s` gets nonnegative mass variables
//! `mu_s[c]` over the cells, and a shared distribution `nu[c]` ties the
//! bases together. Four equality families encode the physics:
//!
//! - support: a state puts no mass on cells that contradict its own basis
//!   outcome;
//! - normalization: each state's masses sum to 1;
//! - Born rule: mass on the cells where another basis yields outcome `u`
//!   equals the squared overlap with `u`'s state;
//! - noncontextual mixture: `(mu_{b,0}[c] + mu_{b,1}[c]) / 2 = nu[c]` for
//!   every basis `b`, because all equal-weight basis pairs prepare the same
//!   maximally mixed state and locality forbids the measurement choice on
//!   the far side from changing `nu`.
//!
//! A local, preparation-noncontextual model exists iff this system is
//! feasible over nonnegative variables. [`check_ontic_consistency`] handles
//! the stricter reading where pure states are points (delta distributions)
//! rather than distributions: two bases already rule that out.

use crate::lp::{LinearSystem, Rational, Scalar};
use crate::scenario::{ArithmeticMode, Scenario};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("degenerate scenario: cross-basis overlap of states {i} and {j} is exactly 0 or 1")]
    DegenerateOverlap { i: usize, j: usize },
    #[error("projection onto basis-pair regions requires at least two bases")]
    ProjectionNeedsTwoBases,
    #[error("invalid basis pair ({i}, {j})")]
    BadBasisPair { i: usize, j: usize },
    #[error("assignment has {got} values but the model has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
}

/// One cell of the ontic-space partition: the outcome each basis yields with
/// certainty there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    outcomes: Vec<u8>,
}

impl Cell {
    pub fn outcomes(&self) -> &[u8] {
        &self.outcomes
    }

    pub fn outcome(&self, basis: usize) -> u8 {
        self.outcomes[basis]
    }

    /// Compact label like `c010`.
    pub fn label(&self) -> String {
        let bits: String = self.outcomes.iter().map(|o| char::from(b'0' + o)).collect();
        format!("c{bits}")
    }
}

/// All `2^N` cells in lexicographic outcome order. For two bases this is
/// `(0,0), (0,1), (1,0), (1,1)`, i.e. regions S1..S4 with outcome 0 mapped
/// to the unbarred state.
pub fn enumerate_cells(scenario: &Scenario) -> Vec<Cell> {
    let n = scenario.n_bases();
    (0..1usize << n)
        .map(|k| Cell {
            outcomes: (0..n).map(|b| ((k >> (n - 1 - b)) & 1) as u8).collect(),
        })
        .collect()
}

/// Row counts per constraint family, plus the variable count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintCounts {
    pub variables: usize,
    pub support: usize,
    pub normalization: usize,
    pub born: usize,
    pub mixture: usize,
}

impl ConstraintCounts {
    pub fn total_rows(&self) -> usize {
        self.support + self.normalization + self.born + self.mixture
    }

    /// The closed-form counts for `n` bases: `(2n+1)·2^n` variables,
    /// `2n·2^(n-1)` support rows, `2n` normalizations, `4n(n-1)` Born rows,
    /// `n·2^n` mixture rows.
    pub fn closed_form(n_bases: usize) -> ConstraintCounts {
        let cells = 1usize << n_bases;
        ConstraintCounts {
            variables: (2 * n_bases + 1) * cells,
            support: 2 * n_bases * (cells / 2),
            normalization: 2 * n_bases,
            born: 2 * n_bases * (n_bases - 1) * 2,
            mixture: n_bases * cells,
        }
    }
}

/// The assembled linear system, in the scenario's arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSystem {
    Exact(LinearSystem<Rational>),
    Floating(LinearSystem<f64>),
}

impl ConstraintSystem {
    pub fn n_vars(&self) -> usize {
        match self {
            ConstraintSystem::Exact(s) => s.n_vars(),
            ConstraintSystem::Floating(s) => s.n_vars(),
        }
    }

    pub fn n_rows(&self) -> usize {
        match self {
            ConstraintSystem::Exact(s) => s.n_rows(),
            ConstraintSystem::Floating(s) => s.n_rows(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ConstraintSystem::Exact(_))
    }
}

/// The cell model of a scenario: variables, cells, and the constraint
/// system. Variable layout: `mu_s[c]` at index `s·2^N + c` for each state
/// `s` in index order, then `nu[c]` at `2N·2^N + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellModel {
    n_bases: usize,
    cells: Vec<Cell>,
    system: ConstraintSystem,
    counts: ConstraintCounts,
}

impl CellModel {
    pub fn n_bases(&self) -> usize {
        self.n_bases
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_vars(&self) -> usize {
        self.counts.variables
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn system(&self) -> &ConstraintSystem {
        &self.system
    }

    pub fn counts(&self) -> &ConstraintCounts {
        &self.counts
    }

    /// Index of the mass variable `mu_s[c]`.
    pub fn mass_var(&self, state: usize, cell: usize) -> usize {
        state * self.n_cells() + cell
    }

    /// Index of the shared distribution variable `nu[c]`.
    pub fn nu_var(&self, cell: usize) -> usize {
        2 * self.n_bases * self.n_cells() + cell
    }

    /// Row index ranges of the four families, in emission order
    /// (support, normalization, Born, mixture).
    pub fn family_ranges(&self) -> [std::ops::Range<usize>; 4] {
        let c = &self.counts;
        let a = c.support;
        let b = a + c.normalization;
        let d = b + c.born;
        [0..a, a..b, b..d, d..d + c.mixture]
    }

    /// Slice of the nu block of a full variable assignment.
    pub fn nu_slice<'a, T>(&self, assignment: &'a [T]) -> &'a [T] {
        &assignment[self.nu_var(0)..]
    }
}

/// Builds the constraint system of a scenario.
///
/// Rejects scenarios with a cross-basis overlap of exactly 0 or 1 when
/// `N >= 2`: the bases then coincide up to relabeling and the argument does
/// not apply.
pub fn build_constraints(scenario: &Scenario) -> Result<CellModel, ModelError> {
    if scenario.n_bases() >= 2 {
        let n = scenario.n_states();
        for i in 0..n {
            for j in (i + 1)..n {
                if i / 2 == j / 2 {
                    continue;
                }
                if !scenario.overlap_value(i, j).is_strictly_interior() {
                    return Err(ModelError::DegenerateOverlap { i, j });
                }
            }
        }
    }
    let cells = enumerate_cells(scenario);
    let (system, counts) = match scenario.mode() {
        ArithmeticMode::Exact => {
            let (sys, counts) = emit_rows(scenario, &cells, |i, j| {
                scenario
                    .overlap_value(i, j)
                    .exact()
                    .expect("exact scenario carries rationals")
                    .clone()
            });
            (ConstraintSystem::Exact(sys), counts)
        }
        ArithmeticMode::Floating => {
            let (sys, counts) =
                emit_rows(scenario, &cells, |i, j| scenario.overlap_value(i, j).approx());
            (ConstraintSystem::Floating(sys), counts)
        }
    };
    debug_assert_eq!(counts, ConstraintCounts::closed_form(scenario.n_bases()));
    Ok(CellModel {
        n_bases: scenario.n_bases(),
        cells,
        system,
        counts,
    })
}

fn emit_rows<T: Scalar>(
    scenario: &Scenario,
    cells: &[Cell],
    overlap_at: impl Fn(usize, usize) -> T,
) -> (LinearSystem<T>, ConstraintCounts) {
    let n_bases = scenario.n_bases();
    let n_states = scenario.n_states();
    let n_cells = cells.len();
    let n_vars = (n_states + 1) * n_cells;
    let mass = |state: usize, cell: usize| state * n_cells + cell;
    let nu = |cell: usize| n_states * n_cells + cell;
    let half = T::one() / (T::one() + T::one());

    let mut sys = LinearSystem::new(n_vars);
    let mut counts = ConstraintCounts {
        variables: n_vars,
        support: 0,
        normalization: 0,
        born: 0,
        mixture: 0,
    };
    let push = |sys: &mut LinearSystem<T>, coeffs: Vec<T>, rhs: T| {
        sys.add_equality(coeffs, rhs)
            .expect("rows are emitted with the declared variable count");
    };

    // support: mu_s[c] = 0 when cell c disagrees with s's own basis outcome
    for s in 0..n_states {
        let (basis, outcome) = (s / 2, (s % 2) as u8);
        for (c, cell) in cells.iter().enumerate() {
            if cell.outcome(basis) != outcome {
                let mut row = vec![T::zero(); n_vars];
                row[mass(s, c)] = T::one();
                push(&mut sys, row, T::zero());
                counts.support += 1;
            }
        }
    }

    // normalization: sum_c mu_s[c] = 1
    for s in 0..n_states {
        let mut row = vec![T::zero(); n_vars];
        for c in 0..n_cells {
            row[mass(s, c)] = T::one();
        }
        push(&mut sys, row, T::one());
        counts.normalization += 1;
    }

    // Born rule: for state s and any other basis b with outcome o, the mass
    // on cells where b yields o equals the overlap with that outcome state
    for s in 0..n_states {
        for b in 0..n_bases {
            if b == s / 2 {
                continue;
            }
            for o in 0..2u8 {
                let mut row = vec![T::zero(); n_vars];
                for (c, cell) in cells.iter().enumerate() {
                    if cell.outcome(b) == o {
                        row[mass(s, c)] = T::one();
                    }
                }
                let outcome_state = 2 * b + o as usize;
                push(&mut sys, row, overlap_at(outcome_state, s));
                counts.born += 1;
            }
        }
    }

    // noncontextual mixture: (mu_{b,0}[c] + mu_{b,1}[c]) / 2 = nu[c]
    for b in 0..n_bases {
        for c in 0..n_cells {
            let mut row = vec![T::zero(); n_vars];
            row[mass(2 * b, c)] = half.clone();
            row[mass(2 * b + 1, c)] = half.clone();
            row[nu(c)] = -T::one();
            push(&mut sys, row, T::zero());
            counts.mixture += 1;
        }
    }

    (sys, counts)
}

/// Masses aggregated over the four regions cut out by one pair of bases,
/// reproducing the four-region view of a larger model. Region `r` of cell
/// `c` is `2·c[i] + c[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMasses<T> {
    /// Aggregated `mu_s` per steered state, regions in order S1..S4.
    pub per_state: Vec<[T; 4]>,
    /// Aggregated `nu`.
    pub nu: [T; 4],
}

/// Projects a full variable assignment onto the regions of `basis_pair`.
/// Aggregation preserves totals: each state's four region masses sum to its
/// total mass.
pub fn project_to_regions<T: Scalar>(
    model: &CellModel,
    assignment: &[T],
    basis_pair: (usize, usize),
) -> Result<RegionMasses<T>, ModelError> {
    let (i, j) = basis_pair;
    if model.n_bases() < 2 {
        return Err(ModelError::ProjectionNeedsTwoBases);
    }
    if i == j || i >= model.n_bases() || j >= model.n_bases() {
        return Err(ModelError::BadBasisPair { i, j });
    }
    if assignment.len() != model.n_vars() {
        return Err(ModelError::AssignmentLength {
            expected: model.n_vars(),
            got: assignment.len(),
        });
    }
    let region = |cell: &Cell| (2 * cell.outcome(i) + cell.outcome(j)) as usize;
    let zero4 = || [T::zero(), T::zero(), T::zero(), T::zero()];
    let n_states = 2 * model.n_bases();
    let mut per_state = vec![zero4(); n_states];
    let mut nu = zero4();
    for (c, cell) in model.cells().iter().enumerate() {
        let r = region(cell);
        for (s, masses) in per_state.iter_mut().enumerate() {
            masses[r] = masses[r].clone() + assignment[model.mass_var(s, c)].clone();
        }
        nu[r] = nu[r].clone() + assignment[model.nu_var(c)].clone();
    }
    Ok(RegionMasses { per_state, nu })
}

/// Verdict of the delta-distribution (pure-states-as-points) check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum OnticVerdict {
    Consistent,
    Contradiction(OnticContradiction),
}

/// Witness of the delta-model contradiction: four distinct ontic points
/// whose half-half mixtures would have to be the same distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnticContradiction {
    /// The offending pair of bases.
    pub basis_pair: (usize, usize),
    /// Cross overlap of their unbarred states, strictly inside (0, 1).
    pub cross_overlap: f64,
    /// State indices carrying the four distinct point masses, in the order
    /// (first basis +, first basis -, second basis +, second basis -).
    pub point_states: [usize; 4],
    /// The identity that cannot hold.
    pub violated_identity: String,
}

/// Checks whether pure states can be modeled as point masses on distinct
/// ontic points.
///
/// For a single basis this is consistent. As soon as two bases have a cross
/// overlap strictly inside (0, 1), all four states are distinct, so the two
/// equal-weight mixtures preparing the maximally mixed state have disjoint
/// two-point supports and cannot be the same distribution.
pub fn check_ontic_consistency(scenario: &Scenario) -> OnticVerdict {
    let n = scenario.n_bases();
    for i in 0..n {
        for j in (i + 1)..n {
            let o = scenario.overlap_value(2 * i, 2 * j);
            if o.is_strictly_interior() {
                let labels: Vec<String> = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
                    .iter()
                    .map(|&s| scenario.state_label(s))
                    .collect();
                return OnticVerdict::Contradiction(OnticContradiction {
                    basis_pair: (i, j),
                    cross_overlap: o.approx(),
                    point_states: [2 * i, 2 * i + 1, 2 * j, 2 * j + 1],
                    violated_identity: format!(
                        "1/2 delta({}) + 1/2 delta({}) and 1/2 delta({}) + 1/2 delta({}) \
                         must both equal nu, but the four support points are pairwise distinct",
                        labels[0], labels[1], labels[2], labels[3]
                    ),
                });
            }
        }
    }
    OnticVerdict::Consistent
}

//! Steering scenarios: N orthogonal measurement bases on system B plus the
//! overlap matrix among all 2N steered states.
//!
//! A scenario is purely the overlap data — the quantum states behind it are
//! optional. Entries are exact rationals when the caller can supply them
//! (`mode = exact`), otherwise floats. The overlap matrix of a valid
//! scenario is symmetric, has unit diagonal, pairs states within one basis
//! orthogonally, and satisfies two-outcome completeness against every other
//! basis: `o(u, s) + o(u', s) = 1`.

use crate::lp::Rational;
use crate::quantum::{self, Basis};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported basis count; the cell model has `(2N+1)·2^N` variables
/// and exact solves stop being quick well before this.
pub const MAX_BASES: usize = 12;

/// Validation tolerance for floating-mode scenario matrices.
const FLOAT_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("a scenario needs at least one basis")]
    NoBases,
    #[error("{n_bases} bases exceeds the supported maximum of {MAX_BASES}")]
    TooManyBases { n_bases: usize },
    #[error("overlap matrix must be {expected}x{expected}")]
    MatrixShape { expected: usize },
    #[error("overlap value {value} is outside [0, 1]")]
    OutOfRange { value: f64 },
    #[error("exact mode requires every overlap to carry a rational value")]
    MissingExactValue,
    #[error("diagonal overlap of state {state} is not 1")]
    DiagonalNotOne { state: usize },
    #[error("states {i} and {j} share a basis but are not orthogonal")]
    BasisPairNotOrthogonal { i: usize, j: usize },
    #[error("overlap matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("overlaps of basis {basis} against state {state} do not sum to 1")]
    CompletenessViolated { basis: usize, state: usize },
    #[error("cannot parse {text:?} as a rational p/q")]
    BadRational { text: String },
    #[error("expected {expected} pair overlaps for {n_bases} bases, got {got}")]
    PairCount {
        n_bases: usize,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Quantum(#[from] quantum::QuantumError),
}

/// Arithmetic regime of a scenario and everything derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Floating,
}

/// A squared overlap `|<a|b>|^2`, optionally exact.
///
/// Serializes as a rational string `"p/q"` when exact and as a plain number
/// otherwise, so exact scenarios survive serialization round-trips
/// losslessly.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapValue {
    exact: Option<Rational>,
    approx: f64,
}

impl OverlapValue {
    pub fn from_rational(r: Rational) -> Result<Self, ScenarioError> {
        if r < Rational::zero() || r > Rational::one() {
            return Err(ScenarioError::OutOfRange {
                value: r.to_f64().unwrap_or(f64::NAN),
            });
        }
        let approx = r.to_f64().expect("rational in [0,1] fits in f64");
        Ok(OverlapValue {
            exact: Some(r),
            approx,
        })
    }

    pub fn from_f64(value: f64) -> Result<Self, ScenarioError> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(ScenarioError::OutOfRange { value });
        }
        Ok(OverlapValue {
            exact: None,
            approx: value,
        })
    }

    /// Parses `"p/q"` (or a bare integer) into an exact value.
    pub fn parse_exact(text: &str) -> Result<Self, ScenarioError> {
        let r: Rational = text.trim().parse().map_err(|_| ScenarioError::BadRational {
            text: text.to_string(),
        })?;
        OverlapValue::from_rational(r)
    }

    pub fn exact(&self) -> Option<&Rational> {
        self.exact.as_ref()
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `1 - self`, staying exact when possible.
    pub fn complement(&self) -> OverlapValue {
        match &self.exact {
            Some(r) => OverlapValue {
                exact: Some(Rational::one() - r),
                approx: 1.0 - self.approx,
            },
            None => OverlapValue {
                exact: None,
                approx: 1.0 - self.approx,
            },
        }
    }

    fn exactly_zero(&self) -> bool {
        match &self.exact {
            Some(r) => r.is_zero(),
            None => self.approx == 0.0,
        }
    }

    fn exactly_one(&self) -> bool {
        match &self.exact {
            Some(r) => r.is_one(),
            None => self.approx == 1.0,
        }
    }

    /// Strictly between 0 and 1, i.e. not a degenerate overlap.
    pub fn is_strictly_interior(&self) -> bool {
        !self.exactly_zero() && !self.exactly_one()
    }

    fn one() -> Self {
        OverlapValue {
            exact: Some(Rational::one()),
            approx: 1.0,
        }
    }

    fn zero() -> Self {
        OverlapValue {
            exact: Some(Rational::zero()),
            approx: 0.0,
        }
    }
}

impl Serialize for OverlapValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.exact {
            Some(r) => serializer.serialize_str(&r.to_string()),
            None => serializer.serialize_f64(self.approx),
        }
    }
}

impl<'de> Deserialize<'de> for OverlapValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(f64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => OverlapValue::parse_exact(&s).map_err(serde::de::Error::custom),
            Repr::Number(x) => OverlapValue::from_f64(x).map_err(serde::de::Error::custom),
        }
    }
}

/// A steering scenario: `n_bases` orthogonal bases and the symmetric
/// `2N x 2N` overlap matrix of their states.
///
/// State indexing is `2·basis + outcome`, outcome 0 being the "unbarred"
/// state of each basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    n_bases: usize,
    mode: ArithmeticMode,
    overlaps: Vec<Vec<OverlapValue>>,
}

impl Scenario {
    /// Builds and validates a scenario from a full overlap matrix. The mode
    /// is exact iff every entry carries a rational.
    pub fn from_overlap_matrix(overlaps: Vec<Vec<OverlapValue>>) -> Result<Self, ScenarioError> {
        if overlaps.is_empty() {
            return Err(ScenarioError::NoBases);
        }
        if overlaps.len() % 2 != 0 {
            return Err(ScenarioError::MatrixShape {
                expected: overlaps.len() + 1,
            });
        }
        let n_bases = overlaps.len() / 2;
        let all_exact = overlaps.iter().flatten().all(|o| o.is_exact());
        let mode = if all_exact {
            ArithmeticMode::Exact
        } else {
            ArithmeticMode::Floating
        };
        let scenario = Scenario {
            n_bases,
            mode,
            overlaps,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Builds a scenario from one overlap per basis pair, filling in the
    /// complements: the block of bases `i < j` is
    /// `[[a, 1-a], [1-a, a]]` for the pair's overlap `a`. Pairs are given in
    /// lexicographic order `(0,1), (0,2), ..., (1,2), ...`.
    pub fn from_pair_overlaps(
        n_bases: usize,
        pair_overlaps: &[OverlapValue],
    ) -> Result<Self, ScenarioError> {
        let expected = n_bases * n_bases.saturating_sub(1) / 2;
        if pair_overlaps.len() != expected {
            return Err(ScenarioError::PairCount {
                n_bases,
                expected,
                got: pair_overlaps.len(),
            });
        }
        let n = 2 * n_bases;
        let mut m = vec![vec![OverlapValue::zero(); n]; n];
        for (s, row) in m.iter_mut().enumerate() {
            row[s] = OverlapValue::one();
        }
        let mut k = 0;
        for i in 0..n_bases {
            for j in (i + 1)..n_bases {
                let a = pair_overlaps[k].clone();
                let b = a.complement();
                m[2 * i][2 * j] = a.clone();
                m[2 * i][2 * j + 1] = b.clone();
                m[2 * i + 1][2 * j] = b.clone();
                m[2 * i + 1][2 * j + 1] = a.clone();
                for (r, c) in [
                    (2 * i, 2 * j),
                    (2 * i, 2 * j + 1),
                    (2 * i + 1, 2 * j),
                    (2 * i + 1, 2 * j + 1),
                ] {
                    m[c][r] = m[r][c].clone();
                }
                k += 1;
            }
        }
        Scenario::from_overlap_matrix(m)
    }

    /// The two-basis scenario with cross overlap `alpha`.
    pub fn two_basis(alpha: OverlapValue) -> Result<Self, ScenarioError> {
        Scenario::from_pair_overlaps(2, &[alpha])
    }

    /// The three-basis scenario where the third basis has equal overlap
    /// `beta` with both states of the first two bases.
    pub fn three_basis_bisecting(
        alpha: OverlapValue,
        beta: OverlapValue,
    ) -> Result<Self, ScenarioError> {
        Scenario::from_pair_overlaps(3, &[alpha, beta.clone(), beta])
    }

    /// Computes the overlap matrix of actual qubit bases. Always floating:
    /// squared overlaps of generic states are not rational.
    pub fn from_bases(bases: &[Basis]) -> Result<Self, ScenarioError> {
        if bases.is_empty() {
            return Err(ScenarioError::NoBases);
        }
        let n = 2 * bases.len();
        let state = |idx: usize| bases[idx / 2].state(idx % 2);
        let mut m = vec![vec![OverlapValue::zero(); n]; n];
        for i in 0..n {
            m[i][i] = OverlapValue::from_f64(1.0)?;
            for j in (i + 1)..n {
                let value = if i / 2 == j / 2 {
                    // orthogonal partners within one basis
                    0.0
                } else {
                    quantum::overlap(state(i), state(j))
                };
                m[i][j] = OverlapValue::from_f64(value)?;
                m[j][i] = m[i][j].clone();
            }
        }
        Scenario::from_overlap_matrix(m)
    }

    /// A floating copy with the exact parts dropped.
    pub fn to_floating(&self) -> Scenario {
        Scenario {
            n_bases: self.n_bases,
            mode: ArithmeticMode::Floating,
            overlaps: self
                .overlaps
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|o| OverlapValue {
                            exact: None,
                            approx: o.approx,
                        })
                        .collect()
                })
                .collect(),
        }
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        if self.n_bases == 0 {
            return Err(ScenarioError::NoBases);
        }
        if self.n_bases > MAX_BASES {
            return Err(ScenarioError::TooManyBases {
                n_bases: self.n_bases,
            });
        }
        let n = 2 * self.n_bases;
        if self.overlaps.len() != n || self.overlaps.iter().any(|row| row.len() != n) {
            return Err(ScenarioError::MatrixShape { expected: n });
        }
        if self.mode == ArithmeticMode::Exact
            && self.overlaps.iter().flatten().any(|o| !o.is_exact())
        {
            return Err(ScenarioError::MissingExactValue);
        }
        let eq = |a: &OverlapValue, b: &OverlapValue| match (a.exact(), b.exact()) {
            (Some(x), Some(y)) => x == y,
            _ => (a.approx() - b.approx()).abs() <= FLOAT_TOL,
        };
        for s in 0..n {
            if !self.overlaps[s][s].exactly_one()
                && (self.overlaps[s][s].approx() - 1.0).abs() > FLOAT_TOL
            {
                return Err(ScenarioError::DiagonalNotOne { state: s });
            }
        }
        for b in 0..self.n_bases {
            let (i, j) = (2 * b, 2 * b + 1);
            let o = &self.overlaps[i][j];
            if !o.exactly_zero() && o.approx() > FLOAT_TOL {
                return Err(ScenarioError::BasisPairNotOrthogonal { i, j });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !eq(&self.overlaps[i][j], &self.overlaps[j][i]) {
                    return Err(ScenarioError::NotSymmetric { i, j });
                }
            }
        }
        // Two-outcome completeness: for every state s and every other basis
        // b = {u, u'}, the overlaps o(u, s) + o(u', s) must sum to 1.
        for s in 0..n {
            for b in 0..self.n_bases {
                if b == s / 2 {
                    continue;
                }
                let u = &self.overlaps[2 * b][s];
                let v = &self.overlaps[2 * b + 1][s];
                let ok = match (u.exact(), v.exact()) {
                    (Some(x), Some(y)) => x + y == Rational::one(),
                    _ => (u.approx() + v.approx() - 1.0).abs() <= FLOAT_TOL,
                };
                if !ok {
                    return Err(ScenarioError::CompletenessViolated { basis: b, state: s });
                }
            }
        }
        Ok(())
    }

    pub fn n_bases(&self) -> usize {
        self.n_bases
    }

    pub fn n_states(&self) -> usize {
        2 * self.n_bases
    }

    pub fn n_cells(&self) -> usize {
        1 << self.n_bases
    }

    pub fn mode(&self) -> ArithmeticMode {
        self.mode
    }

    pub fn is_exact(&self) -> bool {
        self.mode == ArithmeticMode::Exact
    }

    /// Squared overlap between states `i` and `j` (state index `2b + o`).
    pub fn overlap_value(&self, i: usize, j: usize) -> &OverlapValue {
        &self.overlaps[i][j]
    }

    /// `(basis, outcome)` labels of all steered states, in index order.
    pub fn states(&self) -> Vec<(usize, usize)> {
        (0..self.n_states()).map(|s| (s / 2, s % 2)).collect()
    }

    /// Human-readable state label, e.g. `b0+` and `b0-` for basis 0.
    pub fn state_label(&self, idx: usize) -> String {
        format!("b{}{}", idx / 2, if idx % 2 == 0 { "+" } else { "-" })
    }
}

impl<'de> Deserialize<'de> for Scenario {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n_bases: usize,
            mode: ArithmeticMode,
            overlaps: Vec<Vec<OverlapValue>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let mut scenario = Scenario::from_overlap_matrix(repr.overlaps)
            .map_err(serde::de::Error::custom)?;
        if repr.n_bases != scenario.n_bases {
            return Err(serde::de::Error::custom(format!(
                "n_bases {} does not match a {}-basis overlap matrix",
                repr.n_bases, scenario.n_bases
            )));
        }
        // An all-rational matrix may still be declared floating.
        if repr.mode == ArithmeticMode::Floating {
            scenario = scenario.to_floating();
        } else if scenario.mode == ArithmeticMode::Floating {
            return Err(serde::de::Error::custom(ScenarioError::MissingExactValue));
        }
        Ok(scenario)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::PureState;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn exact(n: i64, d: i64) -> OverlapValue {
        OverlapValue::from_rational(rat(n, d)).unwrap()
    }

    #[test]
    fn two_basis_matrix_shape() {
        let s = Scenario::two_basis(exact(1, 4)).unwrap();
        assert_eq!(s.n_bases(), 2);
        assert_eq!(s.n_states(), 4);
        assert_eq!(s.n_cells(), 4);
        assert!(s.is_exact());
        assert_eq!(s.overlap_value(0, 2).exact(), Some(&rat(1, 4)));
        assert_eq!(s.overlap_value(0, 3).exact(), Some(&rat(3, 4)));
        assert_eq!(s.overlap_value(1, 3).exact(), Some(&rat(1, 4)));
        assert_eq!(s.overlap_value(0, 1).exact(), Some(&rat(0, 1)));
    }

    #[test]
    fn three_basis_bisecting_blocks() {
        let s = Scenario::three_basis_bisecting(exact(1, 4), exact(3, 4)).unwrap();
        assert_eq!(s.n_bases(), 3);
        assert_eq!(s.overlap_value(4, 0).exact(), Some(&rat(3, 4)));
        assert_eq!(s.overlap_value(4, 2).exact(), Some(&rat(3, 4)));
        assert_eq!(s.overlap_value(5, 0).exact(), Some(&rat(1, 4)));
        assert_eq!(s.overlap_value(0, 2).exact(), Some(&rat(1, 4)));
    }

    #[test]
    fn quantum_bases_produce_floating_scenario() {
        let x = Basis::from_state(PureState::ket0());
        let y = Basis::from_state(PureState::from_bloch(
            2.0 * std::f64::consts::FRAC_PI_3,
            0.0,
        ));
        let s = Scenario::from_bases(&[x, y]).unwrap();
        assert_eq!(s.mode(), ArithmeticMode::Floating);
        assert!((s.overlap_value(0, 2).approx() - 0.25).abs() < 1e-12);
        assert!((s.overlap_value(0, 3).approx() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn completeness_violation_is_rejected() {
        let mut m = vec![vec![OverlapValue::zero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = OverlapValue::one();
        }
        // cross block with o(x,y) = 1/4 but o(X,y) = 1/2: sums to 3/4
        m[0][2] = exact(1, 4);
        m[2][0] = exact(1, 4);
        m[0][3] = exact(3, 4);
        m[3][0] = exact(3, 4);
        m[1][2] = exact(1, 2);
        m[2][1] = exact(1, 2);
        m[1][3] = exact(1, 2);
        m[3][1] = exact(1, 2);
        assert!(matches!(
            Scenario::from_overlap_matrix(m),
            Err(ScenarioError::CompletenessViolated { .. })
        ));
    }

    #[test]
    fn asymmetry_is_rejected() {
        let mut m = vec![vec![OverlapValue::zero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = OverlapValue::one();
        }
        m[0][2] = exact(1, 4);
        m[2][0] = exact(1, 3);
        m[0][3] = exact(3, 4);
        m[3][0] = exact(2, 3);
        m[1][2] = exact(3, 4);
        m[2][1] = exact(2, 3);
        m[1][3] = exact(1, 4);
        m[3][1] = exact(1, 3);
        assert!(matches!(
            Scenario::from_overlap_matrix(m),
            Err(ScenarioError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        assert!(matches!(
            OverlapValue::from_f64(1.5),
            Err(ScenarioError::OutOfRange { .. })
        ));
        assert!(matches!(
            OverlapValue::from_rational(rat(-1, 4)),
            Err(ScenarioError::OutOfRange { .. })
        ));
        assert!(matches!(
            OverlapValue::from_f64(f64::NAN),
            Err(ScenarioError::OutOfRange { .. })
        ));
    }

    #[test]
    fn rational_strings_parse() {
        assert_eq!(
            OverlapValue::parse_exact("1/4").unwrap().exact(),
            Some(&rat(1, 4))
        );
        assert_eq!(
            OverlapValue::parse_exact("1").unwrap().exact(),
            Some(&rat(1, 1))
        );
        assert!(OverlapValue::parse_exact("0.25").is_err());
        assert!(OverlapValue::parse_exact("x").is_err());
    }

    #[test]
    fn serde_round_trip_preserves_exactness() {
        let s = Scenario::three_basis_bisecting(exact(1, 4), exact(3, 4)).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: Scenario = serde_json::from_str(&json).unwrap();
        assert_eq!(s, back);
        assert!(back.is_exact());
    }

    #[test]
    fn serde_round_trip_floating() {
        let x = Basis::from_state(PureState::ket0());
        let y = Basis::from_state(PureState::from_bloch(1.1, 0.3));
        let s = Scenario::from_bases(&[x, y]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: Scenario = serde_json::from_str(&json).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn state_labels() {
        let s = Scenario::two_basis(exact(1, 2)).unwrap();
        assert_eq!(s.state_label(0), "b0+");
        assert_eq!(s.state_label(3), "b1-");
        assert_eq!(s.states(), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }
}

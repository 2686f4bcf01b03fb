//! Feasibility of linear equality systems over nonnegative variables.
//!
//! Systems have the form `A x = b`, `x >= 0`. The solver is a dense phase-1
//! simplex with Bland's anti-cycling rule, generic over the coefficient
//! field: exact rationals (verdicts are exact and bit-reproducible) or `f64`
//! (feasibility tolerance 1e-9 on residuals). An infeasible system comes
//! with a Farkas certificate `u` satisfying `uᵀA <= 0` and `uᵀb > 0`, which
//! [`verify_certificate`] checks independently of the solve that produced it.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact coefficient type: arbitrary-precision rational, kept in lowest terms
/// with a positive denominator by construction.
pub type Rational = BigRational;

/// Errors from system construction and the solver operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("row has {got} coefficients but the system has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("certificate has {got} entries but the system has {expected} rows")]
    CertificateDimension { expected: usize, got: usize },
    #[error("coefficient or right-hand side is not finite")]
    NonFiniteCoefficient,
    #[error("uniqueness query requires a feasible system")]
    InfeasibleSystem,
    #[error("simplex iteration limit exceeded")]
    IterationLimit,
}

/// Coefficient field the simplex runs over.
///
/// The two implementations are [`Rational`] (all tolerances zero, so every
/// comparison is exact) and `f64` (pivot tolerance 1e-11, feasibility
/// tolerance 1e-9, nonnegativity slack 1e-12).
pub trait Scalar: Clone + PartialOrd + Signed + std::fmt::Debug {
    /// Entries with magnitude at most this are treated as zero when pivoting.
    fn pivot_tol() -> Self;
    /// Residual tolerance for feasibility verdicts and certificate checks.
    fn feas_tol() -> Self;
    /// How far below zero a witness entry may sit.
    fn nonneg_tol() -> Self;
    /// Rejects NaN and infinities at construction time.
    fn is_valid_coeff(&self) -> bool;
}

impl Scalar for Rational {
    fn pivot_tol() -> Self {
        Rational::zero()
    }
    fn feas_tol() -> Self {
        Rational::zero()
    }
    fn nonneg_tol() -> Self {
        Rational::zero()
    }
    fn is_valid_coeff(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    fn pivot_tol() -> Self {
        1e-11
    }
    fn feas_tol() -> Self {
        1e-9
    }
    fn nonneg_tol() -> Self {
        1e-12
    }
    fn is_valid_coeff(&self) -> bool {
        self.is_finite()
    }
}

/// A system of linear equalities over implicitly nonnegative variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T: Scalar> {
    n_vars: usize,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(n_vars: usize) -> Self {
        LinearSystem {
            n_vars,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// Appends the equality `coeffs · x = rhs`.
    pub fn add_equality(&mut self, coeffs: Vec<T>, rhs: T) -> Result<(), LpError> {
        if coeffs.len() != self.n_vars {
            return Err(LpError::DimensionMismatch {
                expected: self.n_vars,
                got: coeffs.len(),
            });
        }
        if !rhs.is_valid_coeff() || coeffs.iter().any(|c| !c.is_valid_coeff()) {
            return Err(LpError::NonFiniteCoefficient);
        }
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> (&[T], &T) {
        (&self.rows[i], &self.rhs[i])
    }

    /// True when `x` satisfies every equality within `feas_tol` and every
    /// entry is at least `-nonneg_tol`.
    pub fn is_satisfied_by(&self, x: &[T]) -> bool {
        if x.len() != self.n_vars {
            return false;
        }
        let neg = -T::nonneg_tol();
        if x.iter().any(|v| *v < neg) {
            return false;
        }
        let tol = T::feas_tol();
        for (coeffs, rhs) in self.rows.iter().zip(&self.rhs) {
            let mut acc = T::zero();
            for (c, v) in coeffs.iter().zip(x) {
                acc = acc + c.clone() * v.clone();
            }
            if (acc - rhs.clone()).abs() > tol {
                return false;
            }
        }
        true
    }
}

impl LinearSystem<Rational> {
    /// Rounds every coefficient to `f64`, producing the floating twin of an
    /// exact system.
    pub fn to_floating(&self) -> LinearSystem<f64> {
        LinearSystem {
            n_vars: self.n_vars,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| c.to_f64().unwrap()).collect())
                .collect(),
            rhs: self.rhs.iter().map(|c| c.to_f64().unwrap()).collect(),
        }
    }
}

/// Outcome of a feasibility solve: a witness assignment or a Farkas
/// certificate, never both.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityResult<T: Scalar> {
    Feasible { assignment: Vec<T> },
    Infeasible { certificate: Vec<T> },
}

impl<T: Scalar> FeasibilityResult<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }
}

/// Decides whether `A x = b, x >= 0` has a solution.
///
/// Exact mode gives an exactly correct verdict; floating mode judges
/// residuals at 1e-9. Feasible results carry an assignment that satisfies
/// the system (see [`LinearSystem::is_satisfied_by`]); infeasible results
/// carry a certificate that passes [`verify_certificate`].
pub fn solve_feasibility<T: Scalar>(sys: &LinearSystem<T>) -> Result<FeasibilityResult<T>, LpError> {
    let mut tab = Tableau::from_system(sys);
    tab.run_phase1()?;
    if tab.phase1_feasible() {
        Ok(FeasibilityResult::Feasible {
            assignment: tab.current_point(),
        })
    } else {
        Ok(FeasibilityResult::Infeasible {
            certificate: tab.farkas_certificate(),
        })
    }
}

/// The minimum total constraint violation `min sum_i |a_i x - b_i|` over
/// nonnegative assignments (the phase-1 optimum). Zero iff the system is
/// feasible; otherwise an L1 distance to feasibility.
pub fn feasibility_distance<T: Scalar>(sys: &LinearSystem<T>) -> Result<T, LpError> {
    let mut tab = Tableau::from_system(sys);
    tab.run_phase1()?;
    Ok(tab
        .phase1_value
        .clone()
        .expect("phase 1 sets its value on success"))
}

/// Checks a Farkas infeasibility certificate against the original system.
///
/// Returns true iff every component of `uᵀA` is at most `feas_tol` and
/// `uᵀb` exceeds `feas_tol`. A true result proves no nonnegative solution
/// exists, regardless of how `u` was obtained.
pub fn verify_certificate<T: Scalar>(sys: &LinearSystem<T>, u: &[T]) -> Result<bool, LpError> {
    if u.len() != sys.n_rows() {
        return Err(LpError::CertificateDimension {
            expected: sys.n_rows(),
            got: u.len(),
        });
    }
    let tol = T::feas_tol();
    for j in 0..sys.n_vars {
        let mut combined = T::zero();
        for (i, ui) in u.iter().enumerate() {
            combined = combined + ui.clone() * sys.rows[i][j].clone();
        }
        if combined > tol {
            return Ok(false);
        }
    }
    let mut payoff = T::zero();
    for (i, ui) in u.iter().enumerate() {
        payoff = payoff + ui.clone() * sys.rhs[i].clone();
    }
    Ok(payoff > tol)
}

/// Returns the solution when the feasible set is a single point, `None` when
/// it is not, and an error on infeasible systems.
///
/// Uniqueness is certified by minimizing and maximizing each coordinate over
/// the feasible set (2·n bounded LPs) and checking the extremes coincide.
pub fn unique_solution_if_any<T: Scalar>(
    sys: &LinearSystem<T>,
) -> Result<Option<Vec<T>>, LpError> {
    let mut tab = Tableau::from_system(sys);
    tab.run_phase1()?;
    if !tab.phase1_feasible() {
        return Err(LpError::InfeasibleSystem);
    }
    tab.prepare_phase2()?;
    let n = sys.n_vars();
    let tol = T::feas_tol();
    let mut point = Vec::with_capacity(n);
    for j in 0..n {
        let mut objective = vec![T::zero(); n];
        objective[j] = T::one();
        let low = match tab.clone().run_phase2(&objective, Sense::Minimize)? {
            Phase2Outcome::Optimal { value, .. } => value,
            // coordinates are bounded below by zero, so this cannot happen
            Phase2Outcome::Unbounded => return Ok(None),
        };
        let high = match tab.clone().run_phase2(&objective, Sense::Maximize)? {
            Phase2Outcome::Optimal { value, .. } => value,
            Phase2Outcome::Unbounded => return Ok(None),
        };
        if (high.clone() - low.clone()).abs() > tol {
            return Ok(None);
        }
        point.push(low);
    }
    Ok(Some(point))
}

#[derive(Clone, Copy, PartialEq)]
enum Sense {
    Minimize,
    Maximize,
}

enum Phase2Outcome<T> {
    Optimal { value: T },
    Unbounded,
}

/// Dense simplex tableau with an artificial-variable block.
///
/// Column layout: original variables `0..n`, artificials `n..n+m`. The
/// right-hand side is kept nonnegative throughout (rows are sign-flipped on
/// entry and the flips remembered for certificate extraction). `obj` is the
/// reduced-cost row of the active objective and `neg_obj_val` its negated
/// value, both updated by the same pivot arithmetic as the constraint rows.
#[derive(Clone)]
struct Tableau<T: Scalar> {
    n: usize,
    m: usize,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    obj: Vec<T>,
    neg_obj_val: T,
    basis: Vec<usize>,
    flipped: Vec<bool>,
    phase1_value: Option<T>,
}

impl<T: Scalar> Tableau<T> {
    fn from_system(sys: &LinearSystem<T>) -> Self {
        let n = sys.n_vars();
        let m = sys.n_rows();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut flipped = vec![false; m];
        for i in 0..m {
            let mut row: Vec<T> = sys.rows[i].clone();
            let mut b = sys.rhs[i].clone();
            if b < T::zero() {
                for c in row.iter_mut() {
                    *c = -c.clone();
                }
                b = -b;
                flipped[i] = true;
            }
            row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
            rows.push(row);
            rhs.push(b);
        }
        // Phase-1 objective: minimize the sum of artificials. With the
        // artificial basis, the reduced cost of column j is -sum_i A[i][j]
        // for originals and 0 for artificials.
        let mut obj = vec![T::zero(); n + m];
        for (j, slot) in obj.iter_mut().enumerate().take(n) {
            let mut acc = T::zero();
            for row in &rows {
                acc = acc + row[j].clone();
            }
            *slot = -acc;
        }
        let mut total = T::zero();
        for b in &rhs {
            total = total + b.clone();
        }
        Tableau {
            n,
            m,
            rows,
            rhs,
            obj,
            neg_obj_val: -total,
            basis: (n..n + m).collect(),
            flipped,
            phase1_value: None,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / piv.clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.n + self.m {
                if self.rows[r][j].is_zero() {
                    continue;
                }
                let delta = f.clone() * self.rows[r][j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - delta;
            }
            self.rhs[i] = self.rhs[i].clone() - f.clone() * self.rhs[r].clone();
        }
        let f = self.obj[c].clone();
        if !f.is_zero() {
            for j in 0..self.n + self.m {
                if self.rows[r][j].is_zero() {
                    continue;
                }
                let delta = f.clone() * self.rows[r][j].clone();
                self.obj[j] = self.obj[j].clone() - delta;
            }
            self.neg_obj_val = self.neg_obj_val.clone() - f * self.rhs[r].clone();
        }
        self.basis[r] = c;
    }

    /// Bland entering rule: the lowest-index column with a negative reduced
    /// cost. `limit` restricts the candidate columns (phase 2 excludes the
    /// artificial block).
    fn entering(&self, limit: usize) -> Option<usize> {
        let threshold = -T::pivot_tol();
        (0..limit).find(|&j| self.obj[j] < threshold)
    }

    /// Bland leaving rule: minimum ratio, ties broken by the smallest basic
    /// variable index.
    fn leaving(&self, c: usize) -> Option<usize> {
        let tol = T::pivot_tol();
        let mut best: Option<(T, usize)> = None;
        for i in 0..self.m {
            if self.rows[i][c] <= tol {
                continue;
            }
            let ratio = self.rhs[i].clone() / self.rows[i][c].clone();
            best = match best {
                None => Some((ratio, i)),
                Some((best_ratio, best_row)) => {
                    if ratio < best_ratio
                        || (ratio == best_ratio && self.basis[i] < self.basis[best_row])
                    {
                        Some((ratio, i))
                    } else {
                        Some((best_ratio, best_row))
                    }
                }
            };
        }
        best.map(|(_, i)| i)
    }

    fn iteration_limit(&self) -> usize {
        10_000 + 200 * (self.n + self.m)
    }

    fn run_phase1(&mut self) -> Result<(), LpError> {
        let limit = self.iteration_limit();
        for _ in 0..limit {
            let Some(c) = self.entering(self.n + self.m) else {
                self.phase1_value = Some(-self.neg_obj_val.clone());
                return Ok(());
            };
            // The phase-1 objective is bounded below by zero, so a leaving
            // row always exists in exact arithmetic.
            let r = self.leaving(c).ok_or(LpError::IterationLimit)?;
            self.pivot(r, c);
        }
        Err(LpError::IterationLimit)
    }

    fn phase1_feasible(&self) -> bool {
        self.phase1_value
            .as_ref()
            .map(|v| *v <= T::feas_tol())
            .unwrap_or(false)
    }

    fn current_point(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }

    /// Dual values of the optimal phase-1 basis, mapped back through the row
    /// sign flips. For an infeasible system this is a Farkas certificate:
    /// `uᵀA <= 0` and `uᵀb = phase-1 optimum > 0`.
    fn farkas_certificate(&self) -> Vec<T> {
        (0..self.m)
            .map(|i| {
                let y = T::one() - self.obj[self.n + i].clone();
                if self.flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }

    /// Drives artificial variables out of the feasible phase-1 basis and
    /// drops redundant rows, leaving a basis over original columns only.
    fn prepare_phase2(&mut self) -> Result<(), LpError> {
        let tol = T::pivot_tol();
        let mut r = 0;
        while r < self.m {
            if self.basis[r] >= self.n {
                let candidate = (0..self.n).find(|&j| self.rows[r][j].clone().abs() > tol);
                match candidate {
                    Some(j) => self.pivot(r, j),
                    None => {
                        // All-zero original coefficients: the row is a linear
                        // combination of the others.
                        self.rows.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        self.flipped.remove(r);
                        self.m -= 1;
                        continue;
                    }
                }
            }
            r += 1;
        }
        Ok(())
    }

    /// Optimizes `costs` over the feasible region from an already-feasible
    /// basis. `prepare_phase2` must have run first.
    fn run_phase2(mut self, costs: &[T], sense: Sense) -> Result<Phase2Outcome<T>, LpError> {
        let signed_cost = |j: usize| -> T {
            match sense {
                Sense::Minimize => costs[j].clone(),
                Sense::Maximize => -costs[j].clone(),
            }
        };
        // Price out the objective against the current basis.
        for j in 0..self.n + self.m {
            let mut reduced = if j < self.n { signed_cost(j) } else { T::zero() };
            for (i, &b) in self.basis.iter().enumerate() {
                debug_assert!(b < self.n);
                let cb = signed_cost(b);
                reduced = reduced - cb * self.rows[i][j].clone();
            }
            self.obj[j] = reduced;
        }
        let mut value = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            value = value + signed_cost(b) * self.rhs[i].clone();
        }
        self.neg_obj_val = -value;

        let limit = self.iteration_limit();
        for _ in 0..limit {
            let Some(c) = self.entering(self.n) else {
                let value = -self.neg_obj_val.clone();
                let value = match sense {
                    Sense::Minimize => value,
                    Sense::Maximize => -value,
                };
                return Ok(Phase2Outcome::Optimal { value });
            };
            let Some(r) = self.leaving(c) else {
                return Ok(Phase2Outcome::Unbounded);
            };
            self.pivot(r, c);
        }
        Err(LpError::IterationLimit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn exact_system(rows: &[(&[i64], i64)], n_vars: usize) -> LinearSystem<Rational> {
        let mut sys = LinearSystem::new(n_vars);
        for (coeffs, rhs) in rows {
            sys.add_equality(
                coeffs.iter().map(|&c| rat(c, 1)).collect(),
                rat(*rhs, 1),
            )
            .unwrap();
        }
        sys
    }

    #[test]
    fn single_variable_feasible() {
        let sys = exact_system(&[(&[1], 1)], 1);
        let res = solve_feasibility(&sys).unwrap();
        assert_eq!(
            res,
            FeasibilityResult::Feasible {
                assignment: vec![rat(1, 1)]
            }
        );
    }

    #[test]
    fn negative_sum_infeasible_with_sign_certificate() {
        // x + y = -1 over nonnegative x, y.
        let sys = exact_system(&[(&[1, 1], -1)], 2);
        let res = solve_feasibility(&sys).unwrap();
        let FeasibilityResult::Infeasible { certificate } = res else {
            panic!("expected infeasible");
        };
        assert_eq!(certificate, vec![rat(-1, 1)]);
        assert!(verify_certificate(&sys, &certificate).unwrap());
    }

    #[test]
    fn certificate_rejected_on_feasible_direction() {
        // system {x = 1}: u = (1) gives uᵀA = (1), not <= 0.
        let sys = exact_system(&[(&[1], 1)], 1);
        assert!(!verify_certificate(&sys, &[rat(1, 1)]).unwrap());
    }

    #[test]
    fn certificate_accepted_on_negative_sum() {
        let sys = exact_system(&[(&[1, 1], -1)], 2);
        assert!(verify_certificate(&sys, &[rat(-1, 1)]).unwrap());
    }

    #[test]
    fn certificate_dimension_checked() {
        let sys = exact_system(&[(&[1, 1], -1)], 2);
        assert_eq!(
            verify_certificate(&sys, &[rat(-1, 1), rat(0, 1)]),
            Err(LpError::CertificateDimension {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn row_dimension_checked() {
        let mut sys = LinearSystem::new(2);
        assert_eq!(
            sys.add_equality(vec![rat(1, 1)], rat(1, 1)),
            Err(LpError::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn non_finite_coefficient_rejected() {
        let mut sys = LinearSystem::<f64>::new(1);
        assert_eq!(
            sys.add_equality(vec![f64::NAN], 1.0),
            Err(LpError::NonFiniteCoefficient)
        );
    }

    #[test]
    fn unique_point_is_certified() {
        let sys = exact_system(&[(&[1], 1)], 1);
        assert_eq!(
            unique_solution_if_any(&sys).unwrap(),
            Some(vec![rat(1, 1)])
        );
    }

    #[test]
    fn segment_is_not_unique() {
        // x + y = 1 is a segment, not a point.
        let sys = exact_system(&[(&[1, 1], 1)], 2);
        assert_eq!(unique_solution_if_any(&sys).unwrap(), None);
    }

    #[test]
    fn uniqueness_requires_feasibility() {
        let sys = exact_system(&[(&[1, 1], -1)], 2);
        assert_eq!(
            unique_solution_if_any(&sys),
            Err(LpError::InfeasibleSystem)
        );
    }

    #[test]
    fn degenerate_equalities_handled() {
        // Redundant and repeated rows around the point (1, 2).
        let sys = exact_system(
            &[
                (&[1, 0], 1),
                (&[0, 1], 2),
                (&[1, 1], 3),
                (&[2, 2], 6),
            ],
            2,
        );
        let res = solve_feasibility(&sys).unwrap();
        let FeasibilityResult::Feasible { assignment } = &res else {
            panic!("expected feasible");
        };
        assert!(sys.is_satisfied_by(assignment));
        assert_eq!(
            unique_solution_if_any(&sys).unwrap(),
            Some(vec![rat(1, 1), rat(2, 1)])
        );
    }

    #[test]
    fn witness_satisfies_system_in_floating_mode() {
        let mut sys = LinearSystem::<f64>::new(3);
        sys.add_equality(vec![1.0, 2.0, -1.0], 0.5).unwrap();
        sys.add_equality(vec![0.0, 1.0, 1.0], 1.25).unwrap();
        let res = solve_feasibility(&sys).unwrap();
        let FeasibilityResult::Feasible { assignment } = &res else {
            panic!("expected feasible");
        };
        assert!(sys.is_satisfied_by(assignment));
    }

    #[test]
    fn solve_is_deterministic() {
        let sys = exact_system(
            &[(&[1, 1, 1], 2), (&[1, -1, 0], 0), (&[0, 1, -1], 1)],
            3,
        );
        let first = solve_feasibility(&sys).unwrap();
        let second = solve_feasibility(&sys).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn row_scaling_preserves_verdict() {
        let base = exact_system(&[(&[1, 1], 1), (&[1, -1], 3)], 2);
        let verdict = solve_feasibility(&base).unwrap().is_feasible();
        for scale in [rat(1, 7), rat(3, 2), rat(12, 1)] {
            let mut scaled = LinearSystem::new(2);
            for i in 0..base.n_rows() {
                let (coeffs, rhs) = base.row(i);
                let row: Vec<Rational> =
                    coeffs.iter().map(|c| c * scale.clone()).collect();
                scaled.add_equality(row, rhs * scale.clone()).unwrap();
            }
            assert_eq!(solve_feasibility(&scaled).unwrap().is_feasible(), verdict);
        }
    }

    #[test]
    fn exact_and_floating_agree_on_clean_systems() {
        let feasible = exact_system(&[(&[1, 1], 1), (&[1, -1], 0)], 2);
        let infeasible = exact_system(&[(&[1, 1], 1), (&[1, 1], 2)], 2);
        assert!(solve_feasibility(&feasible.to_floating())
            .unwrap()
            .is_feasible());
        assert!(!solve_feasibility(&infeasible.to_floating())
            .unwrap()
            .is_feasible());
    }

    #[test]
    fn exact_and_floating_verdicts_agree_away_from_the_boundary() {
        use num_traits::ToPrimitive;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let mut agreements = 0;
        for _ in 0..200 {
            let n_vars = rng.gen_range(1..=10);
            let n_rows = rng.gen_range(1..=8);
            let mut sys = LinearSystem::new(n_vars);
            for _ in 0..n_rows {
                let coeffs = (0..n_vars)
                    .map(|_| rat(rng.gen_range(-12..=12), rng.gen_range(1..=12)))
                    .collect();
                sys.add_equality(coeffs, rat(rng.gen_range(-12..=12), rng.gen_range(1..=12)))
                    .unwrap();
            }
            let distance = feasibility_distance(&sys).unwrap().to_f64().unwrap();
            let floating = solve_feasibility(&sys.to_floating()).unwrap().is_feasible();
            // The phase-1 optimum is the L1 distance to feasibility; only
            // systems within 1e-6 of the boundary may be judged either way.
            if distance == 0.0 {
                assert!(floating);
                agreements += 1;
            } else if distance >= 1e-6 {
                assert!(!floating);
                agreements += 1;
            }
        }
        assert!(agreements >= 190, "family was almost entirely borderline");
    }
}

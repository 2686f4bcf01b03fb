//! Qubit states, bases, ensembles, density operators, and the steering
//! theorem.
//!
//! Everything here is ordinary 2x2 complex linear algebra. The one piece of
//! physics is [`steering_povm`]: an ensemble `{(p_i, phi_i)}` averaging to
//! the maximally mixed state can be prepared remotely by measuring the POVM
//! `E_i = 2 p_i |phi_i*><phi_i*|` on the other half of a maximally entangled
//! pair, and [`conditional_state`] checks the resulting collapse.
//!
//! Construction invariants are enforced at 1e-12; derived equalities are
//! judged at 1e-10.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for invariants checked at construction time.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for derived equalities (steering round-trips, bisection).
pub const DERIVED_TOL: f64 = 1e-10;
/// Orthogonality bound on the squared overlap of a basis pair.
pub const ORTHO_TOL: f64 = 1e-24;

/// 2x2 complex matrix used for projectors, density operators, and POVM
/// elements.
pub type CMat2 = Matrix2<Complex64>;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("amplitude is not finite")]
    NonFiniteAmplitude,
    #[error("state is not normalized: |c0|^2 + |c1|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("cannot normalize a near-zero vector")]
    ZeroVector,
    #[error("basis states are not orthogonal: squared overlap {overlap}")]
    NotOrthogonal { overlap: f64 },
    #[error("ensemble weight {weight} is outside [0, 1]")]
    WeightOutOfRange { weight: f64 },
    #[error("ensemble weights sum to {total}, not 1")]
    WeightsNotNormalized { total: f64 },
    #[error("ensemble has no members")]
    EmptyEnsemble,
    #[error("matrix is not a density operator: {reason}")]
    NotDensityMatrix { reason: &'static str },
    #[error("invalid measurement element: {reason}")]
    InvalidMeasurementElement { reason: &'static str },
    #[error("POVM elements sum to something other than the identity")]
    PovmIncomplete,
    #[error("steering precondition violated: ensemble does not average to I/2")]
    SteeringPreconditionViolated,
    #[error("measurement element has zero trace: zero-probability outcome")]
    ZeroProbabilityOutcome,
    #[error("bisection is degenerate for identical or orthogonal states")]
    DegenerateBisection,
}

/// A qubit ket `c0|0> + c1|1>`, unit-normalized within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    c0: Complex64,
    c1: Complex64,
}

impl PureState {
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self, QuantumError> {
        for c in [c0, c1] {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(QuantumError::NonFiniteAmplitude);
            }
        }
        let norm_sqr = c0.norm_sqr() + c1.norm_sqr();
        if (norm_sqr - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(QuantumError::NotNormalized { norm_sqr });
        }
        Ok(PureState { c0, c1 })
    }

    /// Builds a state from arbitrary finite amplitudes by normalizing them.
    pub fn normalized(c0: Complex64, c1: Complex64) -> Result<Self, QuantumError> {
        for c in [c0, c1] {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(QuantumError::NonFiniteAmplitude);
            }
        }
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if norm < 1e-150 {
            return Err(QuantumError::ZeroVector);
        }
        Ok(PureState {
            c0: c0 / norm,
            c1: c1 / norm,
        })
    }

    pub fn ket0() -> Self {
        PureState {
            c0: Complex64::new(1.0, 0.0),
            c1: Complex64::new(0.0, 0.0),
        }
    }

    pub fn ket1() -> Self {
        PureState {
            c0: Complex64::new(0.0, 0.0),
            c1: Complex64::new(1.0, 0.0),
        }
    }

    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            c0: Complex64::new(h, 0.0),
            c1: Complex64::new(h, 0.0),
        }
    }

    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            c0: Complex64::new(-h, 0.0),
            c1: Complex64::new(h, 0.0),
        }
    }

    /// State at polar angle `theta` and azimuth `phi` on the Bloch sphere,
    /// with the phase convention `c0` real and nonnegative.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        let (half_sin, half_cos) = (theta / 2.0).sin_cos();
        PureState {
            c0: Complex64::new(half_cos, 0.0),
            c1: Complex64::from_polar(half_sin, phi),
        }
    }

    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    /// The projector `|psi><psi|`.
    pub fn projector(&self) -> CMat2 {
        let v = Vector2::new(self.c0, self.c1);
        v * v.adjoint()
    }

    /// Bloch vector `(<sigma_x>, <sigma_y>, <sigma_z>)`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let cross = self.c0.conj() * self.c1;
        [
            2.0 * cross.re,
            2.0 * cross.im,
            self.c0.norm_sqr() - self.c1.norm_sqr(),
        ]
    }
}

/// Inner product `<a|b>`.
pub fn inner(a: &PureState, b: &PureState) -> Complex64 {
    a.c0.conj() * b.c0 + a.c1.conj() * b.c1
}

/// Squared overlap `|<a|b>|^2`, clamped into `[0, 1]`.
pub fn overlap(a: &PureState, b: &PureState) -> f64 {
    inner(a, b).norm_sqr().clamp(0.0, 1.0)
}

/// The orthogonal partner of `a`, with the fixed phase convention
/// `(-conj(c1), conj(c0))`.
pub fn orthocomplement(a: &PureState) -> PureState {
    PureState {
        c0: -a.c1.conj(),
        c1: a.c0.conj(),
    }
}

/// An orthogonal pair of states forming a von Neumann measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    plus: PureState,
    minus: PureState,
}

impl Basis {
    pub fn new(plus: PureState, minus: PureState) -> Result<Self, QuantumError> {
        let o = overlap(&plus, &minus);
        if o > ORTHO_TOL {
            return Err(QuantumError::NotOrthogonal { overlap: o });
        }
        Ok(Basis { plus, minus })
    }

    /// Completes `plus` with its orthocomplement.
    pub fn from_state(plus: PureState) -> Self {
        Basis {
            minus: orthocomplement(&plus),
            plus,
        }
    }

    pub fn plus(&self) -> &PureState {
        &self.plus
    }

    pub fn minus(&self) -> &PureState {
        &self.minus
    }

    pub fn state(&self, outcome: usize) -> &PureState {
        if outcome == 0 {
            &self.plus
        } else {
            &self.minus
        }
    }
}

/// A finite ensemble of pure states with probability weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self, QuantumError> {
        if members.is_empty() {
            return Err(QuantumError::EmptyEnsemble);
        }
        let mut total = 0.0;
        for &(w, _) in &members {
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(QuantumError::WeightOutOfRange { weight: w });
            }
            total += w;
        }
        if (total - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(QuantumError::WeightsNotNormalized { total });
        }
        Ok(Ensemble { members })
    }

    /// The equal-weight ensemble of a basis pair; always averages to I/2.
    pub fn from_basis(basis: &Basis) -> Self {
        Ensemble {
            members: vec![(0.5, basis.plus), (0.5, basis.minus)],
        }
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }
}

/// A valid qubit density operator: Hermitian, unit trace, positive
/// semidefinite (all within 1e-12).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMat2,
}

impl DensityMatrix {
    pub fn new(m: CMat2) -> Result<Self, QuantumError> {
        if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(QuantumError::NotDensityMatrix {
                reason: "non-finite entry",
            });
        }
        if hermiticity_defect(&m) > CONSTRUCTION_TOL {
            return Err(QuantumError::NotDensityMatrix {
                reason: "not Hermitian",
            });
        }
        if (m.trace().re - 1.0).abs() > CONSTRUCTION_TOL || m.trace().im.abs() > CONSTRUCTION_TOL {
            return Err(QuantumError::NotDensityMatrix {
                reason: "trace is not 1",
            });
        }
        if min_eigenvalue(&m) < -CONSTRUCTION_TOL {
            return Err(QuantumError::NotDensityMatrix {
                reason: "negative eigenvalue",
            });
        }
        Ok(DensityMatrix { m })
    }

    fn from_matrix_unchecked(m: CMat2) -> Self {
        debug_assert!(hermiticity_defect(&m) <= 1e-11);
        debug_assert!((m.trace().re - 1.0).abs() <= 1e-11);
        DensityMatrix { m }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            m: CMat2::identity().map(|c| c * 0.5),
        }
    }

    pub fn matrix(&self) -> &CMat2 {
        &self.m
    }
}

/// Largest entrywise deviation between two matrices.
pub fn max_entry_dev(a: &CMat2, b: &CMat2) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn hermiticity_defect(m: &CMat2) -> f64 {
    max_entry_dev(m, &m.adjoint())
}

/// Smallest eigenvalue of a (near-)Hermitian 2x2 matrix, via the closed
/// form `(tr - sqrt(tr^2 - 4 det)) / 2`.
fn min_eigenvalue(m: &CMat2) -> f64 {
    let t = m.trace().re;
    let d = m.determinant().re;
    let disc = (t * t - 4.0 * d).max(0.0);
    (t - disc.sqrt()) / 2.0
}

/// A positive-operator-valued measure: PSD elements summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<CMat2>,
}

impl Povm {
    pub fn new(elements: Vec<CMat2>) -> Result<Self, QuantumError> {
        let mut sum = CMat2::zeros();
        for e in &elements {
            if hermiticity_defect(e) > CONSTRUCTION_TOL {
                return Err(QuantumError::InvalidMeasurementElement {
                    reason: "element is not Hermitian",
                });
            }
            if min_eigenvalue(e) < -CONSTRUCTION_TOL {
                return Err(QuantumError::InvalidMeasurementElement {
                    reason: "element is not positive semidefinite",
                });
            }
            sum += e;
        }
        if max_entry_dev(&sum, &CMat2::identity()) > CONSTRUCTION_TOL {
            return Err(QuantumError::PovmIncomplete);
        }
        Ok(Povm { elements })
    }

    pub fn elements(&self) -> &[CMat2] {
        &self.elements
    }
}

/// The density operator `sum_i p_i |phi_i><phi_i|` of an ensemble.
pub fn density_from_ensemble(e: &Ensemble) -> DensityMatrix {
    let mut m = CMat2::zeros();
    for (w, state) in e.members() {
        m += state.projector().map(|c| c * *w);
    }
    DensityMatrix::from_matrix_unchecked(m)
}

/// The steering theorem's condition: `e` is reachable by a measurement on
/// the far half iff its average projector equals `rho` (within 1e-10).
pub fn verify_steering_ensemble(e: &Ensemble, rho: &DensityMatrix) -> bool {
    max_entry_dev(density_from_ensemble(e).matrix(), rho.matrix()) <= DERIVED_TOL
}

/// Builds the measurement that steers the far half of a maximally entangled
/// pair into `e`: elements `E_i = 2 p_i (|phi_i><phi_i|)^T`.
///
/// Rejects ensembles that do not average to I/2 (the theorem's
/// if-and-only-if condition for that state).
pub fn steering_povm(e: &Ensemble) -> Result<Povm, QuantumError> {
    if !verify_steering_ensemble(e, &DensityMatrix::maximally_mixed()) {
        return Err(QuantumError::SteeringPreconditionViolated);
    }
    let elements = e
        .members()
        .iter()
        .map(|(w, state)| state.projector().transpose().map(|c| c * (2.0 * *w)))
        .collect();
    Povm::new(elements)
}

/// Outcome probability and post-measurement state of system B when element
/// `E` fires on system A of the maximally entangled pair: probability
/// `tr(E)/2` and state `E^T / tr(E)`.
pub fn conditional_state(e: &CMat2) -> Result<(f64, DensityMatrix), QuantumError> {
    if hermiticity_defect(e) > CONSTRUCTION_TOL {
        return Err(QuantumError::InvalidMeasurementElement {
            reason: "element is not Hermitian",
        });
    }
    if min_eigenvalue(e) < -CONSTRUCTION_TOL {
        return Err(QuantumError::InvalidMeasurementElement {
            reason: "element is not positive semidefinite",
        });
    }
    let complement = CMat2::identity() - e;
    if min_eigenvalue(&complement) < -CONSTRUCTION_TOL {
        return Err(QuantumError::InvalidMeasurementElement {
            reason: "element exceeds the identity",
        });
    }
    let t = e.trace().re;
    if t <= 1e-14 {
        return Err(QuantumError::ZeroProbabilityOutcome);
    }
    let prob = (t / 2.0).clamp(0.0, 1.0);
    let state = e.transpose().map(|c| c / t);
    Ok((prob, DensityMatrix::from_matrix_unchecked(state)))
}

/// The state with equal overlap `beta = (1 + sqrt(alpha)) / 2` with both
/// inputs, where `alpha` is their mutual overlap. Computed by bisecting the
/// two Bloch vectors; rejects identical or orthogonal inputs.
pub fn bisecting_state(x: &PureState, y: &PureState) -> Result<PureState, QuantumError> {
    let alpha = overlap(x, y);
    if alpha <= CONSTRUCTION_TOL || alpha >= 1.0 - CONSTRUCTION_TOL {
        return Err(QuantumError::DegenerateBisection);
    }
    let ax = x.bloch_vector();
    let ay = y.bloch_vector();
    let sum = [ax[0] + ay[0], ax[1] + ay[1], ax[2] + ay[2]];
    let norm = (sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]).sqrt();
    let dir = [sum[0] / norm, sum[1] / norm, sum[2] / norm];
    let theta = dir[2].clamp(-1.0, 1.0).acos();
    let phi = if dir[0] == 0.0 && dir[1] == 0.0 {
        0.0
    } else {
        dir[1].atan2(dir[0])
    };
    Ok(PureState::from_bloch(theta, phi))
}

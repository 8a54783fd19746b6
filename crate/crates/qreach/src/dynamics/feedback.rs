//! Measurement-based feedback law steering the conditioned state toward a
//! target eigenstate.
//!
//! With Q = |ψ⟩⟨ψ| and fid = Tr(Qρ):
//!
//! 1. fid ≥ β:        u = −α Tr{i[H, ρ]Q}
//! 2. fid ≤ β/2:      u = α
//! 3. β/2 < fid < β:  branch 1 if the region was last entered through the
//!    fid = β boundary, branch 2 otherwise.
//!
//! The returned input is clamped to [−α, α]; for the qubit the commutator
//! expression already satisfies the bound on its own.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, PureState};

/// Gain/bound α, switching threshold β and the target state.
#[derive(Debug, Clone)]
pub struct FeedbackConfig {
    alpha: f64,
    beta: f64,
    target: PureState,
}

impl FeedbackConfig {
    pub fn new(alpha: f64, beta: f64, target: PureState) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                range: "(0, ∞)",
            });
        }
        if !(beta.is_finite() && beta > 0.0 && beta < 1.0) {
            return Err(Error::OutOfRange {
                name: "beta",
                value: beta,
                range: "(0, 1)",
            });
        }
        Ok(Self {
            alpha,
            beta,
            target,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn target(&self) -> &PureState {
        &self.target
    }
}

/// Two-valued switching memory: which boundary of the intermediate region
/// was crossed last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HysteresisState {
    /// Last left the fid ≥ β region (use the locking input inside the band).
    FromAbove,
    /// Last left the fid ≤ β/2 region, or never left it (use u = α).
    #[default]
    FromBelow,
}

/// Evaluates the feedback law for control Hamiltonian `hamiltonian`.
///
/// Returns the input and the updated switching state. |u| ≤ α always holds.
pub fn feedback_u(
    rho: &DensityMatrix,
    hamiltonian: &ComplexMatrix,
    cfg: &FeedbackConfig,
    state: HysteresisState,
) -> Result<(f64, HysteresisState)> {
    if rho.dim() != cfg.target.dim() || hamiltonian.dim() != cfg.target.dim() {
        return Err(Error::DimensionMismatch {
            expected: cfg.target.dim(),
            actual: rho.dim(),
        });
    }
    Ok(feedback_u_raw(rho.data(), hamiltonian.data(), cfg, state))
}

/// Feedback evaluation on raw arrays, used by the trajectory loop.
pub(crate) fn feedback_u_raw(
    rho: &ndarray::Array2<num_complex::Complex64>,
    hamiltonian: &ndarray::Array2<num_complex::Complex64>,
    cfg: &FeedbackConfig,
    state: HysteresisState,
) -> (f64, HysteresisState) {
    let fid = crate::dynamics::master::fidelity_raw(rho, &cfg.target);
    let locking =
        || locking_input_raw(rho, hamiltonian, &cfg.target, cfg.alpha).clamp(-cfg.alpha, cfg.alpha);

    if fid >= cfg.beta {
        (locking(), HysteresisState::FromAbove)
    } else if fid <= 0.5 * cfg.beta {
        (cfg.alpha, HysteresisState::FromBelow)
    } else {
        match state {
            HysteresisState::FromAbove => (locking(), state),
            HysteresisState::FromBelow => (cfg.alpha, state),
        }
    }
}

/// The locking branch −α Tr{i[H, ρ]Q} = 2α Im⟨ψ|Hρ|ψ⟩, unclamped.
pub(crate) fn locking_input_raw(
    rho: &ndarray::Array2<num_complex::Complex64>,
    hamiltonian: &ndarray::Array2<num_complex::Complex64>,
    target: &PureState,
    alpha: f64,
) -> f64 {
    let rho_psi = rho.dot(target.amplitudes());
    let h_rho_psi = hamiltonian.dot(&rho_psi);
    let overlap: num_complex::Complex64 = target
        .amplitudes()
        .iter()
        .zip(h_rho_psi.iter())
        .map(|(c, v)| c.conj() * v)
        .sum();
    2.0 * alpha * overlap.im
}

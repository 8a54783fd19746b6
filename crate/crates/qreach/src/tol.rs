//! Numerical tolerances used across the crate.
//!
//! Every threshold lives here so that validation logic, the bound engine and
//! the integrators agree on what "equal", "Hermitian" or "normalized" means.

/// Pure-state normalization: `|‖ψ‖² − 1|` must stay below this.
pub const NORM_TOL: f64 = 1e-12;

/// Hermiticity check for operators and density matrices (max entry deviation).
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Trace-one check for density matrices.
pub const TRACE_TOL: f64 = 1e-8;

/// Density matrices may carry eigenvalues down to `-POSITIVITY_TOL`.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Tracelessness of superoperator outputs (dissipator, measurement superop).
pub const SUPEROP_TRACE_TOL: f64 = 1e-12;

/// Spin-algebra identities (commutation relations, Casimir eigenvalues).
pub const SPIN_ALGEBRA_TOL: f64 = 1e-10;

/// A variance under a square root may round to a tiny negative number; values
/// above `-VARIANCE_CLAMP` are clamped to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

/// Below this, the noise gain `E` is treated as exactly zero and the bound is
/// reported as 0 (also avoids 0/0 for fully trivial systems).
pub const E_FLOOR: f64 = 1e-14;

/// Generic-engine vs closed-form agreement.
pub const DUAL_PATH_TOL: f64 = 1e-10;

/// Relaxed dual-path tolerance for truncated bosonic systems.
pub const DUAL_PATH_TOL_BOSONIC: f64 = 1e-9;

/// Population allowed in the guarded top Fock levels of a truncated-mode
/// computation before the truncation is considered leaky.
pub const TRUNCATION_POP_TOL: f64 = 1e-12;

/// Per-step trace drift allowed in the deterministic integrator before it
/// aborts with a diagnostic.
pub const TRACE_DRIFT_PER_STEP: f64 = 1e-10;

/// Hermiticity drift absorbed by per-step symmetrization.
pub const HERMITICITY_DRIFT_TOL: f64 = 1e-10;

/// Stochastic steps flag the state when its minimum eigenvalue falls below
/// `-SME_POSITIVITY_FLAG`.
pub const SME_POSITIVITY_FLAG: f64 = 1e-6;

/// Stored cost samples must lie in `[-J_SAMPLE_FLOOR, 1]`.
pub const J_SAMPLE_FLOOR: f64 = 1e-8;

/// Steady-state estimation window as a fraction of the final time.
pub const STEADY_STATE_WINDOW: f64 = 0.1;

/// |slope| of the ensemble-mean cost over the steady-state window above which
/// a run is reported as not converged (per unit time).
pub const CONVERGENCE_SLOPE_TOL: f64 = 5e-2;

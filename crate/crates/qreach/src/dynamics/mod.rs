//! Time evolution: deterministic master-equation integration, stochastic
//! trajectories conditioned on continuous measurement, and the feedback law
//! that steers trajectories toward a target eigenstate.

mod ensemble;
mod feedback;
mod master;
mod sme;

pub use ensemble::{
    simulate_feedback_ensemble, simulate_open_loop_ensemble, EnsembleDiagnostics,
    TrajectoryEnsemble,
};
pub use feedback::{feedback_u, FeedbackConfig, HysteresisState};
pub use master::{integrate_master, lindblad_rhs};
pub use sme::{sme_step, SmeStepOutcome};

use crate::error::{Error, Result};

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorMethod {
    /// Fixed-step classical 4th-order scheme for the deterministic equation.
    DeterministicRk4,
    /// Euler–Maruyama for the stochastic equation.
    EulerMaruyama,
}

/// Step-size, horizon and bookkeeping for a run. Times are in units of the
/// dominant rate (1/γ, or 1/κ when γ = 0).
#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_final: f64,
    pub method: IntegratorMethod,
    pub seed: u64,
    /// Renormalize the trace every this many steps.
    pub renormalize_every: usize,
    /// Record every this many steps (the initial state is always recorded).
    pub sample_every: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_final: f64, method: IntegratorMethod, seed: u64) -> Self {
        Self {
            dt,
            t_final,
            method,
            seed,
            renormalize_every: 1,
            sample_every: 1,
        }
    }

    pub fn with_sample_every(mut self, sample_every: usize) -> Self {
        self.sample_every = sample_every;
        self
    }

    pub fn with_renormalize_every(mut self, renormalize_every: usize) -> Self {
        self.renormalize_every = renormalize_every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt = {} must be > 0", self.dt)));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "t_final = {} must be > 0",
                self.t_final
            )));
        }
        if self.dt > self.t_final {
            return Err(Error::InvalidConfig(format!(
                "dt = {} exceeds t_final = {}",
                self.dt, self.t_final
            )));
        }
        if self.renormalize_every == 0 || self.sample_every == 0 {
            return Err(Error::InvalidConfig(
                "renormalize_every and sample_every must be ≥ 1".into(),
            ));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round().max(1.0) as usize
    }
}

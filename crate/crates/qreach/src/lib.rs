//! Reachability limits for controlled open quantum systems.
//!
//! Given a finite-dimensional Markovian system — decoherence channels {Lⱼ},
//! continuously monitored channels {Mⱼ} and bounded control Hamiltonians
//! {uⱼ(t) Hⱼ} — this crate computes a lower bound J* on the steady-state
//! infidelity 1 − ⟨ψ|ρ̄|ψ⟩ to any pure target |ψ⟩, directly from the
//! operators and without solving any equation.
//!
//! The crate is organized in four layers:
//!
//! - [`linalg`], [`operators`], [`states`]: dense complex linear algebra and
//!   the operator/state constructors (Pauli, collective spin, bosonic).
//! - [`bound`]: the generic engine computing A, U, E and J* = (E/(A+U))².
//! - [`closed_form`]: analytic expressions for the qubit, two-qubit,
//!   collective-spin, dephased-register and cavity systems; independent
//!   oracles for the engine.
//! - [`dynamics`]: master-equation and stochastic-trajectory integrators with
//!   a measurement-based feedback law, used to verify the bound dynamically.

pub mod bound;
pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod states;
pub mod systems;
pub mod tol;

pub use bound::{compute_a, compute_bound, compute_e, compute_u};
pub use bound::{BoundResult, HamiltonianTerm, SystemSpec, TruncationGuard};
pub use closed_form::OracleResult;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, PureState};

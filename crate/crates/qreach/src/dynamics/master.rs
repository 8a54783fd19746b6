//! Deterministic master-equation integration.
//!
//! dρ̄/dt = −i Σⱼ uⱼ(t) [Hⱼ, ρ̄] + Σⱼ D[Lⱼ]ρ̄ + Σⱼ D[Mⱼ]ρ̄
//!
//! integrated with a fixed-step classical 4th-order scheme. The right-hand
//! side is traceless and Hermiticity-preserving; the integrator symmetrizes
//! and renormalizes to keep floating-point drift from accumulating, and
//! aborts if the per-step trace drift exceeds tolerance.

use ndarray::Array2;
use num_complex::Complex64;

use crate::bound::SystemSpec;
use crate::dynamics::ensemble::{EnsembleDiagnostics, TrajectoryEnsemble};
use crate::dynamics::{IntegratorConfig, IntegratorMethod};
use crate::error::{Error, Result};
use crate::linalg::{dissipator_raw, ComplexMatrix, DensityMatrix, PureState};
use crate::tol;

/// Precomputed generator matrices for fast right-hand-side evaluation.
pub(crate) struct Generators {
    dim: usize,
    hamiltonians: Vec<HamTerm>,
    channels: Vec<Channel>,
    /// Indices into `channels` of the measurement operators (for H[M] terms).
    pub(crate) measurement_range: std::ops::Range<usize>,
}

struct HamTerm {
    matrix: Array2<Complex64>,
    u_max: f64,
    fixed: bool,
}

pub(crate) struct Channel {
    pub(crate) op: Array2<Complex64>,
    pub(crate) op_dag: Array2<Complex64>,
}

impl Generators {
    pub(crate) fn new(spec: &SystemSpec) -> Self {
        let hamiltonians = spec
            .hamiltonians()
            .iter()
            .map(|t| HamTerm {
                matrix: t.matrix().data().clone(),
                u_max: t.u_max(),
                fixed: t.is_fixed(),
            })
            .collect();
        let mut channels: Vec<Channel> = Vec::new();
        for op in spec.decoherence_ops() {
            channels.push(Channel {
                op: op.data().clone(),
                op_dag: crate::linalg::dagger(op).into_inner(),
            });
        }
        let m_start = channels.len();
        for op in spec.measurement_ops() {
            channels.push(Channel {
                op: op.data().clone(),
                op_dag: crate::linalg::dagger(op).into_inner(),
            });
        }
        let m_end = channels.len();
        Self {
            dim: spec.dim(),
            hamiltonians,
            channels,
            measurement_range: m_start..m_end,
        }
    }

    pub(crate) fn measurement_channels(&self) -> &[Channel] {
        &self.channels[self.measurement_range.clone()]
    }

    pub(crate) fn n_measurements(&self) -> usize {
        self.measurement_range.len()
    }

    pub(crate) fn n_controls(&self) -> usize {
        self.hamiltonians.len()
    }

    fn check_controls(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.hamiltonians.len() {
            return Err(Error::ControlCountMismatch {
                expected: self.hamiltonians.len(),
                actual: u.len(),
            });
        }
        for (index, (term, &value)) in self.hamiltonians.iter().zip(u.iter()).enumerate() {
            if !term.fixed && value.abs() > term.u_max + 1e-12 {
                return Err(Error::ControlBoundViolated {
                    index,
                    value,
                    bound: term.u_max,
                });
            }
        }
        Ok(())
    }

    /// Deterministic right-hand side at controls `u` (fixed terms use
    /// coefficient 1 and ignore their entry).
    pub(crate) fn rhs(&self, u: &[f64], rho: &Array2<Complex64>) -> Result<Array2<Complex64>> {
        self.check_controls(u)?;
        let mut out = Array2::<Complex64>::zeros((self.dim, self.dim));
        let minus_i = Complex64::new(0.0, -1.0);
        for (term, &value) in self.hamiltonians.iter().zip(u.iter()) {
            let coeff = if term.fixed { 1.0 } else { value };
            if coeff == 0.0 {
                continue;
            }
            let comm = &term.matrix.dot(rho) - &rho.dot(&term.matrix);
            out = out + comm.mapv(|z| z * minus_i * coeff);
        }
        for channel in &self.channels {
            out = out + dissipator_raw(&channel.op, &channel.op_dag, rho);
        }
        Ok(out)
    }
}

/// Right-hand side of the deterministic master equation at controls `u`.
pub fn lindblad_rhs(spec: &SystemSpec, u: &[f64], rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            actual: rho.dim(),
        });
    }
    let generators = Generators::new(spec);
    ComplexMatrix::new(generators.rhs(u, rho.data())?)
}

pub(crate) fn symmetrize_in_place(rho: &mut Array2<Complex64>) -> f64 {
    let n = rho.nrows();
    let mut drift: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let upper = rho[(i, j)];
            let lower = rho[(j, i)];
            drift = drift.max((upper - lower.conj()).norm());
            let avg = 0.5 * (upper + lower.conj());
            rho[(i, j)] = avg;
            rho[(j, i)] = avg.conj();
        }
    }
    drift
}

pub(crate) fn renormalize_trace(rho: &mut Array2<Complex64>) {
    let trace: Complex64 = rho.diag().sum();
    if trace.re != 0.0 {
        let inv = 1.0 / trace.re;
        rho.mapv_inplace(|z| z * inv);
    }
}

/// Integrates the deterministic master equation from `rho0`, recording the
/// cost 1 − ⟨ψ|ρ̄(t)|ψ⟩ against `target` on the configured sample grid.
///
/// Returns a single-trajectory ensemble. Aborts with a diagnostic if the
/// per-step trace drift exceeds [`tol::TRACE_DRIFT_PER_STEP`].
pub fn integrate_master(
    spec: &SystemSpec,
    target: &PureState,
    u_schedule: impl Fn(f64) -> Vec<f64>,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryEnsemble> {
    cfg.validate()?;
    if cfg.method != IntegratorMethod::DeterministicRk4 {
        return Err(Error::InvalidConfig(
            "integrate_master requires the deterministic 4th-order method".into(),
        ));
    }
    if rho0.dim() != spec.dim() || target.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            actual: rho0.dim().max(target.dim()),
        });
    }

    let generators = Generators::new(spec);
    let n_steps = cfg.n_steps();
    let dt = cfg.dt;
    let half = Complex64::new(0.5 * dt, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);

    let mut rho = rho0.data().clone();
    let mut times = Vec::with_capacity(n_steps / cfg.sample_every + 2);
    let mut samples = Vec::with_capacity(n_steps / cfg.sample_every + 2);
    let mut max_drift: f64 = 0.0;

    let record = |times: &mut Vec<f64>,
                  samples: &mut Vec<f64>,
                  t: f64,
                  rho: &Array2<Complex64>| {
        let fid = fidelity_raw(rho, target);
        times.push(t);
        samples.push((1.0 - fid).clamp(0.0, 1.0));
    };
    record(&mut times, &mut samples, 0.0, &rho);

    for step in 0..n_steps {
        let t = step as f64 * dt;
        let k1 = generators.rhs(&u_schedule(t), &rho)?;
        let mid1 = &rho + &k1.mapv(|z| z * half);
        let k2 = generators.rhs(&u_schedule(t + 0.5 * dt), &mid1)?;
        let mid2 = &rho + &k2.mapv(|z| z * half);
        let k3 = generators.rhs(&u_schedule(t + 0.5 * dt), &mid2)?;
        let end = &rho + &k3.mapv(|z| z * full);
        let k4 = generators.rhs(&u_schedule(t + dt), &end)?;
        rho = &rho + &(&(&k1 + &k4) + &(&k2 + &k3).mapv(|z| z * two)).mapv(|z| z * sixth);

        let trace: Complex64 = rho.diag().sum();
        let drift = (trace.re - 1.0).abs();
        if drift > tol::TRACE_DRIFT_PER_STEP {
            return Err(Error::StepInstability {
                t: t + dt,
                message: format!(
                    "trace drifted by {drift:e} in one step (dt = {dt}); reduce the step size"
                ),
            });
        }
        max_drift = max_drift.max(symmetrize_in_place(&mut rho));
        if (step + 1) % cfg.renormalize_every == 0 {
            renormalize_trace(&mut rho);
        }
        if (step + 1) % cfg.sample_every == 0 || step + 1 == n_steps {
            record(&mut times, &mut samples, (step + 1) as f64 * dt, &rho);
        }
    }

    let diagnostics = EnsembleDiagnostics {
        positivity_flags: 0,
        max_hermiticity_drift: max_drift,
    };
    Ok(TrajectoryEnsemble::from_trajectories(
        times,
        vec![samples],
        vec![cfg.seed],
        diagnostics,
    ))
}

pub(crate) fn fidelity_raw(rho: &Array2<Complex64>, psi: &PureState) -> f64 {
    let image = rho.dot(psi.amplitudes());
    psi.amplitudes()
        .iter()
        .zip(image.iter())
        .map(|(c, v)| (c.conj() * v).re)
        .sum()
}

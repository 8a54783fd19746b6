//! Trajectory ensembles with deterministic parallelism.
//!
//! Each trajectory owns an independent counter-based RNG stream derived from
//! the root seed, and the ensemble reduction is order-independent (pairwise
//! summation over the trajectory index), so results are bit-identical for
//! any worker count.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bound::SystemSpec;
use crate::dynamics::feedback::{feedback_u_raw, FeedbackConfig, HysteresisState};
use crate::dynamics::master::{fidelity_raw, Generators};
use crate::dynamics::sme::em_step_raw;
use crate::dynamics::{IntegratorConfig, IntegratorMethod};
use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, PureState};
use crate::tol;

/// A time grid with per-trajectory cost samples and their ensemble
/// statistics.
#[derive(Debug, Clone)]
pub struct TrajectoryEnsemble {
    times: Vec<f64>,
    trajectories: Vec<Vec<f64>>,
    mean: Vec<f64>,
    stderr: Vec<f64>,
    seeds: Vec<u64>,
    diagnostics: EnsembleDiagnostics,
}

/// Counters surfaced from the integrators; informational, not errors.
#[derive(Debug, Clone, Copy, Default)]
pub struct EnsembleDiagnostics {
    /// Steps whose post-step state had an eigenvalue below the flag
    /// threshold, summed over trajectories.
    pub positivity_flags: usize,
    /// Largest Hermiticity deviation absorbed by per-step symmetrization.
    pub max_hermiticity_drift: f64,
}

/// Steady-state summary over the final window of a run.
#[derive(Debug, Clone, Copy)]
pub struct SteadyStateEstimate {
    pub j_inf: f64,
    pub stderr: f64,
    /// Least-squares slope of the ensemble mean over the window.
    pub slope: f64,
    pub converged: bool,
    pub window_start: f64,
}

impl TrajectoryEnsemble {
    pub(crate) fn from_trajectories(
        times: Vec<f64>,
        trajectories: Vec<Vec<f64>>,
        seeds: Vec<u64>,
        diagnostics: EnsembleDiagnostics,
    ) -> Self {
        let n_traj = trajectories.len();
        let n_times = times.len();
        let mut mean = Vec::with_capacity(n_times);
        let mut stderr = Vec::with_capacity(n_times);
        let mut scratch = vec![0.0; n_traj];
        for i in 0..n_times {
            for (k, traj) in trajectories.iter().enumerate() {
                scratch[k] = traj[i];
            }
            let m = pairwise_sum(&scratch) / n_traj as f64;
            mean.push(m);
            if n_traj > 1 {
                let mut devs = vec![0.0; n_traj];
                for (k, traj) in trajectories.iter().enumerate() {
                    let d = traj[i] - m;
                    devs[k] = d * d;
                }
                let var = pairwise_sum(&devs) / (n_traj - 1) as f64;
                stderr.push((var / n_traj as f64).sqrt());
            } else {
                stderr.push(0.0);
            }
        }
        Self {
            times,
            trajectories,
            mean,
            stderr,
            seeds,
            diagnostics,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn trajectories(&self) -> &[Vec<f64>] {
        &self.trajectories
    }

    pub fn n_trajectories(&self) -> usize {
        self.trajectories.len()
    }

    /// Ensemble mean of the cost at each grid time.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Standard error of the ensemble mean at each grid time.
    pub fn stderr(&self) -> &[f64] {
        &self.stderr
    }

    /// Per-trajectory RNG stream identifiers.
    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    pub fn diagnostics(&self) -> &EnsembleDiagnostics {
        &self.diagnostics
    }

    /// Steady-state estimate over the final [`tol::STEADY_STATE_WINDOW`]
    /// fraction of the time grid: per-trajectory window means, averaged
    /// across trajectories, with the slope of the ensemble mean as the
    /// convergence diagnostic.
    pub fn steady_state(&self) -> SteadyStateEstimate {
        let t_final = *self.times.last().expect("non-empty grid");
        let window_start = t_final * (1.0 - tol::STEADY_STATE_WINDOW);
        let first = self
            .times
            .iter()
            .position(|&t| t >= window_start)
            .unwrap_or(self.times.len() - 1);

        let window_means: Vec<f64> = self
            .trajectories
            .iter()
            .map(|traj| {
                let window = &traj[first..];
                pairwise_sum(window) / window.len() as f64
            })
            .collect();
        let n = window_means.len();
        let j_inf = pairwise_sum(&window_means) / n as f64;
        let stderr = if n > 1 {
            let devs: Vec<f64> = window_means.iter().map(|w| (w - j_inf) * (w - j_inf)).collect();
            (pairwise_sum(&devs) / ((n - 1) as f64) / n as f64).sqrt()
        } else {
            0.0
        };

        let slope = least_squares_slope(&self.times[first..], &self.mean[first..]);
        SteadyStateEstimate {
            j_inf,
            stderr,
            slope,
            converged: slope.abs() <= tol::CONVERGENCE_SLOPE_TOL,
            window_start,
        }
    }
}

/// Order-stable pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn least_squares_slope(ts: &[f64], ys: &[f64]) -> f64 {
    let n = ts.len() as f64;
    if ts.len() < 2 {
        return 0.0;
    }
    let t_mean = ts.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&t, &y) in ts.iter().zip(ys.iter()) {
        num += (t - t_mean) * (y - y_mean);
        den += (t - t_mean) * (t - t_mean);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

enum ControlPolicy<'a> {
    OpenLoop(&'a [f64]),
    Feedback {
        cfg: &'a FeedbackConfig,
        hamiltonian: Array2<Complex64>,
        index: usize,
        clamp: f64,
    },
}

/// Stochastic ensemble under constant open-loop controls.
pub fn simulate_open_loop_ensemble(
    spec: &SystemSpec,
    target: &PureState,
    u_const: &[f64],
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
    n_traj: usize,
) -> Result<TrajectoryEnsemble> {
    run_ensemble(
        spec,
        target,
        ControlPolicy::OpenLoop(u_const),
        rho0,
        cfg,
        n_traj,
    )
}

/// Stochastic ensemble driven by the measurement-based feedback law.
///
/// The system must carry exactly one controlled Hamiltonian term, whose
/// control bound must admit the feedback gain (ū ≥ α).
pub fn simulate_feedback_ensemble(
    spec: &SystemSpec,
    fb: &FeedbackConfig,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
    n_traj: usize,
) -> Result<TrajectoryEnsemble> {
    let controlled: Vec<usize> = spec
        .hamiltonians()
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_fixed())
        .map(|(i, _)| i)
        .collect();
    let [index] = controlled.as_slice() else {
        return Err(Error::InvalidConfig(format!(
            "feedback needs exactly one controlled Hamiltonian term, found {}",
            controlled.len()
        )));
    };
    let term = &spec.hamiltonians()[*index];
    if fb.alpha() > term.u_max() + 1e-12 {
        return Err(Error::InvalidConfig(format!(
            "feedback gain α = {} exceeds the control bound ū = {}",
            fb.alpha(),
            term.u_max()
        )));
    }
    let policy = ControlPolicy::Feedback {
        cfg: fb,
        hamiltonian: term.matrix().data().clone(),
        index: *index,
        clamp: fb.alpha().min(term.u_max()),
    };
    run_ensemble(spec, fb.target(), policy, rho0, cfg, n_traj)
}

fn run_ensemble(
    spec: &SystemSpec,
    target: &PureState,
    policy: ControlPolicy<'_>,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
    n_traj: usize,
) -> Result<TrajectoryEnsemble> {
    cfg.validate()?;
    if cfg.method != IntegratorMethod::EulerMaruyama {
        return Err(Error::InvalidConfig(
            "stochastic ensembles require the Euler–Maruyama method".into(),
        ));
    }
    if n_traj == 0 {
        return Err(Error::InvalidConfig("n_traj must be ≥ 1".into()));
    }
    if rho0.dim() != spec.dim() || target.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            actual: rho0.dim().max(target.dim()),
        });
    }

    let generators = Generators::new(spec);
    // Validate the control vector once up front so per-step errors cannot
    // appear midway through a long run.
    match &policy {
        ControlPolicy::OpenLoop(u) => {
            generators.rhs(u, rho0.data())?;
        }
        ControlPolicy::Feedback { index, .. } => {
            let mut probe = vec![0.0; spec.hamiltonians().len()];
            probe[*index] = 0.0;
            generators.rhs(&probe, rho0.data())?;
        }
    }

    let results: Vec<Result<(Vec<f64>, usize, f64)>> = (0..n_traj)
        .into_par_iter()
        .map(|stream| {
            run_trajectory(
                &generators,
                target,
                &policy,
                rho0.data(),
                cfg,
                stream as u64,
            )
        })
        .collect();

    let mut trajectories = Vec::with_capacity(n_traj);
    let mut diagnostics = EnsembleDiagnostics::default();
    for r in results {
        let (samples, flags, drift) = r?;
        diagnostics.positivity_flags += flags;
        diagnostics.max_hermiticity_drift = diagnostics.max_hermiticity_drift.max(drift);
        trajectories.push(samples);
    }

    let times = sample_times(cfg);
    let seeds = (0..n_traj as u64).collect();
    Ok(TrajectoryEnsemble::from_trajectories(
        times,
        trajectories,
        seeds,
        diagnostics,
    ))
}

fn sample_times(cfg: &IntegratorConfig) -> Vec<f64> {
    let n_steps = cfg.n_steps();
    let mut times = vec![0.0];
    for step in 1..=n_steps {
        if step % cfg.sample_every == 0 || step == n_steps {
            times.push(step as f64 * cfg.dt);
        }
    }
    times
}

fn run_trajectory(
    generators: &Generators,
    target: &PureState,
    policy: &ControlPolicy<'_>,
    rho0: &Array2<Complex64>,
    cfg: &IntegratorConfig,
    stream: u64,
) -> Result<(Vec<f64>, usize, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);

    let n_steps = cfg.n_steps();
    let n_noise = generators.n_measurements();
    let dt = cfg.dt;
    let sqrt_dt = dt.sqrt();

    let mut rho = rho0.clone();
    let mut u = match policy {
        ControlPolicy::OpenLoop(u) => u.to_vec(),
        ControlPolicy::Feedback { .. } => vec![0.0; generators_controls_len(generators)],
    };
    let mut hysteresis = HysteresisState::default();
    let mut dw = vec![0.0; n_noise];
    let mut samples = Vec::with_capacity(n_steps / cfg.sample_every + 2);
    let mut flags = 0usize;
    let mut max_drift: f64 = 0.0;

    samples.push(cost_sample(&rho, target));
    for step in 0..n_steps {
        if let ControlPolicy::Feedback {
            cfg: fb,
            hamiltonian,
            index,
            clamp,
        } = policy
        {
            let (value, next) = feedback_u_raw(&rho, hamiltonian, fb, hysteresis);
            hysteresis = next;
            u[*index] = value.clamp(-clamp, *clamp);
        }
        for w in dw.iter_mut() {
            let normal: f64 = rng.sample(StandardNormal);
            *w = normal * sqrt_dt;
        }
        let (flagged, drift) = em_step_raw(generators, &u, &mut rho, &dw, dt)?;
        if flagged {
            flags += 1;
        }
        max_drift = max_drift.max(drift);
        if (step + 1) % cfg.sample_every == 0 || step + 1 == n_steps {
            samples.push(cost_sample(&rho, target));
        }
    }
    Ok((samples, flags, max_drift))
}

fn generators_controls_len(generators: &Generators) -> usize {
    generators.n_controls()
}

fn cost_sample(rho: &Array2<Complex64>, target: &PureState) -> f64 {
    (1.0 - fidelity_raw(rho, target)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::qubit_target;
    use crate::systems::qubit_system;

    fn em_cfg(seed: u64) -> IntegratorConfig {
        IntegratorConfig::new(1e-3, 0.5, IntegratorMethod::EulerMaruyama, seed)
            .with_sample_every(50)
    }

    #[test]
    fn fixed_seed_reproduces_bitwise() {
        let spec = qubit_system(1.0, 1.0, 0.0).unwrap();
        let target = qubit_target(0.0, 0.0).unwrap();
        let rho0 = DensityMatrix::from_pure(&qubit_target(0.8, 0.0).unwrap());
        let a =
            simulate_open_loop_ensemble(&spec, &target, &[0.0], &rho0, &em_cfg(7), 4).unwrap();
        let b =
            simulate_open_loop_ensemble(&spec, &target, &[0.0], &rho0, &em_cfg(7), 4).unwrap();
        assert_eq!(a.trajectories(), b.trajectories());
        let c =
            simulate_open_loop_ensemble(&spec, &target, &[0.0], &rho0, &em_cfg(8), 4).unwrap();
        assert_ne!(a.trajectories(), c.trajectories());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let spec = qubit_system(1.0, 1.0, 0.0).unwrap();
        let target = qubit_target(0.0, 0.0).unwrap();
        let rho0 = DensityMatrix::from_pure(&qubit_target(0.8, 0.0).unwrap());
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| {
                simulate_open_loop_ensemble(&spec, &target, &[0.0], &rho0, &em_cfg(7), 6)
                    .unwrap()
            });
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| {
                simulate_open_loop_ensemble(&spec, &target, &[0.0], &rho0, &em_cfg(7), 6)
                    .unwrap()
            });
        assert_eq!(single.trajectories(), many.trajectories());
        assert_eq!(single.mean(), many.mean());
    }

    #[test]
    fn samples_stay_in_range() {
        let spec = qubit_system(1.0, 1.0, 0.0).unwrap();
        let target = qubit_target(0.0, 0.0).unwrap();
        let rho0 = DensityMatrix::from_pure(&qubit_target(0.4, 0.0).unwrap());
        let run =
            simulate_open_loop_ensemble(&spec, &target, &[0.0], &rho0, &em_cfg(3), 8).unwrap();
        for traj in run.trajectories() {
            for &j in traj {
                assert!((-tol::J_SAMPLE_FLOOR..=1.0).contains(&j));
            }
        }
        // Mean and stderr recompute consistently from the stored samples.
        for (i, &m) in run.mean().iter().enumerate() {
            let direct: f64 =
                run.trajectories().iter().map(|t| t[i]).sum::<f64>() / run.n_trajectories() as f64;
            assert!((m - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }
}

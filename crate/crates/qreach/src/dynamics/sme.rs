//! Euler–Maruyama steps of the stochastic master equation
//!
//! dρ = −i Σⱼ uⱼ[Hⱼ, ρ]dt + Σⱼ D[Lⱼ]ρ dt + Σⱼ D[Mⱼ]ρ dt + Σⱼ H[Mⱼ]ρ dWⱼ
//!
//! with one independent Wiener increment per measurement channel (the
//! standard diffusive unraveling). The innovation dW = dy − Tr[(M+M†)ρ]dt is
//! simulated directly as the Wiener increment.
//!
//! Each step symmetrizes and trace-renormalizes the state. Positivity is not
//! repaired: a step whose minimum eigenvalue falls below the flag threshold
//! is counted and surfaced in the diagnostics.

use ndarray::Array2;
use num_complex::Complex64;

use crate::bound::SystemSpec;
use crate::dynamics::master::{renormalize_trace, symmetrize_in_place, Generators};
use crate::error::{Error, Result};
use crate::linalg::{h_superop_raw, min_hermitian_eigenvalue, DensityMatrix};
use crate::tol;

/// Result of one stochastic step.
#[derive(Debug, Clone)]
pub struct SmeStepOutcome {
    pub rho: DensityMatrix,
    /// Set when the post-step state had an eigenvalue below the flag
    /// threshold. The state is returned as-is.
    pub positivity_flagged: bool,
}

/// Advances the conditioned state by one Euler–Maruyama step.
///
/// `dw` carries one Wiener increment (of variance `dt`) per measurement
/// channel; with no measurement channels this reduces to a deterministic
/// Euler step.
pub fn sme_step(
    spec: &SystemSpec,
    u: &[f64],
    rho: &DensityMatrix,
    dw: &[f64],
    dt: f64,
) -> Result<SmeStepOutcome> {
    if rho.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            actual: rho.dim(),
        });
    }
    let generators = Generators::new(spec);
    let mut state = rho.data().clone();
    let (flagged, _) = em_step_raw(&generators, u, &mut state, dw, dt)?;
    Ok(SmeStepOutcome {
        rho: DensityMatrix::from_raw_unchecked(state),
        positivity_flagged: flagged,
    })
}

/// In-place Euler–Maruyama step on a raw state. Returns the positivity flag
/// and the Hermiticity drift absorbed by symmetrization.
pub(crate) fn em_step_raw(
    generators: &Generators,
    u: &[f64],
    rho: &mut Array2<Complex64>,
    dw: &[f64],
    dt: f64,
) -> Result<(bool, f64)> {
    if dw.len() != generators.n_measurements() {
        return Err(Error::ControlCountMismatch {
            expected: generators.n_measurements(),
            actual: dw.len(),
        });
    }
    let drift = generators.rhs(u, rho)?;
    let mut next = &*rho + &drift.mapv(|z| z * Complex64::new(dt, 0.0));
    for (channel, &increment) in generators.measurement_channels().iter().zip(dw.iter()) {
        if increment == 0.0 {
            continue;
        }
        let kick = h_superop_raw(&channel.op, &channel.op_dag, rho);
        next = next + kick.mapv(|z| z * Complex64::new(increment, 0.0));
    }
    let herm_drift = symmetrize_in_place(&mut next);
    renormalize_trace(&mut next);
    let flagged = positivity_flag(&next);
    *rho = next;
    Ok((flagged, herm_drift))
}

/// Cheap Gershgorin prefilter; exact minimum eigenvalue only when the disc
/// bound cannot rule out a violation.
fn positivity_flag(rho: &Array2<Complex64>) -> bool {
    let n = rho.nrows();
    let mut gershgorin = f64::INFINITY;
    for i in 0..n {
        let radius: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| rho[(i, j)].norm())
            .sum();
        gershgorin = gershgorin.min(rho[(i, i)].re - radius);
    }
    if gershgorin >= -tol::SME_POSITIVITY_FLAG {
        return false;
    }
    min_hermitian_eigenvalue(rho) < -tol::SME_POSITIVITY_FLAG
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PureState;
    use crate::states::qubit_target;
    use crate::systems::qubit_system;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reduces_to_deterministic_without_measurements() {
        let gamma = 1.0;
        let spec = qubit_system(0.0, gamma, 0.0).unwrap();
        let rho = DensityMatrix::from_pure(&qubit_target(0.0, 0.0).unwrap());
        let dt = 1e-3;
        // κ = 0 keeps a measurement channel of zero amplitude; a zero
        // increment makes the step exactly the Euler drift step.
        let out = sme_step(&spec, &[0.0], &rho, &[0.0], dt).unwrap();
        let expected_ee = 1.0 - gamma * dt;
        assert_abs_diff_eq!(out.rho.data()[(0, 0)].re, expected_ee, epsilon = 1e-12);
        assert!(!out.positivity_flagged);
    }

    #[test]
    fn eigenstate_of_measurement_is_fixed() {
        // ρ = |e⟩⟨e| with M ∝ σz, L = 0, u = 0: fixed point of both D[M]
        // and H[M] for any increment.
        let spec = qubit_system(1.0, 0.0, 0.0).unwrap();
        let rho = DensityMatrix::from_pure(&qubit_target(0.0, 0.0).unwrap());
        let out = sme_step(&spec, &[0.0], &rho, &[0.37], 1e-3).unwrap();
        let diff: f64 = out
            .rho
            .data()
            .iter()
            .zip(rho.data().iter())
            .map(|(a, b)| (a - b).norm())
            .sum();
        assert!(diff < 1e-14);
    }

    #[test]
    fn trace_is_renormalized() {
        let spec = qubit_system(1.0, 1.0, 0.0).unwrap();
        let rho = DensityMatrix::from_pure(&qubit_target(0.7, 0.3).unwrap());
        let out = sme_step(&spec, &[0.0], &rho, &[0.05], 1e-3).unwrap();
        assert_abs_diff_eq!(out.rho.trace(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn wrong_noise_count_rejected() {
        let spec = qubit_system(1.0, 1.0, 0.0).unwrap();
        let rho = DensityMatrix::from_pure(&qubit_target(0.0, 0.0).unwrap());
        assert!(sme_step(&spec, &[0.0], &rho, &[], 1e-3).is_err());
    }

    #[test]
    fn large_kick_near_pure_state_is_flagged() {
        // A crafted state with a strong coherence plus a large increment
        // drives an eigenvalue visibly negative.
        let spec = qubit_system(1.0, 0.0, 0.0).unwrap();
        let psi = PureState::normalized(ndarray::array![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0)
        ])
        .unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let out = sme_step(&spec, &[0.0], &rho, &[0.2], 1e-3).unwrap();
        assert!(out.positivity_flagged);
        assert!(out.rho.min_eigenvalue() < -tol::SME_POSITIVITY_FLAG);
    }
}

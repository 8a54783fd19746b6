//! The reachability bound engine.
//!
//! For a system with decoherence channels {Lⱼ}, measurement channels {Mⱼ}
//! and bounded control Hamiltonians {Hⱼ}, the steady-state infidelity to a
//! target |ψ⟩ is bounded below by J* = (E/(A+U))², where
//!
//! ```text
//! A = √2 Σⱼ (‖Lⱼ†ψ‖² + ‖Lⱼ†Lⱼψ‖) + √2 Σⱼ (‖Mⱼ†ψ‖² + ‖Mⱼ†Mⱼψ‖)
//! U = Σⱼ 2ūⱼ √(⟨ψ|Hⱼ²|ψ⟩ − ⟨ψ|Hⱼ|ψ⟩²)      (fixed terms use 2 instead of 2ūⱼ)
//! E = Σⱼ (‖Lⱼψ‖² − |⟨ψ|Lⱼψ⟩|²) + Σⱼ (‖Mⱼψ‖² − |⟨ψ|Mⱼψ⟩|²)
//! ```
//!
//! Everything is directly computable from the operators and the target; no
//! equation is solved.

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dagger, ComplexMatrix, PureState};
use crate::tol;

/// One Hamiltonian term: either a controlled term `u_t H` with |u_t| ≤ u_max,
/// or a fixed drift term with unit coefficient.
#[derive(Debug, Clone)]
pub struct HamiltonianTerm {
    matrix: ComplexMatrix,
    u_max: f64,
    fixed: bool,
}

impl HamiltonianTerm {
    /// A controlled term with control amplitude bounded by `u_max ≥ 0`.
    pub fn controlled(matrix: ComplexMatrix, u_max: f64) -> Result<Self> {
        if !(u_max.is_finite() && u_max >= 0.0) {
            return Err(Error::OutOfRange {
                name: "u_max",
                value: u_max,
                range: "[0, ∞)",
            });
        }
        Self::build(matrix, u_max, false)
    }

    /// A fixed drift term (coefficient 1, no control).
    pub fn fixed(matrix: ComplexMatrix) -> Result<Self> {
        Self::build(matrix, 0.0, true)
    }

    fn build(matrix: ComplexMatrix, u_max: f64, fixed: bool) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > tol::HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol::HERMITICITY_TOL,
            });
        }
        Ok(Self {
            matrix,
            u_max,
            fixed,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn is_fixed(&self) -> bool {
        self.fixed
    }

    /// The coefficient entering U: 2ū for controlled terms, 2 for fixed ones.
    fn u_coefficient(&self) -> f64 {
        if self.fixed {
            2.0
        } else {
            2.0 * self.u_max
        }
    }
}

/// Leak detection for truncated bosonic modes: the top `levels` basis states
/// of the target, and the top level of every intermediate vector the engine
/// forms, must stay essentially unpopulated.
#[derive(Debug, Clone, Copy)]
pub struct TruncationGuard {
    pub levels: usize,
    pub max_population: f64,
}

impl Default for TruncationGuard {
    fn default() -> Self {
        Self {
            levels: 2,
            max_population: tol::TRUNCATION_POP_TOL,
        }
    }
}

/// A full problem instance: control Hamiltonians, decoherence channels and
/// measurement channels, all on the same Hilbert space.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    dim: usize,
    hamiltonians: Vec<HamiltonianTerm>,
    decoherence_ops: Vec<ComplexMatrix>,
    measurement_ops: Vec<ComplexMatrix>,
    truncation_guard: Option<TruncationGuard>,
}

impl SystemSpec {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            hamiltonians: Vec::new(),
            decoherence_ops: Vec::new(),
            measurement_ops: Vec::new(),
            truncation_guard: None,
        }
    }

    pub fn with_hamiltonian(mut self, term: HamiltonianTerm) -> Result<Self> {
        self.check_dim(term.matrix.dim())?;
        self.hamiltonians.push(term);
        Ok(self)
    }

    pub fn with_decoherence(mut self, op: ComplexMatrix) -> Result<Self> {
        self.check_dim(op.dim())?;
        self.decoherence_ops.push(op);
        Ok(self)
    }

    pub fn with_measurement(mut self, op: ComplexMatrix) -> Result<Self> {
        self.check_dim(op.dim())?;
        self.measurement_ops.push(op);
        Ok(self)
    }

    pub fn with_truncation_guard(mut self, guard: TruncationGuard) -> Self {
        self.truncation_guard = Some(guard);
        self
    }

    fn check_dim(&self, actual: usize) -> Result<()> {
        if actual != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual,
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonians(&self) -> &[HamiltonianTerm] {
        &self.hamiltonians
    }

    pub fn decoherence_ops(&self) -> &[ComplexMatrix] {
        &self.decoherence_ops
    }

    pub fn measurement_ops(&self) -> &[ComplexMatrix] {
        &self.measurement_ops
    }

    pub fn truncation_guard(&self) -> Option<&TruncationGuard> {
        self.truncation_guard.as_ref()
    }

    /// The control magnitudes ūⱼ of the non-fixed terms, in order.
    pub fn control_bounds(&self) -> Vec<f64> {
        self.hamiltonians
            .iter()
            .map(|t| if t.fixed { f64::INFINITY } else { t.u_max })
            .collect()
    }

    fn check_target(&self, psi: &PureState) -> Result<()> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: psi.dim(),
            });
        }
        let norm = psi.norm();
        if (norm * norm - 1.0).abs() > tol::NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sq: norm * norm,
            });
        }
        if let Some(guard) = &self.truncation_guard {
            guard_population(psi.amplitudes(), guard.levels, guard.max_population)?;
        }
        Ok(())
    }

    fn guard_intermediate(&self, v: &Array1<Complex64>) -> Result<()> {
        if let Some(guard) = &self.truncation_guard {
            // One ladder application may populate one extra level, so
            // intermediates are only required to keep the top level clean.
            guard_population(v, 1, guard.max_population)?;
        }
        Ok(())
    }
}

fn guard_population(v: &Array1<Complex64>, levels: usize, max_population: f64) -> Result<()> {
    let n = v.len();
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 || levels == 0 {
        return Ok(());
    }
    let top: f64 = (n.saturating_sub(levels)..n).map(|i| v[i].norm_sqr()).sum();
    let population = top / total;
    if population > max_population {
        return Err(Error::TruncationLeak { population });
    }
    Ok(())
}

/// The computed bound and its three ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub a_val: f64,
    pub u_val: f64,
    pub e_val: f64,
    pub j_star: f64,
}

/// Shared rule mapping (A, U, E) to J*; also used by the closed forms.
pub(crate) fn j_star_from(a_val: f64, u_val: f64, e_val: f64) -> f64 {
    if e_val <= tol::E_FLOOR {
        return 0.0;
    }
    let ratio = e_val / (a_val + u_val);
    (ratio * ratio).min(1.0)
}

fn norm_sq(v: &Array1<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn inner(a: &Array1<Complex64>, b: &Array1<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// The decoherence-strength term A.
pub fn compute_a(spec: &SystemSpec, psi: &PureState) -> Result<f64> {
    spec.check_target(psi)?;
    let mut sum = 0.0;
    for op in spec
        .decoherence_ops()
        .iter()
        .chain(spec.measurement_ops().iter())
    {
        let op_dag = dagger(op);
        let image = op.apply(psi)?;
        spec.guard_intermediate(&image)?;
        let dag_image = op_dag.apply(psi)?;
        spec.guard_intermediate(&dag_image)?;
        let dag_op_image = op_dag.apply_raw(&image);
        spec.guard_intermediate(&dag_op_image)?;
        sum += norm_sq(&dag_image) + norm_sq(&dag_op_image).sqrt();
    }
    Ok(std::f64::consts::SQRT_2 * sum)
}

/// The control-strength term U.
pub fn compute_u(spec: &SystemSpec, psi: &PureState) -> Result<f64> {
    spec.check_target(psi)?;
    let mut sum = 0.0;
    for term in spec.hamiltonians() {
        let image = term.matrix().apply(psi)?;
        spec.guard_intermediate(&image)?;
        // H is Hermitian, so ⟨H²⟩ = ‖Hψ‖² and ⟨H⟩ is real.
        let second_moment = norm_sq(&image);
        let mean = inner(psi.amplitudes(), &image).re;
        let mut variance = second_moment - mean * mean;
        if variance < 0.0 {
            if variance < -tol::VARIANCE_CLAMP {
                return Err(Error::DegenerateInput(format!(
                    "variance of a Hamiltonian term evaluated to {variance:e}"
                )));
            }
            variance = 0.0;
        }
        sum += term.u_coefficient() * variance.sqrt();
    }
    Ok(sum)
}

/// The noise-gain term E.
pub fn compute_e(spec: &SystemSpec, psi: &PureState) -> Result<f64> {
    spec.check_target(psi)?;
    let mut sum = 0.0;
    for op in spec
        .decoherence_ops()
        .iter()
        .chain(spec.measurement_ops().iter())
    {
        let image = op.apply(psi)?;
        spec.guard_intermediate(&image)?;
        let mean = inner(psi.amplitudes(), &image);
        sum += norm_sq(&image) - mean.norm_sqr();
    }
    Ok(sum)
}

/// Evaluates A, U, E and the bound J* = (E/(A+U))².
///
/// When E is numerically zero (the target is a common eigenvector of every
/// channel) the bound is reported as exactly 0.
pub fn compute_bound(spec: &SystemSpec, psi: &PureState) -> Result<BoundResult> {
    let a_val = compute_a(spec, psi)?;
    let u_val = compute_u(spec, psi)?;
    let e_val = compute_e(spec, psi)?;
    Ok(BoundResult {
        a_val,
        u_val,
        e_val,
        j_star: j_star_from(a_val, u_val, e_val),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{number_operator, sigma_minus, sigma_y, sigma_z, spin_operators};
    use crate::states::{dicke_state, fock_state, qubit_target};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn qubit_spec(kappa: f64, gamma: f64, ubar: f64) -> SystemSpec {
        SystemSpec::new(2)
            .with_hamiltonian(HamiltonianTerm::controlled(sigma_y(), ubar).unwrap())
            .unwrap()
            .with_decoherence(sigma_minus().scale(re(gamma.sqrt())))
            .unwrap()
            .with_measurement(sigma_z().scale(re(kappa.sqrt())))
            .unwrap()
    }

    #[test]
    fn a_matches_qubit_closed_form() {
        let (kappa, gamma): (f64, f64) = (0.7, 1.3);
        let spec = qubit_spec(kappa, gamma, 0.0);
        for k in 0..20 {
            let theta = k as f64 * std::f64::consts::FRAC_PI_2 / 19.0;
            let psi = qubit_target(theta, 0.0).unwrap();
            let a = compute_a(&spec, &psi).unwrap();
            let expected = std::f64::consts::SQRT_2
                * (2.0 * kappa + gamma * theta.sin().powi(2) + gamma * theta.cos());
            assert_abs_diff_eq!(a, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn empty_spec_gives_zero() {
        let spec = SystemSpec::new(2);
        let psi = qubit_target(0.3, 0.0).unwrap();
        let result = compute_bound(&spec, &psi).unwrap();
        assert_eq!(result.a_val, 0.0);
        assert_eq!(result.u_val, 0.0);
        assert_eq!(result.e_val, 0.0);
        assert_eq!(result.j_star, 0.0);
    }

    #[test]
    fn a_matches_dicke_closed_form() {
        let (l, kappa, gamma): (f64, f64, f64) = (10.0, 0.8, 1.1);
        let ops = spin_operators(l).unwrap();
        let spec = SystemSpec::new(21)
            .with_decoherence(ops.jminus.scale(re(gamma.sqrt())))
            .unwrap()
            .with_measurement(ops.jz.scale(re(kappa.sqrt())))
            .unwrap();
        for m in [-10.0, -3.0, 0.0, 4.0, 10.0] {
            let psi = dicke_state(l, m).unwrap();
            let a = compute_a(&spec, &psi).unwrap();
            let expected = std::f64::consts::SQRT_2
                * (2.0 * kappa * m * m + 2.0 * gamma * (l * l + l - m * m));
            assert_abs_diff_eq!(a, expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn u_matches_qubit_closed_form() {
        let ubar = 1.7;
        let spec = qubit_spec(0.0, 0.0, ubar);
        for (theta, phi) in [(0.3, 0.0), (0.7, 1.1), (1.2, 4.0)] {
            let psi = qubit_target(theta, phi).unwrap();
            let u = compute_u(&spec, &psi).unwrap();
            let s = (2.0 * theta).sin() * phi.sin();
            assert_abs_diff_eq!(u, 2.0 * ubar * (1.0 - s * s).sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn u_is_zero_without_control() {
        let spec = qubit_spec(1.0, 1.0, 0.0);
        let psi = qubit_target(0.5, 0.2).unwrap();
        assert_eq!(compute_u(&spec, &psi).unwrap(), 0.0);
    }

    #[test]
    fn u_matches_dicke_closed_form() {
        let (l, ubar) = (6.0, 0.9);
        let ops = spin_operators(l).unwrap();
        let spec = SystemSpec::new(13)
            .with_hamiltonian(HamiltonianTerm::controlled(ops.jy.clone(), ubar).unwrap())
            .unwrap();
        for m in [-6.0, -1.0, 0.0, 2.0, 6.0] {
            let psi = dicke_state(l, m).unwrap();
            let u = compute_u(&spec, &psi).unwrap();
            let expected = std::f64::consts::SQRT_2 * ubar * (l * l + l - m * m).sqrt();
            assert_abs_diff_eq!(u, expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn fixed_term_uses_unit_coefficient() {
        let spec = SystemSpec::new(2)
            .with_hamiltonian(HamiltonianTerm::fixed(sigma_y()).unwrap())
            .unwrap();
        let psi = qubit_target(0.4, 0.0).unwrap();
        // Same variance as the controlled case with ū = 1.
        assert_abs_diff_eq!(compute_u(&spec, &psi).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn e_matches_qubit_closed_form() {
        let (kappa, gamma): (f64, f64) = (0.6, 1.4);
        let spec = qubit_spec(kappa, gamma, 2.0);
        for theta in [0.0, 0.3, 0.9, std::f64::consts::FRAC_PI_2] {
            let psi = qubit_target(theta, 0.0).unwrap();
            let e = compute_e(&spec, &psi).unwrap();
            let expected =
                kappa * (2.0 * theta).sin().powi(2) + gamma * theta.cos().powi(4);
            assert_abs_diff_eq!(e, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn e_vanishes_on_dark_state() {
        let spec = SystemSpec::new(2)
            .with_decoherence(sigma_minus().scale(re(1.3f64.sqrt())))
            .unwrap();
        let ground = qubit_target(std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        assert_abs_diff_eq!(compute_e(&spec, &ground).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn e_for_fock_target() {
        let (kappa, gamma): (f64, f64) = (0.9, 1.2);
        let (n, dim) = (3usize, 8usize);
        let spec = SystemSpec::new(dim)
            .with_decoherence(crate::operators::annihilation(dim).scale(re(gamma.sqrt())))
            .unwrap()
            .with_measurement(number_operator(dim).scale(re(kappa.sqrt())))
            .unwrap();
        let psi = fock_state(n, dim).unwrap();
        assert_abs_diff_eq!(
            compute_e(&spec, &psi).unwrap(),
            gamma * n as f64,
            epsilon = 1e-12
        );
    }

    #[test]
    fn dicke_m0_bound_is_exactly_one_eighth() {
        for l in [1.0, 4.0, 10.0, 17.0] {
            let ops = spin_operators(l).unwrap();
            let dim = ops.jz.dim();
            let spec = SystemSpec::new(dim)
                .with_decoherence(ops.jminus.scale(re(1.0)))
                .unwrap()
                .with_measurement(ops.jz.scale(re(0.5f64.sqrt())))
                .unwrap();
            let psi = dicke_state(l, 0.0).unwrap();
            let result = compute_bound(&spec, &psi).unwrap();
            assert_abs_diff_eq!(result.j_star, 0.125, epsilon = 1e-12);
        }
    }

    #[test]
    fn singlet_bound_is_zero() {
        let spec = SystemSpec::new(4)
            .with_decoherence(crate::operators::collective_lowering(2).scale(re(1.0)))
            .unwrap();
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(ndarray::array![
            re(0.0),
            re(inv),
            re(-inv),
            re(0.0)
        ])
        .unwrap();
        let result = compute_bound(&spec, &psi).unwrap();
        assert_eq!(result.j_star, 0.0);
        assert!(result.e_val.abs() <= 1e-14);
    }

    #[test]
    fn non_hermitian_hamiltonian_rejected() {
        let bad = sigma_minus();
        assert!(matches!(
            HamiltonianTerm::controlled(bad, 1.0),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_detected() {
        let spec = qubit_spec(1.0, 1.0, 1.0);
        let psi = fock_state(0, 3).unwrap();
        assert!(matches!(
            compute_bound(&spec, &psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn truncation_guard_triggers_on_tight_dim() {
        // With the target on the next-to-top level, a single raising
        // application leaks into the guarded top level.
        let dim = 4;
        let spec = SystemSpec::new(dim)
            .with_decoherence(crate::operators::annihilation(dim))
            .unwrap()
            .with_truncation_guard(TruncationGuard::default());
        let psi = fock_state(2, dim).unwrap();
        assert!(matches!(
            compute_a(&spec, &psi),
            Err(Error::TruncationLeak { .. })
        ));
    }

    #[test]
    fn truncation_guard_passes_with_margin() {
        let dim = 6;
        let spec = SystemSpec::new(dim)
            .with_decoherence(crate::operators::annihilation(dim))
            .unwrap()
            .with_truncation_guard(TruncationGuard::default());
        let psi = fock_state(2, dim).unwrap();
        assert!(compute_bound(&spec, &psi).is_ok());
    }
}

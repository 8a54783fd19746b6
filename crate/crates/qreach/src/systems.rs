//! Ready-made [`SystemSpec`]s for the systems studied in this crate: the
//! monitored qubit, the symmetric two-qubit (qutrit) ladder, collective-spin
//! ensembles, dephased qubit registers and the truncated cavity mode.
//!
//! These are the instances the closed-form oracles in [`crate::closed_form`]
//! describe, so each builder and its oracle can be cross-checked against the
//! generic bound engine.

use num_complex::Complex64;

use crate::bound::{HamiltonianTerm, SystemSpec, TruncationGuard};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operators::{
    annihilation, collective_jy, collective_jz, collective_lowering, drive_hamiltonian,
    number_operator, sigma_minus, sigma_y, sigma_z, spin_dim, spin_operators,
};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_rate(name: &'static str, value: f64) -> Result<f64> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::OutOfRange {
            name,
            value,
            range: "[0, ∞)",
        });
    }
    Ok(value)
}

/// Monitored qubit: H = σy, M = √κ σz, L = √γ σ₋.
pub fn qubit_system(kappa: f64, gamma: f64, ubar: f64) -> Result<SystemSpec> {
    check_rate("kappa", kappa)?;
    check_rate("gamma", gamma)?;
    SystemSpec::new(2)
        .with_hamiltonian(HamiltonianTerm::controlled(sigma_y(), ubar)?)?
        .with_decoherence(sigma_minus().scale(re(gamma.sqrt())))?
        .with_measurement(sigma_z().scale(re(kappa.sqrt())))
}

/// Symmetric two-qubit ladder (qutrit): H = Jy, M = √κ Jz and the plain
/// lowering L = √γ (|S⟩⟨E| + |G⟩⟨S|).
pub fn qutrit_system(kappa: f64, gamma: f64, ubar: f64) -> Result<SystemSpec> {
    check_rate("kappa", kappa)?;
    check_rate("gamma", gamma)?;
    let ops = spin_operators(1.0)?;
    let lowering = ComplexMatrix::from_fn(3, |i, j| {
        if i == j + 1 {
            re(gamma.sqrt())
        } else {
            re(0.0)
        }
    });
    SystemSpec::new(3)
        .with_hamiltonian(HamiltonianTerm::controlled(ops.jy, ubar)?)?
        .with_decoherence(lowering)?
        .with_measurement(ops.jz.scale(re(kappa.sqrt())))
}

/// Collective-spin ensemble in the spin-l irrep: H = Jy, M = √κ Jz,
/// L = √γ J₋.
pub fn dicke_system(l: f64, kappa: f64, gamma: f64, ubar: f64) -> Result<SystemSpec> {
    check_rate("kappa", kappa)?;
    check_rate("gamma", gamma)?;
    let ops = spin_operators(l)?;
    SystemSpec::new(spin_dim(l)?)
        .with_hamiltonian(HamiltonianTerm::controlled(ops.jy, ubar)?)?
        .with_decoherence(ops.jminus.scale(re(gamma.sqrt())))?
        .with_measurement(ops.jz.scale(re(kappa.sqrt())))
}

/// Two qubits under collective decay L = √γ (σ₋⊗I + I⊗σ₋), with a collective
/// Jy control of magnitude `ubar` used to produce a concrete control term.
pub fn bell_collective_system(gamma: f64, ubar: f64) -> Result<SystemSpec> {
    check_rate("gamma", gamma)?;
    SystemSpec::new(4)
        .with_hamiltonian(HamiltonianTerm::controlled(collective_jy(2), ubar)?)?
        .with_decoherence(collective_lowering(2).scale(re(gamma.sqrt())))
}

/// Two qubits under independent local decay L₁ = √γ σ₋⊗I, L₂ = √γ I⊗σ₋.
pub fn bell_local_system(gamma: f64, ubar: f64) -> Result<SystemSpec> {
    check_rate("gamma", gamma)?;
    let id = ComplexMatrix::identity(2);
    let l1 = crate::linalg::kron(&sigma_minus(), &id).scale(re(gamma.sqrt()));
    let l2 = crate::linalg::kron(&id, &sigma_minus()).scale(re(gamma.sqrt()));
    SystemSpec::new(4)
        .with_hamiltonian(HamiltonianTerm::controlled(collective_jy(2), ubar)?)?
        .with_decoherence(l1)?
        .with_decoherence(l2)
}

/// An n-qubit register under collective dephasing L = √γ Jz on the 2ⁿ product
/// space, with a collective Jy control term. Used for the product-state and
/// GHZ cross-checks at small n.
pub fn dephasing_register_system(n: usize, gamma: f64, ubar: f64) -> Result<SystemSpec> {
    check_rate("gamma", gamma)?;
    if n == 0 || n > 12 {
        return Err(Error::OutOfRange {
            name: "n_qubits",
            value: n as f64,
            range: "[1, 12]",
        });
    }
    SystemSpec::new(1 << n)
        .with_hamiltonian(HamiltonianTerm::controlled(collective_jy(n), ubar)?)?
        .with_decoherence(collective_jz(n).scale(re(gamma.sqrt())))
}

/// Truncated cavity mode: H = i(a†−a), M = √κ a†a, L = √γ a, with the
/// truncation guard enabled.
///
/// For a Fock target |n⟩ use `dim ≥ n + 3` so every intermediate stays
/// strictly inside the truncation.
pub fn fock_system(dim: usize, kappa: f64, gamma: f64, ubar: f64) -> Result<SystemSpec> {
    check_rate("kappa", kappa)?;
    check_rate("gamma", gamma)?;
    if dim < 3 {
        return Err(Error::OutOfRange {
            name: "dim",
            value: dim as f64,
            range: "[3, ∞)",
        });
    }
    Ok(SystemSpec::new(dim)
        .with_hamiltonian(HamiltonianTerm::controlled(drive_hamiltonian(dim), ubar)?)?
        .with_decoherence(annihilation(dim).scale(re(gamma.sqrt())))?
        .with_measurement(number_operator(dim).scale(re(kappa.sqrt())))?
        .with_truncation_guard(TruncationGuard::default()))
}

/// Preferred truncation dimension for a Fock target |n⟩: one level beyond the
/// required minimum of n + 3.
pub fn fock_dim_for(n: usize) -> usize {
    n + 4
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_validate_rates() {
        assert!(qubit_system(-1.0, 1.0, 0.0).is_err());
        assert!(dicke_system(2.0, 1.0, f64::NAN, 0.0).is_err());
        assert!(fock_system(2, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn qutrit_lowering_matches_printed_matrix() {
        let spec = qutrit_system(0.0, 4.0, 0.0).unwrap();
        let l = &spec.decoherence_ops()[0];
        assert_eq!(l.data()[(1, 0)].re, 2.0);
        assert_eq!(l.data()[(2, 1)].re, 2.0);
        assert_eq!(l.data()[(0, 1)].re, 0.0);
    }
}

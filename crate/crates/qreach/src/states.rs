//! Target-state constructors.
//!
//! Same basis conventions as [`crate::operators`]: qubit (|e⟩, |g⟩), spin
//! m = l … −l, Fock n = 0 … dim−1.

use ndarray::Array1;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::PureState;
use crate::operators::twice_spin;

/// Qubit target [cos θ, e^{iφ} sin θ] with θ ∈ [0, π/2], φ ∈ [0, 2π).
///
/// θ = π/2 (the state |g⟩) is accepted even though the parametrization is
/// only injective on [0, π/2); sweeps evaluate the endpoint.
pub fn qubit_target(theta: f64, phi: f64) -> Result<PureState> {
    if !(0.0..=PI / 2.0).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            range: "[0, π/2]",
        });
    }
    if !(0.0..2.0 * PI).contains(&phi) {
        return Err(Error::OutOfRange {
            name: "phi",
            value: phi,
            range: "[0, 2π)",
        });
    }
    let amps = Array1::from(vec![
        Complex64::new(theta.cos(), 0.0),
        Complex64::from_polar(theta.sin(), phi),
    ]);
    PureState::new(amps)
}

/// Qutrit target [sin(θ/2)cos(φ/2), cos(θ/2), sin(θ/2)sin(φ/2)] with
/// θ, φ ∈ [0, π], in the (|E⟩, |S⟩, |G⟩) basis.
pub fn qutrit_target(theta: f64, phi: f64) -> Result<PureState> {
    for (name, value) in [("theta", theta), ("phi", phi)] {
        if !(0.0..=PI).contains(&value) {
            return Err(Error::OutOfRange {
                name,
                value,
                range: "[0, π]",
            });
        }
    }
    let half_t = 0.5 * theta;
    let half_p = 0.5 * phi;
    let amps = Array1::from(vec![
        Complex64::new(half_t.sin() * half_p.cos(), 0.0),
        Complex64::new(half_t.cos(), 0.0),
        Complex64::new(half_t.sin() * half_p.sin(), 0.0),
    ]);
    PureState::new(amps)
}

/// Dicke state |l, m⟩ in the (2l+1)-dimensional irreducible basis.
pub fn dicke_state(l: f64, m: f64) -> Result<PureState> {
    let twice_l = twice_spin(l).map_err(|_| Error::InvalidDicke { l, m })?;
    let offset = l - m;
    let idx = offset.round();
    if m.abs() > l + 1e-9 || (offset - idx).abs() > 1e-9 {
        return Err(Error::InvalidDicke { l, m });
    }
    PureState::basis_state(twice_l as usize + 1, idx as usize)
}

/// GHZ state (|↑⟩^⊗N + |↓⟩^⊗N)/√2 on the 2^N product space.
///
/// Product-space constructions are intended for small-register cross-checks
/// (N ≤ 12 or so); the register size is capped to keep allocations sane.
pub fn ghz_state(n: usize) -> Result<PureState> {
    check_register(n)?;
    let dim = 1usize << n;
    let inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = Array1::zeros(dim);
    amps[0] = inv;
    amps[dim - 1] = inv;
    PureState::new(amps)
}

/// Product state |+⟩^⊗N with |+⟩ = (|↑⟩+|↓⟩)/√2.
pub fn plus_product_state(n: usize) -> Result<PureState> {
    check_register(n)?;
    let dim = 1usize << n;
    let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
    PureState::new(Array1::from_elem(dim, amp))
}

fn check_register(n: usize) -> Result<()> {
    if n == 0 || n > 24 {
        return Err(Error::OutOfRange {
            name: "n_qubits",
            value: n as f64,
            range: "[1, 24]",
        });
    }
    Ok(())
}

/// Fock state |n⟩ in a dim-level truncation.
pub fn fock_state(n: usize, dim: usize) -> Result<PureState> {
    if n >= dim {
        return Err(Error::FockOverflow { n, dim });
    }
    PureState::basis_state(dim, n)
}

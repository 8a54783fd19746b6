//! Analytic bound expressions for every system with a known closed form.
//!
//! These serve as independent oracles for the generic engine in
//! [`crate::bound`]: each function evaluates trigonometric/algebraic
//! expressions only, never matrices, so agreement with [`compute_bound`] on
//! the induced [`crate::systems`] instance is a genuine dual-path check.
//!
//! [`compute_bound`]: crate::bound::compute_bound

use std::f64::consts::{PI, SQRT_2};

use crate::bound::j_star_from;
use crate::error::{Error, Result};

/// Analytically computed A, U, E and J* (same semantics as
/// [`crate::bound::BoundResult`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub a_val: f64,
    pub u_val: f64,
    pub e_val: f64,
    pub j_star: f64,
}

impl OracleResult {
    fn from_parts(a_val: f64, u_val: f64, e_val: f64) -> Self {
        Self {
            a_val,
            u_val,
            e_val,
            j_star: j_star_from(a_val, u_val, e_val),
        }
    }
}

fn check_rate(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::OutOfRange {
            name,
            value,
            range: "[0, ∞)",
        });
    }
    Ok(())
}

/// Monitored qubit with target [cos θ, e^{iφ} sin θ].
///
/// ```text
/// A = √2 (2κ + γ sin²θ + γ cos θ)
/// U = 2ū √(1 − sin²2θ sin²φ)
/// E = κ sin²2θ + γ cos⁴θ
/// ```
pub fn qubit_bound(theta: f64, phi: f64, kappa: f64, gamma: f64, ubar: f64) -> Result<OracleResult> {
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
    check_rate("kappa", kappa)?;
    check_rate("gamma", gamma)?;
    check_rate("ubar", ubar)?;

    let sin2t = (2.0 * theta).sin();
    let a_val = SQRT_2 * (2.0 * kappa + gamma * theta.sin().powi(2) + gamma * theta.cos());
    let u_val = 2.0 * ubar * (1.0 - sin2t.powi(2) * phi.sin().powi(2)).max(0.0).sqrt();
    let e_val = kappa * sin2t.powi(2) + gamma * theta.cos().powi(4);
    Ok(OracleResult::from_parts(a_val, u_val, e_val))
}

/// Symmetric two-qubit ladder (qutrit) with the real target
/// [sin(θ/2)cos(φ/2), cos(θ/2), sin(θ/2)sin(φ/2)], θ, φ ∈ [0, π].
///
/// A and U follow the printed expressions
///
/// ```text
/// A/√2 = κ(sin²(θ/2) + sin(θ/2))
///      + γ(cos²(θ/2) + sin²(θ/2)sin²(φ/2) + √(sin²(θ/2)cos²(φ/2) + cos²(θ/2)))
/// U    = √2 ū √(1 + cos²(θ/2) − sin²(θ/2) sin φ)
/// ```
///
/// E is evaluated from its definition on the same operators,
///
/// ```text
/// E = κ (sin²(θ/2) − sin⁴(θ/2) cos²φ)
///   + γ (sc² + c² − c²(sc + ss)²),   sc = sin(θ/2)cos(φ/2), ss = sin(θ/2)sin(φ/2), c = cos(θ/2)
/// ```
///
/// which reduces to the expected eigenvector limits (E = γ at the top rung,
/// κ-independence at θ = 0) and matches the generic engine everywhere.
pub fn qutrit_bound(
    theta: f64,
    phi: f64,
    kappa: f64,
    gamma: f64,
    ubar: f64,
) -> Result<OracleResult> {
    for (name, value) in [("theta", theta), ("phi", phi)] {
        if !(0.0..=PI).contains(&value) {
            return Err(Error::OutOfRange {
                name,
                value,
                range: "[0, π]",
            });
        }
    }
    check_rate("kappa", kappa)?;
    check_rate("gamma", gamma)?;
    check_rate("ubar", ubar)?;

    let (st, ct) = ((0.5 * theta).sin(), (0.5 * theta).cos());
    let (sp, cp) = ((0.5 * phi).sin(), (0.5 * phi).cos());
    let sc = st * cp;
    let ss = st * sp;

    let a_val = SQRT_2
        * (kappa * (st * st + st)
            + gamma * (ct * ct + ss * ss + (sc * sc + ct * ct).sqrt()));
    let u_val =
        SQRT_2 * ubar * (1.0 + ct * ct - st * st * phi.sin()).max(0.0).sqrt();
    let e_m = kappa * (st * st - st.powi(4) * phi.cos().powi(2));
    let e_l = gamma * (sc * sc + ct * ct - ct * ct * (sc + ss) * (sc + ss));
    Ok(OracleResult::from_parts(a_val, u_val, e_m + e_l))
}

/// Bounds for the four Bell states under collective decay
/// L = √γ (σ₋⊗I + I⊗σ₋), with the control contribution entering as an opaque
/// magnitude `u_mag`.
#[derive(Debug, Clone, Copy)]
pub struct BellBounds {
    /// |Φ±⟩ = (|gg⟩ ± |ee⟩)/√2 — both share one bound.
    pub phi_pm: OracleResult,
    /// |Ψ⁺⟩ = (|ge⟩ + |eg⟩)/√2.
    pub psi_plus: OracleResult,
    /// |Ψ⁻⟩ = (|ge⟩ − |eg⟩)/√2, the dark state: exactly zero.
    pub psi_minus: OracleResult,
}

pub fn bell_bounds(gamma: f64, u_mag: f64) -> Result<BellBounds> {
    check_rate("gamma", gamma)?;
    check_rate("u_mag", u_mag)?;
    if gamma == 0.0 && u_mag == 0.0 {
        return Err(Error::DegenerateInput(
            "bell bounds need gamma > 0 or u_mag > 0".into(),
        ));
    }
    Ok(BellBounds {
        phi_pm: OracleResult::from_parts((2.0 + SQRT_2) * gamma, u_mag, gamma),
        psi_plus: OracleResult::from_parts(4.0 * SQRT_2 * gamma, u_mag, 2.0 * gamma),
        psi_minus: OracleResult::from_parts(0.0, u_mag, 0.0),
    })
}

/// Under local decay L₁ = √γ σ₋⊗I, L₂ = √γ I⊗σ₋ every Bell state has the
/// same bound, equal to the collective-decay |Φ±⟩ expression.
pub fn bell_bound_local_decay(gamma: f64, u_mag: f64) -> Result<OracleResult> {
    check_rate("gamma", gamma)?;
    check_rate("u_mag", u_mag)?;
    if gamma == 0.0 && u_mag == 0.0 {
        return Err(Error::DegenerateInput(
            "bell bounds need gamma > 0 or u_mag > 0".into(),
        ));
    }
    Ok(OracleResult::from_parts(
        (2.0 + SQRT_2) * gamma,
        u_mag,
        gamma,
    ))
}

/// Collective-spin ensemble, target |l, m⟩, with H = Jy, M = √κ Jz,
/// L = √γ J₋:
///
/// ```text
/// A = √2 (2κm² + 2γ(l²+l−m²))
/// U = √2 ū √(l²+l−m²)
/// E = γ (l²+l−m²+m)
/// ```
pub fn dicke_bound(l: f64, m: f64, kappa: f64, gamma: f64, ubar: f64) -> Result<OracleResult> {
    crate::operators::twice_spin(l).map_err(|_| Error::InvalidDicke { l, m })?;
    if m.abs() > l + 1e-9 || ((l - m) - (l - m).round()).abs() > 1e-9 {
        return Err(Error::InvalidDicke { l, m });
    }
    check_rate("kappa", kappa)?;
    check_rate("gamma", gamma)?;
    check_rate("ubar", ubar)?;

    let planar = l * l + l - m * m;
    let a_val = SQRT_2 * (2.0 * kappa * m * m + 2.0 * gamma * planar);
    let u_val = SQRT_2 * ubar * planar.max(0.0).sqrt();
    let e_val = gamma * (planar + m);
    Ok(OracleResult::from_parts(a_val, u_val, e_val))
}

fn check_atoms(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n_atoms",
            value: n as f64,
            range: "[1, ∞)",
        });
    }
    Ok(n as f64)
}

/// Product state |+⟩^⊗N under collective dephasing L = √γ Jz:
///
/// ```text
/// A = (γ/4)(√2 N + √(6N² − 4N)),   E = γN/4
/// ```
///
/// The N → ∞, U = 0 limit is 1/(8 + 4√3).
pub fn plus_product_bound(n: u64, gamma: f64, u_mag: f64) -> Result<OracleResult> {
    let nf = check_atoms(n)?;
    check_rate("gamma", gamma)?;
    check_rate("u_mag", u_mag)?;
    let a_val = 0.25 * gamma * (SQRT_2 * nf + (6.0 * nf * nf - 4.0 * nf).sqrt());
    let e_val = 0.25 * gamma * nf;
    Ok(OracleResult::from_parts(a_val, u_mag, e_val))
}

/// GHZ state under collective dephasing L = √γ Jz:
///
/// ```text
/// A = γN²/√2,   E = γN²/4
/// ```
///
/// At U = 0 the bound is exactly 1/8 for every N.
pub fn ghz_bound(n: u64, gamma: f64, u_mag: f64) -> Result<OracleResult> {
    let nf = check_atoms(n)?;
    check_rate("gamma", gamma)?;
    check_rate("u_mag", u_mag)?;
    let a_val = SQRT_2 * 0.5 * gamma * nf * nf;
    let e_val = 0.25 * gamma * nf * nf;
    Ok(OracleResult::from_parts(a_val, u_mag, e_val))
}

/// Cavity Fock target |n⟩ with H = i(a†−a), M = √κ a†a, L = √γ a:
///
/// ```text
/// A = 2√2 κn² + √2 γ(2n+1),   U = 2ū√(2n+1),   E = γn
/// ```
pub fn fock_bound(n: u64, kappa: f64, gamma: f64, ubar: f64) -> Result<OracleResult> {
    check_rate("kappa", kappa)?;
    check_rate("gamma", gamma)?;
    check_rate("ubar", ubar)?;
    let nf = n as f64;
    let a_val = 2.0 * SQRT_2 * kappa * nf * nf + SQRT_2 * gamma * (2.0 * nf + 1.0);
    let u_val = 2.0 * ubar * (2.0 * nf + 1.0).sqrt();
    let e_val = gamma * nf;
    Ok(OracleResult::from_parts(a_val, u_val, e_val))
}

//! Constructors for the operators used throughout: Pauli matrices, collective
//! spin (angular momentum) operators, truncated bosonic ladder operators and
//! product-space collective operators for small qubit registers.
//!
//! Basis conventions, fixed repo-wide:
//! - qubit basis ordered (|e⟩, |g⟩);
//! - spin basis ordered m = l, l−1, …, −l;
//! - Fock basis ordered n = 0, 1, …, dim−1.
//!
//! Ladder matrix elements follow the Condon–Shortley convention.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dagger, kron, ComplexMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| if i != j { ONE } else { ZERO })
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    })
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => ONE,
        (1, 1) => -ONE,
        _ => ZERO,
    })
}

/// Lowering operator |g⟩⟨e| in the (|e⟩, |g⟩) basis.
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| if (i, j) == (1, 0) { ONE } else { ZERO })
}

pub fn sigma_plus() -> ComplexMatrix {
    dagger(&sigma_minus())
}

/// The collective spin operators for total spin `l` in the (2l+1)-dimensional
/// irreducible representation.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
    pub jminus: ComplexMatrix,
}

impl SpinOperators {
    pub fn jplus(&self) -> ComplexMatrix {
        dagger(&self.jminus)
    }

    /// The Casimir J² = Jx² + Jy² + Jz².
    pub fn j_squared(&self) -> ComplexMatrix {
        self.jx
            .matmul(&self.jx)
            .add(&self.jy.matmul(&self.jy))
            .add(&self.jz.matmul(&self.jz))
    }
}

/// Validates a spin label and returns 2l as an integer.
pub(crate) fn twice_spin(l: f64) -> Result<u32> {
    let twice = 2.0 * l;
    let rounded = twice.round();
    if !(l.is_finite() && l >= 0.0) || (twice - rounded).abs() > 1e-9 || rounded < 1.0 {
        return Err(Error::InvalidSpin { l });
    }
    Ok(rounded as u32)
}

/// Hilbert-space dimension 2l+1 of the spin-l irrep.
pub fn spin_dim(l: f64) -> Result<usize> {
    Ok(twice_spin(l)? as usize + 1)
}

/// Builds (Jx, Jy, Jz, J₋) for half-integer or integer `l`.
///
/// Matrix elements: J±|l,m⟩ = √((l∓m)(l±m+1)) |l, m±1⟩, with the basis
/// ordered m = l … −l, so J₋ is the lower bidiagonal.
pub fn spin_operators(l: f64) -> Result<SpinOperators> {
    let twice_l = twice_spin(l)?;
    let dim = twice_l as usize + 1;
    let m_of = |idx: usize| l - idx as f64;

    let jminus = ComplexMatrix::from_fn(dim, |i, j| {
        // J₋ maps m ↦ m−1, i.e. column index j to row index j+1.
        if i == j + 1 {
            let m = m_of(j);
            Complex64::new(((l + m) * (l - m + 1.0)).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let jplus = dagger(&jminus);
    let half = Complex64::new(0.5, 0.0);
    let jx = jplus.add(&jminus).scale(half);
    let jy = jplus.sub(&jminus).scale(half * -I);
    let jz = ComplexMatrix::from_fn(dim, |i, j| {
        if i == j {
            Complex64::new(m_of(i), 0.0)
        } else {
            ZERO
        }
    });

    Ok(SpinOperators { jx, jy, jz, jminus })
}

/// Truncated bosonic annihilation operator, a|n⟩ = √n |n−1⟩.
pub fn annihilation(dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

pub fn creation(dim: usize) -> ComplexMatrix {
    dagger(&annihilation(dim))
}

/// The number operator a†a assembled exactly as diag(0, 1, …, dim−1).
pub fn number_operator(dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            ZERO
        }
    })
}

/// Cavity drive Hamiltonian i(a† − a).
pub fn drive_hamiltonian(dim: usize) -> ComplexMatrix {
    creation(dim).sub(&annihilation(dim)).scale(I)
}

/// Embeds a single-qubit operator at position `site` of an `n`-qubit register.
pub fn embed_qubit_op(op: &ComplexMatrix, site: usize, n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for j in 0..n {
        let factor = if j == site {
            op.clone()
        } else {
            ComplexMatrix::identity(2)
        };
        out = kron(&out, &factor);
    }
    out
}

/// Sum of single-qubit operators Σⱼ opⱼ over an `n`-qubit register.
pub fn collective_sum(op: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    let mut out = ComplexMatrix::zeros(dim);
    for site in 0..n {
        out = out.add(&embed_qubit_op(op, site, n));
    }
    out
}

/// Collective lowering Σⱼ σ₋⁽ʲ⁾ on the 2ⁿ product space.
pub fn collective_lowering(n: usize) -> ComplexMatrix {
    collective_sum(&sigma_minus(), n)
}

/// Collective Jz = ½ Σⱼ σz⁽ʲ⁾, built directly from the diagonal: the basis
/// index's popcount gives the number of down spins.
pub fn collective_jz(n: usize) -> ComplexMatrix {
    let dim = 1usize << n;
    ComplexMatrix::from_fn(dim, |i, j| {
        if i == j {
            let downs = (i as u64).count_ones() as f64;
            Complex64::new(0.5 * (n as f64 - 2.0 * downs), 0.0)
        } else {
            ZERO
        }
    })
}

/// Collective Jy = ½ Σⱼ σy⁽ʲ⁾ on the product space.
pub fn collective_jy(n: usize) -> ComplexMatrix {
    collective_sum(&sigma_y(), n).scale(Complex64::new(0.5, 0.0))
}

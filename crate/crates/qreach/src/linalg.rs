//! Dense complex matrices, pure states and density matrices.
//!
//! All physics in this crate is finite-dimensional and dense; the types here
//! wrap `ndarray` arrays and carry the validation rules (Hermiticity, trace,
//! positivity, normalization) that the rest of the crate relies on.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// A dense square complex matrix.
///
/// Hermiticity and trace are queryable predicates with explicit tolerances,
/// never silent assumptions.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: Array2<Complex64>,
}

impl ComplexMatrix {
    /// Wraps a square array. Errors if the array is not square or is empty.
    pub fn new(data: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = data.dim();
        if rows != cols || rows == 0 {
            return Err(Error::NotSquare { rows, cols });
        }
        Ok(Self { data })
    }

    /// Builds a dim×dim matrix from an element function.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        Self {
            data: Array2::from_shape_fn((dim, dim), |(i, j)| f(i, j)),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Builds the outer product |ψ⟩⟨φ|.
    pub fn outer(ket: &PureState, bra: &PureState) -> Self {
        let n = ket.dim();
        Self::from_fn(n, |i, j| ket.amplitudes()[i] * bra.amplitudes()[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_inner(self) -> Array2<Complex64> {
        self.data
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().sum()
    }

    /// Maximum entrywise deviation from `A = A†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn is_unit_trace(&self, tol: f64) -> bool {
        (self.trace() - Complex64::new(1.0, 0.0)).norm() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.mapv(|z| z * factor),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            data: &self.data + &other.data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            data: &self.data - &other.data,
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self {
            data: self.data.dot(&other.data),
        }
    }

    /// Applies the matrix to a raw amplitude vector.
    pub fn apply_raw(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        self.data.dot(v)
    }

    /// Applies the matrix to a pure state, returning the (unnormalized) image.
    pub fn apply(&self, psi: &PureState) -> Result<Array1<Complex64>> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi.dim(),
            });
        }
        Ok(self.apply_raw(psi.amplitudes()))
    }
}

/// Conjugate transpose.
pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    ComplexMatrix::from_fn(n, |i, j| a.data()[(j, i)].conj())
}

/// Commutator `[A, B] = AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_dim(a, b)?;
    Ok(a.matmul(b).sub(&b.matmul(a)))
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix {
        data: ndarray::linalg::kron(a.data(), b.data()),
    }
}

/// Expectation value ⟨ψ|A|ψ⟩.
pub fn expectation(a: &ComplexMatrix, psi: &PureState) -> Result<Complex64> {
    let image = a.apply(psi)?;
    Ok(psi
        .amplitudes()
        .iter()
        .zip(image.iter())
        .map(|(c, v)| c.conj() * v)
        .sum())
}

/// Dissipator `D[A]ρ = AρA† − A†Aρ/2 − ρA†A/2`.
pub fn dissipator(a: &ComplexMatrix, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: rho.dim(),
        });
    }
    Ok(ComplexMatrix {
        data: dissipator_raw(a.data(), &dagger(a).data, rho.data()),
    })
}

pub(crate) fn dissipator_raw(
    a: &Array2<Complex64>,
    a_dag: &Array2<Complex64>,
    rho: &Array2<Complex64>,
) -> Array2<Complex64> {
    let ada = a_dag.dot(a);
    let sandwich = a.dot(rho).dot(a_dag);
    let half = Complex64::new(0.5, 0.0);
    &sandwich - &(&ada.dot(rho) + &rho.dot(&ada)).mapv(|z| z * half)
}

/// Measurement back-action superoperator `H[A]ρ = Aρ + ρA† − Tr[(A+A†)ρ]ρ`.
pub fn h_superop(a: &ComplexMatrix, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: rho.dim(),
        });
    }
    Ok(ComplexMatrix {
        data: h_superop_raw(a.data(), &dagger(a).data, rho.data()),
    })
}

pub(crate) fn h_superop_raw(
    a: &Array2<Complex64>,
    a_dag: &Array2<Complex64>,
    rho: &Array2<Complex64>,
) -> Array2<Complex64> {
    let linear = &a.dot(rho) + &rho.dot(a_dag);
    let weight: Complex64 = linear.diag().sum();
    &linear - &rho.mapv(|z| z * weight)
}

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(())
}

/// A normalized pure state |ψ⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Array1<Complex64>,
}

impl PureState {
    /// Wraps an amplitude vector that is already normalized within
    /// [`tol::NORM_TOL`].
    pub fn new(amplitudes: Array1<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol::NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Array1<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes.mapv(|z| z / norm),
        })
    }

    /// The computational basis state |k⟩ in dimension `dim`.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: k,
            });
        }
        let mut v = Array1::zeros(dim);
        v[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product |self⟩ ⊗ |other⟩.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let n = self.dim() * other.dim();
        let mut v = Array1::zeros(n);
        for (i, a) in self.amplitudes.iter().enumerate() {
            for (j, b) in other.amplitudes.iter().enumerate() {
                v[i * other.dim() + j] = a * b;
            }
        }
        PureState { amplitudes: v }
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite up to the
/// tolerances in [`tol`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: Array2<Complex64>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > tol::HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol::HERMITICITY_TOL,
            });
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > tol::TRACE_TOL {
            return Err(Error::BadTrace { trace: trace.re });
        }
        let min_eig = min_hermitian_eigenvalue(matrix.data());
        if min_eig < -tol::POSITIVITY_TOL {
            return Err(Error::NotPositive {
                eigenvalue: min_eig,
            });
        }
        Ok(Self {
            data: matrix.into_inner(),
        })
    }

    /// The projector |ψ⟩⟨ψ| of a pure state.
    pub fn from_pure(psi: &PureState) -> Self {
        let n = psi.dim();
        let a = psi.amplitudes();
        Self {
            data: Array2::from_shape_fn((n, n), |(i, j)| a[i] * a[j].conj()),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        Self {
            data: Array2::from_shape_fn(
                (dim, dim),
                |(i, j)| if i == j { w } else { Complex64::new(0.0, 0.0) },
            ),
        }
    }

    /// Wraps a raw array whose invariants are maintained by the caller
    /// (used by the integrators, which symmetrize and renormalize per step).
    pub(crate) fn from_raw_unchecked(data: Array2<Complex64>) -> Self {
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.diag().sum().re
    }

    /// Fidelity to a pure state: ⟨ψ|ρ|ψ⟩.
    pub fn fidelity(&self, psi: &PureState) -> Result<f64> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi.dim(),
            });
        }
        let image = self.data.dot(psi.amplitudes());
        let value: Complex64 = psi
            .amplitudes()
            .iter()
            .zip(image.iter())
            .map(|(c, v)| c.conj() * v)
            .sum();
        Ok(value.re)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&self.data)
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Intended for the modest dimensions used here (≤ a few hundred); returns
/// eigenvalues in ascending order.
pub fn hermitian_eigenvalues(matrix: &Array2<Complex64>) -> Vec<f64> {
    let n = matrix.nrows();
    if n == 1 {
        return vec![matrix[(0, 0)].re];
    }
    if n == 2 {
        // Analytic 2x2 path; the stochastic integrator hits this every step.
        let a = matrix[(0, 0)].re;
        let d = matrix[(1, 1)].re;
        let b = matrix[(0, 1)];
        let mid = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        return vec![mid - disc, mid + disc];
    }

    let mut m = matrix.clone();
    let scale: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    let threshold = 1e-30 * scale * scale;

    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let abs = apq.norm();
                if abs * abs <= threshold / (n * n) as f64 {
                    continue;
                }
                let phase = apq / abs;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Columns of the plane rotation, with the phase folded into q.
                let upp = Complex64::new(c, 0.0);
                let upq = phase * s;
                let uqp = -Complex64::new(s, 0.0) * phase.conj();
                let uqq = Complex64::new(c, 0.0);

                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * upp + miq * uqp;
                    m[(i, q)] = mip * upq + miq * uqq;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = upp.conj() * mpj + uqp.conj() * mqj;
                    m[(q, j)] = upq.conj() * mpj + uqq.conj() * mqj;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

pub(crate) fn min_hermitian_eigenvalue(matrix: &Array2<Complex64>) -> f64 {
    hermitian_eigenvalues(matrix)[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_minus() -> ComplexMatrix {
        ComplexMatrix::new(array![[c(0.0, 0.0), c(0.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap()
    }

    #[test]
    fn dagger_of_lowering_is_raising() {
        let sp = dagger(&sigma_minus());
        assert_eq!(sp.data()[(0, 1)], c(1.0, 0.0));
        assert_eq!(sp.data()[(1, 0)], c(0.0, 0.0));
    }

    #[test]
    fn dagger_fixes_hermitian() {
        let h = ComplexMatrix::new(array![
            [c(1.0, 0.0), c(0.5, -0.25)],
            [c(0.5, 0.25), c(-2.0, 0.0)]
        ])
        .unwrap();
        let hd = dagger(&h);
        assert_eq!(h, hd);
    }

    #[test]
    fn dagger_conjugates_diagonal() {
        let m = ComplexMatrix::new(array![
            [c(0.0, 1.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, -1.0)]
        ])
        .unwrap();
        let md = dagger(&m);
        assert_eq!(md.data()[(0, 0)], c(0.0, -1.0));
        assert_eq!(md.data()[(1, 1)], c(0.0, 1.0));
    }

    #[test]
    fn dagger_is_involutive() {
        let m = ComplexMatrix::from_fn(4, |i, j| c((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        assert_eq!(dagger(&dagger(&m)), m);
    }

    #[test]
    fn expectation_on_eigenstate() {
        let sz = ComplexMatrix::new(array![
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-1.0, 0.0)]
        ])
        .unwrap();
        let e = PureState::basis_state(2, 0).unwrap();
        let val = expectation(&sz, &e).unwrap();
        assert_abs_diff_eq!(val.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(val.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let sz = ComplexMatrix::identity(2);
        let psi = PureState::basis_state(3, 0).unwrap();
        assert!(matches!(
            expectation(&sz, &psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dissipator_amplitude_damping_of_excited() {
        // D[σ₋](|e⟩⟨e|) = |g⟩⟨g| − |e⟩⟨e|
        let rho = DensityMatrix::from_pure(&PureState::basis_state(2, 0).unwrap());
        let out = dissipator(&sigma_minus(), &rho).unwrap();
        assert_abs_diff_eq!(out.data()[(0, 0)].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.data()[(1, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.trace().norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn dissipator_vanishes_on_eigenstate_of_hermitian_op() {
        let sz = ComplexMatrix::new(array![
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-1.0, 0.0)]
        ])
        .unwrap();
        let rho = DensityMatrix::from_pure(&PureState::basis_state(2, 1).unwrap());
        let out = dissipator(&sz, &rho).unwrap();
        assert!(out.frobenius_norm() < 1e-15);
    }

    #[test]
    fn h_superop_vanishes_on_eigenprojector() {
        let sz = ComplexMatrix::new(array![
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-1.0, 0.0)]
        ])
        .unwrap();
        let rho = DensityMatrix::from_pure(&PureState::basis_state(2, 0).unwrap());
        let out = h_superop(&sz, &rho).unwrap();
        assert!(out.frobenius_norm() < 1e-15);
    }

    #[test]
    fn h_superop_on_maximally_mixed() {
        // H[σz](I/2) = σz since Tr(2σz · I/2) = 0.
        let sz = ComplexMatrix::new(array![
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-1.0, 0.0)]
        ])
        .unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        let out = h_superop(&sz, &rho).unwrap();
        assert_abs_diff_eq!(out.data()[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.data()[(1, 1)].re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn kron_of_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_lowering_acts_on_first_qubit() {
        // (σ₋ ⊗ I)|e,e⟩ = |g,e⟩
        let op = kron(&sigma_minus(), &ComplexMatrix::identity(2));
        let ee = PureState::basis_state(4, 0).unwrap();
        let out = op.apply(&ee).unwrap();
        assert_abs_diff_eq!(out[2].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out[0].norm() + out[1].norm() + out[3].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        let v = array![c(1.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(PureState::new(v), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn normalized_rejects_zero() {
        let v = array![c(0.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(PureState::normalized(v), Err(Error::ZeroVector)));
    }

    #[test]
    fn density_matrix_rejects_bad_trace() {
        let m = ComplexMatrix::identity(2);
        assert!(matches!(DensityMatrix::new(m), Err(Error::BadTrace { .. })));
    }

    #[test]
    fn density_matrix_rejects_negative() {
        let m = ComplexMatrix::new(array![
            [c(1.5, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-0.5, 0.0)]
        ])
        .unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn jacobi_matches_analytic_2x2() {
        let m = array![[c(1.0, 0.0), c(0.3, 0.4)], [c(0.3, -0.4), c(-1.0, 0.0)]];
        let eigs = hermitian_eigenvalues(&m);
        let disc = (1.0f64 + 0.25).sqrt();
        assert_abs_diff_eq!(eigs[0], -disc, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], disc, epsilon = 1e-12);
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // Spin-1 Jy has eigenvalues {-1, 0, 1}.
        let inv = 1.0 / 2.0f64.sqrt();
        let m = array![
            [c(0.0, 0.0), c(0.0, -inv), c(0.0, 0.0)],
            [c(0.0, inv), c(0.0, 0.0), c(0.0, -inv)],
            [c(0.0, 0.0), c(0.0, inv), c(0.0, 0.0)]
        ];
        let eigs = hermitian_eigenvalues(&m);
        assert_abs_diff_eq!(eigs[0], -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(eigs[1], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(eigs[2], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn jacobi_preserves_trace_on_random_hermitian() {
        let n = 8;
        let raw = Array2::from_shape_fn((n, n), |(i, j)| {
            c(
                ((i * 7 + j * 3) % 11) as f64 - 5.0,
                ((i * 5 + j * 13) % 9) as f64 - 4.0,
            )
        });
        let herm = &raw + &raw.t().mapv(|z| z.conj());
        let trace: f64 = herm.diag().sum().re;
        let eigs = hermitian_eigenvalues(&herm);
        assert_abs_diff_eq!(eigs.iter().sum::<f64>(), trace, epsilon = 1e-8);
    }
}

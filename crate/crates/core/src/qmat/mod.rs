//! Dense complex matrices for one and two qubits.
//!
//! Everything here works on 2×2 and 4×4 matrices stored row-major. The
//! basis order is fixed crate-wide: `[+, −]` for one qubit (with `+` the
//! excited state) and `[++, +−, −+, −−]` for a pair, qubit A leftmost in
//! every Kronecker product.

mod eigen;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

pub use eigen::{eigenvalues, hermitian_eigvals, product_spectrum};

/// Hermiticity tolerance on `‖ρ − ρ†‖_max`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed distance of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as roundoff.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Square complex matrix of dimension 2 or 4.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMat<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMat<T> {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(invalid(format!("matrix dimension must be 2 or 4, got {dim}")));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("matrix entries must be finite"));
        }
        Ok(Self { dim, data: entries })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "matrix dimension must be 2 or 4");
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[T]) -> Result<Self> {
        let dim = values.len();
        if dim != 2 && dim != 4 {
            return Err(invalid(format!("matrix dimension must be 2 or 4, got {dim}")));
        }
        let mut m = Self::zeros(dim);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        Ok(m)
    }

    /// Outer product `|ψ⟩⟨ψ|` of a state vector of length 2 or 4.
    pub fn projector(psi: &[Complex<T>]) -> Result<Self> {
        let dim = psi.len();
        if dim != 2 && dim != 4 {
            return Err(invalid(format!("state vector length must be 2 or 4, got {dim}")));
        }
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: T) -> Self {
        self.scale(Complex::new(k, T::zero()))
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// `‖A − A†‖_max`.
    pub fn hermiticity_defect(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `‖A − B‖_max`; panics on dimension mismatch.
    pub fn max_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    /// Checked product.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(self * other)
    }

    /// `A B A†`, the sandwich used by every Kraus application.
    pub fn sandwich(&self, inner: &Self) -> Self {
        &(self * inner) * &self.dagger()
    }

    /// Converts to another scalar type.
    pub fn cast<U: Real>(&self) -> ComplexMat<U> {
        ComplexMat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64()), U::lit(z.im.to_f64())))
                .collect(),
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for ComplexMat<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for ComplexMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &ComplexMat<T> {
    type Output = ComplexMat<T>;

    fn mul(self, rhs: &ComplexMat<T>) -> ComplexMat<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMat<T> {
    type Output = ComplexMat<T>;

    fn add(self, rhs: &ComplexMat<T>) -> ComplexMat<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMat {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMat<T> {
    type Output = ComplexMat<T>;

    fn sub(self, rhs: &ComplexMat<T>) -> ComplexMat<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMat {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b` of two 2×2 matrices, qubit A leftmost.
pub fn kron<T: Real>(a: &ComplexMat<T>, b: &ComplexMat<T>) -> Result<ComplexMat<T>> {
    if a.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: a.dim,
        });
    }
    if b.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: b.dim,
        });
    }
    let mut out = ComplexMat::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Conjugate transpose.
pub fn dagger<T: Real>(a: &ComplexMat<T>) -> ComplexMat<T> {
    a.dagger()
}

/// Single-qubit operators in the `[+, −]` basis.
pub mod pauli {
    use super::*;

    fn real2<T: Real>(e: [f64; 4]) -> ComplexMat<T> {
        ComplexMat::from_real(2, &e.map(T::lit)).expect("2x2 literal")
    }

    /// Lowering operator `|−⟩⟨+|`.
    pub fn sigma_minus<T: Real>() -> ComplexMat<T> {
        real2([0.0, 0.0, 1.0, 0.0])
    }

    /// Raising operator `|+⟩⟨−|`.
    pub fn sigma_plus<T: Real>() -> ComplexMat<T> {
        real2([0.0, 1.0, 0.0, 0.0])
    }

    pub fn sigma_z<T: Real>() -> ComplexMat<T> {
        real2([1.0, 0.0, 0.0, -1.0])
    }

    pub fn sigma_x<T: Real>() -> ComplexMat<T> {
        real2([0.0, 1.0, 1.0, 0.0])
    }

    pub fn sigma_y<T: Real>() -> ComplexMat<T> {
        let z = Complex::new(T::zero(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        ComplexMat::new(2, vec![z, -i, i, z]).expect("2x2 literal")
    }

    /// `σ_y ⊗ σ_y`, real and anti-diagonal.
    pub fn sigma_yy<T: Real>() -> ComplexMat<T> {
        kron(&sigma_y(), &sigma_y()).expect("2x2 factors")
    }
}

/// Wootters spin flip `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)` of a 4×4 matrix.
pub fn spin_flip<T: Real>(rho: &ComplexMat<T>) -> Result<ComplexMat<T>> {
    if rho.dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim,
        });
    }
    let yy = pauli::sigma_yy::<T>();
    Ok(&(&yy * &rho.conj()) * &yy)
}

/// Tolerances used by [`validate_density_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityTolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub positivity: f64,
}

impl Default for DensityTolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN_TOL,
            trace: TRACE_TOL,
            positivity: POSITIVITY_TOL,
        }
    }
}

/// A validated one- or two-qubit state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    n_qubits: usize,
    mat: ComplexMat<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Wraps a matrix without validation. Callers own the invariants.
    pub(crate) fn from_unchecked(mat: ComplexMat<T>) -> Self {
        let n_qubits = if mat.dim == 2 { 1 } else { 2 };
        Self { n_qubits, mat }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.dim
    }

    pub fn matrix(&self) -> &ComplexMat<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMat<T> {
        self.mat
    }

    /// Maximally mixed state on `n_qubits`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = match n_qubits {
            1 => 2,
            2 => 4,
            _ => return Err(invalid("only one or two qubits are supported")),
        };
        let m = ComplexMat::identity(dim).scale_real(T::one() / T::lit(dim as f64));
        Ok(Self::from_unchecked(m))
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` is normalised first.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if !(norm > T::zero()) {
            return Err(invalid("state vector has zero norm"));
        }
        let scaled: Vec<_> = psi.iter().map(|z| z / norm).collect();
        validate_density(ComplexMat::projector(&scaled)?)
    }

    /// Single-qubit coherence `ρ₁₂ = ⟨+|ρ|−⟩`.
    pub fn coherence(&self) -> Result<Complex<T>> {
        if self.n_qubits != 1 {
            return Err(invalid("coherence is defined here for single-qubit states"));
        }
        Ok(self.mat[(0, 1)])
    }

    /// Reduced state of qubit A (traces out B).
    pub fn reduce_to_a(&self) -> Result<DensityMatrix<T>> {
        self.partial_trace(true)
    }

    /// Reduced state of qubit B (traces out A).
    pub fn reduce_to_b(&self) -> Result<DensityMatrix<T>> {
        self.partial_trace(false)
    }

    fn partial_trace(&self, keep_a: bool) -> Result<DensityMatrix<T>> {
        if self.n_qubits != 2 {
            return Err(invalid("partial trace needs a two-qubit state"));
        }
        let mut out = ComplexMat::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..2 {
                    acc += if keep_a {
                        self.mat[(2 * i + k, 2 * j + k)]
                    } else {
                        self.mat[(2 * k + i, 2 * k + j)]
                    };
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityMatrix::from_unchecked(out))
    }
}

/// Validates a matrix as a density matrix with the default tolerances.
pub fn validate_density<T: Real>(m: ComplexMat<T>) -> Result<DensityMatrix<T>> {
    validate_density_with(m, DensityTolerances::default())
}

/// Validates hermiticity, unit trace and positivity in that order.
pub fn validate_density_with<T: Real>(m: ComplexMat<T>, tol: DensityTolerances) -> Result<DensityMatrix<T>> {
    let defect = m.hermiticity_defect();
    if defect > T::tol(tol.hermitian) {
        return Err(Error::NotHermitian {
            defect: defect.to_f64(),
        });
    }
    let tr = m.trace();
    if (tr - Complex::new(T::one(), T::zero())).norm() > T::tol(tol.trace) {
        return Err(Error::TraceNotUnit { trace: tr.re.to_f64() });
    }
    let spectrum = hermitian_eigvals(&m)?;
    if spectrum[0] < -T::tol(tol.positivity) {
        return Err(Error::NotPositive {
            min_eigenvalue: spectrum[0].to_f64(),
        });
    }
    Ok(DensityMatrix::from_unchecked(m))
}

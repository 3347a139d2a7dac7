use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)]
use num_traits::Float;

use super::{eig_hermitian, State, C64, HERMITIAN_TOL};
use crate::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    /// All-zero `dim x dim` matrix.
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    /// Identity of size `dim`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from a row-major slice of length `dim * dim`.
    ///
    /// Panics if the slice length is wrong.
    pub fn from_rows(dim: usize, rows: &[C64]) -> Self {
        assert_eq!(rows.len(), dim * dim, "row-major data has wrong length");
        Matrix { dim, data: rows.to_vec() }
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len());
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    /// Row/column count.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Matrix) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * other[(i % m, j % m)])
    }

    /// Matrix product.
    pub fn matmul(&self, other: &Matrix) -> Self {
        let n = self.dim;
        assert_eq!(n, other.dim, "matmul dimension mismatch");
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "apply dimension mismatch");
        self.data.chunks_exact(self.dim).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim, "add dimension mismatch");
        Matrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    /// Entry-wise difference.
    pub fn sub(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim, "sub dimension mismatch");
        Matrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    /// Multiplies every entry by `k`.
    pub fn scale(&self, k: C64) -> Self {
        Matrix { dim: self.dim, data: self.data.iter().map(|a| a * k).collect() }
    }

    /// Trace.
    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from Hermiticity, `max |A_ij - conj(A_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Hermitian operator (energy units, `hbar = 1`).
///
/// Construction checks `A_ij = conj(A_ji)` to [`HERMITIAN_TOL`] relative to the
/// largest entry, then symmetrizes exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian(Matrix);

impl Hermitian {
    /// Validates and wraps a matrix.
    pub fn new(m: Matrix) -> Result<Self> {
        Self::with_tolerance(m, HERMITIAN_TOL)
    }

    /// Like [`Hermitian::new`] with a caller-chosen relative tolerance.
    pub fn with_tolerance(m: Matrix, tol: f64) -> Result<Self> {
        let dev = m.hermitian_deviation();
        if !dev.is_finite() {
            return Err(Error::NonFinite("operator entries"));
        }
        if dev > tol * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Wraps a matrix known to be Hermitian, forcing exact symmetry.
    pub(crate) fn from_matrix_unchecked(m: Matrix) -> Self {
        let n = m.dim();
        let sym =
            Matrix::from_fn(
                n,
                |i, j| {
                    if i == j {
                        C64::new(m[(i, i)].re, 0.0)
                    } else {
                        (m[(i, j)] + m[(j, i)].conj()) * 0.5
                    }
                },
            );
        Hermitian(sym)
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Hermitian(Matrix::from_fn(n, |i, j| if i == j { C64::new(values[i], 0.0) } else { C64::new(0.0, 0.0) }))
    }

    /// Identity.
    pub fn identity(dim: usize) -> Self {
        Hermitian(Matrix::identity(dim))
    }

    /// Zero operator.
    pub fn zeros(dim: usize) -> Self {
        Hermitian(Matrix::zeros(dim))
    }

    /// Rank-one projector `|v><v|` (the vector is used as given).
    pub fn projector(v: &[C64]) -> Self {
        Hermitian::from_matrix_unchecked(Matrix::outer(v, v))
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    /// Sum of two Hermitian operators.
    pub fn plus(&self, other: &Hermitian) -> Hermitian {
        Hermitian(self.0.add(&other.0))
    }

    /// Difference of two Hermitian operators.
    pub fn minus(&self, other: &Hermitian) -> Hermitian {
        Hermitian(self.0.sub(&other.0))
    }

    /// Multiplies by a real scalar.
    pub fn scaled(&self, k: f64) -> Hermitian {
        Hermitian(self.0.scale(C64::new(k, 0.0)))
    }

    /// Kronecker product; Hermitian in Hermitian out.
    pub fn tensor(&self, other: &Hermitian) -> Hermitian {
        Hermitian(self.0.kron(&other.0))
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `Tr[A B]`; real for Hermitian `A`, `B`.
    pub fn trace_product(&self, other: &Hermitian) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        acc.re
    }

    /// `Tr[{A, B}] = 2 Tr[A B]`.
    pub fn trace_anticommutator(&self, other: &Hermitian) -> f64 {
        2.0 * self.trace_product(other)
    }

    /// `sqrt(Tr[A^dagger A])`.
    pub fn frobenius_norm(&self) -> f64 {
        self.0.as_slice().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|lambda|`.
    pub fn spectral_norm(&self) -> Result<f64> {
        let eig = eig_hermitian(self)?;
        Ok(eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max))
    }

    /// `exp(-i A dt)` built from the eigendecomposition of `A`.
    pub fn expm_step(&self, dt: f64) -> Result<Unitary> {
        if !dt.is_finite() {
            return Err(Error::NonFinite("time step"));
        }
        let eig = eig_hermitian(self)?;
        let n = self.dim();
        let phases: Vec<C64> = eig.values.iter().map(|&l| C64::new(0.0, -l * dt).exp()).collect();
        let mut u = Matrix::zeros(n);
        for (k, v) in eig.vectors.iter().enumerate() {
            let a = v.amplitudes();
            for i in 0..n {
                let ai = a[i] * phases[k];
                for j in 0..n {
                    u[(i, j)] += ai * a[j].conj();
                }
            }
        }
        Ok(Unitary(u))
    }

    /// `A |v>` on a raw amplitude vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.0.apply(v)
    }

    /// Expectation value `<psi|A|psi>`.
    pub fn expectation(&self, psi: &State) -> f64 {
        let av = self.apply(psi.amplitudes());
        psi.amplitudes().iter().zip(&av).map(|(a, b)| a.conj() * b).sum::<C64>().re
    }
}

/// Unitary operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(Matrix);

impl Unitary {
    /// Validates `U^dagger U = 1` to `1e-10` (max entry deviation).
    pub fn new(m: Matrix) -> Result<Self> {
        let dev = m.adjoint().matmul(&m).max_abs_diff(&Matrix::identity(m.dim()));
        if dev > 1e-10 {
            return Err(Error::InvalidParameter { name: "matrix", reason: "not unitary within 1e-10" });
        }
        Ok(Unitary(m))
    }

    /// Identity.
    pub fn identity(dim: usize) -> Self {
        Unitary(Matrix::identity(dim))
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Max-entry deviation of `U^dagger U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        self.0.adjoint().matmul(&self.0).max_abs_diff(&Matrix::identity(self.dim()))
    }

    /// Applies the operator to a state. Unitarity keeps the result normalized
    /// to rounding error, so no renormalization happens here.
    pub fn apply(&self, psi: &State) -> Result<State> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        Ok(State::from_raw(self.0.apply(psi.amplitudes())))
    }

    /// Product `self * other`.
    pub fn compose(&self, other: &Unitary) -> Unitary {
        Unitary(self.0.matmul(&other.0))
    }
}

//! Dense complex linear algebra for small bipartite systems.
//!
//! Matrices are stored row-major. A bipartite basis label `(i, j)` with
//! `i < d1`, `j < d2` maps to the composite index `i * d2 + j`; every
//! reshuffle below (partial transpose, realignment, partial traces) is
//! written against that map.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Relative Hermiticity tolerance: `|m - m^H|_F <= HERMITIAN_TOL * max(1, |m|_F)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Absolute tolerance on `|Tr(rho) - 1|`.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = -1e-9;
/// Tolerance on `| |psi| - 1 |` for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Singular values below this fraction of the largest one are dropped from trace norms.
pub const SINGULAR_CUTOFF: f64 = 1e-13;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO })
    }

    /// The outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// Sum of the diagonal. Panics on a non-square matrix.
    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        self.data
            .chunks(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `|self - self^H|_F`.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols) {
            let cells: Vec<String> = row.iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape());
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape());
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for matrix product");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

/// Bipartite mixed state on `C^d1 (x) C^d2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    d1: usize,
    d2: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity, unit trace and positivity, in that order.
    pub fn new(d1: usize, d2: usize, mat: ComplexMatrix) -> Result<Self> {
        check_dims(d1, d2)?;
        let n = d1 * d2;
        if mat.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", mat.rows(), mat.cols()),
            });
        }
        check_hermitian(&mat)?;
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let min_eigenvalue = min_eigenvalue_hermitian(&mat)?;
        if min_eigenvalue < PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(DensityMatrix { d1, d2, mat })
    }

    pub fn maximally_mixed(d1: usize, d2: usize) -> Result<Self> {
        check_dims(d1, d2)?;
        let n = d1 * d2;
        let mat = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        Ok(DensityMatrix { d1, d2, mat })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix {
            d1: psi.d1,
            d2: psi.d2,
            mat: ComplexMatrix::outer(&psi.amps, &psi.amps),
        }
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

/// Normalized state vector on `C^d1 (x) C^d2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    d1: usize,
    d2: usize,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(d1: usize, d2: usize, amps: Vec<C64>) -> Result<Self> {
        check_dims(d1, d2)?;
        check_amps(d1, d2, &amps)?;
        let norm = vector_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(PureState { d1, d2, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(d1: usize, d2: usize, amps: Vec<C64>) -> Result<Self> {
        check_dims(d1, d2)?;
        check_amps(d1, d2, &amps)?;
        let norm = vector_norm(&amps);
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        let amps = amps.into_iter().map(|z| z / norm).collect();
        Ok(PureState { d1, d2, amps })
    }

    /// `|a> (x) |b>`, both factors normalized first.
    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        let amps = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Self::normalized(a.len(), b.len(), amps)
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// `rho_A = Tr_B |psi><psi|`, built directly from the amplitudes.
    pub fn reduced_a(&self) -> ComplexMatrix {
        let (d1, d2) = (self.d1, self.d2);
        ComplexMatrix::from_fn(d1, d1, |i, k| {
            (0..d2)
                .map(|j| self.amps[i * d2 + j] * self.amps[k * d2 + j].conj())
                .sum()
        })
    }
}

fn check_dims(d1: usize, d2: usize) -> Result<()> {
    for dim in [d1, d2] {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim });
        }
    }
    Ok(())
}

fn check_amps(d1: usize, d2: usize, amps: &[C64]) -> Result<()> {
    if amps.len() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: format!("{} amplitudes", d1 * d2),
            found: format!("{} amplitudes", amps.len()),
        });
    }
    if let Some(pos) = amps.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { row: pos, col: 0 });
    }
    Ok(())
}

fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    check_square(m)?;
    let deviation = m.hermitian_deviation();
    let tolerance = HERMITIAN_TOL * frobenius_norm(m).max(1.0);
    if deviation > tolerance {
        return Err(Error::NotHermitian { deviation, tolerance });
    }
    Ok(())
}

fn check_bipartite(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<()> {
    check_dims(d1, d2)?;
    let n = d1 * d2;
    if m.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n}"),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    vector_norm(a.as_slice())
}

/// Singular values in decreasing order, by one-sided (Hestenes) Jacobi.
///
/// Columns are orthogonalized pairwise with complex rotations until every
/// pair satisfies `|<a_p, a_q>| <= eps * |a_p| |a_q|`; the column norms are
/// then the singular values. Wide matrices are handled through their adjoint.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let work = if a.rows() >= a.cols() { a.clone() } else { a.adjoint() };
    let (m, n) = work.shape();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| work[(i, j)]).collect()).collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cp.iter().zip(cq.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yp = *y * phase;
                    let xv = *x;
                    *x = xv * c - yp * s;
                    *y = xv * s + yp * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = cols.iter().map(|c| vector_norm(c)).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Sum of singular values (Ky-Fan / nuclear norm).
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    let values = singular_values(a);
    let cutoff = values.first().copied().unwrap_or(0.0) * SINGULAR_CUTOFF;
    values.iter().filter(|&&s| s > cutoff).sum()
}

/// `rho^{T_A}`: entry `((i,j),(k,l))` moves to `((k,j),(i,l))`.
pub fn partial_transpose_a(rho: &DensityMatrix) -> ComplexMatrix {
    partial_transpose_a_raw(rho.matrix(), rho.d1(), rho.d2()).expect("density matrix has bipartite shape")
}

pub fn partial_transpose_a_raw(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, d1, d2)?;
    let n = d1 * d2;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d1 {
                for l in 0..d2 {
                    out[(k * d2 + j, i * d2 + l)] = m[(i * d2 + j, k * d2 + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Realignment `R(rho)`: entry `((i,j),(k,l))` moves to `((i,k),(j,l))`,
/// giving a `d1^2 x d2^2` matrix.
pub fn realign(rho: &DensityMatrix) -> ComplexMatrix {
    realign_raw(rho.matrix(), rho.d1(), rho.d2()).expect("density matrix has bipartite shape")
}

pub fn realign_raw(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, d1, d2)?;
    let mut out = ComplexMatrix::zeros(d1 * d1, d2 * d2);
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d1 {
                for l in 0..d2 {
                    out[(i * d1 + k, j * d2 + l)] = m[(i * d2 + j, k * d2 + l)];
                }
            }
        }
    }
    Ok(out)
}

/// `rho_A = Tr_B(rho)`.
pub fn partial_trace_b(rho: &DensityMatrix) -> ComplexMatrix {
    partial_trace_b_raw(rho.matrix(), rho.d1(), rho.d2()).expect("density matrix has bipartite shape")
}

pub fn partial_trace_b_raw(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, d1, d2)?;
    Ok(ComplexMatrix::from_fn(d1, d1, |i, k| {
        (0..d2).map(|j| m[(i * d2 + j, k * d2 + j)]).sum()
    }))
}

/// `rho_B = Tr_A(rho)`.
pub fn partial_trace_a(rho: &DensityMatrix) -> ComplexMatrix {
    partial_trace_a_raw(rho.matrix(), rho.d1(), rho.d2()).expect("density matrix has bipartite shape")
}

pub fn partial_trace_a_raw(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, d1, d2)?;
    Ok(ComplexMatrix::from_fn(d2, d2, |j, l| {
        (0..d1).map(|i| m[(i * d2 + j, i * d2 + l)]).sum()
    }))
}

/// `Tr(m^2)` as the real part of `sum_ij m_ij m_ji`.
pub fn purity(m: &ComplexMatrix) -> f64 {
    m.trace_product(m).re
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue_hermitian(m: &ComplexMatrix) -> Result<f64> {
    check_hermitian(m)?;
    let values = m.hermitian_part().to_nalgebra().symmetric_eigenvalues();
    Ok(values.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Eigenvalues (ascending) and the matching unit eigenvectors as columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(m)?;
    let eig = m.hermitian_part().to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_nalgebra(&eig.eigenvectors);
    let n = m.rows();
    let sorted = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Ok((values, sorted))
}

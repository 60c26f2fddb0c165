//! Generalized Bloch decomposition of bipartite states.
//!
//! A state is expanded as
//! `rho = (I + sum r_i L_i (x) L_0 + sum s_j L_0 (x) L_j + sum t_ij L_i (x) L_j) / (d1 d2)`
//! with `L` the scaled generators of [`GeneratorBasis`], and each coefficient
//! `u_ij = Tr(rho L_i (x) L_j) / ((d1 - 1)(d2 - 1))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{cached_basis, GeneratorBasis};
use crate::linalg::{kron, singular_values, ComplexMatrix, DensityMatrix, C64};

/// Largest imaginary part tolerated on a trace coefficient before it is discarded.
pub const IMAG_TOL: f64 = 1e-10;

/// Local vectors `R`, `S` and the real correlation matrix `T` (row-major).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochDecomposition {
    d1: usize,
    d2: usize,
    r: Vec<f64>,
    s: Vec<f64>,
    t: Vec<f64>,
}

/// `(Tr rho^2, Tr rho_A^2, Tr rho_B^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurityTriple {
    pub total: f64,
    pub a: f64,
    pub b: f64,
}

impl BlochDecomposition {
    /// Assembles a decomposition, checking `|R| = d1^2-1`, `|S| = d2^2-1` and
    /// `T` of size `(d1^2-1)(d2^2-1)`.
    pub fn from_parts(d1: usize, d2: usize, r: Vec<f64>, s: Vec<f64>, t: Vec<f64>) -> Result<Self> {
        for dim in [d1, d2] {
            if dim < 2 {
                return Err(Error::DimensionTooSmall { dim });
            }
        }
        let (n1, n2) = (d1 * d1 - 1, d2 * d2 - 1);
        let check = |what: &str, expected: usize, found: usize| {
            if expected == found {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: format!("{what} of length {expected}"),
                    found: format!("length {found}"),
                })
            }
        };
        check("R", n1, r.len())?;
        check("S", n2, s.len())?;
        check("T", n1 * n2, t.len())?;
        if r.iter().chain(&s).chain(&t).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
        Ok(BlochDecomposition { d1, d2, r, s, t })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    /// Correlation matrix entries, row-major `(d1^2-1) x (d2^2-1)`.
    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn t_shape(&self) -> (usize, usize) {
        (self.d1 * self.d1 - 1, self.d2 * self.d2 - 1)
    }

    pub fn t_entry(&self, i: usize, j: usize) -> f64 {
        self.t[i * (self.d2 * self.d2 - 1) + j]
    }

    pub fn t_matrix(&self) -> ComplexMatrix {
        let (rows, cols) = self.t_shape();
        ComplexMatrix::from_real_row_major(rows, cols, &self.t).expect("T entries are finite")
    }

    /// The full vector `u = (R, S, vec(T))`.
    pub fn u(&self) -> Vec<f64> {
        self.r.iter().chain(&self.s).chain(&self.t).copied().collect()
    }

    pub fn r_norm_sq(&self) -> f64 {
        sum_sq(&self.r)
    }

    pub fn s_norm_sq(&self) -> f64 {
        sum_sq(&self.s)
    }

    pub fn t_frobenius_sq(&self) -> f64 {
        sum_sq(&self.t)
    }

    pub fn t_frobenius(&self) -> f64 {
        self.t_frobenius_sq().sqrt()
    }

    /// `|T|_tr`, the sum of singular values of the correlation matrix.
    pub fn t_trace_norm(&self) -> f64 {
        singular_values(&self.t_matrix()).iter().sum()
    }

    /// `|u|^2 = |R|^2 + |S|^2 + |T|_F^2`.
    pub fn vector_norm_sq(&self) -> f64 {
        self.r_norm_sq() + self.s_norm_sq() + self.t_frobenius_sq()
    }

    /// Purities computed from the Bloch data alone.
    pub fn purity_from_bloch(&self) -> PurityTriple {
        let (d1, d2) = (self.d1 as f64, self.d2 as f64);
        let c = (d1 - 1.0) * (d2 - 1.0);
        PurityTriple {
            total: (1.0 + c * self.vector_norm_sq()) / (d1 * d2),
            a: (1.0 + c * self.r_norm_sq()) / d1,
            b: (1.0 + c * self.s_norm_sq()) / d2,
        }
    }

    /// Rebuilds the matrix from the expansion.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let b1 = cached_basis(self.d1).expect("dimension checked on construction");
        let b2 = cached_basis(self.d2).expect("dimension checked on construction");
        self.reconstruct_with(&b1, &b2)
    }

    pub fn reconstruct_with(&self, basis_a: &GeneratorBasis, basis_b: &GeneratorBasis) -> ComplexMatrix {
        let (d1, d2) = (self.d1, self.d2);
        let n2 = d2 * d2 - 1;
        let ga = basis_a.scaled_all();
        let gb = basis_b.scaled_all();
        let coeff = |i: usize, j: usize| -> f64 {
            match (i, j) {
                (0, 0) => 0.0,
                (i, 0) => self.r[i - 1],
                (0, j) => self.s[j - 1],
                (i, j) => self.t[(i - 1) * n2 + (j - 1)],
            }
        };
        let mut out = ComplexMatrix::identity(d1 * d2);
        for (i, a) in ga.iter().enumerate() {
            let mut partner = ComplexMatrix::zeros(d2, d2);
            for (j, b) in gb.iter().enumerate() {
                let c = coeff(i, j);
                if c != 0.0 {
                    partner = &partner + &b.scale_real(c);
                }
            }
            out = &out + &kron(a, &partner);
        }
        out.scale_real(1.0 / (d1 * d2) as f64)
    }
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

pub fn decompose(rho: &DensityMatrix) -> Result<BlochDecomposition> {
    let b1 = cached_basis(rho.d1())?;
    let b2 = cached_basis(rho.d2())?;
    decompose_with(rho, &b1, &b2)
}

/// Decomposition against explicit bases.
///
/// `Tr(rho (A (x) B))` is evaluated as `Tr(M_B A)` where
/// `M_B = Tr_B(rho (I (x) B))`, so each generator of the second factor costs
/// one pass over `rho`.
pub fn decompose_with(
    rho: &DensityMatrix,
    basis_a: &GeneratorBasis,
    basis_b: &GeneratorBasis,
) -> Result<BlochDecomposition> {
    let (d1, d2) = rho.dims();
    if basis_a.dim() != d1 || basis_b.dim() != d2 {
        return Err(Error::DimensionMismatch {
            expected: format!("bases for {d1}x{d2}"),
            found: format!("bases for {}x{}", basis_a.dim(), basis_b.dim()),
        });
    }
    let m = rho.matrix();
    let ga = basis_a.scaled_all();
    let gb = basis_b.scaled_all();
    let norm = 1.0 / ((d1 - 1) * (d2 - 1)) as f64;
    let n2 = gb.len();

    let mut u = vec![0.0; ga.len() * n2];
    for (j, b) in gb.iter().enumerate() {
        let reduced = ComplexMatrix::from_fn(d1, d1, |i, k| {
            let mut acc = C64::default();
            for jj in 0..d2 {
                for l in 0..d2 {
                    let bv = b[(l, jj)];
                    if bv != C64::default() {
                        acc += m[(i * d2 + jj, k * d2 + l)] * bv;
                    }
                }
            }
            acc
        });
        for (i, a) in ga.iter().enumerate() {
            if i == 0 && j == 0 {
                continue;
            }
            let value = reduced.trace_product(a) * norm;
            let index = i * n2 + j;
            if value.im.abs() > IMAG_TOL {
                return Err(Error::ImaginaryResidue { index, imag: value.im });
            }
            u[index] = value.re;
        }
    }

    let r = (1..ga.len()).map(|i| u[i * n2]).collect();
    let s = (1..n2).map(|j| u[j]).collect();
    let t = (1..ga.len())
        .flat_map(|i| (1..n2).map(move |j| (i, j)))
        .map(|(i, j)| u[i * n2 + j])
        .collect();
    BlochDecomposition::from_parts(d1, d2, r, s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace_a, partial_trace_b, purity, PureState};

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::default();
        PureState::new(2, 2, vec![C64::new(s, 0.0), z, z, C64::new(s, 0.0)])
            .unwrap()
            .density()
    }

    // Direct route: build every L_i (x) L_j and take the trace.
    fn decompose_by_kron(rho: &DensityMatrix) -> Vec<f64> {
        let (d1, d2) = rho.dims();
        let ga = gellmann_scaled(d1);
        let gb = gellmann_scaled(d2);
        let norm = 1.0 / ((d1 - 1) * (d2 - 1)) as f64;
        let mut out = Vec::new();
        for a in &ga {
            for b in &gb {
                out.push((rho.matrix().trace_product(&kron(a, b)) * norm).re);
            }
        }
        out
    }

    fn gellmann_scaled(d: usize) -> Vec<ComplexMatrix> {
        crate::generators::gellmann_basis(d).unwrap().scaled_all()
    }

    #[test]
    fn maximally_mixed_has_zero_vectors() {
        let dec = decompose(&DensityMatrix::maximally_mixed(2, 3).unwrap()).unwrap();
        assert!(dec.u().iter().all(|x| x.abs() < 1e-15));
        assert_eq!(dec.vector_norm_sq(), 0.0);
        let p = dec.purity_from_bloch();
        assert!((p.total - 1.0 / 6.0).abs() < 1e-15);
        assert!((p.a - 0.5).abs() < 1e-15);
        assert!((p.b - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn bell_correlation_matrix() {
        let dec = decompose(&bell()).unwrap();
        assert!(dec.r().iter().chain(dec.s()).all(|x| x.abs() < 1e-15));
        let expected = [1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0];
        for (a, b) in dec.t().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((dec.t_frobenius_sq() - 3.0).abs() < 1e-14);
        assert!((dec.vector_norm_sq() - 3.0).abs() < 1e-14);
        assert!((dec.t_trace_norm() - 3.0).abs() < 1e-12);
        let p = dec.purity_from_bloch();
        assert!((p.total - 1.0).abs() < 1e-14);
        assert!((p.a - 0.5).abs() < 1e-14 && (p.b - 0.5).abs() < 1e-14);
        assert!(dec.reconstruct().max_abs_diff(bell().matrix()) < 1e-12);
    }

    #[test]
    fn fast_route_matches_kron_route() {
        let amps: Vec<C64> = (0..6)
            .map(|k| C64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()))
            .collect();
        let psi = PureState::normalized(2, 3, amps).unwrap();
        let mixed = &psi.density().matrix().scale_real(0.6) + &ComplexMatrix::identity(6).scale_real(0.4 / 6.0);
        let rho = DensityMatrix::new(2, 3, mixed).unwrap();
        let dec = decompose(&rho).unwrap();
        let direct = decompose_by_kron(&rho);
        let n2 = 9;
        for (i, r) in dec.r().iter().enumerate() {
            assert!((r - direct[(i + 1) * n2]).abs() < 1e-14);
        }
        for (j, s) in dec.s().iter().enumerate() {
            assert!((s - direct[j + 1]).abs() < 1e-14);
        }
        for i in 0..3 {
            for j in 0..8 {
                assert!((dec.t_entry(i, j) - direct[(i + 1) * n2 + j + 1]).abs() < 1e-14);
            }
        }
        assert!(dec.reconstruct().max_abs_diff(rho.matrix()) < 1e-12);
        let p = dec.purity_from_bloch();
        assert!((p.total - purity(rho.matrix())).abs() < 1e-12);
        assert!((p.a - purity(&partial_trace_b(&rho))).abs() < 1e-12);
        assert!((p.b - purity(&partial_trace_a(&rho))).abs() < 1e-12);
    }

    #[test]
    fn zero_decomposition_reconstructs_maximally_mixed() {
        let dec = BlochDecomposition::from_parts(3, 2, vec![0.0; 8], vec![0.0; 3], vec![0.0; 24]).unwrap();
        let expected = ComplexMatrix::identity(6).scale_real(1.0 / 6.0);
        assert!(dec.reconstruct().max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn from_parts_rejects_bad_lengths() {
        assert!(matches!(
            BlochDecomposition::from_parts(2, 2, vec![0.0; 3], vec![0.0; 2], vec![0.0; 9]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            BlochDecomposition::from_parts(1, 2, vec![], vec![0.0; 3], vec![]),
            Err(Error::DimensionTooSmall { dim: 1 })
        ));
    }

    #[test]
    fn perturbed_basis_breaks_purity_identity() {
        let rho = bell();
        let b = crate::generators::gellmann_basis(2).unwrap().with_perturbed_scale(1.05);
        let dec = decompose_with(&rho, &b, &b).unwrap();
        assert!((dec.purity_from_bloch().total - 1.0).abs() > 1e-3);
    }
}

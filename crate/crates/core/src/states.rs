//! State constructors for the example families, random test states, and
//! independent concurrence oracles.
//!
//! All randomness comes from `ChaCha20Rng::seed_from_u64(seed)`, so sampled
//! states are reproducible across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::bounds::pure_concurrence;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, kron, singular_values, ComplexMatrix, DensityMatrix, PureState, C64};

/// Tolerance on `sum q_m = 1` for the Example 2 family.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// Eigenvalues at or below this are dropped from pure-state decompositions.
const EIGEN_FLOOR: f64 = 1e-13;

/// Named state families with their parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StateFamily {
    /// `x |phi><phi| + (1 - x) I/16`, `|phi> = (|00> + |33>)/sqrt 2` on 4x4.
    Example1 {
        x: f64,
    },
    /// Diagonal plus coherence family on 4x4 with weights `q1..q4`.
    Example2 {
        q: [f64; 4],
    },
    MaxEntangled {
        d: usize,
    },
    /// `p |Phi_d><Phi_d| + (1 - p) I/d^2`.
    Isotropic {
        d: usize,
        p: f64,
    },
    HaarPure {
        d1: usize,
        d2: usize,
        seed: u64,
    },
    RandomMixed {
        d1: usize,
        d2: usize,
        rank: usize,
        seed: u64,
    },
}

impl StateFamily {
    pub fn build(&self) -> Result<DensityMatrix> {
        match *self {
            StateFamily::Example1 { x } => example1_state(x),
            StateFamily::Example2 { q } => example2_state(q[0], q[1], q[2], q[3]),
            StateFamily::MaxEntangled { d } => Ok(max_entangled(d)?.density()),
            StateFamily::Isotropic { d, p } => isotropic_state(d, p),
            StateFamily::HaarPure { d1, d2, seed } => Ok(haar_random_pure(d1, d2, seed)?.density()),
            StateFamily::RandomMixed { d1, d2, rank, seed } => random_mixed(d1, d2, rank, seed),
        }
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    Ok(())
}

pub fn example1_state(x: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param("x", x));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut phi = vec![C64::default(); 16];
    phi[0] = real(s);
    phi[15] = real(s);
    let projector = ComplexMatrix::outer(&phi, &phi).scale_real(x);
    let noise = ComplexMatrix::identity(16).scale_real((1.0 - x) / 16.0);
    DensityMatrix::new(4, 4, &projector + &noise)
}

/// `diag(q1, q4, q3, q2, q2, q1, q4, q3, q3, q2, q1, q4, q4, q3, q2, q1)/4`
/// plus `q1/4` on every off-diagonal pair of positions `{0, 5, 10, 15}`.
pub fn example2_state(q1: f64, q2: f64, q3: f64, q4: f64) -> Result<DensityMatrix> {
    let q = [q1, q2, q3, q4];
    for (m, &value) in q.iter().enumerate() {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::param(&format!("q{}", m + 1), value));
        }
    }
    let total: f64 = q.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(Error::param("q1+q2+q3+q4", total));
    }
    let diag = [q1, q4, q3, q2, q2, q1, q4, q3, q3, q2, q1, q4, q4, q3, q2, q1];
    let mut mat = ComplexMatrix::from_real_diagonal(&diag.map(|v| v / 4.0));
    const COHERENT: [usize; 4] = [0, 5, 10, 15];
    for &i in &COHERENT {
        for &j in &COHERENT {
            if i != j {
                mat[(i, j)] = real(q1 / 4.0);
            }
        }
    }
    DensityMatrix::new(4, 4, mat)
}

/// The one-parameter slice `q2 = q4 = (1 - q1)/2`, `q3 = 0`.
pub fn example2_slice(q1: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&q1) {
        return Err(Error::param("q1", q1));
    }
    let side = (1.0 - q1) / 2.0;
    example2_state(q1, side, 0.0, side)
}

/// `sum_i |ii> / sqrt d`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    check_dim(d)?;
    let amp = real(1.0 / (d as f64).sqrt());
    let mut amps = vec![C64::default(); d * d];
    for i in 0..d {
        amps[i * d + i] = amp;
    }
    PureState::new(d, d, amps)
}

pub fn isotropic_state(d: usize, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", p));
    }
    let phi = max_entangled(d)?;
    let n = d * d;
    let mat = &phi.density().matrix().scale_real(p) + &ComplexMatrix::identity(n).scale_real((1.0 - p) / n as f64);
    DensityMatrix::new(d, d, mat)
}

/// Two-qubit Werner state `p |Psi-><Psi-| + (1 - p) I/4`.
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", p));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = [C64::default(), real(s), real(-s), C64::default()];
    let mat = &ComplexMatrix::outer(&singlet, &singlet).scale_real(p)
        + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    DensityMatrix::new(2, 2, mat)
}

fn gaussian(rng: &mut ChaCha20Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha20Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed pure state: normalized vector of i.i.d. complex Gaussians.
pub fn haar_random_pure(d1: usize, d2: usize, seed: u64) -> Result<PureState> {
    check_dim(d1)?;
    check_dim(d2)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let amps = (0..d1 * d2).map(|_| gaussian(&mut rng)).collect();
    PureState::normalized(d1, d2, amps)
}

/// Wishart-style state `G G^H / Tr(G G^H)` with `G` of shape `(d1 d2) x rank`.
pub fn random_mixed(d1: usize, d2: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    check_dim(d1)?;
    check_dim(d2)?;
    let n = d1 * d2;
    if rank == 0 || rank > n {
        return Err(Error::param("rank", rank as f64));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g = ginibre(n, rank, &mut rng);
    let w = &g * &g.adjoint();
    let trace = w.trace().re;
    DensityMatrix::new(d1, d2, w.scale_real(1.0 / trace))
}

/// Haar unitary: Gram-Schmidt on the columns of a Ginibre matrix.
fn haar_unitary(n: usize, rng: &mut ChaCha20Rng) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for k in 0..j {
            let proj: C64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
            let basis = cols[k].clone();
            for (x, b) in cols[j].iter_mut().zip(&basis) {
                *x -= proj * b;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Exact two-qubit concurrence `max(0, mu1 - mu2 - mu3 - mu4)`.
///
/// The `mu` are the square roots of the eigenvalues of `rho (Y (x) Y) rho* (Y (x) Y)`,
/// obtained as the singular values of `sqrt(rho) (Y (x) Y) conj(sqrt(rho))`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != (2, 2) {
        return Err(Error::WrongDimension {
            d1: rho.d1(),
            d2: rho.d2(),
        });
    }
    let (values, vectors) = hermitian_eigen(rho.matrix())?;
    let root = ComplexMatrix::from_real_diagonal(&values.iter().map(|v| v.max(0.0).sqrt()).collect::<Vec<_>>());
    let sqrt_rho = &(&vectors * &root) * &vectors.adjoint();
    let i = C64::new(0.0, 1.0);
    let sigma_y = ComplexMatrix::from_row_major(2, 2, vec![C64::default(), -i, i, C64::default()]).expect("finite");
    let yy = kron(&sigma_y, &sigma_y);
    let m = &(&sqrt_rho * &yy) * &sqrt_rho.conj();
    let mu = singular_values(&m);
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}

/// Average pure-state concurrence of the ensemble `|psi_i> = sum_k U_ik sqrt(l_k) |e_k>`.
fn ensemble_concurrence(d1: usize, d2: usize, components: &[Vec<C64>], mixing: Option<&ComplexMatrix>) -> f64 {
    let r = components.len();
    let dim = components[0].len();
    let mut total = 0.0;
    for i in 0..r {
        let member: Vec<C64> = match mixing {
            None => components[i].clone(),
            Some(u) => (0..dim)
                .map(|a| (0..r).map(|k| u[(i, k)] * components[k][a]).sum())
                .collect(),
        };
        let weight: f64 = member.iter().map(|z| z.norm_sqr()).sum();
        if weight <= f64::MIN_POSITIVE {
            continue;
        }
        let psi = PureState::normalized(d1, d2, member).expect("nonzero member");
        total += weight * pure_concurrence(&psi);
    }
    total
}

/// Upper bound on the convex-roof concurrence: the smallest ensemble average
/// over the eigendecomposition and `trials` Haar-random unitary remixings of it.
pub fn decomposition_upper_bound(rho: &DensityMatrix, trials: usize, seed: u64) -> Result<f64> {
    let (d1, d2) = rho.dims();
    let (values, vectors) = hermitian_eigen(rho.matrix())?;
    let n = d1 * d2;
    let components: Vec<Vec<C64>> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > EIGEN_FLOOR)
        .map(|(k, &v)| (0..n).map(|i| vectors[(i, k)] * v.sqrt()).collect())
        .collect();
    let mut best = ensemble_concurrence(d1, d2, &components, None);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let u = haar_unitary(components.len(), &mut rng);
        best = best.min(ensemble_concurrence(d1, d2, &components, Some(&u)));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::decompose;
    use crate::bounds::{pure_c2, thm2_concurrence_lb};
    use crate::linalg::{min_eigenvalue_hermitian, partial_trace_b, purity};

    #[test]
    fn example1_endpoints() {
        let mixed = example1_state(0.0).unwrap();
        assert!(
            mixed
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(16).scale_real(1.0 / 16.0))
                < 1e-16
        );
        let pure = example1_state(1.0).unwrap();
        assert!((purity(pure.matrix()) - 1.0).abs() < 1e-14);
        assert!(matches!(example1_state(1.1), Err(Error::ParamOutOfRange { .. })));
    }

    #[test]
    fn example1_correlation_norm() {
        for step in 1..10 {
            let x = step as f64 / 10.0;
            let dec = decompose(&example1_state(x).unwrap()).unwrap();
            assert!((dec.t_frobenius_sq() - 13.0 / 9.0 * x * x).abs() < 1e-10);
        }
        let dec = decompose(&example1_state(0.9).unwrap()).unwrap();
        assert!((dec.t_frobenius_sq() - 1.17).abs() < 1e-10);
    }

    #[test]
    fn example1_purity() {
        let x = 0.37;
        let rho = example1_state(x).unwrap();
        assert!((purity(rho.matrix()) - (1.0 / 16.0 + 15.0 / 16.0 * x * x)).abs() < 1e-14);
    }

    #[test]
    fn example2_full_coherence_is_max_entangled() {
        let rho = example2_state(1.0, 0.0, 0.0, 0.0).unwrap();
        let expected = max_entangled(4).unwrap().density();
        assert!(rho.matrix().max_abs_diff(expected.matrix()) < 1e-15);
        let (values, _) = hermitian_eigen(rho.matrix()).unwrap();
        assert!((values[15] - 1.0).abs() < 1e-12);
        assert!(values[..15].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn example2_uniform_and_rejections() {
        let rho = example2_state(0.25, 0.25, 0.25, 0.25).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        assert!(matches!(
            example2_state(0.5, 0.5, 0.5, -0.5),
            Err(Error::ParamOutOfRange { .. })
        ));
        assert!(matches!(
            example2_state(0.5, 0.1, 0.1, 0.1),
            Err(Error::ParamOutOfRange { .. })
        ));
        // The coherent block is (q1/4) J, so every admissible q vector is positive.
        assert!(example2_state(0.5, 0.0, 0.0, 0.5).is_ok());
    }

    #[test]
    fn example2_correlation_norm() {
        for step in 1..10 {
            let q1 = step as f64 / 10.0;
            let dec = decompose(&example2_slice(q1).unwrap()).unwrap();
            let expected = (18.0 * q1 * q1 - 4.0 * q1 + 1.0) / 9.0;
            assert!((dec.t_frobenius_sq() - expected).abs() < 1e-10, "q1={q1}");
        }
        let dec = decompose(&example2_slice(0.9).unwrap()).unwrap();
        assert!((dec.t_frobenius_sq() - 11.98 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn max_entangled_concurrences() {
        assert!((pure_concurrence(&max_entangled(2).unwrap()) - 1.0).abs() < 1e-14);
        assert!((pure_concurrence(&max_entangled(4).unwrap()) - 1.5f64.sqrt()).abs() < 1e-14);
        assert!((pure_c2(&max_entangled(3).unwrap()) - 2.0 / 3.0).abs() < 1e-14);
        assert!(matches!(max_entangled(1), Err(Error::DimensionTooSmall { dim: 1 })));
    }

    #[test]
    fn haar_sampler_is_normalized_and_deterministic() {
        let a = haar_random_pure(3, 4, 7).unwrap();
        let b = haar_random_pure(3, 4, 7).unwrap();
        assert_eq!(a, b);
        let norm: f64 = a.amps().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        assert_ne!(a, haar_random_pure(3, 4, 8).unwrap());
    }

    #[test]
    fn haar_mean_reduced_purity() {
        // Haar average of Tr rho_A^2 is (d1 + d2)/(d1 d2 + 1) = 4/5 for two qubits.
        let samples = 10_000;
        let mean: f64 = (0..samples)
            .map(|seed| purity(&haar_random_pure(2, 2, seed).unwrap().reduced_a()))
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.8).abs() < 0.01, "mean = {mean}");
    }

    #[test]
    fn random_mixed_properties() {
        let pure = random_mixed(2, 3, 1, 11).unwrap();
        assert!((purity(pure.matrix()) - 1.0).abs() < 1e-12);
        for seed in 0..20 {
            let full = random_mixed(2, 2, 4, seed).unwrap();
            assert!(min_eigenvalue_hermitian(full.matrix()).unwrap() > 0.0);
            assert!((partial_trace_b(&full).trace().re - 1.0).abs() < 1e-12);
        }
        assert_eq!(random_mixed(3, 3, 4, 5).unwrap(), random_mixed(3, 3, 4, 5).unwrap());
        assert!(matches!(random_mixed(2, 2, 5, 0), Err(Error::ParamOutOfRange { .. })));
        assert!(matches!(random_mixed(2, 2, 0, 0), Err(Error::ParamOutOfRange { .. })));
    }

    #[test]
    fn wootters_examples() {
        assert!((wootters_concurrence(&max_entangled(2).unwrap().density()).unwrap() - 1.0).abs() < 1e-10);
        let product = PureState::product(
            &[C64::new(0.6, 0.0), C64::new(0.0, 0.8)],
            &[C64::new(1.0, 1.0), C64::new(0.5, 0.0)],
        )
        .unwrap();
        assert!(wootters_concurrence(&product.density()).unwrap() < 1e-7);
        for step in 0..=10 {
            let p = step as f64 / 10.0;
            let c = wootters_concurrence(&werner_state(p).unwrap()).unwrap();
            assert!((c - (0.0f64).max((3.0 * p - 1.0) / 2.0)).abs() < 1e-10, "p={p} c={c}");
        }
        assert!(matches!(
            wootters_concurrence(&example1_state(0.5).unwrap()),
            Err(Error::WrongDimension { d1: 4, d2: 4 })
        ));
    }

    #[test]
    fn wootters_matches_pure_concurrence() {
        for seed in 0..50 {
            let psi = haar_random_pure(2, 2, seed).unwrap();
            let c = wootters_concurrence(&psi.density()).unwrap();
            assert!((c - pure_concurrence(&psi)).abs() < 1e-7, "seed {seed}");
        }
    }

    #[test]
    fn decomposition_upper_bound_examples() {
        let psi = haar_random_pure(2, 3, 3).unwrap();
        let ub = decomposition_upper_bound(&psi.density(), 10, 1).unwrap();
        assert!((ub - pure_concurrence(&psi)).abs() < 1e-10);
        let mixed = DensityMatrix::maximally_mixed(2, 2).unwrap();
        assert!(decomposition_upper_bound(&mixed, 0, 0).unwrap() < 1e-12);
        for seed in 0..30 {
            let rho = random_mixed(2, 2, 1 + (seed as usize % 4), seed).unwrap();
            let exact = wootters_concurrence(&rho).unwrap();
            let ub = decomposition_upper_bound(&rho, 50, seed).unwrap();
            assert!(ub >= exact - 1e-8, "seed {seed}: {ub} < {exact}");
            assert!(thm2_concurrence_lb(&rho).unwrap().max(0.0) <= exact + 1e-8);
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let u = haar_unitary(5, &mut rng);
        assert!((&u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn family_build() {
        let rho = StateFamily::Isotropic { d: 3, p: 0.5 }.build().unwrap();
        assert_eq!(rho.dims(), (3, 3));
        let rho = StateFamily::RandomMixed {
            d1: 2,
            d2: 3,
            rank: 2,
            seed: 1,
        }
        .build()
        .unwrap();
        assert_eq!(rho.dims(), (2, 3));
    }
}

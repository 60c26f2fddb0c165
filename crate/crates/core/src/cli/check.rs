//! Self-check suites over seeded random states.

use crate::bloch::{decompose, decompose_with, BlochDecomposition};
use crate::bounds::{
    caf_concurrence_lb, k_const, pure_c2, pure_concurrence, thm1_concurrence_from_t, thm2_c2_from_t, thm2_c2_lb,
    thm2_concurrence_from_t, thm2_concurrence_lb,
};
use crate::error::Result;
use crate::generators::gellmann_basis;
use crate::linalg::{partial_trace_a, partial_trace_b, purity, ComplexMatrix, DensityMatrix};
use crate::states::{
    decomposition_upper_bound, example1_state, example2_slice, haar_random_pure, random_mixed, wootters_concurrence,
};

/// Dimension pairs exercised by the random suites.
pub const DIMENSION_PAIRS: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 3), (4, 4)];
/// Random remixings tried per state when bounding the convex roof from above.
pub const UPPER_BOUND_TRIALS: usize = 200;
/// Grid points used for the scalar inequality.
pub const SCALAR_GRID: usize = 10_000;

/// Deliberate defects for exercising the check itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Decompose with generators scaled 1% too large.
    GeneratorScale,
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub seed: u64,
    /// Samples per dimension pair (and per two-qubit suite).
    pub samples: usize,
    pub fault: Option<Fault>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 1,
            samples: 200,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

struct Suite {
    result: SuiteResult,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            result: SuiteResult {
                name,
                passed: 0,
                total: 0,
                failures: Vec::new(),
            },
        }
    }

    fn record(&mut self, pass: bool, describe: impl FnOnce() -> String) {
        self.result.total += 1;
        if pass {
            self.result.passed += 1;
        } else if self.result.failures.len() < 10 {
            self.result.failures.push(describe());
        }
    }

    fn record_result(&mut self, outcome: Result<bool>, describe: impl FnOnce() -> String) {
        match outcome {
            Ok(pass) => self.record(pass, describe),
            Err(e) => {
                let msg = describe();
                self.record(false, || format!("{msg}: error {e}"));
            }
        }
    }
}

fn sample_seed(cfg: &CheckConfig, suite: u64, pair: usize, k: usize) -> u64 {
    cfg.seed
        .wrapping_mul(1_000_003)
        .wrapping_add(suite << 40)
        .wrapping_add((pair as u64) << 32)
        .wrapping_add(k as u64)
}

fn decompose_checked(rho: &DensityMatrix, fault: Option<Fault>) -> Result<BlochDecomposition> {
    match fault {
        None => decompose(rho),
        Some(Fault::GeneratorScale) => {
            let a = gellmann_basis(rho.d1())?.with_perturbed_scale(1.01);
            let b = gellmann_basis(rho.d2())?.with_perturbed_scale(1.01);
            decompose_with(rho, &a, &b)
        }
    }
}

fn sampled_mixed(cfg: &CheckConfig, suite: u64, pair: usize, k: usize) -> Result<(u64, DensityMatrix)> {
    let (d1, d2) = DIMENSION_PAIRS[pair];
    let seed = sample_seed(cfg, suite, pair, k);
    let rank = 1 + k % (d1 * d2);
    Ok((seed, random_mixed(d1, d2, rank, seed)?))
}

/// Purities from Bloch data against direct purities of the state and its marginals.
pub fn lemma1_suite(cfg: &CheckConfig) -> SuiteResult {
    let mut suite = Suite::new("lemma1 purity identities");
    for (pair, dims) in DIMENSION_PAIRS.iter().enumerate() {
        for k in 0..cfg.samples {
            let outcome = sampled_mixed(cfg, 1, pair, k).and_then(|(seed, rho)| {
                let p = decompose_checked(&rho, cfg.fault)?.purity_from_bloch();
                let errs = [
                    (p.total - purity(rho.matrix())).abs(),
                    (p.a - purity(&partial_trace_b(&rho))).abs(),
                    (p.b - purity(&partial_trace_a(&rho))).abs(),
                ];
                Ok((seed, errs))
            });
            match outcome {
                Ok((seed, errs)) => suite.record(errs.iter().all(|&e| e <= 1e-10), || {
                    format!("dims {dims:?} seed {seed}: errors {errs:?}")
                }),
                Err(e) => suite.record(false, || format!("dims {dims:?} sample {k}: {e}")),
            }
        }
    }
    suite.result
}

/// `reconstruct(decompose(rho)) == rho` entrywise.
pub fn round_trip_suite(cfg: &CheckConfig) -> SuiteResult {
    let mut suite = Suite::new("bloch round trip");
    for (pair, dims) in DIMENSION_PAIRS.iter().enumerate() {
        for k in 0..cfg.samples {
            let seed = sample_seed(cfg, 2, pair, k);
            let outcome = sampled_mixed(cfg, 2, pair, k).and_then(|(_, rho)| {
                let dec = decompose_checked(&rho, cfg.fault)?;
                Ok(dec.reconstruct().max_abs_diff(rho.matrix()) <= 1e-10)
            });
            suite.record_result(outcome, || format!("dims {dims:?} seed {seed}"));
        }
    }
    suite.result
}

/// Pure-state identities: vector norm, equal marginal purities, range of `|T|_F`,
/// exactness of the correlation-norm formulas, and the concurrence bound below the exact value.
pub fn pure_state_suite(cfg: &CheckConfig) -> SuiteResult {
    let mut suite = Suite::new("pure-state identities");
    for (pair, &(d1, d2)) in DIMENSION_PAIRS.iter().enumerate() {
        let norm_target = (d1 * d2 - 1) as f64 / ((d1 - 1) * (d2 - 1)) as f64;
        let upper = k_const(d1, d2) + 1.0;
        for k in 0..cfg.samples {
            let seed = sample_seed(cfg, 3, pair, k);
            let outcome = haar_random_pure(d1, d2, seed).and_then(|psi| {
                let rho = psi.density();
                let dec = decompose_checked(&rho, cfg.fault)?;
                let t_f = dec.t_frobenius();
                let t_sq = dec.t_frobenius_sq();
                let exact_c = pure_concurrence(&psi);
                let exact_c2 = pure_c2(&psi);
                let pur = dec.purity_from_bloch();
                Ok((dec.vector_norm_sq() - norm_target).abs() <= 1e-10
                    && (pur.a - pur.b).abs() <= 1e-10
                    && t_sq >= 1.0 - 1e-9
                    && t_sq < upper + 1e-9
                    && (thm1_concurrence_from_t(t_f, d1, d2)? - exact_c).abs() <= 1e-9
                    && (thm2_c2_from_t(t_f, d1, d2) - exact_c2).abs() <= 1e-9
                    && thm2_concurrence_from_t(t_f, d1, d2) <= exact_c + 1e-9)
            });
            suite.record_result(outcome, || format!("dims ({d1}, {d2}) seed {seed}"));
        }
    }
    suite.result
}

/// `sqrt(x^2 - 1) >= sqrt((a+1)/(a-1)) (x - 1)` on `[1, a]`, `a = sqrt(K + 1)`.
pub fn scalar_inequality_suite() -> SuiteResult {
    let mut suite = Suite::new("scalar inequality");
    for d1 in 2..=4 {
        for d2 in d1..=4 {
            let a = (k_const(d1, d2) + 1.0).sqrt();
            let slope = ((a + 1.0) / (a - 1.0)).sqrt();
            let mut worst = f64::INFINITY;
            for i in 0..SCALAR_GRID {
                let x = 1.0 + (a - 1.0) * i as f64 / (SCALAR_GRID - 1) as f64;
                worst = worst.min((x * x - 1.0).sqrt() - slope * (x - 1.0));
            }
            suite.record(worst >= -1e-12, || format!("dims ({d1}, {d2}): slack {worst:e}"));
        }
    }
    suite.result
}

/// Two-qubit sandwich `max(0, lower) <= C_exact <= decomposition upper bound`.
pub fn two_qubit_suite(cfg: &CheckConfig) -> SuiteResult {
    let mut suite = Suite::new("two-qubit oracle sandwich");
    for k in 0..cfg.samples {
        let seed = sample_seed(cfg, 4, 0, k);
        let rank = 1 + k % 4;
        let outcome = random_mixed(2, 2, rank, seed).and_then(|rho| {
            let exact = wootters_concurrence(&rho)?;
            let upper = decomposition_upper_bound(&rho, UPPER_BOUND_TRIALS, seed)?;
            Ok(thm2_concurrence_lb(&rho)?.max(0.0) <= exact + 1e-8
                && caf_concurrence_lb(&rho).max(0.0) <= exact + 1e-8
                && exact <= upper + 1e-6)
        });
        suite.record_result(outcome, || format!("rank {rank} seed {seed}"));
    }
    suite.result
}

/// The 2-concurrence bound never exceeds the average over an explicit decomposition.
pub fn convexity_suite(cfg: &CheckConfig) -> SuiteResult {
    let mut suite = Suite::new("2-concurrence convexity");
    for (pair, &(d1, d2)) in DIMENSION_PAIRS.iter().enumerate() {
        for k in 0..cfg.samples.div_ceil(4) {
            let seed = sample_seed(cfg, 5, pair, k);
            let members = 1 + k % 5;
            let outcome = (|| {
                let n = d1 * d2;
                let mut mat = ComplexMatrix::zeros(n, n);
                let mut average = 0.0;
                let weights: Vec<f64> = (0..members).map(|m| 1.0 + ((seed as usize + m) % 7) as f64).collect();
                let total: f64 = weights.iter().sum();
                for (m, w) in weights.iter().enumerate() {
                    let psi = haar_random_pure(d1, d2, seed.wrapping_add(1000 * m as u64 + 17))?;
                    let p = w / total;
                    mat = &mat + &psi.density().matrix().scale_real(p);
                    average += p * pure_c2(&psi);
                }
                let rho = DensityMatrix::new(d1, d2, mat)?;
                Ok(thm2_c2_lb(&rho)? <= average + 1e-9)
            })();
            suite.record_result(outcome, || format!("dims ({d1}, {d2}) seed {seed}"));
        }
    }
    suite.result
}

/// Correlation norms of the two example families against their closed forms.
pub fn example_suite(cfg: &CheckConfig) -> SuiteResult {
    let mut suite = Suite::new("example closed forms");
    for step in 1..20 {
        let v = step as f64 * 0.05;
        let outcome = example1_state(v).and_then(|rho| {
            let t_sq = decompose_checked(&rho, cfg.fault)?.t_frobenius_sq();
            Ok((t_sq - 13.0 / 9.0 * v * v).abs() <= 1e-10)
        });
        suite.record_result(outcome, || format!("example1 x = {v}"));
        let outcome = example2_slice(v).and_then(|rho| {
            let t_sq = decompose_checked(&rho, cfg.fault)?.t_frobenius_sq();
            Ok((t_sq - (18.0 * v * v - 4.0 * v + 1.0) / 9.0).abs() <= 1e-10)
        });
        suite.record_result(outcome, || format!("example2 q1 = {v}"));
    }
    suite.result
}

pub fn run_check(cfg: &CheckConfig) -> Vec<SuiteResult> {
    vec![
        lemma1_suite(cfg),
        round_trip_suite(cfg),
        pure_state_suite(cfg),
        scalar_inequality_suite(),
        two_qubit_suite(cfg),
        convexity_suite(cfg),
        example_suite(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_check_passes() {
        let cfg = CheckConfig {
            seed: 3,
            samples: 8,
            fault: None,
        };
        for suite in run_check(&cfg) {
            assert!(suite.ok(), "{}: {:?}", suite.name, suite.failures);
            assert!(suite.total > 0);
        }
    }

    #[test]
    fn injected_fault_breaks_lemma1() {
        let cfg = CheckConfig {
            seed: 3,
            samples: 4,
            fault: Some(Fault::GeneratorScale),
        };
        let lemma = lemma1_suite(&cfg);
        assert!(!lemma.ok());
        assert!(lemma.failures[0].contains("seed"));
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = CheckConfig {
            seed: 42,
            samples: 5,
            fault: None,
        };
        assert_eq!(run_check(&cfg), run_check(&cfg));
    }
}

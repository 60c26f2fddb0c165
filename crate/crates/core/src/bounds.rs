//! Exact pure-state concurrences and mixed-state lower bounds.
//!
//! Raw bounds may be negative; only [`BoundReport`] clamps them at zero.

use serde::Serialize;

use crate::bloch::{decompose, PurityTriple};
use crate::error::{Error, Result};
use crate::linalg::{partial_transpose_a, purity, realign, trace_norm, DensityMatrix, PureState};

/// Slack allowed on the pure-state range `1 <= |T|_F^2 < K + 1`.
pub const PURE_RANGE_TOL: f64 = 1e-9;

/// `K = (d1 + d2) / ((d1 - 1)(d2 - 1))`.
pub fn k_const(d1: usize, d2: usize) -> f64 {
    (d1 + d2) as f64 / ((d1 - 1) * (d2 - 1)) as f64
}

/// Slope of the correlation-norm concurrence bound, `sqrt(2)(sqrt(K+1)+1)/K`.
pub fn thm2_coefficient(k: f64) -> f64 {
    std::f64::consts::SQRT_2 * ((k + 1.0).sqrt() + 1.0) / k
}

/// `C(psi) = sqrt(2(1 - Tr rho_A^2))`.
pub fn pure_concurrence(psi: &PureState) -> f64 {
    (2.0 * pure_c2(psi)).sqrt()
}

/// `C_2(psi) = 1 - Tr rho_A^2`, floored at zero against rounding.
pub fn pure_c2(psi: &PureState) -> f64 {
    (1.0 - purity(&psi.reduced_a())).max(0.0)
}

fn check_pure_range(t_f: f64, d1: usize, d2: usize) -> Result<()> {
    let upper = k_const(d1, d2) + 1.0;
    let t_sq = t_f * t_f;
    if !(t_sq >= 1.0 - PURE_RANGE_TOL && t_sq < upper + PURE_RANGE_TOL) {
        return Err(Error::OutOfPureRange {
            t_frobenius_sq: t_sq,
            upper,
        });
    }
    Ok(())
}

/// Pure-state concurrence from the correlation norm:
/// `sqrt((2 (d1-1)(d2-1) / (d1+d2)) (|T|_F^2 - 1))`.
pub fn thm1_concurrence_from_t(t_f: f64, d1: usize, d2: usize) -> Result<f64> {
    Ok((2.0 * thm1_c2_from_t(t_f, d1, d2)?).sqrt())
}

/// Pure-state 2-concurrence from the correlation norm.
pub fn thm1_c2_from_t(t_f: f64, d1: usize, d2: usize) -> Result<f64> {
    check_pure_range(t_f, d1, d2)?;
    Ok((thm2_c2_from_t(t_f, d1, d2)).max(0.0))
}

/// `sqrt(2)(sqrt(K+1)+1)/K (|T|_F - 1)`.
pub fn thm2_concurrence_from_t(t_f: f64, d1: usize, d2: usize) -> f64 {
    thm2_coefficient(k_const(d1, d2)) * (t_f - 1.0)
}

/// `((d1-1)(d2-1)/(d1+d2)) (|T|_F^2 - 1)`.
pub fn thm2_c2_from_t(t_f: f64, d1: usize, d2: usize) -> f64 {
    (t_f * t_f - 1.0) / k_const(d1, d2)
}

pub fn thm2_concurrence_lb(rho: &DensityMatrix) -> Result<f64> {
    let dec = decompose(rho)?;
    Ok(thm2_concurrence_from_t(dec.t_frobenius(), rho.d1(), rho.d2()))
}

pub fn thm2_c2_lb(rho: &DensityMatrix) -> Result<f64> {
    let dec = decompose(rho)?;
    Ok(thm2_c2_from_t(dec.t_frobenius(), rho.d1(), rho.d2()))
}

/// `max(|rho^{T_A}|_tr, |R(rho)|_tr)`.
pub fn max_reshuffle_norm(rho: &DensityMatrix) -> f64 {
    trace_norm(&partial_transpose_a(rho)).max(trace_norm(&realign(rho)))
}

fn small_dim(d1: usize, d2: usize) -> f64 {
    d1.min(d2) as f64
}

/// `sqrt(2/(m(m-1))) (N - 1)` with `m = min(d1, d2)` and `N` the larger reshuffle norm.
pub fn caf_from_norm(max_norm: f64, d1: usize, d2: usize) -> f64 {
    let m = small_dim(d1, d2);
    (2.0 / (m * (m - 1.0))).sqrt() * (max_norm - 1.0)
}

/// `(N - 1)^2 / (m(m-1))` with `N - 1` floored at zero before squaring.
pub fn qc_from_norm(max_norm: f64, d1: usize, d2: usize) -> f64 {
    let m = small_dim(d1, d2);
    let excess = (max_norm - 1.0).max(0.0);
    excess * excess / (m * (m - 1.0))
}

/// Concurrence bound from the partial transpose and realignment trace norms.
pub fn caf_concurrence_lb(rho: &DensityMatrix) -> f64 {
    caf_from_norm(max_reshuffle_norm(rho), rho.d1(), rho.d2())
}

/// 2-concurrence bound from the partial transpose and realignment trace norms.
pub fn qc_c2_lb(rho: &DensityMatrix) -> f64 {
    qc_from_norm(max_reshuffle_norm(rho), rho.d1(), rho.d2())
}

fn check_unit(name: &str, q1: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q1) {
        return Err(Error::param(name, q1));
    }
    Ok(())
}

/// Closed-form comparison bound for the Example 2 family,
/// `(y + |y|) / (2 sqrt 6)` with `y = 2 q1 / 3 - 1/6`.
pub fn example2_pra_lb(q1: f64) -> Result<f64> {
    check_unit("q1", q1)?;
    let y = 2.0 * q1 / 3.0 - 1.0 / 6.0;
    Ok((y + y.abs()) / (2.0 * 6f64.sqrt()))
}

/// Closed-form comparison bound for the Example 2 family,
/// `(y + |y|) / (4 sqrt 6)` with `y = (3 q1 - 1) / 2`.
pub fn example2_old_lb(q1: f64) -> Result<f64> {
    check_unit("q1", q1)?;
    let y = 0.5 * (3.0 * q1 - 1.0);
    Ok((y + y.abs()) / (4.0 * 6f64.sqrt()))
}

/// Every bound evaluated for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub d1: usize,
    pub d2: usize,
    pub t_frobenius: f64,
    pub t_trace_norm: f64,
    pub k_const: f64,
    pub thm2_c: f64,
    pub thm2_c2: f64,
    pub ppt_trace_norm: f64,
    pub realign_trace_norm: f64,
    pub caf_c: f64,
    pub qc_c2: f64,
    pub best_c: f64,
    pub best_c2: f64,
    pub purity: PurityTriple,
}

pub fn full_report(rho: &DensityMatrix) -> Result<BoundReport> {
    let (d1, d2) = rho.dims();
    let dec = decompose(rho)?;
    let t_frobenius = dec.t_frobenius();
    let ppt_trace_norm = trace_norm(&partial_transpose_a(rho));
    let realign_trace_norm = trace_norm(&realign(rho));
    let max_norm = ppt_trace_norm.max(realign_trace_norm);
    let thm2_c = thm2_concurrence_from_t(t_frobenius, d1, d2);
    let thm2_c2 = thm2_c2_from_t(t_frobenius, d1, d2);
    let caf_c = caf_from_norm(max_norm, d1, d2);
    let qc_c2 = qc_from_norm(max_norm, d1, d2);
    Ok(BoundReport {
        d1,
        d2,
        t_frobenius,
        t_trace_norm: dec.t_trace_norm(),
        k_const: k_const(d1, d2),
        thm2_c,
        thm2_c2,
        ppt_trace_norm,
        realign_trace_norm,
        caf_c,
        qc_c2,
        best_c: 0f64.max(thm2_c).max(caf_c),
        best_c2: 0f64.max(thm2_c2).max(qc_c2),
        purity: dec.purity_from_bloch(),
    })
}

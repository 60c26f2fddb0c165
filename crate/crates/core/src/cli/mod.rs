//! Library side of the command-line tool: state files, reports, sweeps,
//! crossovers and the self-check.

pub mod check;
pub mod state_file;
pub mod sweep;

use std::fmt::Write as _;

use crate::bounds::{full_report, pure_concurrence, BoundReport};
use crate::error::Result;
use crate::linalg::{hermitian_eigen, purity, DensityMatrix, PureState};
use crate::states::wootters_concurrence;

/// States with `Tr(rho^2)` this close to 1 are reported with their exact concurrences.
const PURE_TOL: f64 = 1e-10;

/// Leading eigenvector of a (numerically) pure state.
fn as_pure(rho: &DensityMatrix) -> Result<Option<PureState>> {
    if (purity(rho.matrix()) - 1.0).abs() > PURE_TOL {
        return Ok(None);
    }
    let (_, vectors) = hermitian_eigen(rho.matrix())?;
    let n = vectors.rows();
    let amps = (0..n).map(|i| vectors[(i, n - 1)]).collect();
    Ok(Some(PureState::normalized(rho.d1(), rho.d2(), amps)?))
}

fn line(out: &mut String, key: &str, value: f64) {
    writeln!(out, "{key:<22}{value:.12}").expect("write to String");
}

pub fn format_report(report: &BoundReport) -> String {
    let mut out = String::new();
    writeln!(out, "dimensions            {}x{}", report.d1, report.d2).expect("write to String");
    line(&mut out, "t_frobenius", report.t_frobenius);
    line(&mut out, "t_frobenius_sq", report.t_frobenius * report.t_frobenius);
    line(&mut out, "t_trace_norm", report.t_trace_norm);
    line(&mut out, "k_const", report.k_const);
    line(&mut out, "ppt_trace_norm", report.ppt_trace_norm);
    line(&mut out, "realign_trace_norm", report.realign_trace_norm);
    line(&mut out, "thm2_c", report.thm2_c);
    line(&mut out, "thm2_c_clamped", report.thm2_c.max(0.0));
    line(&mut out, "caf_c", report.caf_c);
    line(&mut out, "caf_c_clamped", report.caf_c.max(0.0));
    line(&mut out, "thm2_c2", report.thm2_c2);
    line(&mut out, "thm2_c2_clamped", report.thm2_c2.max(0.0));
    line(&mut out, "qc_c2", report.qc_c2);
    line(&mut out, "best_c", report.best_c);
    line(&mut out, "best_c2", report.best_c2);
    line(&mut out, "purity", report.purity.total);
    line(&mut out, "purity_a", report.purity.a);
    line(&mut out, "purity_b", report.purity.b);
    out
}

/// Full text report, with exact values appended for pure and two-qubit states.
pub fn report_text(rho: &DensityMatrix) -> Result<String> {
    let report = full_report(rho)?;
    let mut out = format_report(&report);
    if let Some(psi) = as_pure(rho)? {
        let c = pure_concurrence(&psi);
        line(&mut out, "exact_pure_c", c);
        line(&mut out, "exact_pure_c2", c * c / 2.0);
    }
    if rho.dims() == (2, 2) {
        line(&mut out, "wootters_c", wootters_concurrence(rho)?);
    }
    Ok(out)
}

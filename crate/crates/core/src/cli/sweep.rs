//! Parameter sweeps over one-parameter families and crossover location.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{example2_old_lb, example2_pra_lb, full_report};
use crate::error::{Error, Result};
use crate::states::{example1_state, example2_slice, isotropic_state};

/// Grid spacing used to bracket crossings before bisection.
pub const BRACKET_STEP: f64 = 0.005;
/// Width of the final bisection interval.
pub const CROSSOVER_TOL: f64 = 1e-7;

/// One-parameter families that can be swept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    /// Parameter `x`.
    Example1,
    /// Parameter `q1` on the slice `q2 = q4 = (1 - q1)/2`, `q3 = 0`.
    Example2,
    /// Parameter `p` for local dimension `d`.
    Isotropic { d: usize },
}

impl SweepFamily {
    pub fn param_name(&self) -> &'static str {
        match self {
            SweepFamily::Example1 => "x",
            SweepFamily::Example2 => "q1",
            SweepFamily::Isotropic { .. } => "p",
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn has_closed_form_comparisons(&self) -> bool {
        matches!(self, SweepFamily::Example2)
    }

    pub fn row(&self, param: f64) -> Result<SweepRow> {
        let rho = match *self {
            SweepFamily::Example1 => example1_state(param)?,
            SweepFamily::Example2 => example2_slice(param)?,
            SweepFamily::Isotropic { d } => isotropic_state(d, param)?,
        };
        let report = full_report(&rho)?;
        let (pra_c, old_c) = if self.has_closed_form_comparisons() {
            (Some(example2_pra_lb(param)?), Some(example2_old_lb(param)?))
        } else {
            (None, None)
        };
        Ok(SweepRow {
            param,
            t_frobenius: report.t_frobenius,
            thm2_c: report.thm2_c,
            caf_c: report.caf_c,
            thm2_c2: report.thm2_c2,
            qc_c2: report.qc_c2,
            best_c: report.best_c,
            best_c2: report.best_c2,
            pra_c,
            old_c,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub t_frobenius: f64,
    pub thm2_c: f64,
    pub caf_c: f64,
    pub thm2_c2: f64,
    pub qc_c2: f64,
    pub best_c: f64,
    pub best_c2: f64,
    pub pra_c: Option<f64>,
    pub old_c: Option<f64>,
}

/// Bound columns that can be compared in a crossover search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundName {
    Thm2C,
    CafC,
    Thm2C2,
    QcC2,
    PraC,
    OldC,
    BestC,
    BestC2,
}

impl BoundName {
    pub fn value(&self, row: &SweepRow) -> Result<f64> {
        let missing = |name: &str| Error::Parse(format!("bound {name} is not defined for this family"));
        Ok(match self {
            BoundName::Thm2C => row.thm2_c,
            BoundName::CafC => row.caf_c,
            BoundName::Thm2C2 => row.thm2_c2,
            BoundName::QcC2 => row.qc_c2,
            BoundName::PraC => row.pra_c.ok_or_else(|| missing("pra_c"))?,
            BoundName::OldC => row.old_c.ok_or_else(|| missing("old_c"))?,
            BoundName::BestC => row.best_c,
            BoundName::BestC2 => row.best_c2,
        })
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "thm2_c" => BoundName::Thm2C,
            "caf_c" => BoundName::CafC,
            "thm2_c2" => BoundName::Thm2C2,
            "qc_c2" => BoundName::QcC2,
            "pra_c" => BoundName::PraC,
            "old_c" => BoundName::OldC,
            "best_c" => BoundName::BestC,
            "best_c2" => BoundName::BestC2,
            other => return Err(Error::Parse(format!("unknown bound name {other:?}"))),
        })
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BoundName::Thm2C => "thm2_c",
            BoundName::CafC => "caf_c",
            BoundName::Thm2C2 => "thm2_c2",
            BoundName::QcC2 => "qc_c2",
            BoundName::PraC => "pra_c",
            BoundName::OldC => "old_c",
            BoundName::BestC => "best_c",
            BoundName::BestC2 => "best_c2",
        };
        f.write_str(name)
    }
}

/// Grid `from, from + step, ...` up to and including `to`.
pub fn grid(family: SweepFamily, from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    let (lo, hi) = family.domain();
    if !(from.is_finite() && from >= lo && from <= hi) {
        return Err(Error::param("from", from));
    }
    if !(to.is_finite() && to >= from && to <= hi) {
        return Err(Error::param("to", to));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::param("step", step));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    let mut points: Vec<f64> = (0..=count).map(|i| (from + i as f64 * step).min(to)).collect();
    if to - points[count] > 1e-9 * step.max(1.0) {
        points.push(to);
    }
    Ok(points)
}

/// Evaluates every grid point; rows come back in parameter order.
pub fn sweep(family: SweepFamily, from: f64, to: f64, step: f64) -> Result<Vec<SweepRow>> {
    grid(family, from, to, step)?
        .into_par_iter()
        .map(|p| family.row(p))
        .collect()
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with header, `.` decimal point, 17 significant digits and LF endings.
pub fn write_csv<W: Write>(family: SweepFamily, rows: &[SweepRow], mut out: W) -> io::Result<()> {
    let mut header = vec![
        family.param_name(),
        "t_frobenius",
        "thm2_c",
        "caf_c",
        "thm2_c2",
        "qc_c2",
        "best_c",
        "best_c2",
    ];
    if family.has_closed_form_comparisons() {
        header.extend(["pra_c", "old_c"]);
    }
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let mut cells: Vec<String> = [
            row.param,
            row.t_frobenius,
            row.thm2_c,
            row.caf_c,
            row.thm2_c2,
            row.qc_c2,
            row.best_c,
            row.best_c2,
        ]
        .into_iter()
        .map(fmt_f64)
        .collect();
        if family.has_closed_form_comparisons() {
            cells.extend(
                [row.pra_c, row.old_c]
                    .into_iter()
                    .map(|v| v.map(fmt_f64).unwrap_or_default()),
            );
        }
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn sweep_csv(family: SweepFamily, from: f64, to: f64, step: f64) -> Result<String> {
    let rows = sweep(family, from, to, step)?;
    let mut buf = Vec::new();
    write_csv(family, &rows, &mut buf).expect("writing to a Vec cannot fail");
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

/// `lhs - max(rhs...)` at one parameter value.
fn gap(family: SweepFamily, param: f64, lhs: BoundName, rhs: &[BoundName]) -> Result<f64> {
    let row = family.row(param)?;
    let mut best = f64::NEG_INFINITY;
    for name in rhs {
        best = best.max(name.value(&row)?);
    }
    Ok(lhs.value(&row)? - best)
}

/// Parameter beyond which `lhs` stays on the same side of `max(rhs)`.
///
/// The gap is bracketed on a [`BRACKET_STEP`] grid over `[from, to]`; the last
/// sign change is refined by bisection to [`CROSSOVER_TOL`].
pub fn crossover(family: SweepFamily, lhs: BoundName, rhs: &[BoundName], from: f64, to: f64) -> Result<f64> {
    if rhs.is_empty() {
        return Err(Error::Parse("crossover needs at least one comparison bound".into()));
    }
    let points = grid(family, from, to, BRACKET_STEP)?;
    let gaps: Vec<f64> = points
        .par_iter()
        .map(|&p| gap(family, p, lhs, rhs))
        .collect::<Result<_>>()?;
    let no_crossing = || Error::NoCrossing {
        lhs: lhs.to_string(),
        rhs: rhs.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("|"),
        from,
        to,
    };
    let k = (0..gaps.len().saturating_sub(1))
        .rev()
        .find(|&k| (gaps[k] > 0.0) != (gaps[k + 1] > 0.0))
        .ok_or_else(no_crossing)?;

    let (mut lo, mut hi) = (points[k], points[k + 1]);
    let lo_positive = gaps[k] > 0.0;
    while hi - lo > CROSSOVER_TOL {
        let mid = 0.5 * (lo + hi);
        if (gap(family, mid, lhs, rhs)? > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoints() {
        let g = grid(SweepFamily::Example1, 0.5, 1.0, 0.005).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.5);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert_eq!(grid(SweepFamily::Example1, 0.3, 0.3, 0.1).unwrap(), vec![0.3]);
        let uneven = grid(SweepFamily::Example1, 0.0, 0.25, 0.1).unwrap();
        assert_eq!(uneven.len(), 4);
        assert_eq!(*uneven.last().unwrap(), 0.25);
    }

    #[test]
    fn grid_rejects_bad_ranges() {
        assert!(grid(SweepFamily::Example1, 0.6, 0.5, 0.1).is_err());
        assert!(grid(SweepFamily::Example1, 0.5, 1.5, 0.1).is_err());
        assert!(grid(SweepFamily::Example2, -0.5, 0.5, 0.1).is_err());
        assert!(grid(SweepFamily::Example1, 0.5, 0.6, 0.0).is_err());
    }

    #[test]
    fn example1_row_matches_closed_forms() {
        let x = 0.95;
        let row = SweepFamily::Example1.row(x).unwrap();
        let thm2 = 9.0 * 2f64.sqrt() / 8.0 * (17f64.sqrt() / 3.0 + 1.0) * (13f64.sqrt() * x / 3.0 - 1.0);
        let caf = ((7.0 + 9.0 * x) / 8.0 - 1.0) / 6f64.sqrt();
        assert!((row.thm2_c - thm2).abs() < 1e-10);
        assert!((row.caf_c - caf).abs() < 1e-10);
        assert_eq!(row.best_c, row.thm2_c);
        let low = SweepFamily::Example1.row(0.6).unwrap();
        assert_eq!(low.best_c, low.caf_c);
        assert!(row.pra_c.is_none());
    }

    #[test]
    fn csv_layout() {
        let text = sweep_csv(SweepFamily::Example2, 0.5, 0.5, 0.1).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "q1,t_frobenius,thm2_c,caf_c,thm2_c2,qc_c2,best_c,best_c2,pra_c,old_c"
        );
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 10);
        assert!(lines[1].starts_with("5.0000000000000000e-1,"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn bound_names_parse() {
        for name in [
            "thm2_c", "caf_c", "thm2_c2", "qc_c2", "pra_c", "old_c", "best_c", "best_c2",
        ] {
            assert_eq!(name.parse::<BoundName>().unwrap().to_string(), name);
        }
        assert!("nope".parse::<BoundName>().is_err());
    }

    #[test]
    fn missing_comparison_column_is_an_error() {
        assert!(crossover(SweepFamily::Example1, BoundName::Thm2C, &[BoundName::PraC], 0.0, 1.0).is_err());
    }

    #[test]
    fn no_crossing_reported() {
        let err = crossover(SweepFamily::Example1, BoundName::Thm2C, &[BoundName::CafC], 0.95, 1.0).unwrap_err();
        assert!(matches!(err, Error::NoCrossing { .. }));
    }
}

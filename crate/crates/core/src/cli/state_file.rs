//! JSON state files: `{"d1": 2, "d2": 2, "matrix": [[re, im], ...]}` with the
//! `(d1 d2)^2` entries in row-major order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub d1: usize,
    pub d2: usize,
    pub matrix: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        StateFile {
            d1: rho.d1(),
            d2: rho.d2(),
            matrix: rho.matrix().as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn into_state(self) -> Result<DensityMatrix> {
        let n = self.d1 * self.d2;
        if self.matrix.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries for a {}x{} state", n * n, self.d1, self.d2),
                found: format!("{} entries", self.matrix.len()),
            });
        }
        let data = self.matrix.iter().map(|&[re, im]| C64::new(re, im)).collect();
        DensityMatrix::new(self.d1, self.d2, ComplexMatrix::from_row_major(n, n, data)?)
    }
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid state file: {e}")))?;
    file.into_state()
}

pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_state(&text)
}

pub fn render_state(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("state file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::example1_state;

    #[test]
    fn round_trip() {
        let rho = example1_state(0.3).unwrap();
        let back = parse_state(&render_state(&rho)).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_state("{\"d1\": 2}"), Err(Error::Parse(_))));
        let short = r#"{"d1": 2, "d2": 2, "matrix": [[1, 0]]}"#;
        assert!(matches!(parse_state(short), Err(Error::DimensionMismatch { .. })));
        let mut entries = vec!["[0, 0]"; 16];
        entries[0] = "[2, 0]";
        let text = format!(r#"{{"d1": 2, "d2": 2, "matrix": [{}]}}"#, entries.join(","));
        assert!(matches!(parse_state(&text), Err(Error::TraceNotOne { .. })));
    }
}

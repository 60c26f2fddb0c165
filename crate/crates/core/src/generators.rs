//! Generalized Gell-Mann generators of SU(d).

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// The `d^2 - 1` traceless Hermitian generators with `Tr(l_i l_j) = 2 delta_ij`.
///
/// Ordering: symmetric `E_jk + E_kj`, then antisymmetric `-i E_jk + i E_kj`,
/// each over `j < k` lexicographically, then the `d - 1` diagonal matrices.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    d: usize,
    lambdas: Vec<ComplexMatrix>,
    scale: f64,
    scale0: f64,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of generators, `d^2 - 1`.
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[ComplexMatrix] {
        &self.lambdas
    }

    /// `sqrt(d(d-1)/2)`, the factor applied to every generator.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `sqrt(d-1)`, the factor applied to the identity.
    pub fn scale0(&self) -> f64 {
        self.scale0
    }

    /// Scaled generator: index 0 is `sqrt(d-1) I`, index `i >= 1` is `sqrt(d(d-1)/2) l_i`.
    pub fn scaled_generator(&self, i: usize) -> Result<ComplexMatrix> {
        match i {
            0 => Ok(ComplexMatrix::identity(self.d).scale_real(self.scale0)),
            i if i <= self.lambdas.len() => Ok(self.lambdas[i - 1].scale_real(self.scale)),
            _ => Err(Error::IndexOutOfRange {
                index: i,
                len: self.lambdas.len() + 1,
            }),
        }
    }

    /// All `d^2` scaled generators, identity term first.
    pub fn scaled_all(&self) -> Vec<ComplexMatrix> {
        (0..=self.lambdas.len())
            .map(|i| self.scaled_generator(i).expect("index in range"))
            .collect()
    }

    /// Copy with the generator scale multiplied by `factor`. Used only for
    /// fault injection in the self-check.
    #[doc(hidden)]
    pub fn with_perturbed_scale(&self, factor: f64) -> Self {
        GeneratorBasis {
            scale: self.scale * factor,
            ..self.clone()
        }
    }
}

pub fn gellmann_basis(d: usize) -> Result<GeneratorBasis> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    let mut lambdas = Vec::with_capacity(d * d - 1);
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();

    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = C64::new(1.0, 0.0);
        m[(k, j)] = C64::new(1.0, 0.0);
        lambdas.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = C64::new(0.0, -1.0);
        m[(k, j)] = C64::new(0.0, 1.0);
        lambdas.push(m);
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|m| match m {
                m if m < l => norm,
                m if m == l => -(l as f64) * norm,
                _ => 0.0,
            })
            .collect();
        lambdas.push(ComplexMatrix::from_real_diagonal(&diag));
    }

    Ok(GeneratorBasis {
        d,
        lambdas,
        scale: ((d * (d - 1)) as f64 / 2.0).sqrt(),
        scale0: ((d - 1) as f64).sqrt(),
    })
}

/// Per-dimension basis, built once and shared.
pub fn cached_basis(d: usize) -> Result<Arc<GeneratorBasis>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GeneratorBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(basis) = cache.read().expect("basis cache poisoned").get(&d) {
        return Ok(Arc::clone(basis));
    }
    let basis = Arc::new(gellmann_basis(d)?);
    let mut map = cache.write().expect("basis cache poisoned");
    Ok(Arc::clone(map.entry(d).or_insert(basis)))
}

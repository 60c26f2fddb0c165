//! Generalized Bloch representations of bipartite quantum states and
//! analytical lower bounds on concurrence and 2-concurrence.
//!
//! A state `rho` on `C^d1 (x) C^d2` is expanded in scaled generalized
//! Gell-Mann matrices ([`generators`]), giving local vectors `R`, `S` and a
//! correlation matrix `T` ([`bloch`]). The Frobenius norm of `T` yields
//!
//! - for pure states, the exact concurrence and 2-concurrence;
//! - for mixed states, the lower bounds
//!   `C >= sqrt(2)(sqrt(K+1)+1)/K (|T|_F - 1)` and
//!   `C_2 >= (|T|_F^2 - 1)/K` with `K = (d1+d2)/((d1-1)(d2-1))`.
//!
//! [`bounds`] also evaluates the partial-transpose / realignment comparison
//! bounds, and [`states`] provides the example families plus independent
//! oracles (exact two-qubit concurrence, explicit-decomposition upper bounds).
//!
//! ```
//! use concurrence_bounds::{bounds, states};
//!
//! let rho = states::example1_state(0.95).unwrap();
//! let report = bounds::full_report(&rho).unwrap();
//! assert!(report.thm2_c > report.caf_c);
//! assert_eq!(report.best_c, report.thm2_c);
//! ```

pub mod bloch;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod states;

pub use bloch::{decompose, BlochDecomposition, PurityTriple};
pub use bounds::{full_report, BoundReport};
pub use error::{Error, Result};
pub use generators::{gellmann_basis, GeneratorBasis};
pub use linalg::{ComplexMatrix, DensityMatrix, PureState, C64};

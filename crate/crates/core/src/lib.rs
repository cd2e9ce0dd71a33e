//! Optimal test functions for 2-level densities of low-lying zeros and the
//! bounds they imply on the order of vanishing at the central point.
//!
//! The optimization over test functions `φ` with `supp φ̂ ⊆ [-1, 1]` is
//! recast as a Fredholm equation `(I + K) g = 1` on `[-1/2, 1/2]`; the
//! optimum is `c / ⟨1, g⟩`.
//!
//! - [`fnspace`]: sampled functions, quadrature and self-correlation.
//! - [`kernels`]: symmetry groups and their weight kernels.
//! - [`fredholm`]: closed-form, Nyström and Neumann-series solvers.
//! - [`bounds`]: optimal values and vanishing bounds.

pub mod bounds;
pub mod fnspace;
pub mod fredholm;
pub mod kernels;

pub use bounds::{BoundError, BoundReport, Level, Provenance, Support};
pub use fnspace::{GridError, GridFunction, Interval};
pub use fredholm::{FredholmError, NeumannResult, NystromOperator, TrigSolution};
pub use kernels::{KernelError, QuadraticKernel, SymmetryGroup, WeightDecomposition};

//! Boolean-function analysis on weighted partite complexes.
//!
//! The crate works with a `d`-partite complex viewed as a finite distribution
//! over `Ω_0 × ⋯ × Ω_{d-1}` and provides:
//!
//! - [`complex`]: construction, marginals, links and restrictions;
//! - [`walk`]: the averaging-operator algebra (`E_T`, `A_{S,T}`, `T_r`, `T^S_r`, `L_i`);
//! - [`efron_stein`]: the Efron-Stein decomposition, levels and total influence;
//! - [`expansion`]: spectral and `q→q` certification of link walks;
//! - [`symmetrization`]: the symmetrized function `f̃(r, x)` and its sandwich checks;
//! - [`hyper`]: globalness, Bonami-type bounds, KKL witnesses and boosters;
//! - [`harness`]: file formats, builtin functions, oracles and the check suite.
//!
//! Everything is exact dense linear algebra over the face support, so the
//! intended scale is `d ≤ 8` and supports up to about `10^5` faces.

pub mod colors;
pub mod complex;
pub mod efron_stein;
pub mod error;
pub mod expansion;
pub mod function;
pub mod harness;
pub mod hyper;
pub mod symmetrization;
mod util;
pub mod walk;

pub use colors::ColorSet;
pub use complex::{MeasureView, PartiteComplex, SubAssignment};
pub use error::{HdxError, Result};
pub use function::FaceFunction;
pub use util::permutations;
pub use walk::{OperatorHandle, WeightedMatrix};

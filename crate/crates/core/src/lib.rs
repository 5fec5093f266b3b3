//! Hyperplane and polynomial covers of the Boolean hypercube `{0,1}^n` with
//! multiplicity constraints.
//!
//! The crate builds the explicit cover families for almost-covering a layer,
//! verifies `(t, l)`-covers by exhaustive enumeration, computes index and
//! algebraic complexity with checkable witnesses, checks polynomial zero
//! multiplicities with exact rational arithmetic, and runs the prime-field
//! procedures around the Combinatorial Nullstellensatz, a generalized
//! Chevalley-Warning search and forbidden-set restricted sumsets.

pub mod complexity;
pub mod constructions;
pub mod error;
pub mod field;
pub mod fieldkit;
pub mod hypercube;
pub mod hyperplane_cover;
pub mod polynomial;
pub mod search;

pub use error::{Error, Result};
pub use hypercube::{CubePoint, PointSet};
pub use hyperplane_cover::{CoverFamily, CoverReport, Hyperplane, MultiplicityProfile};
pub use polynomial::{Degree, SparsePoly};

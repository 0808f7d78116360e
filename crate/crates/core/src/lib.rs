//! Binary matroids over GF(2), theta-graph closure, and canonical tree
//! decompositions.
//!
//! A binary matroid is stored as labelled columns of a bit-packed matrix.
//! The [`theta`] module finds theta-graphs and decides whether every one of
//! them is complete; [`decompose`] recognizes the same class structurally
//! and produces a [`BuildRecipe`] from circuits, complete-graph matroids and
//! projective geometries.
//!
//! ```
//! use theta3::{catalog, theta, Budget};
//!
//! let m = catalog::lookup("MSTAR_K5").unwrap();
//! let verdict = theta::is_theta3_closed(&m, Default::default(), &Budget::unlimited()).unwrap();
//! assert!(!verdict.is_closed());
//! ```

pub mod budget;
pub mod catalog;
pub mod construct;
pub mod decompose;
pub mod error;
pub mod format;
pub mod gf2;
pub mod matroid;
pub mod theta;

pub use budget::Budget;
pub use construct::Graph;
pub use decompose::{BuildRecipe, MatroidLabelledTree, Verdict};
pub use error::{Error, Result};
pub use gf2::{GF2Matrix, GF2Vector};
pub use matroid::{BinaryMatroid, ElementSet, SeparationOrder};
pub use theta::{ClosureTrace, ThetaGraph};

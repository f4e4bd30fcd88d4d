//! Tropical oriented matroids.
//!
//! A tropical oriented matroid is a set of `(n, d)`-types (tuples of nonempty
//! subsets of `{1,…,d}`) satisfying four axioms: boundary, elimination,
//! comparability and surrounding. This crate checks those axioms, builds the
//! type sets of tropical hyperplane arrangements with exact rationals, performs
//! the structural operations (topes, vertices, reconstruction, deletion,
//! contraction, duality), converts between type sets and subdivisions of
//! `Δ_{n-1} × Δ_{d-1}`, and draws the Cayley-trick picture for `d = 3`.
//!
//! ```
//! use tropical_om::{axioms::check_axioms, structure::refinement_closure, TomTypeSet};
//!
//! let vertices = TomTypeSet::compact(2, 3, &["123,1", "23,13", "2,123"]).unwrap();
//! let tom = refinement_closure(&vertices);
//! assert_eq!(tom.len(), 17);
//! assert!(check_axioms(&tom).unwrap().ok);
//! ```

pub mod arrangement;
pub mod axioms;
pub mod cayley;
pub mod error;
pub mod json;
pub mod structure;
pub mod subdivision;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    completion, dual, make_type, reduction, transpose, DirSet, OrderedPartition, SemiType,
    Semidigraph, TomTypeSet, Type,
};

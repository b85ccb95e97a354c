//! Exact computational reproduction of the classification of hyperelliptic and
//! trigonal Fano threefolds with canonical Gorenstein singularities.
//!
//! The pipeline enumerates the admissible rational scrolls, builds general
//! members of the relevant linear systems, extracts local equations of fiber
//! germs, classifies the resulting Du Val singularities by three independent
//! methods (quasi-homogeneous weights, algebraic invariants, explicit blow-up
//! resolution), and reproduces the published singularity and rationality data.
//!
//! Everything is computed over the rationals with exact arithmetic; there is
//! no floating point anywhere in this crate.

pub mod atlas;
pub mod duval;
pub mod milnor;
pub mod poly;
pub mod resultant;
pub mod scroll;

pub use poly::{Monomial, PolyError, Polynomial, WeightVector};
pub use scroll::{DivisorClass, Family, Scroll, Subscroll};

//! Exact-arithmetic calculus for plumbed 3-manifolds.
//!
//! The crate implements the plumbing-graph toolkit used to decide which
//! plumbed 3-manifolds with first Betti number one bound rational homology
//! S^1 x D^3's: Neumann's move calculus and normal forms, negative
//! continued fractions, dual graphs, Seifert invariants, the four building
//! blocks and their joins, and an independent integer-lattice embedding
//! oracle realizing the Donaldson obstruction.
//!
//! Everything is computed with arbitrary-precision integers and rationals;
//! no floating point is used. All values are immutable after construction
//! and every operation is a pure function, so the whole API is safe to use
//! from multiple threads.

pub mod blocks;
pub mod calculus;
pub mod graph;
pub mod lattice;
pub mod matrix;
pub mod rational;
pub mod seifert;
pub mod text;

pub use graph::{PlumbingGraph, RootedGraph, VertexId};
pub use matrix::{IntMatrix, Signature};
pub use rational::ExtendedRational;

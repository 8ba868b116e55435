//! Hamiltonian paths in hypercubes through prescribed matchings.
//!
//! [`engine::ham_path_matching`] builds a Hamiltonian `x`–`y` path of `Q_n`
//! containing a matching of at most `3n - 13` edges by splitting the cube
//! along a coordinate and stitching sub-solutions together. Every assembled
//! object is checked by [`verify`], and an exact backtracking search in
//! [`solver`] serves as base case, subroutine provider and fallback.

pub mod cube;
pub mod engine;
pub mod forest;
pub mod io;
pub mod solver;
pub mod verify;

pub use cube::{Dim, Edge, Vertex};
pub use forest::Instance;

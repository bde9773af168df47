//! Domino and lozenge tilings of simply connected lattice regions.
//!
//! Tilings are encoded by Thurston height functions, which turn the set of
//! tilings of a domain into a distributive lattice. On top of that structure
//! the crate provides minimal/maximal and constrained tiling construction,
//! flips, meet/join, word encodings, exhaustive lexicographic generation with
//! linear work per tiling, meet-irreducible decomposition, and independent
//! brute-force oracles used by the test suite to validate all of it.

pub mod birkhoff;
pub mod coding;
pub mod error;
pub mod generation;
pub mod grid;
pub mod oracle;
pub mod order;
pub mod thurston;
pub mod tiling;

pub use error::{Error, Result};
pub use grid::{
    build_domain, cell_cycle, gen_standard, parse_domain, BoundaryStep, Cell, CellOrient, Domain,
    DomainSpec, DirectedEdge, LatticeKind, Vertex,
};
pub use tiling::{boundary_heights, height_from_tiling, lambda_of, tiling_from_height, HeightFunction, Tile, Tiling};

//! Tree geometry: points of the subdivided tree, radius-augmented lattice
//! points, and potentials built from them.

mod lattice;
mod potential;
mod tree;

pub use lattice::{color, d_inf, is_fine_point, is_grid_point, leq, local_neighborhood, midpoint, round_pair, Color, LatticePoint};
pub use potential::{Potential, PotentialError};
pub use tree::{Ray, Tree, TreeBuilder, TreeError, TreePoint, VertexId, EDGE};

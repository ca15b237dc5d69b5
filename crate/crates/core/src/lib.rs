//! Exact solver for the maximum node-capacitated multiflow problem.
//!
//! The solver produces a half-integral maximum multiflow, a half-integral
//! optimal dual potential and a 2-approximate node-multiway cut. It works by
//! steepest descent on the dual potential: every step builds a skew-symmetric
//! double covering network whose submodular boundary constraints live on
//! 6-element blocks, solves a maximum submodular flow on it and reads the next
//! descent direction off the minimal minimum cut.
//!
//! All arithmetic is integral. Tree distances and radii are stored in quarter
//! units of a tree edge, flow values on paths are stored doubled.

pub mod apps;
pub mod bisubmodular;
pub mod cli;
pub mod cover;
pub mod descent;
pub mod extract;
pub mod instance;
pub mod oracle;
pub mod pipeline;
pub mod reduce;
pub mod subflow;
pub mod tree_space;

pub use instance::{InstanceError, MultiflowInstance, TreeEmbedding};
pub use pipeline::{solve_max_multiflow, MaxMultiflowSolution, SolveError};

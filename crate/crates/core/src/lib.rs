pub mod cli;
pub mod config;
pub mod error;
pub mod fas;
pub mod grid;
pub mod operator;
pub mod oracle;
pub mod plot;
pub mod problem;
pub mod runner;
pub mod sparse;
pub mod transfer;
pub mod vanka;
pub mod verify;

pub use error::{Error, Result};
pub use fas::{solve, CycleConfig, CycleType, SolverReport};
pub use grid::{build_grid, coarsen, Block, Extents, StaggeredGrid, UnknownClass};
pub use operator::{Discretization, MixedDimVector};
pub use problem::{slab_test_problem, ProblemSpec};

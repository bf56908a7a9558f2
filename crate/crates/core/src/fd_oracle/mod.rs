//! Finite-difference oracle for the piecewise-constant Lamé transmission
//! problem on a box.
//!
//! The operator is the 27-point stencil obtained from the energy of trilinear
//! nodal fields with cell-constant coefficients. It is symmetric positive
//! definite for Dirichlet data and exact on affine fields in homogeneous
//! media. Systems are solved by Jacobi-preconditioned conjugate gradients
//! with ordered reductions, so results do not depend on the thread count.
//!
//! Point sources are handled by singularity subtraction against a
//! closed-form reference (Kelvin or the bonded half-space matrix), which
//! leaves a bounded remainder on the grid.

pub mod grid;
pub mod io;
pub mod problem;
pub mod solver;
pub mod stencil;
pub mod studies;

pub use grid::{Field, GraphInterface, Grid, VoxelDomain};
pub use problem::{numeric_green, solve_transmission, BoundaryData, NumericGreen, Reference, Solution, TransmissionProblem};
pub use solver::{SolverOptions, SolverStats};

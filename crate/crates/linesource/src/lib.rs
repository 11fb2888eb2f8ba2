//! Mixed finite element solver for Darcy flow driven by line sources.
//!
//! A Dirac source concentrated on a segment network makes the pressure
//! logarithmically singular and the flux leave `L^2`, so the standard mixed
//! method cannot converge in unweighted norms. This crate implements both
//! that standard method (for comparison in weighted norms) and a
//! singularity-removal method: the singular part of the solution is the
//! closed-form line potential of the network, and only the smooth remainder
//! is discretized with lowest-order Raviart-Thomas / piecewise-constant
//! elements.
//!
//! Module map:
//! * [`network`] — segment geometry, distances, network CSV format
//! * [`greens`] — closed-form line potentials and gradients
//! * [`splitting`] — singular pair, corrected source, remainder boundary data
//! * [`mesh`] — structured simplicial meshes with oriented facets
//! * [`femspace`] — RT0 x DG0 spaces
//! * [`quadrature`] — simplex rules and red refinement
//! * [`assembly`] — saddle-point system assembly
//! * [`solver`] — Schur-complement CG with certified residuals
//! * [`analysis`] — weighted error norms and convergence tables
//! * [`experiments`] — reproducible convergence studies
//! * [`vtk`] — legacy VTK output of cell fields

pub mod analysis;
pub mod assembly;
pub mod femspace;
pub mod field;
pub mod geometry;
pub mod greens;
pub mod mesh;
pub mod network;
pub mod quadrature;
pub mod solver;
pub mod sparse;
pub mod splitting;
pub mod vtk;

pub mod experiments;

pub use geometry::{point, Point};
pub use network::{LineNetwork, NetworkError, Segment};

//! Simulation and numerical-analysis laboratory for zero-temperature planar
//! Ising droplet dynamics.
//!
//! The crate has three legs:
//!
//! * stochastic engines for the heat-bath Markov chain (an exact,
//!   couplable graphical-construction engine and a rejection-free one),
//! * bijections onto one-dimensional particle systems (exclusion and
//!   zero-range processes) with direct simulators,
//! * deterministic scaling-limit objects: anisotropic curve-shortening via
//!   support functions, the explicit corner-growth shapes for strong
//!   fields, viscosity solutions, and auxiliary heat / interface PDEs,
//!
//! plus the planar-geometry currency (polygons, support functions,
//! Hausdorff distances) that lets the stochastic and deterministic sides be
//! compared quantitatively, and a harness that runs convergence experiments
//! across lattice sizes and seeds.

pub mod clock;
pub mod dynamics;
pub mod export;
pub mod geometry;
pub mod harness;
pub mod lattice;
pub mod limits;
pub mod particles;
pub mod render;
pub mod stats;

pub use clock::ClockField;
pub use dynamics::{coupled_run, extinction_time, run_graphical, run_kmc, update_rule, Trajectory};
pub use geometry::{
    hausdorff_distance, offset_shape, sandwich_check, shape_from_support, support_function_of,
    PlanarShape, Point, SupportFunction,
};
pub use lattice::{droplet_of, is_increasing_set, BoundaryRule, DropletSet, FieldParameter, Site,
    SpinConfiguration};

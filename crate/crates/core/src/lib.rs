//! Weighted Fermat-Torricelli points in the plane, in space, and on the unit
//! sphere, with equilibrium certificates built from the weighted balancing of
//! unit vectors.
//!
//! ```
//! use torricelli_core::{solve, verify, Case, Configuration, SolverOptions};
//!
//! let h = 3f64.sqrt() / 2.0;
//! let tri = Configuration::from_coords(
//!     &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]],
//!     &[1.0, 1.0, 1.0],
//! )
//! .unwrap();
//! let out = solve(&tri, &SolverOptions::default()).unwrap();
//! assert_eq!(out.case, Case::Floating);
//! assert!(verify(&tri, &out.minimizer, 1e-8).unwrap().passed);
//! ```

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dalembert;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod solver;
pub mod sphere;

pub use dalembert::{
    balancing_residual, component_sums_3d, cos_sum_2d, signed_coefficient_2d, signed_sine_2d,
    sin_sum_2d, spherical_frame, spherical_frame_3d, verify, virtual_work, BalanceReport,
    DirectionSums, SphericalFrame, SphericalFrameAngles, DEFAULT_VERIFY_TOLERANCE,
};
pub use error::{Error, Result};
pub use geometry::{
    angle, gradient, objective, unit_vector, Configuration, Degeneracy, Dim, MergedAnchors, Point,
    UnitVector, WeightedPoint,
};
pub use oracle::{
    grid_refine_minimize, random_configuration, random_sphere_configuration,
    spherical_grid_minimize, OracleResult, SplitMix64,
};
pub use solver::{
    classify_vertex, solve, solve_from, solve_traced, vertex_pull, weiszfeld_step, Case,
    SolverOptions, SolverOutcome, VertexVerdict, Warning,
};
pub use sphere::{
    exp_map, geodesic_balancing_residual, geodesic_objective, log_map, solve_on_sphere,
    SphereConfiguration, SphereOutcome, SpherePoint, TangentVector,
};

//! Sampling-free path planning among box obstacles by iterative local-minima
//! node insertion, in the plane and, through a sweep of rotated planes, in
//! space. Also ships the comparison planners (grid A*, RRT, RRT-Connect,
//! goal-biased 3D RRT, lowest-point descent) and a benchmark harness with
//! rank-based statistics.

pub mod baselines;
pub mod bench;
pub mod config;
pub mod environment;
pub mod evaluation;
pub mod geometry;
pub mod ilmsa2d;
pub mod io;
pub mod planner3d;
pub mod smoothing;

pub use bench::{Algorithm, TrialRecord};
pub use config::RunConfig;
pub use environment::{Environment, Environment2D, Sbbox};
pub use geometry::{Aabb3, Plane, Point2, Point3, Polygon2};
pub use ilmsa2d::{generate_path_2d, Path2D, PlannerConfig};
pub use planner3d::{plan_3d, Path3D, SweepConfig};

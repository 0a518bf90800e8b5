//! Composite studies: the steep-wall limit, purity, and the Robin family.

pub mod convergence;
pub mod purity;
pub mod robin;

pub use convergence::{convergence_study, wall_suppression_study, window_points, ConvergenceReport, SuppressionReport};
pub use purity::{aligned_grid, interference_scan, purity_check, InterferenceScan, PurityReport};
pub use robin::{dirichlet_vs_wall, robin_field, robin_scan, RobinEntry, RobinOptions, RobinScanReport};

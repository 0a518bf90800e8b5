//! Sampled phase-space functions and the transforms between representations.

pub mod deriv;
pub mod field;
pub mod fit;
pub mod grid;
pub mod transform;

pub use deriv::{grid_x_derivatives, DerivativeScheme};
pub use field::{Field, FieldKind, REALNESS_TOL};
pub use fit::{fit_scale, fit_scale_values, ScaleFit};
pub use grid::{make_grid, Axis, PhaseSpaceGrid, Window};
pub use transform::{
    inverse_partial_ft_p, kernel_to_matrix, partial_ft_p, x_derivatives, Interpolation, KernelAxis,
    KernelField,
};

//! Moyal product on grids and the residuals of the stationary equations.

pub mod liouville;
pub mod product;
pub mod report;
pub mod residuals;

pub use liouville::{
    difference_eq_residual, effective_mass_residual, effective_mass_shift, genvalue_residual_liouville, DifferenceForm,
    EffectiveMassReport, ShiftBranch, sample_rectangle,
};
pub use product::{star, StarOperand};
pub use report::{ResidualPoint, ResidualReport, Verdict};
pub use residuals::{
    erf_taper, fourth_order_residual, genvalue_imaginary_defect, genvalue_residual_free, lr_star_residual, CheckOptions,
    LrOptions, LrStarReport, ZerothOrder,
};

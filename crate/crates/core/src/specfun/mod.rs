//! Special functions evaluated in double precision.

pub mod bessel;
pub mod gamma;
pub mod meijer;

pub use bessel::{bessel_k_imag_order, bessel_k_imag_order_ext, BesselValue};
pub use gamma::{gamma, log_gamma};
pub use meijer::{
    contour_moments, meijer_g04_contour, meijer_g04_series, series_moments, GMeta, GMethod, GParams,
    GValue, MellinBarnesSpec,
};

//! Discrete calculus on an annulus around the puncture.
//!
//! Everything lives on a [`LogPolarGrid`]: nodes are uniform in ρ = log r and
//! θ, periodic in θ. Powers of |z| and log|z| near the puncture become affine
//! (or slowly varying) in ρ, so a uniform grid resolves them everywhere.
//!
//! Derivatives are centred second-order differences in (ρ, θ). The two
//! boundary rows use one-sided second-order differences when a derivative is
//! requested there; residuals are always reported over interior rows only.
//!
//! One-forms are stored in the Cartesian frame (dx, dy). Orientation is the
//! standard one, `*dx = dy`.

mod calculus;
mod contour;
mod fields;
mod grid;
mod io;

pub use calculus::{
    codifferential, d_rho, d_theta, exterior_derivative, gradient, hodge_star, laplacian,
    laplacian_log_polar, polar_components, wirtinger_dz, wirtinger_dzbar,
};
pub use contour::{contour_integral, contour_integral_fn, Loop};
pub use fields::{ComplexField, Covector, OneFormField, ScalarField};
pub use grid::{GridLocation, LogPolarGrid};
pub(crate) use calculus::{codifferential_log_polar, exterior_derivative_log_polar};

//! Numerics for two-dimensional affine special Kähler structures with isolated
//! singularities.
//!
//! A special Kähler metric `g = e^{−u}|dz|²` on a punctured disc is encoded by
//! harmonic data `(h, u, a)` solving the singular Kazdan–Warner system
//! `Δh = 0`, `Δu = |dh + aφ|² e^{2u}`. From that data the crate builds the
//! flat symplectic connection and the holomorphic cubic form, transports
//! around the puncture to obtain the monodromy, fits the singularity type of
//! the metric, and constructs families of singular metrics on ℙ¹.
//!
//! Modules:
//! - [`field`]: log-polar grids, sampled fields, discrete calculus;
//! - [`sk`]: the special Kähler data model and its structural residuals;
//! - [`families`]: closed-form structures used as oracles;
//! - [`kw`]: damped Newton solver for the Kazdan–Warner equation;
//! - [`holonomy`]: parallel transport and SL(2,ℝ) classification;
//! - [`asymptotics`]: singularity fits and cubic-form order;
//! - [`p1`]: Gauss–Bonnet checks and families on the projective line;
//! - [`verify`]: the invariant suite run by `sk2d verify`.

pub mod asymptotics;
pub mod error;
pub mod families;
pub mod field;
pub mod holonomy;
pub mod kw;
pub mod mat2;
pub mod p1;
pub mod refinement;
pub mod sk;
pub mod verify;

pub use error::{Error, Result};
pub use mat2::Mat2;

/// Version tag carried by every JSON document the crate emits.
pub const SCHEMA: &str = "sk2d/1";

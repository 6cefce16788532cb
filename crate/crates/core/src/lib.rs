//! Orbit enumeration and affine-sieve toolkit for discrete subgroups of
//! `SO(n,1)`.
//!
//! The crate is organised in four layers:
//!
//! - [`lorentz`]: exact integer forms and isometries, plus floating-point
//!   geometry of the hyperboloid model (distances, Busemann cocycle, Cartan
//!   decomposition, the spin cover `SL(2) -> SO(2,1)`).
//! - [`orbit`]: breadth-first enumeration of vector orbits `w0·Γ` and group
//!   balls `Γ ∩ B_T`, growth-exponent fits and the orbit cache file.
//! - [`measures`]: Poincaré series, empirical Patterson–Sullivan measures,
//!   sector and bisector counts and measure-ratio reports.
//! - [`sieve`]: congruence reduction, local densities, sieve axioms,
//!   Legendre/Bonferroni sieve and almost-prime counts.
//!
//! [`presets`] bundles the groups shipped with the command-line tool.

pub mod lorentz;
pub mod matrix;
pub mod measures;
pub mod orbit;
pub mod presets;
pub mod sieve;
pub mod tolerance;

pub use lorentz::{
    busemann, cartan_decompose, check_signature, hyperbolic_distance, is_isometry,
    spin_to_so21, visual_point, BoundaryPoint, CartanCoordinates, GeometryError, GroupElement,
    HyperboloidPoint, QuadraticForm, Sign,
};
pub use matrix::{IntMatrix, SquareMatrix};
pub use orbit::{
    fit_exponent, group_ball, orbit_bfs, BfsOptions, GroupBall, GroupPresentation, GrowthFit,
    OrbitError, OrbitSet,
};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

//! Brute-force reference computations.
//!
//! Every routine here is a slow, single-threaded loop with no code shared
//! with the engines it checks: nested-loop quadric enumeration, the Euclid
//! parametrization of Pythagorean triples, exhaustive orbit closure over
//! `F_p`, and four-loop counts of `SL(2, Z)` matrices.

mod finite;
mod fixture;
mod modular;
mod pythagorean;
mod quadric;

pub use finite::{fp_orbit_closure, isotropic_vectors_mod};
pub use fixture::render_fixture;
pub use modular::{is_prime, sl2z_matrices};
pub use pythagorean::{euclid_triples, prime_hypotenuse_points, pythagorean_orbit_points};
pub use quadric::{enumerate_quadric, QuadricEnumeration};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

//! Affine sieve on orbits: finite orbits modulo `d`, local densities, the
//! sieve axioms, Legendre/Bonferroni sums and almost-prime counts.

mod almost;
pub mod arith;
mod density;
mod dimension;
mod factor;
mod finite;
mod instance;
mod legendre;
mod poly;

pub use almost::{almost_prime_count, AlmostPrimeRow, AlmostPrimeTable};
pub use density::{local_density, DensityEntry, LocalDensityTable, MultiplicativityVerdict};
pub use dimension::{integer_windows, sieve_dimension_fit, DimensionFit, DimensionWindow};
pub use factor::{big_omega, factorize, is_probable_prime, FactorConfig, TRIAL_LIMIT};
pub use finite::{finite_orbit, preserves_form_mod, reduce_generators, FiniteOrbit, ModMatrix, DEFAULT_ORBIT_CAP};
pub use instance::{remainder_table, remainders_for, RemainderRow, RemainderTable, SieveInstance};
pub use legendre::{default_z, legendre_sieve, SieveMode, SieveRun, MAX_BONFERRONI_PRIMES, MAX_EXACT_PRIMES};
pub use poly::{Polynomial, PolynomialF};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SieveError {
    #[error("modulus {0} is not positive")]
    InvalidModulus(u64),
    #[error("orbit modulo {modulus} exceeds the cap of {cap} points or the packed key space")]
    ModulusTooLarge { modulus: u64, cap: usize },
    #[error("orbit modulo {0} is empty")]
    EmptyOrbit(u64),
    #[error("no local density for modulus {0}")]
    MissingModulus(u64),
    #[error("window [{w}, {z}] contains no primes")]
    InsufficientPrimes { w: u64, z: u64 },
    #[error("P has {omega} prime factors, above the cap of {cap}")]
    TooManyDivisors { omega: usize, cap: usize },
    #[error("orbit is only complete below {complete_below}, requested T = {t}")]
    NotSaturated { t: f64, complete_below: f64 },
    #[error("factorization of {0} exceeded the rho budget")]
    FactorizationTimeout(u128),
    #[error("inclusion-exclusion gave {inclusion_exclusion}, direct count gave {direct}")]
    LegendreMismatch { inclusion_exclusion: i64, direct: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("integer overflow")]
    Overflow,
    #[error("polynomial: {0}")]
    Parse(String),
    #[error("{0}")]
    InvalidParameter(String),
}

//! Breadth-first orbit enumeration, group balls and growth-exponent fits.

mod ball;
mod bfs;
mod cache;
mod fit;
mod presentation;

pub use ball::{group_ball, group_ball_with, GroupBall};
pub use bfs::{orbit_bfs, orbit_bfs_with, BfsOptions, OrbitSet};
pub(crate) use bfs::norm_sq;
pub use cache::{
    format_bound, parse_cache, read_cache, render_cache, render_rows, write_cache, CacheHeader,
    CACHE_MAGIC,
};
pub use fit::{fit_exponent, geometric_grid, GrowthFit};
pub use presentation::GroupPresentation;

use crate::lorentz::GeometryError;

#[derive(Debug, thiserror::Error)]
pub enum OrbitError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("generator {0} is not an integer matrix")]
    NotIntegral(usize),
    #[error("generator {0} does not preserve the future sheet")]
    NotOrthochronous(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("base vector must be nonzero")]
    ZeroVector,
    #[error("invalid bound {0}")]
    InvalidBound(f64),
    #[error("integer overflow while applying a generator")]
    Overflow,
    #[error("orbit budget of {limit} points exceeded at depth {}", partial.max_word_length)]
    OrbitBudget { limit: usize, partial: Box<OrbitSet> },
    #[error("group-ball budget of {limit} elements exceeded at depth {}", partial.max_word_length)]
    BallBudget { limit: usize, partial: Box<GroupBall> },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("malformed cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

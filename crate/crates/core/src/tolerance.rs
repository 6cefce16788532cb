//! Numerical tolerances shared by every module.

/// Residual allowed in geometric identities (hyperboloid normalization,
/// Cartan reconstruction, Busemann cocycle).
pub const GEOMETRIC: f64 = 1e-9;

/// Threshold below which a quantity is treated as degenerate (zero
/// eigenvalue, a point sitting on a boundary point, a vanishing radius).
pub const DEGENERACY: f64 = 1e-12;

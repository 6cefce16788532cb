//! Empirical Patterson–Sullivan machinery: Poincaré series, boundary
//! windows, sector and bisector counts, and measure-ratio reports.

mod ps;
mod report;
mod sector;
mod window;

pub use ps::{
    admissibility_check, empirical_ps, empirical_ps_annulus, poincare_abscissa, s_grid, AbscissaEstimate, AdmissibilityVerdict, Atom,
    EmpiricalPSMeasure, PoincareSeries,
};
pub use report::{measure_ratio_report, RatioReport, RatioRow, Reference};
pub use sector::{
    sector_counts_ball, sector_counts_orbit, BallGeometry, OrbitGeometry, SectorKind, SectorSpec, SectorTable,
};
pub use window::{circle_angle, Region, Window};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("insufficient radius: {0}")]
    InsufficientRadius(String),
    #[error("shell growth never changes sign on the s grid: {0:?}")]
    NoTransition(Vec<(f64, f64)>),
    #[error("exponent must be positive, got {0}")]
    InvalidExponent(f64),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MeasureError, Window};
use crate::lorentz::{cartan_decompose, QuadraticForm};
use crate::orbit::{GroupBall, OrbitSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorKind {
    NormBall,
    Sector,
    Bisector,
}

/// Counting family `S_T(ω1, ω2)` over a grid of radii.
///
/// Windows live on the boundary sphere. An element `γ = k1·a_t·k2` lies in
/// the sector when the forward endpoint `k1·v+` (the direction of `γ·o`)
/// is in `ω1`; for bisectors additionally `k2⁻¹·v-` (the direction of
/// `γ⁻¹·o`) must be in `ω2`. This is the `K ↔ ∂H^n` dictionary with the
/// inversion `ω2 ↦ ω2⁻¹` built in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    pub kind: SectorKind,
    pub omega1: Window,
    pub omega2: Window,
    pub t_grid: Vec<f64>,
}

impl SectorSpec {
    pub fn norm_ball(t_grid: Vec<f64>) -> Self {
        Self {
            kind: SectorKind::NormBall,
            omega1: Window::Full,
            omega2: Window::Full,
            t_grid,
        }
    }

    pub fn sector(omega: Window, t_grid: Vec<f64>) -> Self {
        Self {
            kind: SectorKind::Sector,
            omega1: omega,
            omega2: Window::Full,
            t_grid,
        }
    }

    pub fn bisector(omega1: Window, omega2: Window, t_grid: Vec<f64>) -> Self {
        Self {
            kind: SectorKind::Bisector,
            omega1,
            omega2,
            t_grid,
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), MeasureError> {
        self.omega1
            .validate(n)
            .and_then(|_| self.omega2.validate(n))
            .map_err(MeasureError::InvalidWindow)?;
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(*t > 0.0)) {
            return Err(MeasureError::InvalidWindow("T grid must be nonempty and positive".into()));
        }
        Ok(())
    }
}

/// Cartan data of every element of a group ball.
#[derive(Clone, Debug)]
pub struct BallGeometry {
    pub n: usize,
    /// `t(γ)`, taken from the ball (exact-input displacement).
    pub t: Vec<f64>,
    /// Unit direction of `γ·o` in frame coordinates.
    pub forward: Vec<Vec<f64>>,
    /// Unit direction of `γ⁻¹·o`.
    pub backward: Vec<Vec<f64>>,
}

impl BallGeometry {
    pub fn new(ball: &GroupBall, form: &QuadraticForm) -> Self {
        let dirs: Vec<(Vec<f64>, Vec<f64>)> = ball
            .elements
            .par_iter()
            .map(|g| {
                let c = cartan_decompose(&form.matrix_to_frame(&g.to_f64()));
                (
                    c.forward_direction().iter().copied().collect(),
                    c.backward_direction().iter().copied().collect(),
                )
            })
            .collect();
        let (forward, backward) = dirs.into_iter().unzip();
        Self {
            n: form.n(),
            t: ball.displacements.clone(),
            forward,
            backward,
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Norms and frame directions of the points of a vector orbit.
#[derive(Clone, Debug)]
pub struct OrbitGeometry {
    pub n: usize,
    /// Euclidean norms of the integer points.
    pub norms: Vec<f64>,
    /// Unit spatial direction of each point in frame coordinates; points on
    /// the time axis are assigned the first frame axis.
    pub directions: Vec<Vec<f64>>,
}

impl OrbitGeometry {
    pub fn new(orbit: &OrbitSet, form: &QuadraticForm) -> Self {
        let n = form.n();
        let (norms, directions) = orbit
            .points
            .par_iter()
            .map(|x| {
                let norm = x.iter().map(|&v| (v as f64) * (v as f64)).sum::<f64>().sqrt();
                let f = form.int_to_frame(x);
                let spatial: Vec<f64> = f.iter().take(n).copied().collect();
                let len = spatial.iter().map(|v| v * v).sum::<f64>().sqrt();
                let dir = if len > crate::tolerance::DEGENERACY {
                    spatial.iter().map(|v| v / len).collect()
                } else {
                    let mut e = vec![0.0; n];
                    e[0] = 1.0;
                    e
                };
                (norm, dir)
            })
            .unzip();
        Self { n, norms, directions }
    }
}

/// `N(S_T)` for one window pair at every radius of a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorTable {
    pub window_id: String,
    pub kind: SectorKind,
    pub t_grid: Vec<f64>,
    pub counts: Vec<u64>,
}

impl SectorTable {
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.t_grid.iter().zip(&self.counts).map(|(&t, &c)| (t, c as f64)).collect()
    }
}

fn tabulate(id: &str, kind: SectorKind, grid: &[f64], mut sizes: Vec<f64>) -> SectorTable {
    sizes.sort_by(f64::total_cmp);
    SectorTable {
        window_id: id.to_owned(),
        kind,
        t_grid: grid.to_vec(),
        counts: grid
            .iter()
            .map(|&big_t| sizes.partition_point(|&s| s <= big_t) as u64)
            .collect(),
    }
}

/// Counts group-ball elements in `S_T(ω1, ω2)` with `t ≤ log T`.
pub fn sector_counts_ball(geometry: &BallGeometry, spec: &SectorSpec, id: &str) -> Result<SectorTable, MeasureError> {
    spec.validate(geometry.n)?;
    let ts: Vec<f64> = (0..geometry.len())
        .into_par_iter()
        .filter(|&i| match spec.kind {
            SectorKind::NormBall => true,
            SectorKind::Sector => spec.omega1.contains(&geometry.forward[i]),
            SectorKind::Bisector => {
                spec.omega1.contains(&geometry.forward[i]) && spec.omega2.contains(&geometry.backward[i])
            }
        })
        .map(|i| geometry.t[i])
        .collect();
    let log_grid: Vec<f64> = spec.t_grid.iter().map(|t| t.ln()).collect();
    let mut table = tabulate(id, spec.kind, &log_grid, ts);
    table.t_grid = spec.t_grid.clone();
    Ok(table)
}

/// Counts orbit points with `‖x‖ ≤ T` whose direction lies in `ω1`.
pub fn sector_counts_orbit(
    geometry: &OrbitGeometry,
    spec: &SectorSpec,
    id: &str,
) -> Result<SectorTable, MeasureError> {
    spec.validate(geometry.n)?;
    if spec.kind == SectorKind::Bisector {
        return Err(MeasureError::Unsupported("bisectors need a group ball".into()));
    }
    let sizes: Vec<f64> = (0..geometry.norms.len())
        .into_par_iter()
        .filter(|&i| spec.kind == SectorKind::NormBall || spec.omega1.contains(&geometry.directions[i]))
        .map(|i| geometry.norms[i])
        .collect();
    Ok(tabulate(id, spec.kind, &spec.t_grid, sizes))
}

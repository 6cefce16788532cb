use serde::Serialize;

use super::{BallGeometry, MeasureError, Window};

/// Truncated Poincaré series `Σ_{d(o,γo) ≤ R} e^{-s·d(o,γo)}` on a grid of `s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoincareSeries {
    /// Sorted displacements.
    pub distances: Vec<f64>,
    pub s_grid: Vec<f64>,
    pub partial_sums: Vec<f64>,
}

impl PoincareSeries {
    pub fn new(distances: &[f64], s_grid: &[f64]) -> Self {
        let mut distances = distances.to_vec();
        distances.sort_by(f64::total_cmp);
        let partial_sums = s_grid
            .iter()
            .map(|&s| distances.iter().map(|d| (-s * d).exp()).sum())
            .collect();
        Self {
            distances,
            s_grid: s_grid.to_vec(),
            partial_sums,
        }
    }
}

/// Result of [`poincare_abscissa`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbscissaEstimate {
    pub abscissa: f64,
    /// Radius window `[R_min, R_max]` covered by the shells.
    pub window: (f64, f64),
    pub shells: usize,
    /// `(s, growth rate of log shell sums per unit radius)`.
    pub slopes: Vec<(f64, f64)>,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Divergence abscissa of the Poincaré series from shell sums.
///
/// The radius window is cut into `shells` equal shells. For each `s` the
/// shell sums `Σ_{γ in shell} e^{-s·t(γ)}` behave like `e^{(δ-s)R}`; their
/// log-linear growth rate is fitted and the abscissa is the `s` where it
/// crosses zero (linear interpolation between grid values).
pub fn poincare_abscissa(
    distances: &[f64],
    window: (f64, f64),
    shells: usize,
    s_grid: &[f64],
) -> Result<AbscissaEstimate, MeasureError> {
    let (r_min, r_max) = window;
    if shells < 2 || !(r_max > r_min) || r_min < 0.0 {
        return Err(MeasureError::InsufficientRadius(format!(
            "need two shells in a nonempty window, got {shells} in [{r_min}, {r_max}]"
        )));
    }
    if r_max < 5.0 {
        return Err(MeasureError::InsufficientRadius(format!("radius {r_max} < 5")));
    }
    let width = (r_max - r_min) / shells as f64;
    let mut members: Vec<Vec<f64>> = vec![Vec::new(); shells];
    for &d in distances {
        if d >= r_min && d <= r_max {
            let k = (((d - r_min) / width) as usize).min(shells - 1);
            members[k].push(d);
        }
    }
    if let Some(k) = members.iter().position(Vec::is_empty) {
        return Err(MeasureError::InsufficientRadius(format!("shell {k} is empty")));
    }
    let mids: Vec<f64> = (0..shells).map(|k| r_min + (k as f64 + 0.5) * width).collect();
    let mut grid = s_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let slopes: Vec<(f64, f64)> = grid
        .iter()
        .map(|&s| {
            let logs: Vec<f64> = members
                .iter()
                .map(|m| m.iter().map(|d| (-s * d).exp()).sum::<f64>().ln())
                .collect();
            (s, slope(&mids, &logs))
        })
        .collect();
    let abscissa = slopes
        .windows(2)
        .find(|w| w[0].1 > 0.0 && w[1].1 <= 0.0)
        .map(|w| {
            let ((s0, b0), (s1, b1)) = (w[0], w[1]);
            s0 + (s1 - s0) * b0 / (b0 - b1)
        })
        .ok_or_else(|| MeasureError::NoTransition(slopes.clone()))?;
    Ok(AbscissaEstimate {
        abscissa,
        window,
        shells,
        slopes,
    })
}

/// `s`-grid `0.00, step, 2·step, …, max`.
pub fn s_grid(max: f64, step: f64) -> Vec<f64> {
    (0..=((max / step).round() as usize)).map(|i| i as f64 * step).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub direction: Vec<f64>,
    pub weight: f64,
}

/// Weighted orbit atoms approximating the Patterson–Sullivan density `ν_o`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalPSMeasure {
    pub delta: f64,
    pub atoms: Vec<Atom>,
}

impl EmpiricalPSMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn mass(&self, window: &Window) -> f64 {
        self.atoms
            .iter()
            .filter(|a| window.contains(&a.direction))
            .map(|a| a.weight)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Atoms at the directions of `γ·o` with weight `e^{-δ·t(γ)}`, normalized to
/// total mass 1. Elements fixing `o` carry no direction and are skipped.
pub fn empirical_ps(geometry: &BallGeometry, delta: f64) -> Result<EmpiricalPSMeasure, MeasureError> {
    empirical_ps_annulus(geometry, delta, 0.0)
}

/// As [`empirical_ps`], keeping only elements with `t(γ) ≥ inner_radius`.
///
/// Every unit of radius carries comparable mass in the truncated sum, so the
/// first few shells (the generators and short words) bias small balls; an
/// inner radius removes that transient without changing the limit.
pub fn empirical_ps_annulus(
    geometry: &BallGeometry,
    delta: f64,
    inner_radius: f64,
) -> Result<EmpiricalPSMeasure, MeasureError> {
    if !(delta > 0.0) {
        return Err(MeasureError::InvalidExponent(delta));
    }
    let floor = inner_radius.max(crate::tolerance::GEOMETRIC);
    let mut atoms: Vec<Atom> = geometry
        .t
        .iter()
        .zip(&geometry.forward)
        .filter(|(t, _)| **t >= floor)
        .map(|(t, d)| Atom {
            direction: d.clone(),
            weight: (-delta * t).exp(),
        })
        .collect();
    let total: f64 = atoms.iter().map(|a| a.weight).sum();
    if total > 0.0 {
        for a in &mut atoms {
            a.weight /= total;
        }
    }
    Ok(EmpiricalPSMeasure { delta, atoms })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityVerdict {
    pub pass: bool,
    /// Angular distance from the window boundary to the nearest atom.
    pub nearest_atom_distance: f64,
    pub mass: f64,
    /// Set when the verdict was reached at margin 0, which every window
    /// passes unless an atom sits exactly on its boundary.
    pub degenerate: bool,
}

/// Numerical form of the disjointness criterion `∂ω ∩ Λ(Γ) = ∅` with
/// positive mass: no atom within `margin` of `∂ω`, and `ν̂(ω) ≥ mass_floor`.
pub fn admissibility_check(
    window: &Window,
    measure: &EmpiricalPSMeasure,
    margin: f64,
    mass_floor: f64,
) -> Result<AdmissibilityVerdict, MeasureError> {
    if measure.is_empty() {
        return Err(MeasureError::InsufficientData("empty measure".into()));
    }
    let nearest = measure
        .atoms
        .iter()
        .map(|a| window.boundary_distance(&a.direction))
        .fold(f64::INFINITY, f64::min);
    let mass = measure.mass(window);
    let clear = if margin > 0.0 { nearest > margin } else { nearest > 0.0 };
    Ok(AdmissibilityVerdict {
        pass: clear && mass >= mass_floor,
        nearest_atom_distance: nearest,
        mass,
        degenerate: margin <= 0.0,
    })
}

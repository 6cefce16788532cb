use std::fmt::Write as _;

use serde::Serialize;

use super::{EmpiricalPSMeasure, MeasureError, SectorKind, SectorSpec, SectorTable, Window};

/// Boundary measure used for target ratios.
#[derive(Clone, Copy, Debug)]
pub enum Reference<'a> {
    Empirical(&'a EmpiricalPSMeasure),
    /// Normalized round measure on `S^{n-1}`.
    Lebesgue { n: usize },
}

impl Reference<'_> {
    pub fn mass(&self, window: &Window) -> f64 {
        match self {
            Reference::Empirical(m) => m.mass(window),
            Reference::Lebesgue { n } => window.lebesgue(*n),
        }
    }

    /// Leading-term weight of a counting family: `ν(ω1)` for sectors and
    /// `ν(ω1)·ν(ω2)` for bisectors.
    pub fn family_mass(&self, spec: &SectorSpec) -> f64 {
        match spec.kind {
            SectorKind::NormBall => 1.0,
            SectorKind::Sector => self.mass(&spec.omega1),
            SectorKind::Bisector => self.mass(&spec.omega1) * self.mass(&spec.omega2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub window_id: String,
    pub t: f64,
    pub count: u64,
    pub ratio: f64,
    pub target_ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub reference_window: String,
    pub tolerance: f64,
    pub rows: Vec<RatioRow>,
    /// Every window within tolerance at the largest radius.
    pub pass: bool,
}

/// Compares `N(S_T(ω)) / N(S_T(ω_ref))` with the measure ratio of the
/// families' leading terms, at every radius. `tolerance` is relative.
pub fn measure_ratio_report(
    families: &[(SectorSpec, SectorTable)],
    reference_index: usize,
    measure: Reference<'_>,
    tolerance: f64,
) -> Result<RatioReport, MeasureError> {
    if families.len() < 2 {
        return Err(MeasureError::InsufficientData("need at least two windows".into()));
    }
    let (ref_spec, ref_table) = families
        .get(reference_index)
        .ok_or_else(|| MeasureError::InsufficientData("reference window out of range".into()))?;
    if families.iter().any(|(_, t)| t.t_grid != ref_table.t_grid) {
        return Err(MeasureError::InsufficientData("tables use different T grids".into()));
    }
    let ref_mass = measure.family_mass(ref_spec);
    let mut rows = Vec::new();
    let mut pass = true;
    for (spec, table) in families {
        let target_ratio = measure.family_mass(spec) / ref_mass;
        for (k, &t) in table.t_grid.iter().enumerate() {
            let count = table.counts[k];
            let ratio = count as f64 / ref_table.counts[k] as f64;
            let ok = ratio.is_finite() && target_ratio.is_finite() && (ratio - target_ratio).abs() <= tolerance * target_ratio.abs();
            if k + 1 == table.t_grid.len() {
                pass &= ok;
            }
            rows.push(RatioRow {
                window_id: table.window_id.clone(),
                t,
                count,
                ratio,
                target_ratio,
                pass: ok,
            });
        }
    }
    Ok(RatioReport {
        reference_window: ref_table.window_id.clone(),
        tolerance,
        rows,
        pass,
    })
}

impl RatioReport {
    /// `window_id,T,count,ratio,target_ratio,verdict` with fixed precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("window_id,T,count,ratio,target_ratio,verdict\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{:.6},{},{:.6},{:.6},{}",
                r.window_id,
                r.t,
                r.count,
                r.ratio,
                r.target_ratio,
                if r.pass { "PASS" } else { "FAIL" }
            )
            .expect("writing to a String");
        }
        out
    }
}

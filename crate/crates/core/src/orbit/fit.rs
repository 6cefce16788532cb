use serde::Serialize;

use super::OrbitError;

/// Least-squares power law `N(T) ≈ C·T^δ` over a window of radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub t_grid: Vec<f64>,
    pub counts: Vec<f64>,
    pub exponent: f64,
    pub stderr: f64,
    /// `log C`.
    pub intercept: f64,
    pub window: (f64, f64),
}

/// `points` radii spaced geometrically from `t_min` to `t_max` inclusive.
pub fn geometric_grid(t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![t_min],
        _ => {
            let (a, b) = (t_min.ln(), t_max.ln());
            (0..points)
                .map(|i| {
                    if i == 0 {
                        t_min
                    } else if i + 1 == points {
                        t_max
                    } else {
                        (a + (b - a) * i as f64 / (points - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Fits the slope of `log N` against `log T` over the samples with
/// `T ∈ [T_min, T_max]`.
pub fn fit_exponent(counts: &[(f64, f64)], window: (f64, f64)) -> Result<GrowthFit, OrbitError> {
    let (t_min, t_max) = window;
    let mut sample: Vec<(f64, f64)> = counts
        .iter()
        .copied()
        .filter(|&(t, _)| t >= t_min && t <= t_max)
        .collect();
    sample.sort_by(|a, b| a.0.total_cmp(&b.0));
    if sample.len() < 5 {
        return Err(OrbitError::InsufficientData(format!(
            "{} grid points in window [{t_min}, {t_max}], need 5",
            sample.len()
        )));
    }
    if sample.iter().any(|&(t, n)| !(n > 0.0) || !(t > 0.0)) {
        return Err(OrbitError::InsufficientData("nonpositive radius or count".into()));
    }
    if sample.windows(2).any(|w| w[1].1 < w[0].1) {
        return Err(OrbitError::InsufficientData("counts decrease with T".into()));
    }
    let xs: Vec<f64> = sample.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = sample.iter().map(|s| s.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(OrbitError::InsufficientData("degenerate radius grid".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok(GrowthFit {
        t_grid: sample.iter().map(|s| s.0).collect(),
        counts: sample.iter().map(|s| s.1).collect(),
        exponent: slope,
        stderr,
        intercept,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exact() {
        let g = geometric_grid(10.0, 1e5, 9);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 10.0);
        assert_eq!(g[8], 1e5);
        assert!((g[2] - 100.0).abs() < 1e-9);
    }

    #[test]
    fn exact_power_laws() {
        let grid = geometric_grid(1.0, 1e4, 20);
        let sq: Vec<_> = grid.iter().map(|&t| (t, t * t)).collect();
        let f = fit_exponent(&sq, (1.0, 1e4)).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-12);
        assert!(f.stderr < 1e-10);
        let c: Vec<_> = grid.iter().map(|&t| (t, 3.0 * t.powf(1.5))).collect();
        let f = fit_exponent(&c, (1.0, 1e4)).unwrap();
        assert!((f.exponent - 1.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn insufficient_or_invalid_data() {
        let few: Vec<_> = (1..5).map(|t| (t as f64, t as f64)).collect();
        assert!(matches!(fit_exponent(&few, (0.0, 10.0)), Err(OrbitError::InsufficientData(_))));
        let zero: Vec<_> = (1..8).map(|t| (t as f64, (t - 1) as f64)).collect();
        assert!(fit_exponent(&zero, (0.0, 10.0)).is_err());
        let window: Vec<_> = (1..20).map(|t| (t as f64, t as f64)).collect();
        assert_eq!(fit_exponent(&window, (5.0, 9.0)).unwrap().t_grid.len(), 5);
    }
}

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// A piece of a window on the boundary sphere `S^{n-1}` (frame coordinates).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Region {
    /// Closed spherical cap `{ξ : angle(ξ, center) ≤ radius}`.
    Cap { center: Vec<f64>, radius: f64 },
    /// Half-open arc `[start, end)` of the circle `S¹`, angles in radians
    /// measured counterclockwise from the first frame axis. Arcs may wrap
    /// through angle 0.
    Arc { start: f64, end: f64 },
}

/// Finite union of regions, or the whole sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window {
    Full,
    Union { regions: Vec<Region> },
}

/// Angle of a direction in `S¹`, normalized to `[0, 2π)`.
pub fn circle_angle(dir: &[f64]) -> f64 {
    let a = dir[1].atan2(dir[0]);
    let a = if a < 0.0 { a + TAU } else { a };
    if a >= TAU {
        0.0
    } else {
        a
    }
}

fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Angular distance between two angles on `S¹`.
fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn angle_between(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (nu * nv)).clamp(-1.0, 1.0).acos()
}

impl Region {
    pub fn arc(start: f64, end: f64) -> Self {
        Region::Arc { start, end }
    }

    pub fn cap(center: Vec<f64>, radius: f64) -> Self {
        Region::Cap { center, radius }
    }

    fn arc_bounds(start: f64, end: f64) -> (f64, f64) {
        (normalize_angle(start), normalize_angle(end))
    }

    pub fn contains(&self, dir: &[f64]) -> bool {
        match self {
            Region::Cap { center, radius } => angle_between(center, dir) <= *radius,
            Region::Arc { start, end } => {
                let a = circle_angle(dir);
                let (s, e) = Self::arc_bounds(*start, *end);
                if s < e {
                    s <= a && a < e
                } else {
                    a >= s || a < e
                }
            }
        }
    }

    /// Angular distance from `dir` to the boundary of the region.
    pub fn boundary_distance(&self, dir: &[f64]) -> f64 {
        match self {
            Region::Cap { center, radius } => (angle_between(center, dir) - radius).abs(),
            Region::Arc { start, end } => {
                let a = circle_angle(dir);
                circle_distance(a, *start).min(circle_distance(a, *end))
            }
        }
    }

    /// Normalized round measure of the region on `S^{n-1}`.
    pub fn lebesgue(&self, n: usize) -> f64 {
        match self {
            Region::Arc { start, end } => {
                let (s, e) = Self::arc_bounds(*start, *end);
                let len = if s < e { e - s } else { TAU - s + e };
                len / TAU
            }
            Region::Cap { radius, .. } => cap_fraction(n, *radius),
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), String> {
        match self {
            Region::Cap { center, radius } => {
                if center.len() != n {
                    return Err(format!("cap center has {} coordinates, expected {n}", center.len()));
                }
                if center.iter().all(|&x| x == 0.0) {
                    return Err("cap center is zero".into());
                }
                if !(*radius > 0.0 && *radius < PI) {
                    return Err(format!("cap radius {radius} outside (0, π)"));
                }
            }
            Region::Arc { start, end } => {
                if n != 2 {
                    return Err("arcs need a circle boundary (n = 2)".into());
                }
                let (s, e) = Self::arc_bounds(*start, *end);
                if s == e || !start.is_finite() || !end.is_finite() {
                    return Err("arc has empty interior".into());
                }
            }
        }
        Ok(())
    }
}

/// `∫_0^r sin^{n-2} / ∫_0^π sin^{n-2}`.
fn cap_fraction(n: usize, r: f64) -> f64 {
    match n {
        2 => r / PI,
        3 => (1.0 - r.cos()) / 2.0,
        _ => {
            let f = |x: f64| x.sin().powi(n as i32 - 2);
            simpson(f, 0.0, r) / simpson(f, 0.0, PI)
        }
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let steps = 2000;
    let h = (b - a) / steps as f64;
    let mut acc = f(a) + f(b);
    for i in 1..steps {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

impl Window {
    pub fn arcs(arcs: &[(f64, f64)]) -> Self {
        Window::Union {
            regions: arcs.iter().map(|&(s, e)| Region::arc(s, e)).collect(),
        }
    }

    /// The `k`-th of `parts` equal half-open arcs starting at angle 0.
    pub fn circle_part(k: usize, parts: usize) -> Self {
        let step = TAU / parts as f64;
        Window::arcs(&[(k as f64 * step, if k + 1 == parts { 0.0 } else { (k + 1) as f64 * step })])
    }

    pub fn contains(&self, dir: &[f64]) -> bool {
        match self {
            Window::Full => true,
            Window::Union { regions } => regions.iter().any(|r| r.contains(dir)),
        }
    }

    /// Distance to the nearest boundary point, `+∞` for the full sphere.
    pub fn boundary_distance(&self, dir: &[f64]) -> f64 {
        match self {
            Window::Full => f64::INFINITY,
            Window::Union { regions } => regions
                .iter()
                .map(|r| r.boundary_distance(dir))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Normalized round measure; regions are assumed disjoint.
    pub fn lebesgue(&self, n: usize) -> f64 {
        match self {
            Window::Full => 1.0,
            Window::Union { regions } => regions.iter().map(|r| r.lebesgue(n)).sum(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), String> {
        match self {
            Window::Full => Ok(()),
            Window::Union { regions } if regions.is_empty() => Err("window has no regions".into()),
            Window::Union { regions } => regions.iter().try_for_each(|r| r.validate(n)),
        }
    }
}

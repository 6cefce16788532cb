use serde::Serialize;

use super::arith::primes_below;
use super::SieveError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionWindow {
    pub w: u64,
    pub z: u64,
    /// `Σ_{w ≤ p ≤ z} g(p) log p`.
    pub sum: f64,
    /// `r·log(z/w)`.
    pub target: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionFit {
    pub r: f64,
    pub max_deviation: f64,
    pub worst: (u64, u64),
    pub windows: Vec<DimensionWindow>,
}

/// Deviation `|Σ_{w ≤ p ≤ z} g(p) log p − r·log(z/w)|` over the windows.
///
/// `g` must be defined at every prime in each window; a window with no
/// primes, `w < 2` or `w ≥ z` is rejected with
/// [`SieveError::InsufficientPrimes`].
pub fn sieve_dimension_fit(
    g: impl Fn(u64) -> Option<f64>,
    r: f64,
    windows: &[(u64, u64)],
) -> Result<DimensionFit, SieveError> {
    let z_max = windows.iter().map(|w| w.1).max().unwrap_or(0);
    let primes = primes_below(z_max + 1);
    // prefix[i] = Σ_{j < i} g(p_j) log p_j
    let mut prefix = Vec::with_capacity(primes.len() + 1);
    prefix.push(0.0);
    let mut missing = None;
    for &p in &primes {
        let gp = g(p).unwrap_or_else(|| {
            missing.get_or_insert(p);
            0.0
        });
        prefix.push(prefix.last().unwrap() + gp * (p as f64).ln());
    }

    let mut out = Vec::with_capacity(windows.len());
    for &(w, z) in windows {
        let lo = primes.partition_point(|&p| p < w);
        let hi = primes.partition_point(|&p| p <= z);
        if w < 2 || w >= z || lo == hi {
            return Err(SieveError::InsufficientPrimes { w, z });
        }
        if let Some(p) = missing.filter(|&p| p >= w && p <= z) {
            return Err(SieveError::MissingModulus(p));
        }
        let sum = prefix[hi] - prefix[lo];
        let target = r * (z as f64 / w as f64).ln();
        out.push(DimensionWindow {
            w,
            z,
            sum,
            target,
            deviation: (sum - target).abs(),
        });
    }
    let worst = out
        .iter()
        .max_by(|a, b| a.deviation.total_cmp(&b.deviation))
        .ok_or(SieveError::InsufficientPrimes { w: 0, z: 0 })?;
    Ok(DimensionFit {
        r,
        max_deviation: worst.deviation,
        worst: (worst.w, worst.z),
        windows: out,
    })
}

/// Every integer window `lo ≤ w < z ≤ hi` containing at least one prime.
pub fn integer_windows(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let primes = primes_below(hi + 1);
    let mut out = Vec::new();
    for w in lo.max(2)..hi {
        let first = primes[primes.partition_point(|&p| p < w)..].first().copied();
        if let Some(p) = first {
            out.extend(((w + 1).max(p)..=hi).map(|z| (w, z)));
        }
    }
    out
}

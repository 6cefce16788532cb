use rayon::prelude::*;
use serde::Serialize;

use super::factor::{big_omega, is_probable_prime, FactorConfig};
use super::instance::SieveInstance;
use super::{PolynomialF, SieveError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostPrimeRow {
    pub t: f64,
    /// `X = N(T)`, all orbit points of norm `≤ T`.
    pub points: usize,
    /// Points with `F(x) ≠ 0`.
    pub nonzero: usize,
    /// Points with `F(x) ≠ 0` and `Ω(F(x)) ≤ R`.
    pub almost_primes: usize,
    /// Points where every nonconstant `|F_j(x)|` is prime.
    pub primes: usize,
    /// `almost_primes · (log X)^r / X`.
    pub c_almost: f64,
    /// `primes · (log X)^r / X`.
    pub c_prime: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostPrimeTable {
    pub big_r: u32,
    pub r: usize,
    pub rows: Vec<AlmostPrimeRow>,
    /// Points whose factorization exceeded the rho budget; they are left
    /// out of every count except `points`.
    pub skipped: Vec<Vec<i64>>,
}

impl AlmostPrimeTable {
    /// `max c(T) / min c(T)` of the prime counts over rows with `T ≥ t_min`.
    pub fn prime_constant_spread(&self, t_min: f64) -> Option<f64> {
        let c: Vec<f64> = self.rows.iter().filter(|r| r.t >= t_min).map(|r| r.c_prime).collect();
        let max = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = c.iter().copied().fold(f64::INFINITY, f64::min);
        (!c.is_empty() && min > 0.0).then(|| max / min)
    }
}

#[derive(Clone, Copy)]
enum Status {
    Zero,
    Timeout,
    Counted { omega: u32, all_prime: bool },
}

/// Counts of points with `Ω(F(x)) ≤ R` and of points with every factor
/// prime, for each `T` in the grid.
///
/// `Ω` is summed over the factors `F_j`, each factored separately; units
/// contribute `0`. Points with `F(x) = 0` are excluded.
pub fn almost_prime_count(
    instance: &SieveInstance,
    f: &PolynomialF,
    big_r: u32,
    t_grid: &[f64],
    cfg: &FactorConfig,
) -> Result<AlmostPrimeTable, SieveError> {
    if let Some(&t) = t_grid.iter().find(|&&t| t > instance.t) {
        return Err(SieveError::NotSaturated {
            t,
            complete_below: instance.t,
        });
    }
    let nonconstant: Vec<bool> = f.factors.iter().map(|p| !p.is_constant()).collect();
    let r = f.r;
    let status: Vec<Status> = instance
        .factor_values
        .par_iter()
        .map(|fv| {
            if fv.contains(&0) {
                return Status::Zero;
            }
            let mut omega = 0;
            for v in fv {
                match big_omega(v.unsigned_abs(), cfg) {
                    Ok(w) => omega += w,
                    Err(SieveError::FactorizationTimeout(_)) => return Status::Timeout,
                    Err(_) => unreachable!("nonzero values always factor"),
                }
            }
            let all_prime = fv
                .iter()
                .zip(&nonconstant)
                .filter(|(_, &nc)| nc)
                .all(|(v, _)| is_probable_prime(v.unsigned_abs()));
            Status::Counted { omega, all_prime }
        })
        .collect();

    let skipped = instance
        .points
        .iter()
        .zip(&status)
        .filter(|(_, s)| matches!(s, Status::Timeout))
        .map(|(p, _)| p.clone())
        .collect();

    let rows = t_grid
        .iter()
        .map(|&t| {
            let mut row = AlmostPrimeRow {
                t,
                points: 0,
                nonzero: 0,
                almost_primes: 0,
                primes: 0,
                c_almost: 0.0,
                c_prime: 0.0,
            };
            for (s, &n) in status.iter().zip(&instance.norms_sq) {
                if n > t * t {
                    continue;
                }
                row.points += 1;
                if let Status::Counted { omega, all_prime } = *s {
                    row.nonzero += 1;
                    row.almost_primes += usize::from(omega <= big_r);
                    row.primes += usize::from(all_prime && r > 0);
                }
            }
            let x = row.points as f64;
            if row.points > 1 {
                let scale = x.ln().powi(r as i32) / x;
                row.c_almost = row.almost_primes as f64 * scale;
                row.c_prime = row.primes as f64 * scale;
            }
            row
        })
        .collect();

    Ok(AlmostPrimeTable {
        big_r,
        r,
        rows,
        skipped,
    })
}

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::arith::primes_below;
use super::density::LocalDensityTable;
use super::instance::{remainder_row, RemainderRow, SieveInstance};
use super::SieveError;

/// Largest `ω(P)` accepted by exact inclusion–exclusion.
pub const MAX_EXACT_PRIMES: usize = 20;

/// Largest `ω(P)` accepted in Bonferroni mode.
pub const MAX_BONFERRONI_PRIMES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", content = "k", rename_all = "snake_case")]
pub enum SieveMode {
    Exact,
    /// Truncation at `ν(d) ≤ k`, `k ≥ 1`.
    Bonferroni(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveRun {
    pub mode: SieveMode,
    /// `X = N(T)`.
    pub x: usize,
    pub t: f64,
    pub z: f64,
    /// Good primes `p < z`; their product is `P`.
    pub primes: Vec<u64>,
    pub p: String,
    /// `S(A, P)` by the direct filter `gcd(F(x), P) = 1`.
    pub s_exact: u64,
    /// `Σ_{d | P} μ(d)|A_d|` in exact mode.
    pub inclusion_exclusion: Option<i64>,
    /// `Σ_{d | P, ν(d) ≤ k} μ(d)|A_d|` in Bonferroni mode.
    pub truncated: Option<i64>,
    /// Bracketing `(lower, upper)` from the truncations at `k` and `k − 1`.
    pub bounds: Option<(i64, i64)>,
    /// Level `D`; remainders are listed for `d | P` with `d < D`.
    pub level: f64,
    pub remainders: Vec<RemainderRow>,
    pub remainder_sum: f64,
}

/// Default cutoff `z = X^{1/(18 r)}`.
pub fn default_z(x: usize, r: usize) -> f64 {
    (x.max(1) as f64).powf(1.0 / (18.0 * r.max(1) as f64))
}

/// Legendre sieve `S(A, P) = #{x : gcd(F(x), P) = 1}` over the good primes
/// `p < z` of `table`.
///
/// The direct gcd count is always computed. Exact mode also evaluates the
/// full inclusion–exclusion sum over the `2^ω` divisors of `P` and fails
/// with [`SieveError::LegendreMismatch`] if the two differ. Bonferroni mode
/// evaluates the truncated sums at `k` and `k − 1`.
pub fn legendre_sieve(
    instance: &SieveInstance,
    table: &LocalDensityTable,
    z: f64,
    mode: SieveMode,
    level: Option<f64>,
) -> Result<SieveRun, SieveError> {
    let primes: Vec<u64> = primes_below(z.ceil().max(0.0) as u64)
        .into_iter()
        .filter(|&p| (p as f64) < z && !table.bad_primes.contains(&p))
        .collect();
    let omega = primes.len();
    if let SieveMode::Bonferroni(0) = mode {
        return Err(SieveError::InvalidParameter("Bonferroni truncation needs k ≥ 1".into()));
    }
    if mode == SieveMode::Exact && omega > MAX_EXACT_PRIMES {
        return Err(SieveError::TooManyDivisors {
            omega,
            cap: MAX_EXACT_PRIMES,
        });
    }
    if omega > MAX_BONFERRONI_PRIMES {
        return Err(SieveError::TooManyDivisors {
            omega,
            cap: MAX_BONFERRONI_PRIMES,
        });
    }
    let big_p: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();

    let s_exact = instance
        .values
        .par_iter()
        .filter(|v| BigUint::from(v.unsigned_abs()).gcd(&big_p).is_one())
        .count() as u64;

    // Bit i of a mask records p_i | F(x).
    let masks: Vec<u64> = instance
        .values
        .par_iter()
        .map(|&v| {
            primes
                .iter()
                .enumerate()
                .filter(|(_, &p)| v.rem_euclid(p as i128) == 0)
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
        .collect();

    let (inclusion_exclusion, truncated, bounds) = match mode {
        SieveMode::Exact => {
            let a = divisor_counts(&masks, omega);
            let total: i64 = a
                .iter()
                .enumerate()
                .map(|(s, &c)| mobius_sign(s as u64) * c as i64)
                .sum();
            if total != s_exact as i64 {
                return Err(SieveError::LegendreMismatch {
                    inclusion_exclusion: total,
                    direct: s_exact,
                });
            }
            (Some(total), None, None)
        }
        SieveMode::Bonferroni(k) => {
            let bk = bonferroni_sum(&masks, k);
            let bk1 = bonferroni_sum(&masks, k - 1);
            let (lo, hi) = if k % 2 == 1 { (bk, bk1) } else { (bk1, bk) };
            (None, Some(bk), Some((lo, hi)))
        }
    };

    let level = level.unwrap_or_else(|| (instance.x().max(1) as f64).powf(0.25));
    let mut remainders = Vec::new();
    for (d, subset) in divisors_below(&primes, level) {
        let count = masks.iter().filter(|&&m| m & subset == subset).count() as u64;
        let g = table.multiplicative_g(d)?;
        remainders.push(remainder_row(d, count, g, instance.x()));
    }
    remainders.sort_by_key(|r| r.d);
    let remainder_sum = remainders.iter().map(|r| r.r_d.abs()).sum();

    Ok(SieveRun {
        mode,
        x: instance.x(),
        t: instance.t,
        z,
        primes,
        p: big_p.to_string(),
        s_exact,
        inclusion_exclusion,
        truncated,
        bounds,
        level,
        remainders,
        remainder_sum,
    })
}

fn mobius_sign(subset: u64) -> i64 {
    if subset.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `|A_d|` for every subset `d` of the primes: the number of masks
/// containing `d`, via the superset-sum transform of the mask histogram.
fn divisor_counts(masks: &[u64], omega: usize) -> Vec<u64> {
    let size = 1usize << omega;
    let mut a = vec![0u64; size];
    for &m in masks {
        a[m as usize] += 1;
    }
    for bit in 0..omega {
        for s in 0..size {
            if s & (1 << bit) == 0 {
                a[s] += a[s | (1 << bit)];
            }
        }
    }
    a
}

/// `Σ_{ν(d) ≤ k} μ(d)|A_d|`, evaluated point by point: a point divisible by
/// exactly `j` of the primes contributes `Σ_{i ≤ k} (−1)^i C(j, i)`.
fn bonferroni_sum(masks: &[u64], k: usize) -> i64 {
    let mut by_weight = [0i64; 65];
    for &m in masks {
        by_weight[m.count_ones() as usize] += 1;
    }
    let mut total = 0i128;
    for (j, &n) in by_weight.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let mut binom = 1i128;
        let mut partial = 0i128;
        for i in 0..=k.min(j) {
            if i > 0 {
                binom = binom * (j - i + 1) as i128 / i as i128;
            }
            partial += if i % 2 == 0 { binom } else { -binom };
        }
        total += n as i128 * partial;
    }
    total as i64
}

/// Divisors `d | P` with `d < level`, with their prime subsets, in DFS order.
fn divisors_below(primes: &[u64], level: f64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    fn walk(primes: &[u64], start: usize, d: u64, subset: u64, level: f64, out: &mut Vec<(u64, u64)>) {
        out.push((d, subset));
        for i in start..primes.len() {
            let next = d.saturating_mul(primes[i]);
            if (next as f64) >= level {
                break;
            }
            walk(primes, i + 1, next, subset | (1 << i), level, out);
        }
    }
    if level > 1.0 {
        walk(primes, 0, 1, 0, level, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn superset_counts() {
        // Masks over two primes: {}, {0}, {0,1}, {1}.
        let a = divisor_counts(&[0b00, 0b01, 0b11, 0b10], 2);
        assert_eq!(a, vec![4, 2, 2, 1]);
    }

    #[test]
    fn bonferroni_matches_subset_enumeration() {
        let masks: Vec<u64> = (0..64u64).map(|i| i * 37 % 16).collect();
        let a = divisor_counts(&masks, 4);
        for k in 0..=4 {
            let direct: i64 = a
                .iter()
                .enumerate()
                .filter(|(s, _)| (*s as u64).count_ones() as usize <= k)
                .map(|(s, &c)| mobius_sign(s as u64) * c as i64)
                .sum();
            assert_eq!(bonferroni_sum(&masks, k), direct, "k = {k}");
        }
    }

    #[test]
    fn divisor_listing() {
        let d: Vec<u64> = divisors_below(&[2, 3, 5, 7], 16.0).into_iter().map(|x| x.0).collect();
        assert_eq!(d, vec![1, 2, 6, 10, 14, 3, 15, 5, 7]);
        assert!(divisors_below(&[2, 3], 1.0).is_empty());
    }

    #[test]
    fn default_cutoff() {
        assert!((default_z(1 << 18, 1) - 2.0).abs() < 1e-12);
        assert!((default_z(1 << 36, 2) - 2.0).abs() < 1e-12);
    }
}

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arith::primes_below;
use super::SieveError;

/// Trial division covers every prime below this bound.
pub const TRIAL_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorConfig {
    pub seed: u64,
    /// Polynomial evaluations per rho attempt before giving up.
    pub max_rho_iterations: u64,
    pub rho_attempts: u32,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed_2024,
            max_rho_iterations: 1 << 22,
            rho_attempts: 8,
        }
    }
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_LIMIT))
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return a * b % m;
    }
    // Double-and-add keeps every intermediate below 2m < 2^129; the
    // additions are done with wrapping checks against m.
    let (mut a, mut b, mut acc) = (a % m, b % m, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin with the first 13 prime bases, which is a proof of
/// primality below `3.3·10^24`; above that it is a strong probable-prime test.
pub fn is_probable_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a nontrivial divisor of the odd
/// composite `n`, or `None` when the budget runs out.
fn pollard_brent(n: u128, rng: &mut ChaCha8Rng, cfg: &FactorConfig) -> Option<u128> {
    const BATCH: u64 = 128;
    for _ in 0..cfg.rho_attempts {
        let c = rng.random_range(1..n);
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let mut y = rng.random_range(0..n);
        let (mut x, mut ys) = (y, y);
        let (mut r, mut q, mut g) = (1u64, 1u128, 1u128);
        let mut spent = 0u64;
        while g == 1 && spent < cfg.max_rho_iterations {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            spent += 2 * r;
            r *= 2;
        }
        if g == n {
            // The batch overshot; step back one evaluation at a time.
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization `[(p, e)]` of `n ≥ 1`, sorted by `p`.
///
/// Trial division by all primes below [`TRIAL_LIMIT`], then Pollard–Brent on
/// the remaining cofactor. The rho generator is seeded from `cfg.seed` and
/// `n`, so the result does not depend on evaluation order.
pub fn factorize(n: u128, cfg: &FactorConfig) -> Result<Vec<(u128, u32)>, SieveError> {
    if n == 0 {
        return Err(SieveError::InvalidParameter("cannot factor 0".into()));
    }
    let mut out = Vec::new();
    let mut rest = n;
    for &p in trial_primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if rest > 1 {
        let limit = TRIAL_LIMIT as u128;
        if rest < limit * limit {
            out.push((rest, 1));
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (n as u64) ^ ((n >> 64) as u64).rotate_left(17));
            let mut stack = vec![rest];
            while let Some(m) = stack.pop() {
                if is_probable_prime(m) {
                    out.push((m, 1));
                    continue;
                }
                let d = pollard_brent(m, &mut rng, cfg).ok_or(SieveError::FactorizationTimeout(m))?;
                stack.push(d);
                stack.push(m / d);
            }
        }
    }
    out.sort_unstable();
    let mut merged: Vec<(u128, u32)> = Vec::with_capacity(out.len());
    for (p, e) in out {
        match merged.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(merged)
}

/// `Ω(n)`, the number of prime factors with multiplicity; `Ω(1) = 0`.
pub fn big_omega(n: u128, cfg: &FactorConfig) -> Result<u32, SieveError> {
    Ok(factorize(n, cfg)?.iter().map(|f| f.1).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> FactorConfig {
        FactorConfig::default()
    }

    fn product(f: &[(u128, u32)]) -> u128 {
        f.iter().map(|&(p, e)| p.pow(e)).product()
    }

    #[test]
    fn small_values() {
        assert_eq!(factorize(1, &cfg()).unwrap(), vec![]);
        assert_eq!(factorize(360, &cfg()).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(big_omega(1, &cfg()).unwrap(), 0);
        assert_eq!(big_omega(1024, &cfg()).unwrap(), 10);
        assert!(factorize(0, &cfg()).is_err());
    }

    #[test]
    fn primality() {
        let primes = primes_below(10_000);
        for n in 0..10_000u128 {
            assert_eq!(is_probable_prime(n), primes.binary_search(&(n as u64)).is_ok(), "{n}");
        }
        // Strong pseudoprime to bases 2..37 below 3.3e24.
        assert!(!is_probable_prime(318_665_857_834_031_151_167_461));
        assert!(is_probable_prime((1u128 << 61) - 1));
        assert!(is_probable_prime((1u128 << 127) - 1));
    }

    #[test]
    fn rho_on_large_semiprimes() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        assert_eq!(factorize(p * q, &cfg()).unwrap(), vec![(q, 1), (p, 1)]);
        let big = ((1u128 << 61) - 1) * 1_000_000_000_039;
        let f = factorize(big, &cfg()).unwrap();
        assert_eq!(product(&f), big);
        assert_eq!(f.len(), 2);
        let cube = 1_000_003u128.pow(3);
        assert_eq!(factorize(cube, &cfg()).unwrap(), vec![(1_000_003, 3)]);
    }

    #[test]
    fn mul_mod_above_64_bits() {
        let m = (1u128 << 127) - 1;
        let a = m - 2;
        assert_eq!(mul_mod(a, a, m), 4);
        assert_eq!(pow_mod(3, m - 1, m), 1);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tight = FactorConfig {
            max_rho_iterations: 1,
            rho_attempts: 1,
            ..cfg()
        };
        let n = 1_000_000_007u128 * 1_000_000_009;
        assert!(matches!(factorize(n, &tight), Err(SieveError::FactorizationTimeout(_))));
    }
}

/// Primes `p < n`, by the sieve of Eratosthenes.
pub fn primes_below(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Distinct prime factors of `d ≥ 1` in increasing order, by trial division.
pub fn prime_factors(mut d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            out.push(p);
            while d.is_multiple_of(p) {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

pub fn is_squarefree(d: u64) -> bool {
    d >= 1 && prime_factors(d).iter().product::<u64>() == d
}

/// Square-free integers in `[1, n]`.
pub fn squarefree_up_to(n: u64) -> Vec<u64> {
    (1..=n).filter(|&d| is_squarefree(d)).collect()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_below(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_below(2).is_empty());
        assert_eq!(primes_below(1_000).len(), 168);
    }

    #[test]
    fn factors_and_squarefree() {
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(97), vec![97]);
        assert_eq!(squarefree_up_to(12), vec![1, 2, 3, 5, 6, 7, 10, 11]);
        assert_eq!(gcd(12, 18), 6);
    }
}

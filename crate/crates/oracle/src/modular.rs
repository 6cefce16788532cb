/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// All `[[a, b], [c, d]]` with `ad - bc = 1` and `a² + b² + c² + d² ≤ bound`,
/// found by four nested loops.
pub fn sl2z_matrices(bound: i64) -> Vec<[[i64; 2]; 2]> {
    let mut r = 0i64;
    while (r + 1) * (r + 1) <= bound {
        r += 1;
    }
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    if a * d - b * c == 1 && a * a + b * b + c * c + d * d <= bound {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_below_thirty() {
        let p: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(p, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn smallest_balls() {
        // Norm 2: ±I and ±S.
        assert_eq!(sl2z_matrices(2).len(), 4);
        // Norm 3: one zero entry and three entries ±1; four positions for
        // the zero, four sign patterns each.
        assert_eq!(sl2z_matrices(3).len(), 4 + 16);
        for m in sl2z_matrices(30) {
            assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
        }
    }
}

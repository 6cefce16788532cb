use crate::modular::is_prime;

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Primitive triples `(m² - n², 2mn, m² + n²)` with `m > n ≥ 1`,
/// `gcd(m, n) = 1`, `m - n` odd and hypotenuse at most `t`, sorted by
/// hypotenuse and then by the first leg.
pub fn euclid_triples(t: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut m = 2i64;
    while m * m < t {
        for n in 1..m {
            if (m - n) % 2 == 1 && gcd(m, n) == 1 && m * m + n * n <= t {
                out.push((m * m - n * n, 2 * m * n, m * m + n * n));
            }
        }
        m += 1;
    }
    out.sort_by_key(|&(a, _, c)| (c, a));
    out
}

fn signed_variants(a: i64, b: i64, c: i64, out: &mut Vec<Vec<i64>>) {
    for (x, y) in [(a, b), (b, a)] {
        for sx in [-1, 1] {
            for sy in [-1, 1] {
                out.push(vec![sx * x, sy * y, c]);
            }
        }
    }
}

/// The orbit of `(3,4,5)` under the full integral automorphism group of
/// `x² + y² - z²` with `z > 0`, truncated to Euclidean norm `≤ norm_bound`.
///
/// This is every primitive triple from the Euclid parametrization together
/// with the degenerate `(1, 0, 1)`, closed under leg signs and the leg swap.
pub fn pythagorean_orbit_points(norm_bound: f64) -> Vec<Vec<i64>> {
    let max_c = (norm_bound / std::f64::consts::SQRT_2).floor() as i64 + 1;
    let mut out = Vec::new();
    signed_variants(1, 0, 1, &mut out);
    for (a, b, c) in euclid_triples(max_c) {
        signed_variants(a, b, c, &mut out);
    }
    out.retain(|p| ((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) as f64) <= norm_bound * norm_bound);
    out.sort();
    out.dedup();
    out
}

/// Points of [`pythagorean_orbit_points`] whose hypotenuse is prime.
pub fn prime_hypotenuse_points(norm_bound: f64) -> usize {
    pythagorean_orbit_points(norm_bound)
        .iter()
        .filter(|p| is_prime(p[2] as u64))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_hypotenuses() {
        assert_eq!(euclid_triples(5), vec![(3, 4, 5)]);
        let hyps: Vec<i64> = euclid_triples(25).iter().map(|t| t.2).collect();
        assert_eq!(hyps, vec![5, 13, 17, 25]);
        assert!(euclid_triples(25).contains(&(7, 24, 25)));
    }

    #[test]
    fn triples_are_primitive() {
        for (a, b, c) in euclid_triples(2000) {
            assert_eq!(a * a + b * b, c * c);
            assert_eq!(gcd(gcd(a, b), c), 1);
        }
    }

    #[test]
    fn orbit_points_near_origin() {
        let pts = pythagorean_orbit_points(8.0);
        assert_eq!(pts.len(), 12);
        assert!(pts.contains(&vec![-4, 3, 5]));
        assert!(pts.contains(&vec![0, -1, 1]));
    }

    #[test]
    fn prime_hypotenuse_count_small() {
        // Hypotenuses 5, 13, 17 with sqrt(2)·c ≤ 25, each giving 8 points.
        assert_eq!(prime_hypotenuse_points(25.0), 24);
    }
}

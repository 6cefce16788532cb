use crate::OracleError;

/// Work cap for [`enumerate_quadric`], in inner-loop iterations.
const MAX_ITERATIONS: u128 = 2_000_000_000;

/// Integer solutions of `Q(x) = s` in the box `max |x_i| ≤ T`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadricEnumeration {
    pub gram: Vec<Vec<i64>>,
    pub level: i64,
    pub bound: i64,
    /// Sorted lexicographically.
    pub points: Vec<Vec<i64>>,
}

/// Loops over all but the last coordinate and solves the remaining quadratic
/// (or linear) equation in the last coordinate exactly.
pub fn enumerate_quadric(gram: &[Vec<i64>], s: i64, t: i64) -> Result<QuadricEnumeration, OracleError> {
    let m = gram.len();
    if m < 2 || gram.iter().any(|r| r.len() != m) {
        return Err(OracleError::Invalid("gram matrix must be square, size >= 2".into()));
    }
    if t < 0 {
        return Err(OracleError::Invalid("negative bound".into()));
    }
    let side = 2 * t as u128 + 1;
    if side.pow(m as u32 - 1) > MAX_ITERATIONS {
        return Err(OracleError::BudgetExceeded(format!("{side}^{} iterations", m - 1)));
    }
    let mut points = Vec::new();
    let mut head = vec![-t; m - 1];
    loop {
        // Q(head, y) = a y² + 2 b y + c
        let a = gram[m - 1][m - 1] as i128;
        let b: i128 = (0..m - 1).map(|i| gram[i][m - 1] as i128 * head[i] as i128).sum();
        let mut c: i128 = 0;
        for i in 0..m - 1 {
            for j in 0..m - 1 {
                c += gram[i][j] as i128 * head[i] as i128 * head[j] as i128;
            }
        }
        c -= s as i128;
        for y in solve_last(a, b, c) {
            if y.abs() <= t as i128 {
                let mut p = head.clone();
                p.push(y as i64);
                points.push(p);
            }
        }
        let mut k = m - 1;
        loop {
            if k == 0 {
                points.sort();
                points.dedup();
                return Ok(QuadricEnumeration {
                    gram: gram.to_vec(),
                    level: s,
                    bound: t,
                    points,
                });
            }
            k -= 1;
            if head[k] < t {
                head[k] += 1;
                for h in head.iter_mut().skip(k + 1) {
                    *h = -t;
                }
                break;
            }
        }
    }
}

/// Integer roots of `a y² + 2 b y + c = 0`.
fn solve_last(a: i128, b: i128, c: i128) -> Vec<i128> {
    if a == 0 {
        if b == 0 {
            // Every y solves when c = 0; such forms are degenerate in the last
            // variable and rejected by callers through the signature.
            return vec![];
        }
        return if c % (2 * b) == 0 { vec![-c / (2 * b)] } else { vec![] };
    }
    let disc = b * b - a * c;
    if disc < 0 {
        return vec![];
    }
    let r = isqrt(disc);
    if r * r != disc {
        return vec![];
    }
    let mut roots = vec![];
    for num in [-b + r, -b - r] {
        if num % a == 0 {
            roots.push(num / a);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn isqrt(n: i128) -> i128 {
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

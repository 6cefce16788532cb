use crate::OracleError;

const MAX_SPACE: u64 = 200_000_000;

fn decode(mut idx: u64, p: u64, m: usize) -> Vec<u64> {
    let mut v = vec![0; m];
    for x in v.iter_mut().rev() {
        *x = idx % p;
        idx /= p;
    }
    v
}

fn encode(v: &[u64], p: u64) -> u64 {
    v.iter().fold(0, |acc, &x| acc * p + x)
}

fn reduce(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

fn space_size(p: u64, m: usize) -> Result<u64, OracleError> {
    (0..m)
        .try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&s| s <= MAX_SPACE))
        .ok_or_else(|| OracleError::BudgetExceeded(format!("{p}^{m} vectors")))
}

/// Orbit of `w0 mod p` under the generators, computed by sweeping the full
/// space `(Z/p)^m` until no new vector is reached. Sorted.
pub fn fp_orbit_closure(gens: &[Vec<Vec<i64>>], w0: &[i64], p: u64) -> Result<Vec<Vec<u64>>, OracleError> {
    if p < 1 {
        return Err(OracleError::Invalid("modulus must be positive".into()));
    }
    let m = w0.len();
    let size = space_size(p, m)?;
    let mut reached = vec![false; size as usize];
    let start: Vec<u64> = w0.iter().map(|&x| reduce(x, p)).collect();
    reached[encode(&start, p) as usize] = true;
    let gens: Vec<Vec<Vec<u64>>> = gens
        .iter()
        .map(|g| g.iter().map(|row| row.iter().map(|&x| reduce(x, p)).collect()).collect())
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for idx in 0..size {
            if !reached[idx as usize] {
                continue;
            }
            let v = decode(idx, p, m);
            for g in &gens {
                let w: Vec<u64> = g
                    .iter()
                    .map(|row| row.iter().zip(&v).map(|(a, b)| a * b % p).sum::<u64>() % p)
                    .collect();
                let j = encode(&w, p) as usize;
                if !reached[j] {
                    reached[j] = true;
                    changed = true;
                }
            }
        }
    }
    Ok((0..size)
        .filter(|&i| reached[i as usize])
        .map(|i| decode(i, p, m))
        .collect())
}

/// Nonzero vectors `x ∈ (Z/p)^m` with `xᵀ G x ≡ 0 mod p`, by exhaustive loop.
pub fn isotropic_vectors_mod(gram: &[Vec<i64>], p: u64) -> Result<Vec<Vec<u64>>, OracleError> {
    let m = gram.len();
    let size = space_size(p, m)?;
    let g: Vec<Vec<i128>> = gram.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    Ok((1..size)
        .map(|i| decode(i, p, m))
        .filter(|v| {
            let mut q: i128 = 0;
            for i in 0..m {
                for j in 0..m {
                    q += g[i][j] * v[i] as i128 * v[j] as i128;
                }
            }
            q.rem_euclid(p as i128) == 0
        })
        .collect())
}

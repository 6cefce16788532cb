use rustc_hash::FxHashSet;

use super::arith::is_squarefree;
use super::SieveError;
use crate::matrix::SquareMatrix;
use crate::orbit::GroupPresentation;

/// Matrix over `Z/d`, entries in `[0, d)`.
pub type ModMatrix = SquareMatrix<u64>;

/// Default cap on `|O_d|`.
pub const DEFAULT_ORBIT_CAP: usize = 20_000_000;

/// Entrywise reduction of the generators (inverses included) modulo `d`.
pub fn reduce_generators(group: &GroupPresentation, d: u64) -> Result<Vec<ModMatrix>, SieveError> {
    if d == 0 {
        return Err(SieveError::InvalidModulus(d));
    }
    Ok(group
        .integer_generators()
        .iter()
        .map(|g| g.map(|&x| reduce(x, d)))
        .collect())
}

pub(crate) fn reduce(x: i64, d: u64) -> u64 {
    (x as i128).rem_euclid(d as i128) as u64
}

/// Whether `gᵀ·G·g ≡ G (mod d)`.
pub fn preserves_form_mod(g: &ModMatrix, gram: &SquareMatrix<i64>, d: u64) -> bool {
    let m = g.dim();
    let dd = d as u128;
    (0..m).all(|i| {
        (0..m).all(|j| {
            let mut acc = 0u128;
            for k in 0..m {
                for l in 0..m {
                    let q = reduce(*gram.get(k, l), d) as u128;
                    acc = (acc + *g.get(k, i) as u128 * q % dd * *g.get(l, j) as u128) % dd;
                }
            }
            acc as u64 == reduce(*gram.get(i, j), d)
        })
    })
}

/// Whether every image has its inverse modulo `d` among the images.
fn symmetric(images: &[ModMatrix], d: u64) -> bool {
    images.iter().all(|g| {
        images.iter().any(|h| {
            let m = g.dim();
            (0..m).all(|i| {
                (0..m).all(|j| {
                    let e = (0..m).fold(0u128, |acc, k| acc + *g.get(i, k) as u128 * *h.get(k, j) as u128) % d as u128;
                    e == u128::from(i == j) % d as u128
                })
            })
        })
    })
}

fn apply_mod(g: &ModMatrix, v: &[u64], d: u64) -> Vec<u64> {
    g.rows()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % d as u128) as u64
        })
        .collect()
}

/// Orbit `O_d` of `w0 mod d` under the reduced generators.
///
/// Points are stored as base-`d` keys with the first coordinate most
/// significant, so sorted keys are lexicographically sorted points.
#[derive(Clone, Debug)]
pub struct FiniteOrbit {
    pub modulus: u64,
    pub dim: usize,
    keys: Vec<u64>,
    pub generator_images: Vec<ModMatrix>,
    /// `false` flags a modulus outside the square-free domain of the sieve.
    pub squarefree: bool,
}

impl FiniteOrbit {
    /// Orbit given by its points, which must be reduced modulo `modulus`.
    pub fn from_points(modulus: u64, dim: usize, points: &[Vec<u64>], generator_images: Vec<ModMatrix>) -> Self {
        let mut orbit = Self {
            modulus,
            dim,
            keys: Vec::new(),
            generator_images,
            squarefree: is_squarefree(modulus),
        };
        orbit.keys = points.iter().map(|p| orbit.pack(p)).collect();
        orbit.keys.sort_unstable();
        orbit.keys.dedup();
        orbit
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    fn pack(&self, v: &[u64]) -> u64 {
        v.iter().fold(0u64, |acc, &x| acc * self.modulus + x)
    }

    fn unpack(&self, mut key: u64, out: &mut [u64]) {
        for x in out.iter_mut().rev() {
            *x = key % self.modulus;
            key /= self.modulus;
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.dim && v.iter().all(|&x| x < self.modulus) && self.keys.binary_search(&self.pack(v)).is_ok()
    }

    /// Calls `f` on every point in lexicographic order.
    pub fn for_each_point(&self, mut f: impl FnMut(&[u64])) {
        let mut v = vec![0u64; self.dim];
        for &k in &self.keys {
            self.unpack(k, &mut v);
            f(&v);
        }
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(self.len());
        self.for_each_point(|p| out.push(p.to_vec()));
        out
    }

    /// Whether every generator image maps the orbit into itself.
    pub fn is_closed(&self) -> bool {
        let mut closed = true;
        self.for_each_point(|p| {
            closed &= self.generator_images.iter().all(|g| self.contains(&apply_mod(g, p, self.modulus)));
        });
        closed
    }
}

/// Breadth-first closure of `w0 mod d` in `(Z/d)^m`.
///
/// Vectors are packed into a single `u64` in base `d`; moduli with
/// `d^m ≥ 2^64` are rejected with [`SieveError::ModulusTooLarge`], as are
/// orbits larger than `cap`.
pub fn finite_orbit(images: &[ModMatrix], w0: &[i64], d: u64, cap: usize) -> Result<FiniteOrbit, SieveError> {
    if d == 0 {
        return Err(SieveError::InvalidModulus(d));
    }
    let m = w0.len();
    if let Some(g) = images.iter().find(|g| g.dim() != m) {
        return Err(SieveError::Dimension {
            expected: m,
            got: g.dim(),
        });
    }
    let too_large = SieveError::ModulusTooLarge { modulus: d, cap };
    (0..m).try_fold(1u64, |acc, _| acc.checked_mul(d)).ok_or(too_large.clone())?;

    let mut ring = Vec::with_capacity(m);
    let mut key = 1u64;
    for _ in 0..m {
        ring.push(key);
        key *= d;
    }
    ring.reverse();
    let unpack = |key: u64, out: &mut [u64]| {
        for (x, &w) in out.iter_mut().zip(&ring) {
            *x = key / w % d;
        }
    };
    // Row sums stay below 2^64 when m·(d-1)² does, which covers every
    // modulus with a packable key space in dimension ≤ 4.
    let narrow = (m as u128) * (d as u128 - 1).pow(2) < 1u128 << 64;
    let dd = d as u128;
    let step = |g: &ModMatrix, v: &[u64]| -> u64 {
        let mut key = 0u64;
        for (row, &w) in g.rows().zip(&ring) {
            let x = if narrow {
                row.iter().zip(v).fold(0u64, |acc, (&a, &b)| acc + a * b) % d
            } else {
                (row.iter().zip(v).fold(0u128, |acc, (&a, &b)| acc + a as u128 * b as u128) % dd) as u64
            };
            key += x * w;
        }
        key
    };

    let start = w0.iter().zip(&ring).fold(0u64, |acc, (&x, &w)| acc + reduce(x, d) * w);
    let mut v = vec![0u64; m];
    let keys = if symmetric(images, d) {
        // With inverse-closed generators a new layer can only meet the
        // previous two, so dedup against those and merge once at the end.
        let mut all = vec![start];
        let mut prev: Vec<u64> = Vec::new();
        let mut cur = vec![start];
        while !cur.is_empty() {
            let mut next = Vec::with_capacity(cur.len() * images.len());
            for &key in &cur {
                unpack(key, &mut v);
                next.extend(images.iter().map(|g| step(g, &v)));
            }
            next.sort_unstable();
            next.dedup();
            next.retain(|k| prev.binary_search(k).is_err() && cur.binary_search(k).is_err());
            all.extend_from_slice(&next);
            if all.len() > cap {
                return Err(too_large);
            }
            prev = std::mem::replace(&mut cur, next);
        }
        all.sort_unstable();
        all
    } else {
        let mut seen = FxHashSet::default();
        seen.insert(start);
        let mut frontier = vec![start];
        while let Some(key) = frontier.pop() {
            unpack(key, &mut v);
            for g in images {
                let next = step(g, &v);
                if seen.insert(next) {
                    if seen.len() > cap {
                        return Err(too_large);
                    }
                    frontier.push(next);
                }
            }
        }
        let mut keys: Vec<u64> = seen.into_iter().collect();
        keys.sort_unstable();
        keys
    };
    Ok(FiniteOrbit {
        modulus: d,
        dim: m,
        keys,
        generator_images: images.to_vec(),
        squarefree: is_squarefree(d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::pythagorean_full;

    #[test]
    fn identity_reduces_to_identity() {
        let group = crate::presets::trivial(crate::lorentz::QuadraticForm::standard(2));
        assert!(reduce_generators(&group, 7).unwrap().is_empty());
        let id = crate::matrix::IntMatrix::identity(3).map(|&x| reduce(x, 7));
        assert!(id.is_identity());
    }

    #[test]
    fn reduction_preserves_form() {
        let group = pythagorean_full();
        for d in [2u64, 3, 5, 30] {
            for g in reduce_generators(&group, d).unwrap() {
                assert!(preserves_form_mod(&g, group.form().gram(), d));
            }
        }
        let bad = crate::matrix::IntMatrix::diagonal(&[2, 1, 1]).map(|&x| reduce(x, 5));
        assert!(!preserves_form_mod(&bad, group.form().gram(), 5));
    }

    #[test]
    fn small_orbits() {
        let group = pythagorean_full();
        let one = finite_orbit(&reduce_generators(&group, 1).unwrap(), &[3, 4, 5], 1, 10).unwrap();
        assert_eq!(one.points(), vec![vec![0, 0, 0]]);
        let two = finite_orbit(&reduce_generators(&group, 2).unwrap(), &[3, 4, 5], 2, 10).unwrap();
        assert_eq!(two.points(), vec![vec![0, 1, 1], vec![1, 0, 1]]);
        assert!(two.is_closed());
        let five = finite_orbit(&reduce_generators(&group, 5).unwrap(), &[3, 4, 5], 5, 1000).unwrap();
        assert_eq!(five.len(), 24);
        assert!(five.contains(&[3, 4, 0]));
        let nine = finite_orbit(&reduce_generators(&group, 9).unwrap(), &[3, 4, 5], 9, 1000).unwrap();
        assert!(!nine.squarefree);
    }

    #[test]
    fn cap_and_modulus_errors() {
        let images = reduce_generators(&pythagorean_full(), 7).unwrap();
        assert!(matches!(
            finite_orbit(&images, &[3, 4, 5], 7, 10),
            Err(SieveError::ModulusTooLarge { modulus: 7, cap: 10 })
        ));
        assert!(matches!(
            finite_orbit(&images, &[3, 4, 5], 0, 10),
            Err(SieveError::InvalidModulus(0))
        ));
        let huge = 1u64 << 22;
        let images = reduce_generators(&pythagorean_full(), huge).unwrap();
        assert!(matches!(
            finite_orbit(&images, &[3, 4, 5], huge, usize::MAX),
            Err(SieveError::ModulusTooLarge { .. })
        ));
    }
}

use std::hash::Hash;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::Serialize;

use super::{GroupPresentation, OrbitError};

/// Traversal parameters shared by [`orbit_bfs_with`] and group balls.
#[derive(Clone, Debug, PartialEq)]
pub struct BfsOptions {
    /// Frontier points are kept while their size is at most `bound × slack`.
    pub slack: f64,
    /// Total number of visited points before the search gives up.
    pub max_points: usize,
}

impl Default for BfsOptions {
    fn default() -> Self {
        Self {
            slack: 4.0,
            max_points: 20_000_000,
        }
    }
}

/// Vector orbit `Γ·w0` truncated to a Euclidean ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitSet {
    pub base: Vec<i64>,
    /// Orbit points of Euclidean norm at most `norm_bound`, sorted.
    pub points: Vec<Vec<i64>>,
    /// Number of BFS layers expanded.
    pub max_word_length: usize,
    pub norm_bound: f64,
    /// Points of norm at most this radius are certified found: the last two
    /// layers added none, or the traversal ran out of frontier.
    pub complete_below: f64,
    pub slack: f64,
    /// Whether the pruned traversal ran out of frontier before `max_depth`.
    pub exhausted: bool,
}

impl OrbitSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(x)).is_ok()
    }

    /// Sorted Euclidean norms of the points.
    pub fn sorted_norms(&self) -> Vec<f64> {
        let mut norms: Vec<f64> = self.points.iter().map(|p| euclidean_norm(p)).collect();
        norms.sort_by(f64::total_cmp);
        norms
    }

    /// Points with norm at most `t`.
    pub fn count_within(&self, t: f64) -> usize {
        let t2 = t * t;
        self.points.iter().filter(|p| norm_sq(p) as f64 <= t2).count()
    }

    /// `(T, N(T))` for each radius of `grid`.
    pub fn count_grid(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        let mut sq: Vec<i128> = self.points.iter().map(|p| norm_sq(p)).collect();
        sq.sort_unstable();
        grid.iter()
            .map(|&t| (t, sq.partition_point(|&s| s as f64 <= t * t) as f64))
            .collect()
    }
}

pub(crate) fn norm_sq(x: &[i64]) -> i128 {
    x.iter().map(|&v| v as i128 * v as i128).sum()
}

pub(crate) fn euclidean_norm(x: &[i64]) -> f64 {
    (norm_sq(x) as f64).sqrt()
}

/// Enumerates `Γ·w0` within Euclidean norm `norm_bound`, using words of
/// length at most `max_depth` and the default [`BfsOptions`].
pub fn orbit_bfs(
    gamma: &GroupPresentation,
    w0: &[i64],
    norm_bound: f64,
    max_depth: usize,
) -> Result<OrbitSet, OrbitError> {
    orbit_bfs_with(gamma, w0, norm_bound, max_depth, &BfsOptions::default())
}

pub fn orbit_bfs_with(
    gamma: &GroupPresentation,
    w0: &[i64],
    norm_bound: f64,
    max_depth: usize,
    options: &BfsOptions,
) -> Result<OrbitSet, OrbitError> {
    if w0.len() != gamma.dim() {
        return Err(OrbitError::Dimension {
            expected: gamma.dim(),
            got: w0.len(),
        });
    }
    if w0.iter().all(|&x| x == 0) {
        return Err(OrbitError::ZeroVector);
    }
    if !(norm_bound >= 0.0) || !(options.slack >= 1.0) {
        return Err(OrbitError::InvalidBound(norm_bound));
    }
    let gens = gamma.integer_generators();
    let keep = norm_bound * norm_bound;
    let prune = keep * options.slack * options.slack;
    let outcome = layered_bfs(
        w0.to_vec(),
        max_depth,
        options.max_points,
        |x: &Vec<i64>| {
            gens.iter()
                .map(|g| g.checked_apply(x).ok_or(OrbitError::Overflow))
                .collect()
        },
        |x| norm_sq(x) as f64,
        prune,
        keep,
    )?;
    let complete_below = if outcome.budget_hit {
        0.0
    } else if outcome.exhausted {
        norm_bound
    } else {
        let min = outcome.last_layers_min.unwrap_or(f64::INFINITY);
        ((min - 1.0).max(0.0)).sqrt().min(norm_bound)
    };
    let mut points = outcome.inside;
    points.sort_unstable();
    let set = OrbitSet {
        base: w0.to_vec(),
        points,
        max_word_length: outcome.depth,
        norm_bound,
        complete_below,
        slack: options.slack,
        exhausted: outcome.exhausted,
    };
    if outcome.budget_hit {
        return Err(OrbitError::OrbitBudget {
            limit: options.max_points,
            partial: Box::new(set),
        });
    }
    Ok(set)
}

pub(crate) struct LayeredOutcome<K> {
    /// Visited keys whose size is at most `keep`, in no particular order.
    pub inside: Vec<K>,
    pub depth: usize,
    pub exhausted: bool,
    pub budget_hit: bool,
    /// Smallest size among keys first reached in the last two layers.
    pub last_layers_min: Option<f64>,
}

/// Breadth-first search over a Cayley-type graph with symmetric generators.
///
/// Because every edge can be walked backwards, neighbours of layer `k` lie in
/// layers `k-1`, `k` and `k+1`, so deduplication only consults the previous
/// two layers. Keys whose `size` exceeds `prune` are dropped. Each layer is
/// expanded in parallel, then sorted, which makes the visiting order (and
/// therefore every output) independent of the worker count.
pub(crate) fn layered_bfs<K, E, S>(
    start: K,
    max_depth: usize,
    max_points: usize,
    expand: E,
    size: S,
    prune: f64,
    keep: f64,
) -> Result<LayeredOutcome<K>, OrbitError>
where
    K: Clone + Hash + Eq + Ord + Send + Sync,
    E: Fn(&K) -> Result<Vec<K>, OrbitError> + Sync,
    S: Fn(&K) -> f64 + Sync,
{
    let start_size = size(&start);
    let mut inside = Vec::new();
    if start_size <= keep {
        inside.push(start.clone());
    }
    let mut previous: FxHashSet<K> = FxHashSet::default();
    let mut current: Vec<K> = vec![start.clone()];
    let mut current_set: FxHashSet<K> = FxHashSet::from_iter([start]);
    let mut visited = 1usize;
    let mut mins = [None, Some(start_size)];
    let mut depth = 0;
    let mut exhausted = false;
    let mut budget_hit = false;
    while depth < max_depth {
        let expanded: Vec<Vec<K>> = current.par_iter().map(&expand).collect::<Result<_, _>>()?;
        let mut next: Vec<(K, f64)> = expanded
            .into_par_iter()
            .flatten()
            .filter(|k| !current_set.contains(k) && !previous.contains(k))
            .filter_map(|k| {
                let s = size(&k);
                (s <= prune).then_some((k, s))
            })
            .collect();
        next.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        next.dedup_by(|a, b| a.0 == b.0);
        depth += 1;
        if next.is_empty() {
            exhausted = true;
            mins = [mins[1], None];
            break;
        }
        visited += next.len();
        let layer_min = next.iter().map(|(_, s)| *s).fold(f64::INFINITY, f64::min);
        mins = [mins[1], Some(layer_min)];
        inside.extend(next.iter().filter(|(_, s)| *s <= keep).map(|(k, _)| k.clone()));
        let next: Vec<K> = next.into_iter().map(|(k, _)| k).collect();
        previous = std::mem::replace(&mut current_set, next.iter().cloned().collect());
        current = next;
        if visited > max_points {
            budget_hit = true;
            break;
        }
    }
    let last_layers_min = match mins {
        [Some(a), Some(b)] => Some(a.min(b)),
        [a, b] => a.or(b),
    };
    Ok(LayeredOutcome {
        inside,
        depth,
        exhausted,
        budget_hit,
        last_layers_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::QuadraticForm;
    use crate::matrix::IntMatrix;

    fn reflections() -> GroupPresentation {
        let q = QuadraticForm::standard(2);
        let gens = [
            IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap(),
            IntMatrix::diagonal(&[-1, 1, 1]),
            IntMatrix::from_rows(&[vec![-1, -2, 2], vec![-2, -1, 2], vec![-2, -2, 3]]).unwrap(),
        ];
        GroupPresentation::from_integer(q, &gens, "reflections").unwrap()
    }

    #[test]
    fn trivial_group_and_depth_zero() {
        let q = QuadraticForm::standard(2);
        let trivial = GroupPresentation::from_integer(q, &[], "trivial").unwrap();
        let o = orbit_bfs(&trivial, &[3, 4, 5], 100.0, 10).unwrap();
        assert_eq!(o.points, vec![vec![3, 4, 5]]);
        assert!(o.exhausted);
        let o = orbit_bfs(&reflections(), &[3, 4, 5], 100.0, 0).unwrap();
        assert_eq!(o.points, vec![vec![3, 4, 5]]);
        assert_eq!(o.max_word_length, 0);
    }

    #[test]
    fn small_orbit_by_hand() {
        let o = orbit_bfs(&reflections(), &[3, 4, 5], 8.0, 100).unwrap();
        let mut expected = vec![];
        for (a, b) in [(3, 4), (4, 3)] {
            for sa in [-1, 1] {
                for sb in [-1, 1] {
                    expected.push(vec![sa * a, sb * b, 5]);
                }
            }
        }
        // (3,4,5) reflects to (-1,0,1) in the mirror of (1,1,1).
        expected.extend([vec![1, 0, 1], vec![-1, 0, 1], vec![0, 1, 1], vec![0, -1, 1]]);
        expected.sort();
        assert_eq!(o.points, expected);
        assert!(o.exhausted);
        assert_eq!(o.complete_below, 8.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            orbit_bfs(&reflections(), &[0, 0, 0], 10.0, 3),
            Err(OrbitError::ZeroVector)
        ));
        assert!(matches!(
            orbit_bfs(&reflections(), &[1, 0], 10.0, 3),
            Err(OrbitError::Dimension { .. })
        ));
    }

    #[test]
    fn budget_reports_partial_set() {
        let opts = BfsOptions {
            max_points: 10,
            ..BfsOptions::default()
        };
        match orbit_bfs_with(&reflections(), &[3, 4, 5], 1e4, 1000, &opts) {
            Err(OrbitError::OrbitBudget { partial, limit }) => {
                assert_eq!(limit, 10);
                assert_eq!(partial.complete_below, 0.0);
                assert!(partial.contains(&[3, 4, 5]));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn depth_limited_run_reports_saturation_radius() {
        let o = orbit_bfs(&reflections(), &[3, 4, 5], 1e3, 6).unwrap();
        assert!(!o.exhausted);
        assert!(o.complete_below < 1e3);
        let deeper = orbit_bfs(&reflections(), &[3, 4, 5], 1e3, 8).unwrap();
        let r = o.complete_below;
        let below = |s: &OrbitSet| -> Vec<Vec<i64>> {
            s.points.iter().filter(|p| euclidean_norm(p) <= r).cloned().collect()
        };
        assert_eq!(below(&o), below(&deeper));
    }
}

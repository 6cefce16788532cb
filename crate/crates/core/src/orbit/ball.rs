use serde::Serialize;

use super::bfs::layered_bfs;
use super::{BfsOptions, GroupPresentation, OrbitError};
use crate::lorentz::{DisplacementFunctional, GroupElement};
use crate::matrix::IntMatrix;

/// Relative slack on `cosh t_bound` absorbing rounding in the displacement.
const BOUNDARY_REL: f64 = 1e-12;

/// Elements `γ ∈ Γ` with Cartan parameter `t(γ) = d(o, γ·o) ≤ t_bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupBall {
    /// Exact integer matrices, sorted.
    pub elements: Vec<IntMatrix>,
    /// `t(γ)` for each element, in the same order.
    pub displacements: Vec<f64>,
    pub t_bound: f64,
    pub max_word_length: usize,
    /// In `t` units; see [`super::OrbitSet::complete_below`].
    pub complete_below: f64,
    pub slack: f64,
    pub exhausted: bool,
}

impl GroupBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn to_group_elements(&self) -> Vec<GroupElement> {
        self.elements.iter().cloned().map(GroupElement::from).collect()
    }

    pub fn sorted_displacements(&self) -> Vec<f64> {
        let mut t = self.displacements.clone();
        t.sort_by(f64::total_cmp);
        t
    }

    /// Elements with `t ≤ radius`.
    pub fn count_within(&self, radius: f64) -> usize {
        self.displacements.iter().filter(|&&t| t <= radius).count()
    }

    /// `(T, N(T))` with `N(T) = #{γ : t(γ) ≤ log T}`.
    pub fn count_grid(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        let t = self.sorted_displacements();
        grid.iter()
            .map(|&big_t| (big_t, t.partition_point(|&x| x <= big_t.ln()) as f64))
            .collect()
    }
}

/// Enumerates `Γ ∩ B_T` in Cartan coordinates with the default options.
pub fn group_ball(gamma: &GroupPresentation, t_bound: f64, max_depth: usize) -> Result<GroupBall, OrbitError> {
    group_ball_with(gamma, t_bound, max_depth, &BfsOptions::default())
}

/// As [`group_ball`]; the frontier is pruned at `t_bound + ln(slack)`.
pub fn group_ball_with(
    gamma: &GroupPresentation,
    t_bound: f64,
    max_depth: usize,
    options: &BfsOptions,
) -> Result<GroupBall, OrbitError> {
    if !(t_bound >= 0.0) || !(options.slack >= 1.0) {
        return Err(OrbitError::InvalidBound(t_bound));
    }
    if let Some(i) = gamma.first_non_orthochronous() {
        return Err(OrbitError::NotOrthochronous(i));
    }
    let functional = DisplacementFunctional::new(gamma.form());
    let gens = gamma.integer_generators();
    let keep = t_bound.cosh() * (1.0 + BOUNDARY_REL);
    let prune = (t_bound + options.slack.ln()).cosh() * (1.0 + BOUNDARY_REL);
    let outcome = layered_bfs(
        IntMatrix::identity(gamma.dim()),
        max_depth,
        options.max_points,
        |h: &IntMatrix| {
            gens.iter()
                .map(|g| g.checked_mul(h).ok_or(OrbitError::Overflow))
                .collect()
        },
        |h| functional.cosh(h),
        prune,
        keep,
    )?;
    let complete_below = if outcome.budget_hit {
        0.0
    } else if outcome.exhausted {
        t_bound
    } else {
        let min = outcome.last_layers_min.unwrap_or(f64::INFINITY);
        (min.max(1.0).acosh() * (1.0 - BOUNDARY_REL)).min(t_bound)
    };
    let mut elements = outcome.inside;
    elements.sort_unstable();
    let displacements = elements
        .iter()
        .map(|h| functional.cosh(h).max(1.0).acosh())
        .collect();
    let ball = GroupBall {
        elements,
        displacements,
        t_bound,
        max_word_length: outcome.depth,
        complete_below,
        slack: options.slack,
        exhausted: outcome.exhausted,
    };
    if outcome.budget_hit {
        return Err(OrbitError::BallBudget {
            limit: options.max_points,
            partial: Box::new(ball),
        });
    }
    Ok(ball)
}

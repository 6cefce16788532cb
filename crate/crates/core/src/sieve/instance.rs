use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::density::LocalDensityTable;
use super::finite::reduce;
use super::{PolynomialF, SieveError};
use crate::orbit::{norm_sq, OrbitSet};

/// Orbit points of norm at most `t` together with the values of `F`.
#[derive(Clone, Debug)]
pub struct SieveInstance {
    pub t: f64,
    pub points: Vec<Vec<i64>>,
    /// Squared Euclidean norms, compared against `t²` as in
    /// [`OrbitSet::count_within`].
    pub norms_sq: Vec<f64>,
    /// Per point, the values `F_1(x), …, F_r(x)`.
    pub factor_values: Vec<Vec<i128>>,
    /// Per point, `F(x) = ∏ F_j(x)`.
    pub values: Vec<i128>,
}

impl SieveInstance {
    /// Requires the orbit to be saturated at `t`.
    pub fn from_orbit(orbit: &OrbitSet, f: &PolynomialF, t: f64) -> Result<Self, SieveError> {
        if t > orbit.complete_below {
            return Err(SieveError::NotSaturated {
                t,
                complete_below: orbit.complete_below,
            });
        }
        if orbit.base.len() != f.vars() {
            return Err(SieveError::Dimension {
                expected: f.vars(),
                got: orbit.base.len(),
            });
        }
        let kept: Vec<(Vec<i64>, f64)> = orbit
            .points
            .iter()
            .filter(|p| norm_sq(p) as f64 <= t * t)
            .map(|p| (p.clone(), norm_sq(p) as f64))
            .collect();
        let evaluated = kept
            .par_iter()
            .map(|(p, _)| {
                let fv = f.factor_values(p).ok_or(SieveError::Overflow)?;
                let v = fv.iter().try_fold(1i128, |acc, &x| acc.checked_mul(x)).ok_or(SieveError::Overflow)?;
                Ok((fv, v))
            })
            .collect::<Result<Vec<_>, SieveError>>()?;
        let (points, norms_sq) = kept.into_iter().unzip();
        let (factor_values, values) = evaluated.into_iter().unzip();
        Ok(Self {
            t,
            points,
            norms_sq,
            factor_values,
            values,
        })
    }

    /// `X = N(T)`, the observed orbit count.
    pub fn x(&self) -> usize {
        self.points.len()
    }

    /// `|A_d| = #{x : F(x) ≡ 0 mod d}`, reducing each point modulo `d`.
    pub fn count_divisible(&self, f: &PolynomialF, d: u64) -> u64 {
        self.points
            .par_iter()
            .filter(|p| {
                let r: Vec<u64> = p.iter().map(|&x| reduce(x, d)).collect();
                f.eval_mod(&r, d) == 0
            })
            .count() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemainderRow {
    pub d: u64,
    pub count: u64,
    pub g_num: u64,
    pub g_den: u64,
    /// `r_d = |A_d| − g(d)·X`, rounded for output; the exact value is
    /// `r_num / g_den`.
    pub r_d: f64,
    pub r_num: i128,
}

/// Remainders `r_d` for the moduli of a density table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemainderTable {
    pub t: f64,
    pub x: usize,
    pub rows: Vec<RemainderRow>,
}

impl RemainderTable {
    /// `Σ_{d < level} |r_d|`.
    pub fn level_sum(&self, level: f64) -> f64 {
        self.rows.iter().filter(|r| (r.d as f64) < level).map(|r| r.r_d.abs()).sum()
    }

    /// Level `D = X^{1/4}`.
    pub fn default_level(&self) -> f64 {
        (self.x as f64).powf(0.25)
    }

    pub fn row(&self, d: u64) -> Option<&RemainderRow> {
        self.rows.iter().find(|r| r.d == d)
    }
}

pub(crate) fn remainder_row(d: u64, count: u64, g: Ratio<u64>, x: usize) -> RemainderRow {
    let (num, den) = (*g.numer() as i128, *g.denom() as i128);
    let r_num = count as i128 * den - num * x as i128;
    RemainderRow {
        d,
        count,
        g_num: num as u64,
        g_den: den as u64,
        r_d: r_num as f64 / den as f64,
        r_num,
    }
}

/// `r_d = |A_d(T)| − g(d)·N(T)` for every modulus in `table`.
pub fn remainder_table(
    orbit: &OrbitSet,
    f: &PolynomialF,
    table: &LocalDensityTable,
    t: f64,
) -> Result<RemainderTable, SieveError> {
    let instance = SieveInstance::from_orbit(orbit, f, t)?;
    Ok(remainders_for(&instance, f, table))
}

pub fn remainders_for(instance: &SieveInstance, f: &PolynomialF, table: &LocalDensityTable) -> RemainderTable {
    let rows: BTreeMap<u64, RemainderRow> = table
        .entries
        .iter()
        .map(|(&d, e)| (d, remainder_row(d, instance.count_divisible(f, d), e.g, instance.x())))
        .collect();
    RemainderTable {
        t: instance.t,
        x: instance.x(),
        rows: rows.into_values().collect(),
    }
}

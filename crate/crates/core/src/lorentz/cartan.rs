use nalgebra::{DMatrix, DVector};

use super::hyperbolic::{boost, unit_spatial};
use crate::tolerance::DEGENERACY;

/// `g = k1 · a_t · k2` with `k1, k2` in the stabilizer `K` of the base point.
///
/// `k1` and `k2` are real (frame-coordinate) matrices. For orientation
/// reversing `g` the determinant sign is carried by `k2`.
#[derive(Clone, Debug)]
pub struct CartanCoordinates {
    pub k1: DMatrix<f64>,
    pub t: f64,
    pub k2: DMatrix<f64>,
}

impl CartanCoordinates {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.k1 * boost(self.k1.nrows(), self.t) * &self.k2
    }

    /// Unit direction of `g·o`, i.e. `k1·e_n` (the forward endpoint `k1·v+`).
    pub fn forward_direction(&self) -> DVector<f64> {
        let m = self.k1.nrows();
        self.k1.column(m - 2).rows(0, m - 1).into_owned()
    }

    /// Unit direction of `g⁻¹·o`, i.e. the spatial part of `k2⁻¹·v-`.
    pub fn backward_direction(&self) -> DVector<f64> {
        let m = self.k2.nrows();
        // k2⁻¹ = k2ᵀ on K, so k2⁻¹·(-e_n) is minus row n of k2.
        -self.k2.row(m - 2).columns(0, m - 1).transpose()
    }
}

/// Cartan (`KAK`) decomposition of a frame-coordinate isometry in `O⁺(n,1)`.
///
/// `t = d(o, g·o)`; `k1` is the plane rotation carrying `e_n` to the direction
/// of `g·o`. At `t = 0` the decomposition is `(g, 0, identity)`.
///
/// `k2` is assembled row by row from `g` rather than as `a_{-t}·k1⁻¹·g`, which
/// would lose `e^{2t}` in relative precision.
pub fn cartan_decompose(g: &DMatrix<f64>) -> CartanCoordinates {
    let m = g.nrows();
    let n = m - 1;
    let go: DVector<f64> = g.column(n).into_owned();
    let spatial = go.rows(0, n).norm();
    if spatial <= DEGENERACY {
        return CartanCoordinates {
            k1: g.clone(),
            t: 0.0,
            k2: DMatrix::identity(m, m),
        };
    }
    let t = spatial.asinh();
    let dir = unit_spatial(&go).expect("nonzero spatial part");
    let k1 = rotation_onto(m, &dir);

    // h = k1ᵀ·g = a_t·k2: rows other than n-1 and n are rows of k2, and the
    // last row of h (equal to the last row of g) is sinh t · row_{n-1}(k2) + cosh t · e_nᵀ.
    let h = k1.transpose() * g;
    let mut k2 = DMatrix::zeros(m, m);
    for r in 0..n - 1 {
        k2.set_row(r, &h.row(r));
        k2[(r, n)] = 0.0;
    }
    for c in 0..n {
        k2[(n - 1, c)] = g[(n, c)] / spatial;
    }
    k2[(n, n)] = 1.0;
    CartanCoordinates { k1, t, k2 }
}

/// Rotation in `SO(n) ⊂ K` mapping `e_n` to the unit spatial vector `u`,
/// acting in the plane spanned by the two.
fn rotation_onto(m: usize, u: &DVector<f64>) -> DMatrix<f64> {
    let n = m - 1;
    let mut r = DMatrix::identity(m, m);
    let cos = u[n - 1];
    let mut w = u.clone();
    w[n - 1] = 0.0;
    let sin = w.norm();
    if sin <= DEGENERACY {
        if cos < 0.0 {
            // Half-turn in the plane of e_{n-1}, e_n.
            r[(n - 1, n - 1)] = -1.0;
            if n >= 2 {
                r[(n - 2, n - 2)] = -1.0;
            }
        }
        return r;
    }
    w /= sin;
    for i in 0..n {
        for j in 0..n {
            let e_i = if i == n - 1 { 1.0 } else { 0.0 };
            let e_j = if j == n - 1 { 1.0 } else { 0.0 };
            r[(i, j)] += (cos - 1.0) * (e_i * e_j + w[i] * w[j]) + sin * (w[i] * e_j - e_i * w[j]);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::hyperbolic::{lorentz_inverse, rotation};

    fn fixes_base(k: &DMatrix<f64>) -> bool {
        let m = k.nrows();
        let mut o = DVector::zeros(m);
        o[m - 1] = 1.0;
        (k * &o - o).amax() < 1e-9
    }

    #[test]
    fn identity_decomposes_trivially() {
        let c = cartan_decompose(&DMatrix::identity(3, 3));
        assert_eq!(c.t, 0.0);
        assert_eq!(c.k1, DMatrix::identity(3, 3));
        assert_eq!(c.k2, DMatrix::identity(3, 3));
    }

    #[test]
    fn stabilizer_element_ties_break_to_g() {
        let r = rotation(4, 0, 1, 0.5);
        let c = cartan_decompose(&r);
        assert_eq!(c.t, 0.0);
        assert_eq!(c.k1, r);
        assert_eq!(c.k2, DMatrix::identity(4, 4));
    }

    #[test]
    fn pure_boost() {
        let c = cartan_decompose(&boost(3, 1.5));
        assert!((c.t - 1.5).abs() < 1e-12);
        assert!((c.k1.clone() - DMatrix::identity(3, 3)).amax() < 1e-12);
        assert!((c.k2.clone() - DMatrix::identity(3, 3)).amax() < 1e-12);
    }

    #[test]
    fn reconstruction_in_dimension_four() {
        let g = rotation(4, 0, 2, 2.9) * rotation(4, 1, 2, 0.4) * boost(4, 3.3) * rotation(4, 0, 1, -1.2);
        let c = cartan_decompose(&g);
        assert!((c.reconstruct() - &g).amax() < 1e-9);
        assert!((c.t - 3.3).abs() < 1e-9);
        assert!(fixes_base(&c.k1) && fixes_base(&c.k2));
        let inv = cartan_decompose(&lorentz_inverse(&g));
        assert!((inv.t - c.t).abs() < 1e-9);
    }

    #[test]
    fn antipodal_direction() {
        let g = rotation(3, 0, 1, std::f64::consts::PI) * boost(3, 0.7);
        let c = cartan_decompose(&g);
        assert!((c.reconstruct() - &g).amax() < 1e-12);
        assert!((c.k1.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn directions_match_orbit_points() {
        let g = rotation(3, 0, 1, 0.3) * boost(3, 2.0) * rotation(3, 0, 1, 1.1);
        let c = cartan_decompose(&g);
        let o = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let fwd = unit_spatial(&(&g * &o)).unwrap();
        let bwd = unit_spatial(&(lorentz_inverse(&g) * &o)).unwrap();
        assert!((c.forward_direction() - fwd).amax() < 1e-12);
        assert!((c.backward_direction() - bwd).amax() < 1e-12);
    }
}

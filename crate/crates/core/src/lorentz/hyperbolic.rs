//! Floating-point geometry of the hyperboloid model, in frame coordinates
//! (form `x_1² + … + x_n² - x_{n+1}²`, base point `o = e_{n+1}`).

use nalgebra::{DMatrix, DVector};

use super::GeometryError;
use crate::tolerance::{DEGENERACY, GEOMETRIC};

/// Standard Minkowski pairing `Σ x_i y_i - x_m y_m`.
pub fn minkowski(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let m = x.len();
    x.rows(0, m - 1).dot(&y.rows(0, m - 1)) - x[m - 1] * y[m - 1]
}

/// Point of the future sheet `B(x,x) = -1`, `x_{n+1} > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperboloidPoint(DVector<f64>);

impl HyperboloidPoint {
    /// Normalizes a future timelike vector onto the hyperboloid.
    pub fn new(coords: DVector<f64>) -> Result<Self, GeometryError> {
        let m = coords.len();
        let q = minkowski(&coords, &coords);
        if m < 2 || q >= -DEGENERACY || coords[m - 1] <= 0.0 {
            return Err(GeometryError::NotOnHyperboloid);
        }
        Ok(Self(coords / (-q).sqrt()))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self, GeometryError> {
        Self::new(DVector::from_column_slice(coords))
    }

    /// Base point `o = e_{n+1}` in dimension `m = n + 1`.
    pub fn base(m: usize) -> Self {
        let mut v = DVector::zeros(m);
        v[m - 1] = 1.0;
        Self(v)
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    /// Image under a frame-coordinate isometry.
    pub fn transform(&self, g: &DMatrix<f64>) -> Self {
        Self(g * &self.0)
    }

    /// Unit spatial direction of the point seen from `o`, or `None` at `o`.
    pub fn direction(&self) -> Option<DVector<f64>> {
        unit_spatial(&self.0)
    }
}

/// Point at infinity, represented by a lightlike vector scaled so that its
/// last coordinate is 1. Its spatial part is a unit vector of `S^{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint(DVector<f64>);

impl BoundaryPoint {
    pub fn new(coords: DVector<f64>) -> Result<Self, GeometryError> {
        let m = coords.len();
        if m < 2 || coords[m - 1].abs() <= DEGENERACY {
            return Err(GeometryError::NotIsotropic);
        }
        let v = &coords / coords[m - 1];
        if minkowski(&v, &v).abs() > GEOMETRIC {
            return Err(GeometryError::NotIsotropic);
        }
        Ok(Self(v))
    }

    /// Boundary point in the direction of a nonzero spatial vector.
    pub fn from_direction(dir: &[f64]) -> Result<Self, GeometryError> {
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= DEGENERACY {
            return Err(GeometryError::NotIsotropic);
        }
        let mut v: Vec<f64> = dir.iter().map(|x| x / norm).collect();
        v.push(1.0);
        Ok(Self(DVector::from_vec(v)))
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn direction(&self) -> DVector<f64> {
        let m = self.0.len();
        self.0.rows(0, m - 1).into_owned()
    }
}

/// `arccosh(-B(x,y))`.
pub fn hyperbolic_distance(x: &HyperboloidPoint, y: &HyperboloidPoint) -> Result<f64, GeometryError> {
    let c = -minkowski(&x.0, &y.0);
    if c < 1.0 - GEOMETRIC {
        return Err(GeometryError::Domain(format!("-B(x,y) = {c} < 1")));
    }
    Ok(c.max(1.0).acosh())
}

/// Busemann cocycle `β_ξ(y, x) = log(B(y,ξ) / B(x,ξ))`.
///
/// Normalized so that `β_{v+}(a_t·o, o) = -t`: points closer to `ξ` have
/// smaller values.
pub fn busemann(xi: &BoundaryPoint, y: &HyperboloidPoint, x: &HyperboloidPoint) -> Result<f64, GeometryError> {
    let by = minkowski(&y.0, &xi.0);
    let bx = minkowski(&x.0, &xi.0);
    if by.abs() <= DEGENERACY || bx.abs() <= DEGENERACY {
        return Err(GeometryError::Domain("point lies at the boundary point".into()));
    }
    Ok((by / bx).ln())
}

/// Sign selecting the forward (`+`) or backward (`-`) endpoint of the
/// reference geodesic `t ↦ a_t·o`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Lightlike eigen-directions `v± = ±e_n + e_{n+1}` of the reference boost.
pub fn reference_endpoint(m: usize, sign: Sign) -> BoundaryPoint {
    let mut v = DVector::zeros(m);
    v[m - 2] = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    v[m - 1] = 1.0;
    BoundaryPoint(v)
}

/// `g·v±`, normalized; the endpoint `lim_{t→±∞} g·a_t·o`.
pub fn visual_point(g: &DMatrix<f64>, sign: Sign) -> BoundaryPoint {
    let v = reference_endpoint(g.nrows(), sign);
    BoundaryPoint::new(g * v.0).expect("isometries map the light cone to itself")
}

/// Reference boost `a_t` in the plane of the last two frame vectors, with
/// `d(o, a_t·o) = |t|`.
pub fn boost(m: usize, t: f64) -> DMatrix<f64> {
    let mut a = DMatrix::identity(m, m);
    let (c, s) = (t.cosh(), t.sinh());
    a[(m - 2, m - 2)] = c;
    a[(m - 2, m - 1)] = s;
    a[(m - 1, m - 2)] = s;
    a[(m - 1, m - 1)] = c;
    a
}

/// Rotation by `theta` in the plane of frame axes `i` and `j` (both spatial).
pub fn rotation(m: usize, i: usize, j: usize, theta: f64) -> DMatrix<f64> {
    let mut r = DMatrix::identity(m, m);
    let (c, s) = (theta.cos(), theta.sin());
    r[(i, i)] = c;
    r[(i, j)] = -s;
    r[(j, i)] = s;
    r[(j, j)] = c;
    r
}

/// Inverse of a frame isometry, `J·gᵀ·J`.
pub fn lorentz_inverse(g: &DMatrix<f64>) -> DMatrix<f64> {
    let m = g.nrows();
    let mut inv = g.transpose();
    for k in 0..m - 1 {
        inv[(k, m - 1)] = -inv[(k, m - 1)];
        inv[(m - 1, k)] = -inv[(m - 1, k)];
    }
    inv
}

pub(crate) fn unit_spatial(v: &DVector<f64>) -> Option<DVector<f64>> {
    let m = v.len();
    let s = v.rows(0, m - 1);
    let norm = s.norm();
    (norm > DEGENERACY).then(|| s / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(c: &[f64]) -> HyperboloidPoint {
        HyperboloidPoint::from_slice(c).unwrap()
    }

    #[test]
    fn distance_examples() {
        let o = HyperboloidPoint::base(3);
        assert_eq!(hyperbolic_distance(&o, &o).unwrap(), 0.0);
        let y = point(&[0.0, 4.0 / 3.0, 5.0 / 3.0]);
        let d = hyperbolic_distance(&o, &y).unwrap();
        assert!((d - (5.0f64 / 3.0).acosh()).abs() < 1e-12);
        assert!((hyperbolic_distance(&y, &o).unwrap() - d).abs() < 1e-15);
    }

    #[test]
    fn distance_rejects_non_timelike_pairing() {
        let o = HyperboloidPoint::base(3);
        let fake = HyperboloidPoint(DVector::from_vec(vec![0.0, 0.0, 0.5]));
        assert!(matches!(hyperbolic_distance(&o, &fake), Err(GeometryError::Domain(_))));
    }

    #[test]
    fn boost_has_unit_speed() {
        let o = HyperboloidPoint::base(4);
        for t in [0.0, 0.3, 1.5, 7.0] {
            let p = o.transform(&boost(4, t));
            assert!((hyperbolic_distance(&o, &p).unwrap() - t).abs() < 1e-9);
        }
    }

    #[test]
    fn busemann_normalization() {
        let o = HyperboloidPoint::base(3);
        let xi = reference_endpoint(3, Sign::Plus);
        assert_eq!(busemann(&xi, &o, &o).unwrap(), 0.0);
        let y = o.transform(&boost(3, 2.0));
        assert!((busemann(&xi, &y, &o).unwrap() + 2.0).abs() < 1e-12);
        let xi_minus = reference_endpoint(3, Sign::Minus);
        assert!((busemann(&xi_minus, &y, &o).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn visual_points_of_identity_and_rotation() {
        let id = DMatrix::identity(3, 3);
        assert_eq!(visual_point(&id, Sign::Plus).coords().as_slice(), &[0.0, 1.0, 1.0]);
        assert_eq!(visual_point(&id, Sign::Minus).coords().as_slice(), &[0.0, -1.0, 1.0]);
        let theta = 0.7f64;
        let v = visual_point(&rotation(3, 0, 1, theta), Sign::Plus);
        assert!((v.coords()[0] + theta.sin()).abs() < 1e-12);
        assert!((v.coords()[1] - theta.cos()).abs() < 1e-12);
        assert_eq!(v.coords()[2], 1.0);
    }

    #[test]
    fn visual_point_is_limit_of_geodesic() {
        let g = rotation(3, 0, 1, 0.4) * boost(3, 0.9);
        let v = visual_point(&g, Sign::Plus);
        let far = &g * boost(3, 30.0) * HyperboloidPoint::base(3).coords();
        let dir = unit_spatial(&far).unwrap();
        assert!((dir - v.direction()).amax() < 1e-9);
    }

    #[test]
    fn lorentz_inverse_inverts() {
        let g = rotation(4, 0, 2, 0.3) * boost(4, 1.1) * rotation(4, 1, 2, -0.8);
        let prod = &g * lorentz_inverse(&g);
        assert!((prod - DMatrix::identity(4, 4)).amax() < 1e-12);
    }

    #[test]
    fn boundary_point_validation() {
        assert!(BoundaryPoint::new(DVector::from_vec(vec![3.0, 4.0, 5.0])).is_ok());
        assert!(BoundaryPoint::new(DVector::from_vec(vec![1.0, 1.0, 1.0])).is_err());
        assert!(BoundaryPoint::from_direction(&[0.0, 0.0]).is_err());
    }
}

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use sha2::{Digest, Sha256};

use super::GeometryError;
use crate::matrix::IntMatrix;
use crate::tolerance::DEGENERACY;

/// Integral quadratic form of signature `(n,1)` on `Z^{n+1}`.
///
/// Besides the Gram matrix the form carries a *frame*: a real basis
/// `c_1, …, c_{n+1}` with `B(c_i, c_j) = diag(1, …, 1, -1)`. Floating-point
/// geometry is carried out in frame coordinates, where the form is the
/// standard Minkowski form, the base point `o` is the last basis vector and
/// the reference boost `a_t` acts in the plane of the last two basis vectors.
/// For the standard diagonal form the frame is the identity.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    gram: IntMatrix,
    base: Option<Vec<i64>>,
    /// Columns are the frame vectors in ambient coordinates.
    frame: DMatrix<f64>,
    frame_inv: DMatrix<f64>,
}

impl PartialEq for QuadraticForm {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram && self.base == other.base
    }
}

impl Eq for QuadraticForm {}

/// Counts positive and negative eigenvalues of a symmetric integer matrix
/// and accepts only signature `(n,1)` with `n = dim - 1 >= 1`.
///
/// Diagonal matrices are decided exactly from the signs of the diagonal;
/// otherwise eigenvalues are computed numerically and any eigenvalue within
/// `1e-9` of zero is rejected.
pub fn check_signature(gram: &IntMatrix) -> Result<(usize, usize), GeometryError> {
    let m = gram.dim();
    if *gram != gram.transpose() {
        return Err(GeometryError::NotSymmetric);
    }
    let is_diagonal = (0..m).all(|i| (0..m).all(|j| i == j || *gram.get(i, j) == 0));
    let (pos, neg) = if is_diagonal {
        let diag: Vec<i64> = (0..m).map(|i| *gram.get(i, i)).collect();
        if diag.contains(&0) {
            return Err(GeometryError::Signature {
                pos: diag.iter().filter(|&&x| x > 0).count(),
                neg: diag.iter().filter(|&&x| x < 0).count(),
                degenerate: true,
            });
        }
        (
            diag.iter().filter(|&&x| x > 0).count(),
            diag.iter().filter(|&&x| x < 0).count(),
        )
    } else {
        let eig = SymmetricEigen::new(gram.to_f64());
        let mut pos = 0;
        let mut neg = 0;
        let mut degenerate = false;
        for &lambda in eig.eigenvalues.iter() {
            if lambda.abs() <= crate::tolerance::GEOMETRIC {
                degenerate = true;
            } else if lambda > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        if degenerate {
            return Err(GeometryError::Signature { pos, neg, degenerate });
        }
        (pos, neg)
    };
    if neg != 1 || pos + 1 != m || pos < 1 {
        return Err(GeometryError::Signature {
            pos,
            neg,
            degenerate: false,
        });
    }
    Ok((pos, neg))
}

impl QuadraticForm {
    pub fn new(gram: IntMatrix) -> Result<Self, GeometryError> {
        check_signature(&gram)?;
        let frame = compute_frame(&gram);
        Self::assemble(gram, None, frame)
    }

    /// Form whose base point `o` is the given integer timelike vector,
    /// rescaled to `B(o,o) = -1`. The remaining frame vectors come from
    /// Gram–Schmidt on the standard basis.
    pub fn with_base_point(gram: IntMatrix, base: Vec<i64>) -> Result<Self, GeometryError> {
        check_signature(&gram)?;
        if base.len() != gram.dim() {
            return Err(GeometryError::Shape);
        }
        let q = quadratic_value(&gram, &base);
        if q >= 0 {
            return Err(GeometryError::NotOnHyperboloid);
        }
        let frame = gram_schmidt_frame(&gram, &base);
        Self::assemble(gram, Some(base), frame)
    }

    fn assemble(
        gram: IntMatrix,
        base: Option<Vec<i64>>,
        frame: DMatrix<f64>,
    ) -> Result<Self, GeometryError> {
        let frame_inv = frame
            .clone()
            .try_inverse()
            .ok_or(GeometryError::Signature {
                pos: 0,
                neg: 0,
                degenerate: true,
            })?;
        Ok(Self {
            gram,
            base,
            frame,
            frame_inv,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, GeometryError> {
        let gram = IntMatrix::from_rows(rows).ok_or(GeometryError::Shape)?;
        Self::new(gram)
    }

    /// `x_1² + … + x_n² - x_{n+1}²`.
    pub fn standard(n: usize) -> Self {
        let mut diag = vec![1; n + 1];
        diag[n] = -1;
        Self::new(IntMatrix::diagonal(&diag)).expect("standard form has signature (n,1)")
    }

    /// Ambient dimension `m = n + 1`.
    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    /// Dimension `n` of the hyperbolic space.
    pub fn n(&self) -> usize {
        self.gram.dim() - 1
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// Integer base point, when one was supplied explicitly.
    pub fn base_point(&self) -> Option<&[i64]> {
        self.base.as_deref()
    }

    /// Exact value `Q(x) = xᵀ G x`.
    pub fn eval(&self, x: &[i64]) -> i128 {
        quadratic_value(&self.gram, x)
    }

    /// Exact value of `Q` reduced modulo `d`.
    pub fn eval_mod(&self, x: &[u64], d: u64) -> u64 {
        let m = self.dim();
        let d128 = d as i128;
        let mut acc = 0i128;
        for i in 0..m {
            for j in 0..m {
                let term = (*self.gram.get(i, j) as i128).rem_euclid(d128) * x[i] as i128 % d128
                    * x[j] as i128;
                acc = (acc + term) % d128;
            }
        }
        acc as u64
    }

    /// Frame coordinates of an ambient vector.
    pub fn to_frame(&self, x: &[f64]) -> DVector<f64> {
        &self.frame_inv * DVector::from_column_slice(x)
    }

    pub fn int_to_frame(&self, x: &[i64]) -> DVector<f64> {
        let v: Vec<f64> = x.iter().map(|&c| c as f64).collect();
        self.to_frame(&v)
    }

    /// Ambient coordinates of a frame vector.
    pub fn from_frame(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.frame * x
    }

    /// Conjugates an ambient isometry into frame coordinates.
    pub fn matrix_to_frame(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        &self.frame_inv * g * &self.frame
    }

    /// The base point `o` in ambient coordinates.
    pub fn base_point_ambient(&self) -> DVector<f64> {
        self.frame.column(self.dim() - 1).into_owned()
    }

    /// `-B(o, g·o)` for an ambient integer isometry, i.e. `cosh d(o, g·o)`.
    pub fn cosh_displacement(&self, g: &IntMatrix) -> f64 {
        DisplacementFunctional::new(self).cosh(g)
    }

    /// Short stable identifier of the Gram matrix.
    pub fn hash_hex(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"form:");
        for row in self.gram.rows() {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            hasher.update(line.join(",").as_bytes());
            hasher.update(b";");
        }
        if let Some(base) = &self.base {
            let line: Vec<String> = base.iter().map(|x| x.to_string()).collect();
            hasher.update(b"base:");
            hasher.update(line.join(",").as_bytes());
        }
        hex::encode(&hasher.finalize()[..8])
    }
}

/// Precomputed weights for `g ↦ -B(o, g·o) = Σ u_i g_ij o_j`, used in the
/// orbit engine's inner loop.
#[derive(Clone, Debug)]
pub struct DisplacementFunctional {
    u: Vec<f64>,
    o: Vec<f64>,
}

impl DisplacementFunctional {
    pub fn new(form: &QuadraticForm) -> Self {
        let o = form.base_point_ambient();
        let u = -(form.gram.to_f64() * &o);
        Self {
            u: u.iter().copied().collect(),
            o: o.iter().copied().collect(),
        }
    }

    pub fn cosh(&self, g: &IntMatrix) -> f64 {
        let m = self.o.len();
        let mut acc = 0.0;
        for (i, row) in g.rows().enumerate() {
            if self.u[i] == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for j in 0..m {
                inner += row[j] as f64 * self.o[j];
            }
            acc += self.u[i] * inner;
        }
        acc
    }
}

fn quadratic_value(gram: &IntMatrix, x: &[i64]) -> i128 {
    let m = gram.dim();
    let mut acc = 0i128;
    for i in 0..m {
        for j in 0..m {
            acc += *gram.get(i, j) as i128 * x[i] as i128 * x[j] as i128;
        }
    }
    acc
}

/// `B`-orthonormal frame with the normalized `base` as last vector; spatial
/// vectors are obtained from `e_1, e_2, …` by `B`-Gram–Schmidt.
fn gram_schmidt_frame(gram: &IntMatrix, base: &[i64]) -> DMatrix<f64> {
    let m = gram.dim();
    let g = gram.to_f64();
    let b = |x: &DVector<f64>, y: &DVector<f64>| (x.transpose() * &g * y)[(0, 0)];
    let o = DVector::from_iterator(m, base.iter().map(|&x| x as f64));
    let o = &o / (-b(&o, &o)).sqrt();
    let mut spatial: Vec<DVector<f64>> = Vec::new();
    for axis in 0..m {
        if spatial.len() == m - 1 {
            break;
        }
        let mut v = DVector::zeros(m);
        v[axis] = 1.0;
        v += &o * b(&v, &o);
        for w in &spatial {
            v -= w * b(&v, w);
        }
        let q = b(&v, &v);
        if q > crate::tolerance::GEOMETRIC {
            spatial.push(v / q.sqrt());
        }
    }
    let mut frame = DMatrix::zeros(m, m);
    for (col, v) in spatial.iter().chain([&o]).enumerate() {
        frame.set_column(col, v);
    }
    frame
}

/// Real basis in which the form becomes `diag(1, …, 1, -1)`.
///
/// Diagonal forms are rescaled coordinate-wise, keeping the original order of
/// the positive axes and moving the negative axis last. Other forms use the
/// Euclidean eigenvectors of the Gram matrix (which are `B`-orthogonal),
/// ordered by increasing eigenvalue among the positive ones, with each vector
/// signed so that its first largest-magnitude entry is positive.
fn compute_frame(gram: &IntMatrix) -> DMatrix<f64> {
    let m = gram.dim();
    let is_diagonal = (0..m).all(|i| (0..m).all(|j| i == j || *gram.get(i, j) == 0));
    let mut frame = DMatrix::zeros(m, m);
    if is_diagonal {
        let neg = (0..m).find(|&i| *gram.get(i, i) < 0).expect("one negative entry");
        let order: Vec<usize> = (0..m).filter(|&i| i != neg).chain([neg]).collect();
        for (col, &axis) in order.iter().enumerate() {
            frame[(axis, col)] = 1.0 / (gram.get(axis, axis).abs() as f64).sqrt();
        }
        return frame;
    }
    let eig = SymmetricEigen::new(gram.to_f64());
    let mut pairs: Vec<(f64, DVector<f64>)> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .map(|(&l, v)| (l, v.into_owned()))
        .collect();
    pairs.sort_by(|a, b| {
        let ka = (a.0 < 0.0, a.0);
        let kb = (b.0 < 0.0, b.0);
        ka.partial_cmp(&kb).expect("finite eigenvalues")
    });
    for (col, (lambda, v)) in pairs.into_iter().enumerate() {
        let max = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let lead = v
            .iter()
            .find(|x| x.abs() >= max - DEGENERACY)
            .copied()
            .unwrap_or(1.0);
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        let scaled = v * (sign / lambda.abs().sqrt());
        frame.set_column(col, &scaled);
    }
    frame
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_of_diagonal_forms() {
        assert_eq!(
            check_signature(&IntMatrix::diagonal(&[1, 1, -1])).unwrap(),
            (2, 1)
        );
        assert_eq!(
            check_signature(&IntMatrix::diagonal(&[1, 1, 1, -1])).unwrap(),
            (3, 1)
        );
        assert!(matches!(
            check_signature(&IntMatrix::diagonal(&[1, -1, -1])),
            Err(GeometryError::Signature { pos: 1, neg: 2, .. })
        ));
        assert!(matches!(
            check_signature(&IntMatrix::diagonal(&[1, 0, -1])),
            Err(GeometryError::Signature { degenerate: true, .. })
        ));
    }

    #[test]
    fn signature_of_discriminant_form() {
        let gram = IntMatrix::from_rows(&[vec![0, 0, -2], vec![0, 1, 0], vec![-2, 0, 0]]).unwrap();
        assert_eq!(check_signature(&gram).unwrap(), (2, 1));
        let asym = IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 1, 0], vec![0, 0, -1]]).unwrap();
        assert_eq!(check_signature(&asym), Err(GeometryError::NotSymmetric));
    }

    #[test]
    fn frame_diagonalizes_the_form() {
        for rows in [
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]],
            vec![vec![0, 0, -2], vec![0, 1, 0], vec![-2, 0, 0]],
            vec![vec![2, 0, 0], vec![0, -3, 0], vec![0, 0, 5]],
        ] {
            let q = QuadraticForm::from_rows(&rows).unwrap();
            let c = &q.frame;
            let g = q.gram.to_f64();
            let j = c.transpose() * g * c;
            let mut expected = DMatrix::identity(3, 3);
            expected[(2, 2)] = -1.0;
            assert!((j - expected).amax() < 1e-12, "rows {rows:?}");
        }
    }

    #[test]
    fn eigenvector_frame_picks_sum_of_squares() {
        let q = QuadraticForm::from_rows(&[vec![0, 0, -2], vec![0, 1, 0], vec![-2, 0, 0]]).unwrap();
        let o = q.base_point_ambient();
        assert!((o[0] - 0.5).abs() < 1e-12 && o[1].abs() < 1e-12 && (o[2] - 0.5).abs() < 1e-12);
        assert!((q.cosh_displacement(&IntMatrix::identity(3)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_base_point_frame_is_exact() {
        let gram = IntMatrix::from_rows(&[vec![0, 0, -2], vec![0, 1, 0], vec![-2, 0, 0]]).unwrap();
        let q = QuadraticForm::with_base_point(gram.clone(), vec![1, 0, 1]).unwrap();
        assert_eq!(q.base_point_ambient().as_slice(), &[0.5, 0.0, 0.5]);
        assert_eq!(q.cosh_displacement(&IntMatrix::identity(3)), 1.0);
        let c = &q.frame;
        let j = c.transpose() * gram.to_f64() * c;
        assert_eq!(j, DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0])));
        assert!(QuadraticForm::with_base_point(gram, vec![0, 1, 0]).is_err());
    }

    #[test]
    fn exact_evaluation() {
        let q = QuadraticForm::standard(2);
        assert_eq!(q.eval(&[3, 4, 5]), 0);
        assert_eq!(q.eval(&[1, 1, 0]), 2);
        assert_eq!(q.eval_mod(&[3, 4, 0], 5), 0);
        assert_eq!(q.eval_mod(&[1, 1, 1], 7), 1);
    }
}

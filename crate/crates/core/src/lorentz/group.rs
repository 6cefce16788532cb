use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::{GeometryError, QuadraticForm};
use crate::matrix::{IntMatrix, SquareMatrix};

pub type RatMatrix = SquareMatrix<BigRational>;

/// Exact isometry of a quadratic form.
///
/// The matrix acts on column vectors, `x ↦ g·x`, and satisfies
/// `gᵀ·G·g = G` exactly. `word` optionally records the generator indices
/// whose product produced the element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    matrix: RatMatrix,
    word: Option<Vec<usize>>,
}

/// `true` iff `gᵀ·G·g = G` in exact rational arithmetic.
pub fn is_isometry(g: &RatMatrix, form: &QuadraticForm) -> bool {
    if g.dim() != form.dim() {
        return false;
    }
    let gram = form.gram().to_rational();
    g.transpose().mul(&gram).mul(g) == gram
}

impl GroupElement {
    /// Wraps a matrix after checking that it preserves `form` exactly.
    pub fn new(matrix: RatMatrix, form: &QuadraticForm) -> Result<Self, GeometryError> {
        if !is_isometry(&matrix, form) {
            return Err(GeometryError::NotIsometry);
        }
        Ok(Self { matrix, word: None })
    }

    pub fn from_int_rows(rows: &[Vec<i64>], form: &QuadraticForm) -> Result<Self, GeometryError> {
        let m = IntMatrix::from_rows(rows).ok_or(GeometryError::Shape)?;
        Self::new(m.to_rational(), form)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: RatMatrix::identity(dim),
            word: Some(Vec::new()),
        }
    }

    pub fn with_word(mut self, word: Vec<usize>) -> Self {
        self.word = Some(word);
        self
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn word(&self) -> Option<&[usize]> {
        self.word.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Product `self · rhs`; words concatenate when both are known.
    pub fn compose(&self, rhs: &Self) -> Self {
        let word = match (&self.word, &rhs.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Self {
            matrix: self.matrix.mul(&rhs.matrix),
            word,
        }
    }

    /// Exact inverse `G⁻¹·gᵀ·G`.
    pub fn inverse(&self, form: &QuadraticForm) -> Self {
        let gram = form.gram().to_rational();
        let gram_inv = gram.inverse().expect("nondegenerate form");
        Self {
            matrix: gram_inv.mul(&self.matrix.transpose()).mul(&gram),
            word: None,
        }
    }

    pub fn determinant(&self) -> BigRational {
        self.matrix.determinant()
    }

    /// `+1` or `-1`.
    pub fn det_sign(&self) -> i8 {
        if self.determinant().is_negative() {
            -1
        } else {
            1
        }
    }

    /// Whether the element maps the future sheet of the hyperboloid to
    /// itself, i.e. lies in `O⁺(Q)`.
    pub fn is_orthochronous(&self, form: &QuadraticForm) -> bool {
        form.matrix_to_frame(&self.to_f64())[(self.dim() - 1, self.dim() - 1)] > 0.0
    }

    /// In the identity component `SO(Q)°`.
    pub fn in_identity_component(&self, form: &QuadraticForm) -> bool {
        self.det_sign() == 1 && self.is_orthochronous(form)
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.matrix.to_integer()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        self.matrix.to_f64()
    }

    /// Frame-coordinate floating matrix, the input of the Cartan
    /// decomposition and of the boundary maps.
    pub fn to_frame(&self, form: &QuadraticForm) -> DMatrix<f64> {
        form.matrix_to_frame(&self.to_f64())
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

impl From<IntMatrix> for GroupElement {
    /// Unchecked conversion; use [`GroupElement::new`] to validate.
    fn from(m: IntMatrix) -> Self {
        Self {
            matrix: m.to_rational(),
            word: None,
        }
    }
}

pub(crate) fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pythagorean_generator() -> Vec<Vec<i64>> {
        vec![vec![-1, 2, 2], vec![-2, 1, 2], vec![-2, 2, 3]]
    }

    #[test]
    fn isometry_examples() {
        let q = QuadraticForm::standard(2);
        assert!(is_isometry(&RatMatrix::identity(3), &q));
        let scale = IntMatrix::diagonal(&[2, 1, 1]).to_rational();
        assert!(!is_isometry(&scale, &q));
        let g = IntMatrix::from_rows(&pythagorean_generator()).unwrap();
        assert!(is_isometry(&g.to_rational(), &q));
    }

    #[test]
    fn inverse_is_exact() {
        let q = QuadraticForm::standard(2);
        let g = GroupElement::from_int_rows(&pythagorean_generator(), &q).unwrap();
        let inv = g.inverse(&q);
        assert!(g.compose(&inv).is_identity());
        assert_eq!(
            inv.to_integer().unwrap().to_rows(),
            vec![vec![-1, -2, 2], vec![2, 1, -2], vec![-2, -2, 3]]
        );
    }

    #[test]
    fn determinant_and_orientation_flags() {
        let q = QuadraticForm::standard(2);
        let g = GroupElement::from_int_rows(&pythagorean_generator(), &q).unwrap();
        assert_eq!(g.determinant(), rational(1));
        assert_eq!(g.det_sign(), 1);
        assert!(g.in_identity_component(&q));
        let swap = GroupElement::from_int_rows(
            &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
            &q,
        )
        .unwrap();
        assert_eq!(swap.det_sign(), -1);
        assert!(swap.is_orthochronous(&q));
        let minus = GroupElement::from(IntMatrix::diagonal(&[-1, -1, -1]));
        assert!(!minus.is_orthochronous(&q));
    }

    #[test]
    fn rejects_non_isometry() {
        let q = QuadraticForm::standard(2);
        assert_eq!(
            GroupElement::from_int_rows(&[vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &q),
            Err(GeometryError::NotIsometry)
        );
    }

    #[test]
    fn words_concatenate() {
        let q = QuadraticForm::standard(2);
        let g = GroupElement::from_int_rows(&pythagorean_generator(), &q)
            .unwrap()
            .with_word(vec![0]);
        let h = g.compose(&g);
        assert_eq!(h.word(), Some(&[0, 0][..]));
        assert_eq!(*h.matrix().get(2, 2), rational(9));
    }
}

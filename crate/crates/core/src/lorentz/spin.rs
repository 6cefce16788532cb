//! The spin cover `SL(2) → SO(2,1)°` realized on binary quadratic forms.
//!
//! A form `a·x² + b·xy + c·y²` is the vector `(a, b, c)`; `h` acts by
//! `f ↦ f ∘ hᵀ`, which preserves the discriminant `b² - 4ac`. The base point
//! of the discriminant form is `x² + y²`, so `cosh d(o, φ(h)·o) = ‖h‖²_F / 2`.

use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{GeometryError, GroupElement, QuadraticForm};
use crate::matrix::{IntMatrix, SquareMatrix};

/// Discriminant `b² - 4ac` in the basis `(a, b, c)`, with base point
/// `x² + y²`.
pub fn discriminant_form() -> QuadraticForm {
    let gram = IntMatrix::from_rows(&[vec![0, 0, -2], vec![0, 1, 0], vec![-2, 0, 0]]).expect("3x3");
    QuadraticForm::with_base_point(gram, vec![1, 0, 1])
        .expect("discriminant form has signature (2,1)")
}

/// Symmetric-square image of `h = [[α, β], [γ, δ]]`.
///
/// Works over any commutative ring, so the homomorphism property can be
/// checked exactly over the rationals and evaluated in floating point.
pub fn spin_to_so21<T>(h: &[[T; 2]; 2]) -> SquareMatrix<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let [[al, be], [ga, de]] = h.clone();
    let two = T::one() + T::one();
    let rows = vec![
        vec![al.clone() * al.clone(), al.clone() * be.clone(), be.clone() * be.clone()],
        vec![
            two.clone() * al.clone() * ga.clone(),
            al.clone() * de.clone() + be.clone() * ga.clone(),
            two * be.clone() * de.clone(),
        ],
        vec![ga.clone() * ga.clone(), ga * de.clone(), de.clone() * de],
    ];
    SquareMatrix::from_rows(&rows).expect("3x3")
}

/// Exact spin image of a rational `SL(2)` matrix as a validated group element.
pub fn spin_element(h: &[[BigRational; 2]; 2]) -> Result<GroupElement, GeometryError> {
    let det = h[0][0].clone() * h[1][1].clone() - h[0][1].clone() * h[1][0].clone();
    if !det.is_one() {
        return Err(GeometryError::Determinant);
    }
    GroupElement::new(spin_to_so21(h), &discriminant_form())
}

/// Spin image of an integer `SL(2, Z)` matrix.
pub fn spin_element_int(h: [[i64; 2]; 2]) -> Result<GroupElement, GeometryError> {
    let r = h.map(|row| row.map(super::group::rational));
    spin_element(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::cartan::cartan_decompose;

    #[test]
    fn identity_and_kernel() {
        let id = spin_element_int([[1, 0], [0, 1]]).unwrap();
        assert!(id.is_identity());
        let minus = spin_element_int([[-1, 0], [0, -1]]).unwrap();
        assert!(minus.is_identity());
    }

    #[test]
    fn rejects_wrong_determinant() {
        assert_eq!(
            spin_element_int([[2, 0], [0, 1]]).unwrap_err(),
            GeometryError::Determinant
        );
    }

    #[test]
    fn generators_are_integral_and_in_identity_component() {
        let q = discriminant_form();
        for h in [[[0, -1], [1, 0]], [[1, 1], [0, 1]], [[2, 1], [1, 1]]] {
            let g = spin_element_int(h).unwrap();
            assert!(g.to_integer().is_some());
            assert!(g.in_identity_component(&q));
        }
    }

    #[test]
    fn diagonal_element_has_unit_displacement() {
        let s = 0.5f64.exp();
        let g = spin_to_so21(&[[s, 0.0], [0.0, 1.0 / s]]);
        let q = discriminant_form();
        let ambient = nalgebra::DMatrix::from_row_slice(3, 3, g.as_slice());
        let c = cartan_decompose(&q.matrix_to_frame(&ambient));
        assert!((c.t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn displacement_is_half_frobenius_norm() {
        let q = discriminant_form();
        let h = [[3i64, 5], [1, 2]];
        let g = spin_element_int(h).unwrap().to_integer().unwrap();
        let frob: i64 = h.iter().flatten().map(|x| x * x).sum();
        assert!((q.cosh_displacement(&g) - frob as f64 / 2.0).abs() < 1e-12);
    }
}

//! Forms, isometries and hyperboloid-model geometry.

mod cartan;
mod form;
mod group;
pub mod hyperbolic;
pub mod spin;

use thiserror::Error;

pub use cartan::{cartan_decompose, CartanCoordinates};
pub use form::{check_signature, DisplacementFunctional, QuadraticForm};
pub use group::{is_isometry, GroupElement, RatMatrix};
pub use hyperbolic::{
    boost, busemann, hyperbolic_distance, lorentz_inverse, minkowski, reference_endpoint,
    rotation, visual_point, BoundaryPoint, HyperboloidPoint, Sign,
};
pub use spin::{discriminant_form, spin_element, spin_element_int, spin_to_so21};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix rows do not form a square array")]
    Shape,
    #[error("signature ({pos},{neg}) is not (n,1){}", if *.degenerate { " (degenerate)" } else { "" })]
    Signature {
        pos: usize,
        neg: usize,
        degenerate: bool,
    },
    #[error("matrix does not preserve the form")]
    NotIsometry,
    #[error("determinant must be 1")]
    Determinant,
    #[error("vector is not a future timelike vector")]
    NotOnHyperboloid,
    #[error("vector is not a nonzero lightlike vector")]
    NotIsotropic,
    #[error("domain error: {0}")]
    Domain(String),
}

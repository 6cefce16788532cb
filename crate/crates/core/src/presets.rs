//! Groups shipped with the command-line tool.

use num_rational::Ratio;

use crate::lorentz::spin::{discriminant_form, spin_element_int};
use crate::lorentz::QuadraticForm;
use crate::matrix::IntMatrix;
use crate::orbit::{GroupPresentation, OrbitError};

/// A named group together with its default base vector.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub group: GroupPresentation,
    pub w0: Vec<i64>,
}

pub const PRESET_NAMES: [&str; 5] = [
    "pythagorean_full",
    "pythagorean_thin",
    "sl2z_spin",
    "hyperboloid_s1",
    "trivial",
];

pub fn by_name(name: &str) -> Option<Preset> {
    let (group, w0) = match name {
        "pythagorean_full" => (pythagorean_full(), vec![3, 4, 5]),
        "pythagorean_thin" => (pythagorean_thin(), vec![3, 4, 5]),
        "sl2z_spin" => (sl2z_spin(), vec![1, 0, 1]),
        "hyperboloid_s1" => (hyperboloid_s1(), vec![1, 1, 0]),
        "trivial" => (trivial(QuadraticForm::standard(2)), vec![3, 4, 5]),
        _ => return None,
    };
    let name = PRESET_NAMES.into_iter().find(|n| *n == name)?;
    Some(Preset { name, group, w0 })
}

fn rows(r: [[i64; 3]; 3]) -> IntMatrix {
    IntMatrix::from_rows(&r.map(|row| row.to_vec())).expect("3x3")
}

/// Reflections generating `O⁺(2,1; Z)` for `x² + y² - z²`: the swap `x ↔ y`,
/// the sign change of `x`, and the reflection in the root `(1,1,1)`.
///
/// The orbit of `(3,4,5)` is the set of all primitive Pythagorean triples
/// with `z > 0`, signs and order of the legs included.
pub fn pythagorean_full() -> GroupPresentation {
    let gens = [
        rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
        rows([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        rows([[-1, -2, 2], [-2, -1, 2], [-2, -2, 3]]),
    ];
    GroupPresentation::from_integer(QuadraticForm::standard(2), &gens, "pythagorean_full")
        .expect("reflections preserve x^2 + y^2 - z^2")
}

/// Image of `h ∈ SL(2)` acting on `(x, y, z) = (m² - n², 2mn, m² + n²)`
/// through `(m, n)ᵀ ↦ h·(m, n)ᵀ`. Integral exactly when `h ≡ I mod 2`.
pub fn pythagorean_spin(h: [[i64; 2]; 2]) -> Option<IntMatrix> {
    let [[a, b], [c, d]] = h;
    let half = |x: i64| Ratio::new(x, 2);
    let entries = [
        half(a * a - c * c - b * b + d * d),
        Ratio::from_integer(a * b - c * d),
        half(a * a - c * c + b * b - d * d),
        Ratio::from_integer(a * c - b * d),
        Ratio::from_integer(a * d + b * c),
        Ratio::from_integer(a * c + b * d),
        half(a * a + c * c - b * b - d * d),
        Ratio::from_integer(a * b + c * d),
        half(a * a + c * c + b * b + d * d),
    ];
    if a * d - b * c != 1 || entries.iter().any(|e| !e.is_integer()) {
        return None;
    }
    Some(IntMatrix::from_vec(3, entries.iter().map(|e| e.to_integer()).collect()))
}

/// Thin subgroup: the image of the free group `Λ(4)` generated by
/// `[[1,4],[0,1]]` and `[[1,0],[4,1]]`. It has infinite index in
/// `SO(2,1; Z)` and critical exponent about `0.69`.
pub fn pythagorean_thin() -> GroupPresentation {
    let gens = [[[1, 4], [0, 1]], [[1, 0], [4, 1]]]
        .map(|h| pythagorean_spin(h).expect("congruent to I mod 2"));
    GroupPresentation::from_integer(QuadraticForm::standard(2), &gens, "pythagorean_thin")
        .expect("spin images are isometries")
}

/// `PSL(2, Z)` acting on binary quadratic forms, generated by the images of
/// `S = [[0,-1],[1,0]]` and `T = [[1,1],[0,1]]`.
pub fn sl2z_spin() -> GroupPresentation {
    let gens = [[[0, -1], [1, 0]], [[1, 1], [0, 1]]].map(|h| {
        spin_element_int(h)
            .and_then(|g| g.to_integer().ok_or(crate::lorentz::GeometryError::Shape))
            .expect("integral")
    });
    GroupPresentation::from_integer(discriminant_form(), &gens, "sl2z_spin").expect("isometries")
}

/// The reflection group of [`pythagorean_full`], paired with the
/// one-sheeted hyperboloid `x² + y² - z² = 2` through `(1,1,0)`.
pub fn hyperboloid_s1() -> GroupPresentation {
    let g = pythagorean_full();
    GroupPresentation::from_integer(g.form().clone(), g.integer_generators(), "hyperboloid_s1")
        .expect("same generators")
}

pub fn trivial(form: QuadraticForm) -> GroupPresentation {
    GroupPresentation::from_integer(form, &[], "trivial").expect("empty generating set")
}

/// Validates `w0` against the preset's form, returning `Q(w0)`.
pub fn check_base(group: &GroupPresentation, w0: &[i64]) -> Result<i128, OrbitError> {
    if w0.len() != group.dim() {
        return Err(OrbitError::Dimension {
            expected: group.dim(),
            got: w0.len(),
        });
    }
    if w0.iter().all(|&x| x == 0) {
        return Err(OrbitError::ZeroVector);
    }
    Ok(group.form().eval(w0))
}

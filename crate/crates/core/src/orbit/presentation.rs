use sha2::{Digest, Sha256};

use super::OrbitError;
use crate::lorentz::{GroupElement, QuadraticForm};
use crate::matrix::IntMatrix;

/// A finitely generated subgroup `Γ` of `O(Q; Z)`, given by generators.
///
/// The generator list is closed under inverses and sorted, so presentations
/// that differ only in generator order or in which inverses were listed
/// compare equal and hash identically.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    form: QuadraticForm,
    generators: Vec<GroupElement>,
    integer: Vec<IntMatrix>,
    label: String,
}

impl GroupPresentation {
    pub fn new(
        form: QuadraticForm,
        generators: Vec<GroupElement>,
        label: impl Into<String>,
    ) -> Result<Self, OrbitError> {
        let mut integer = Vec::with_capacity(2 * generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.dim() != form.dim() {
                return Err(OrbitError::Dimension {
                    expected: form.dim(),
                    got: g.dim(),
                });
            }
            let checked = GroupElement::new(g.matrix().clone(), &form)?;
            let inv = checked.inverse(&form);
            for h in [checked, inv] {
                integer.push(h.to_integer().ok_or(OrbitError::NotIntegral(i))?);
            }
        }
        integer.sort();
        integer.dedup();
        integer.retain(|g| !g.is_identity());
        let generators = integer.iter().map(|g| GroupElement::from(g.clone())).collect();
        Ok(Self {
            form,
            generators,
            integer,
            label: label.into(),
        })
    }

    /// Builds a presentation from integer matrices, validating each one.
    pub fn from_integer(
        form: QuadraticForm,
        generators: &[IntMatrix],
        label: impl Into<String>,
    ) -> Result<Self, OrbitError> {
        let elements = generators
            .iter()
            .map(|g| GroupElement::new(g.to_rational(), &form))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(form, elements, label)
    }

    /// The subgroup generated by the listed generators of `self`.
    pub fn subgroup(&self, indices: &[usize], label: impl Into<String>) -> Result<Self, OrbitError> {
        let gens: Vec<IntMatrix> = indices.iter().map(|&i| self.integer[i].clone()).collect();
        Self::from_integer(self.form.clone(), &gens, label)
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    /// Generators, inverses included, in canonical order.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn integer_generators(&self) -> &[IntMatrix] {
        &self.integer
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// Whether `-I` is a generator or a product of two generators.
    ///
    /// This is only a cheap sufficient test; it is used to decide whether
    /// the orbit should be symmetric under `x ↦ -x`.
    pub fn contains_minus_identity(&self) -> bool {
        let minus = IntMatrix::identity(self.dim()).neg();
        self.integer.contains(&minus)
            || self.integer.iter().any(|g| {
                self.integer
                    .iter()
                    .any(|h| g.checked_mul(h).is_some_and(|p| p == minus))
            })
    }

    /// Whether every generator maps the future sheet to itself.
    pub fn first_non_orthochronous(&self) -> Option<usize> {
        self.generators
            .iter()
            .position(|g| !g.is_orthochronous(&self.form))
    }

    /// Short stable identifier of the generating set.
    pub fn hash_hex(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"gens:");
        for g in &self.integer {
            let entries: Vec<String> = g.as_slice().iter().map(|x| x.to_string()).collect();
            hasher.update(entries.join(",").as_bytes());
            hasher.update(b";");
        }
        hex::encode(&hasher.finalize()[..8])
    }
}

impl PartialEq for GroupPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form && self.integer == other.integer
    }
}

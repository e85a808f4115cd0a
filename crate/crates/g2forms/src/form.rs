//! Sparse exterior forms and tangent vectors with exchangeable coefficients.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::blade::Blade;
use crate::scalar::{Rat, Scalar};

/// Errors raised by exterior algebra operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: u8, right: u8 },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u8, right: u8 },
    #[error("interior product requires degree at least 1")]
    InteriorOfScalar,
    #[error("blade {blade} does not fit a {degree}-form in dimension {dim}")]
    InvalidBlade { blade: String, degree: u8, dim: u8 },
    #[error("ambient dimension {dim} not supported (expected 1..=8)")]
    BadDimension { dim: u8 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A `k`-form on `ℝ^dim` stored as a sorted sparse map from basis blades to
/// nonzero coefficients.
///
/// Terms always satisfy `blade.degree() == degree` and fit inside `dim`;
/// zero coefficients are dropped on construction, so `==` is semantic
/// equality for the exact flavor. Iteration order is ascending-mask order.
#[derive(Clone, PartialEq)]
pub struct KForm<S: Scalar> {
    dim: u8,
    degree: u8,
    terms: BTreeMap<Blade, S>,
}

impl<S: Scalar> KForm<S> {
    /// The zero `degree`-form. Degrees above `dim` are permitted and label
    /// the zero space `Λ^{>dim} = 0`, so such forms are always empty.
    pub fn zero(dim: u8, degree: u8) -> KForm<S> {
        KForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from `(blade, coefficient)` pairs, accumulating repeats
    /// and dropping zero coefficients.
    pub fn from_terms(
        dim: u8,
        degree: u8,
        pairs: impl IntoIterator<Item = (Blade, S)>,
    ) -> Result<KForm<S>, ExteriorError> {
        if dim == 0 || dim > 8 {
            return Err(ExteriorError::BadDimension { dim });
        }
        let mut form = KForm::zero(dim, degree);
        for (blade, coeff) in pairs {
            if blade.degree() != degree || blade.max_index() > dim {
                return Err(ExteriorError::InvalidBlade {
                    blade: blade.to_string(),
                    degree,
                    dim,
                });
            }
            form.accumulate(blade, coeff);
        }
        Ok(form)
    }

    /// The basis monomial `e^{blade}` with coefficient one.
    pub fn basis(dim: u8, blade: Blade) -> KForm<S> {
        KForm::from_terms(dim, blade.degree(), [(blade, S::one())])
            .expect("basis blade is valid by construction")
    }

    fn accumulate(&mut self, blade: Blade, coeff: S) {
        debug_assert_eq!(blade.degree(), self.degree);
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&blade) {
            None => {
                self.terms.insert(blade, coeff);
            }
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(blade, sum);
                }
            }
        }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> u8 {
        self.dim
    }

    /// Form degree.
    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// True when no terms remain.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored terms in ascending-mask order.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, &S)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `blade`, zero when absent.
    pub fn coefficient(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    /// Wedge product. Result degree is the sum of the degrees, which may
    /// exceed `dim`, in which case the result is the zero form.
    pub fn wedge(&self, other: &KForm<S>) -> Result<KForm<S>, ExteriorError> {
        self.check_dim(other)?;
        let mut out = KForm::zero(self.dim, self.degree + other.degree);
        for (ba, ca) in self.terms() {
            for (bb, cb) in other.terms() {
                if let Some((blade, sign)) = ba.wedge(bb) {
                    let mut c = ca.clone() * cb.clone();
                    if sign < 0 {
                        c = -c;
                    }
                    out.accumulate(blade, c);
                }
            }
        }
        Ok(out)
    }

    /// Interior product `ι_X` (contraction in the first slot).
    pub fn interior(&self, x: &Vector<S>) -> Result<KForm<S>, ExteriorError> {
        if x.dim() != self.dim {
            return Err(ExteriorError::DimMismatch {
                left: self.dim,
                right: x.dim(),
            });
        }
        if self.degree == 0 {
            return Err(ExteriorError::InteriorOfScalar);
        }
        let mut out = KForm::zero(self.dim, self.degree - 1);
        for (blade, coeff) in self.terms() {
            for i in blade.indices() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let (reduced, sign) = blade.remove(i).expect("index drawn from blade");
                let mut c = coeff.clone() * xi.clone();
                if sign < 0 {
                    c = -c;
                }
                out.accumulate(reduced, c);
            }
        }
        Ok(out)
    }

    /// Sum of two forms of equal dimension and degree.
    pub fn add(&self, other: &KForm<S>) -> Result<KForm<S>, ExteriorError> {
        self.check_dim(other)?;
        if self.degree != other.degree {
            return Err(ExteriorError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for (blade, coeff) in other.terms() {
            out.accumulate(blade, coeff.clone());
        }
        Ok(out)
    }

    /// Difference of two forms of equal dimension and degree.
    pub fn sub(&self, other: &KForm<S>) -> Result<KForm<S>, ExteriorError> {
        self.add(&other.neg())
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &S) -> KForm<S> {
        let mut out = KForm::zero(self.dim, self.degree);
        if c.is_zero() {
            return out;
        }
        for (blade, coeff) in self.terms() {
            out.accumulate(blade, coeff.clone() * c.clone());
        }
        out
    }

    /// Negation.
    pub fn neg(&self) -> KForm<S> {
        let mut out = KForm::zero(self.dim, self.degree);
        for (blade, coeff) in self.terms() {
            out.terms.insert(blade, -coeff.clone());
        }
        out
    }

    fn check_dim(&self, other: &KForm<S>) -> Result<(), ExteriorError> {
        if self.dim != other.dim {
            return Err(ExteriorError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

impl KForm<Rat> {
    /// Lowers an exact form to floats. Conversions are one-way and explicit.
    pub fn to_float(&self) -> KForm<f64> {
        let mut out = KForm::zero(self.dim, self.degree);
        for (blade, coeff) in self.terms() {
            out.accumulate(blade, f64::from_rational(coeff));
        }
        out
    }
}

impl KForm<f64> {
    /// Largest absolute coefficient; zero for the empty form.
    pub fn max_norm(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Drops coefficients with absolute value below `eps`.
    pub fn normalize_float(&self, eps: f64) -> KForm<f64> {
        let mut out = KForm::zero(self.dim, self.degree);
        for (blade, coeff) in self.terms() {
            if coeff.abs() >= eps {
                out.terms.insert(blade, *coeff);
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (blade, coeff)) in self.terms().enumerate() {
            let negative = coeff.is_negative_scalar();
            let abs = coeff.abs_scalar();
            if pos == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if blade == Blade::SCALAR {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{blade}")?;
            } else {
                write!(f, "{abs} {blade}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm[dim {}, deg {}]({self})", self.dim, self.degree)
    }
}

/// A tangent vector `X = Σ X^i e_i` with `dim` components.
#[derive(Clone, PartialEq, Debug)]
pub struct Vector<S: Scalar> {
    components: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    /// The zero vector.
    pub fn zero(dim: u8) -> Vector<S> {
        Vector {
            components: (0..dim).map(|_| S::zero()).collect(),
        }
    }

    /// The basis vector `e_i` (1-based).
    pub fn basis(dim: u8, i: u8) -> Vector<S> {
        assert!(i >= 1 && i <= dim, "basis index {i} out of range 1..={dim}");
        let mut v = Vector::zero(dim);
        v.components[(i - 1) as usize] = S::one();
        v
    }

    /// Wraps a component list (index 0 holds `X^1`).
    pub fn from_components(components: Vec<S>) -> Vector<S> {
        assert!(
            !components.is_empty() && components.len() <= 8,
            "vector dimension must be 1..=8"
        );
        Vector { components }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> u8 {
        self.components.len() as u8
    }

    /// Component `X^i` (1-based).
    pub fn component(&self, i: u8) -> &S {
        &self.components[(i - 1) as usize]
    }

    /// All components, index 0 holding `X^1`.
    pub fn components(&self) -> &[S] {
        &self.components
    }

    /// Sum of two vectors of equal dimension.
    pub fn add(&self, other: &Vector<S>) -> Vector<S> {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        Vector {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &S) -> Vector<S> {
        Vector {
            components: self.components.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// True when every component is zero.
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }
}

impl Vector<Rat> {
    /// Lowers an exact vector to floats.
    pub fn to_float(&self) -> Vector<f64> {
        Vector {
            components: self.components.iter().map(f64::from_rational).collect(),
        }
    }
}

impl Vector<f64> {
    /// Largest absolute component.
    pub fn max_norm(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn rat(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn e(indices: &[u8]) -> KForm<Rat> {
        KForm::basis(7, Blade::from_indices(indices, 7).unwrap())
    }

    #[test]
    fn wedge_of_disjoint_basis_blades() {
        // e^{13} ∧ e^{2} = -e^{123}
        let w = e(&[1, 3]).wedge(&e(&[2])).unwrap();
        assert_eq!(
            w.coefficient(Blade::from_indices(&[1, 2, 3], 7).unwrap()),
            rat(-1)
        );
        assert_eq!(w.term_count(), 1);
        assert_eq!(w.degree(), 3);
    }

    #[test]
    fn wedge_with_shared_index_vanishes() {
        let w = e(&[1, 2]).wedge(&e(&[2, 3])).unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn wedge_above_top_degree_is_zero() {
        let a = e(&[1, 2, 3, 4]);
        let b = e(&[4, 5, 6, 7]);
        let w = a.wedge(&b).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.degree(), 8);
    }

    #[test]
    fn interior_of_basis_three_form() {
        // ι_{e1} e^{123} = e^{23}, ι_{e2} e^{123} = -e^{13}
        let phi = e(&[1, 2, 3]);
        let i1 = phi.interior(&Vector::basis(7, 1)).unwrap();
        assert_eq!(i1, e(&[2, 3]));
        let i2 = phi.interior(&Vector::basis(7, 2)).unwrap();
        assert_eq!(i2, e(&[1, 3]).neg());
    }

    #[test]
    fn interior_rejects_scalars() {
        let f = KForm::<Rat>::from_terms(7, 0, [(Blade::SCALAR, rat(2))]).unwrap();
        assert_eq!(
            f.interior(&Vector::basis(7, 1)).unwrap_err(),
            ExteriorError::InteriorOfScalar
        );
    }

    #[test]
    fn add_cancels_exactly() {
        let s = e(&[1, 2]).add(&e(&[1, 2]).neg()).unwrap();
        assert!(s.is_zero());
        assert_eq!(
            e(&[1, 2]).add(&e(&[1, 2, 3])).unwrap_err(),
            ExteriorError::DegreeMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn from_terms_validates_blades() {
        let bad = KForm::<Rat>::from_terms(
            7,
            2,
            [(Blade::from_indices(&[1, 2, 3], 7).unwrap(), rat(1))],
        );
        assert!(matches!(bad, Err(ExteriorError::InvalidBlade { .. })));
        let out_of_range =
            KForm::<Rat>::from_terms(4, 2, [(Blade::from_mask(0b11000), rat(1))]);
        assert!(matches!(out_of_range, Err(ExteriorError::InvalidBlade { .. })));
    }

    #[test]
    fn display_round_trip_shapes() {
        let f = e(&[1, 2])
            .scale(&Rat::new(3.into(), 2.into()))
            .add(&e(&[1, 3]).neg())
            .unwrap();
        assert_eq!(f.to_string(), "3/2 e^{12} - e^{13}");
        assert_eq!(KForm::<Rat>::zero(7, 3).to_string(), "0");
        let neg_first = e(&[1, 2]).neg();
        assert_eq!(neg_first.to_string(), "-e^{12}");
    }

    #[test]
    fn float_norm_and_normalize() {
        let f = KForm::<f64>::from_terms(
            7,
            1,
            [
                (Blade::from_mask(0b1), 1e-16),
                (Blade::from_mask(0b10), -2.0),
            ],
        )
        .unwrap();
        assert_eq!(f.max_norm(), 2.0);
        let cleaned = f.normalize_float(1e-14);
        assert_eq!(cleaned.term_count(), 1);
    }
}

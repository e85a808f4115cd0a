//! Lie algebras presented by their coframe differentials, with the
//! Chevalley–Eilenberg complex and its cohomology.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::blade::Blade;
use crate::form::{ExteriorError, KForm, Vector};
use crate::parse::parse_form;
use crate::ratmat::RatMat;
use crate::scalar::{Rat, Scalar};

/// Errors raised while building or differentiating on a Lie algebra.
#[derive(Debug, Error)]
pub enum LieAlgebraError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("tuple has {found} entries, expected 1..=8")]
    TupleLength { found: usize },
    #[error("entry {entry} of the tuple is a {degree}-form, expected a 2-form")]
    WrongDegree { entry: usize, degree: u8 },
    #[error("Jacobi identity fails: d(de^{index}) is nonzero")]
    JacobiViolation { index: u8 },
    #[error("line {line}: {msg}")]
    FileFormat { line: usize, msg: String },
    #[error("form lives in dimension {found}, algebra has dimension {expected}")]
    WrongAlgebraDim { expected: u8, found: u8 },
}

/// A Lie algebra `𝔤` of dimension `n ≤ 8`, presented by the exterior
/// derivatives of a fixed coframe: `de^1, …, de^n`, each an invariant 2-form.
///
/// The bracket is recovered from `[X, Y]^k = -de^k(X, Y)`, and the Jacobi
/// identity is equivalent to `d ∘ d = 0` on the coframe.
#[derive(Clone, PartialEq, Debug)]
pub struct LieAlgebra {
    dim: u8,
    dcoframe: Vec<KForm<Rat>>,
    dcoframe_float: Vec<KForm<f64>>,
}

impl LieAlgebra {
    /// Builds an algebra from the coframe differentials and verifies the
    /// Jacobi identity. Use [`LieAlgebra::new_unchecked`] to skip the check.
    pub fn new(dcoframe: Vec<KForm<Rat>>) -> Result<LieAlgebra, LieAlgebraError> {
        let algebra = LieAlgebra::new_unchecked(dcoframe)?;
        algebra.jacobi_check()?;
        Ok(algebra)
    }

    /// Builds an algebra without verifying the Jacobi identity; shape checks
    /// (entry count, degrees, ambient dimensions) still run.
    pub fn new_unchecked(dcoframe: Vec<KForm<Rat>>) -> Result<LieAlgebra, LieAlgebraError> {
        let n = dcoframe.len();
        if n == 0 || n > 8 {
            return Err(LieAlgebraError::TupleLength { found: n });
        }
        let dim = n as u8;
        for (k, f) in dcoframe.iter().enumerate() {
            if f.dim() != dim {
                return Err(LieAlgebraError::WrongAlgebraDim {
                    expected: dim,
                    found: f.dim(),
                });
            }
            if f.degree() != 2 && !f.is_zero() {
                return Err(LieAlgebraError::WrongDegree {
                    entry: k + 1,
                    degree: f.degree(),
                });
            }
        }
        // Zero entries may arrive as 0-forms from the parser; rebuild all
        // entries as genuine 2-forms.
        let dcoframe: Vec<KForm<Rat>> = dcoframe
            .into_iter()
            .map(|f| {
                if f.is_zero() {
                    KForm::zero(dim, 2)
                } else {
                    f
                }
            })
            .collect();
        let dcoframe_float = dcoframe.iter().map(KForm::to_float).collect();
        Ok(LieAlgebra {
            dim,
            dcoframe,
            dcoframe_float,
        })
    }

    /// Parses a coframe tuple like `(0, 0, e^{12}, 0, e^{13}, 0, 0)` and
    /// verifies the Jacobi identity.
    pub fn parse(text: &str) -> Result<LieAlgebra, LieAlgebraError> {
        let algebra = LieAlgebra::parse_unchecked(text)?;
        algebra.jacobi_check()?;
        Ok(algebra)
    }

    /// Parses a coframe tuple without the Jacobi check.
    pub fn parse_unchecked(text: &str) -> Result<LieAlgebra, LieAlgebraError> {
        let inner = text.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(inner);
        let entries: Vec<&str> = inner.split(',').collect();
        if entries.is_empty() || entries.len() > 8 {
            return Err(LieAlgebraError::TupleLength {
                found: entries.len(),
            });
        }
        let dim = entries.len() as u8;
        let mut dcoframe = Vec::with_capacity(entries.len());
        for entry in entries {
            dcoframe.push(parse_form::<Rat>(entry, dim)?);
        }
        LieAlgebra::new_unchecked(dcoframe)
    }

    /// Named built-in algebras: `row1` through `row4` (nilpotent Lie algebras
    /// with closed non-parallel structures) and `abelian7`.
    pub fn builtin(name: &str) -> Option<LieAlgebra> {
        let tuple = match name {
            "row1" => "(0, 0, e^{12}, e^{13}, e^{23}, e^{15} + e^{24}, e^{16} + e^{34})",
            "row2" => "(0, 0, e^{12}, e^{13}, e^{23}, e^{15} + e^{24}, e^{16} + e^{34} + e^{25})",
            "row3" => "(0, 0, e^{12}, 0, e^{13} + e^{24}, e^{14}, e^{46} + e^{34} + e^{15} + e^{23})",
            "row4" => "(0, 0, e^{12}, 0, e^{13}, e^{24} + e^{23}, e^{25} + e^{34} + e^{15} + e^{16} - 3 e^{26})",
            "abelian7" => "(0, 0, 0, 0, 0, 0, 0)",
            _ => return None,
        };
        Some(LieAlgebra::parse(tuple).expect("built-in tuples are valid"))
    }

    /// Names accepted by [`LieAlgebra::builtin`].
    pub fn builtin_names() -> &'static [&'static str] {
        &["row1", "row2", "row3", "row4", "abelian7"]
    }

    /// Parses a catalog file: one `name: tuple` per line, with `#` comments
    /// and blank lines ignored.
    pub fn load_catalog(text: &str) -> Result<Vec<(String, LieAlgebra)>, LieAlgebraError> {
        let mut out = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((name, tuple)) = line.split_once(':') else {
                return Err(LieAlgebraError::FileFormat {
                    line: idx + 1,
                    msg: "expected 'name: tuple'".into(),
                });
            };
            let name = name.trim();
            if name.is_empty() {
                return Err(LieAlgebraError::FileFormat {
                    line: idx + 1,
                    msg: "empty name".into(),
                });
            }
            let algebra = LieAlgebra::parse(tuple).map_err(|e| LieAlgebraError::FileFormat {
                line: idx + 1,
                msg: e.to_string(),
            })?;
            out.push((name.to_string(), algebra));
        }
        Ok(out)
    }

    /// Algebra dimension.
    pub fn dim(&self) -> u8 {
        self.dim
    }

    /// The coframe differentials `de^1, …, de^n` as exact 2-forms.
    pub fn dcoframe(&self) -> &[KForm<Rat>] {
        &self.dcoframe
    }

    /// Float lowering of the coframe differentials, cached at construction.
    pub fn dcoframe_float(&self) -> &[KForm<f64>] {
        &self.dcoframe_float
    }

    /// Checks `d(de^k) = 0` for every coframe element, reporting the first
    /// failing index.
    pub fn jacobi_check(&self) -> Result<(), LieAlgebraError> {
        for k in 1..=self.dim {
            let dd = self.d(&self.dcoframe[(k - 1) as usize])?;
            if !dd.is_zero() {
                return Err(LieAlgebraError::JacobiViolation { index: k });
            }
        }
        Ok(())
    }

    /// Chevalley–Eilenberg differential of an exact invariant form:
    /// `d(e^{i1…ik}) = Σ_j (-1)^{j-1} de^{i_j} ∧ e^{i1…î_j…ik}`, extended
    /// linearly. Constants (0-forms) map to zero.
    pub fn d(&self, a: &KForm<Rat>) -> Result<KForm<Rat>, LieAlgebraError> {
        d_impl(self.dim, &self.dcoframe, a)
    }

    /// Float flavor of [`LieAlgebra::d`].
    pub fn d_float(&self, a: &KForm<f64>) -> Result<KForm<f64>, LieAlgebraError> {
        d_impl(self.dim, &self.dcoframe_float, a)
    }

    /// Lie bracket via `[X, Y]^k = -de^k(X, Y)`.
    pub fn bracket(&self, x: &Vector<Rat>, y: &Vector<Rat>) -> Vector<Rat> {
        bracket_impl(self.dim, &self.dcoframe, x, y)
    }

    /// Float flavor of [`LieAlgebra::bracket`].
    pub fn bracket_float(&self, x: &Vector<f64>, y: &Vector<f64>) -> Vector<f64> {
        bracket_impl(self.dim, &self.dcoframe_float, x, y)
    }

    /// Matrix of `d: Λ^k → Λ^{k+1}` in the ascending-mask bases.
    pub fn d_matrix(&self, k: u8) -> RatMat {
        let domain = Blade::enumerate(self.dim, k);
        let target = Blade::enumerate(self.dim, k + 1);
        let mut columns = Vec::with_capacity(domain.len());
        for blade in domain {
            let image = self
                .d(&KForm::basis(self.dim, blade))
                .expect("basis forms are valid");
            let col = target.iter().map(|b| image.coefficient(*b)).collect();
            columns.push(col);
        }
        RatMat::from_columns(target.len(), &columns)
    }

    /// Basis of the closed `k`-forms `ker(d: Λ^k → Λ^{k+1})`, as primitive
    /// integer forms in ascending-mask column order.
    pub fn closed_forms_basis(&self, k: u8) -> Vec<KForm<Rat>> {
        let blades = Blade::enumerate(self.dim, k);
        self.d_matrix(k)
            .nullspace()
            .into_iter()
            .map(|coeffs| {
                KForm::from_terms(
                    self.dim,
                    k,
                    blades.iter().copied().zip(coeffs),
                )
                .expect("nullspace vectors match the blade basis")
            })
            .collect()
    }

    /// Betti numbers of the Chevalley–Eilenberg complex, computed by exact
    /// rational rank: `b_k = C(n,k) - rank d_k - rank d_{k-1}`.
    pub fn betti(&self) -> BettiVector {
        let n = self.dim;
        let ranks: Vec<usize> = (0..=n).map(|k| self.d_matrix(k).rank()).collect();
        let b = (0..=n as usize)
            .map(|k| {
                let dim_k = Blade::enumerate(n, k as u8).len();
                let below = if k == 0 { 0 } else { ranks[k - 1] };
                dim_k - ranks[k] - below
            })
            .collect();
        BettiVector(b)
    }

    /// True when every `tr(ad_X)` vanishes.
    pub fn is_unimodular(&self) -> bool {
        (1..=self.dim).all(|i| {
            let ei = Vector::basis(self.dim, i);
            let trace = (1..=self.dim)
                .map(|j| {
                    self.bracket(&ei, &Vector::basis(self.dim, j))
                        .component(j)
                        .clone()
                })
                .fold(Rat::from_int(0), |acc, x| acc + x);
            trace == Rat::from_int(0)
        })
    }
}

fn d_impl<S: Scalar>(
    dim: u8,
    dcoframe: &[KForm<S>],
    a: &KForm<S>,
) -> Result<KForm<S>, LieAlgebraError> {
    if a.dim() != dim {
        return Err(LieAlgebraError::WrongAlgebraDim {
            expected: dim,
            found: a.dim(),
        });
    }
    let mut out = KForm::zero(dim, a.degree() + 1);
    for (blade, coeff) in a.terms() {
        for i in blade.indices() {
            let (rest, rsign) = blade.remove(i).expect("index drawn from blade");
            let de_i = &dcoframe[(i - 1) as usize];
            let rest_form = KForm::basis(dim, rest);
            let mut piece = de_i.wedge(&rest_form)?.scale(coeff);
            if rsign < 0 {
                piece = piece.neg();
            }
            out = out.add(&piece)?;
        }
    }
    Ok(out)
}

fn bracket_impl<S: Scalar>(
    dim: u8,
    dcoframe: &[KForm<S>],
    x: &Vector<S>,
    y: &Vector<S>,
) -> Vector<S> {
    assert_eq!(x.dim(), dim, "vector dimension mismatch");
    assert_eq!(y.dim(), dim, "vector dimension mismatch");
    let components = (1..=dim)
        .map(|k| {
            let dek = &dcoframe[(k - 1) as usize];
            let pairing = dek
                .interior(x)
                .and_then(|f| f.interior(y))
                .expect("2-form contracts twice");
            -pairing.coefficient(Blade::SCALAR)
        })
        .collect();
    Vector::from_components(components)
}

/// Betti numbers `b_0, …, b_n` of a Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    /// `b_k`, panicking when `k > n`.
    pub fn b(&self, k: usize) -> usize {
        self.0[k]
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(ix: &[u8]) -> Blade {
        Blade::from_indices(ix, 7).unwrap()
    }

    #[test]
    fn row1_differential_of_basis_forms() {
        let l = LieAlgebra::builtin("row1").unwrap();
        let d3 = l.d(&KForm::basis(7, b(&[3]))).unwrap();
        assert_eq!(d3.to_string(), "e^{12}");
        let d34 = l.d(&KForm::basis(7, b(&[3, 4]))).unwrap();
        assert_eq!(d34.to_string(), "e^{124}");
        let d1 = l.d(&KForm::basis(7, b(&[1]))).unwrap();
        assert!(d1.is_zero());
    }

    #[test]
    fn jacobi_violation_is_reported_with_its_index() {
        let bad = LieAlgebra::parse_unchecked("(0, 0, 0, e^{12} + e^{34}, 0, 0, 0)").unwrap();
        match bad.jacobi_check() {
            Err(LieAlgebraError::JacobiViolation { index }) => assert_eq!(index, 4),
            other => panic!("expected Jacobi violation, got {other:?}"),
        }
        assert!(LieAlgebra::parse("(0, 0, 0, e^{12} + e^{34}, 0, 0, 0)").is_err());
    }

    #[test]
    fn builtin_rows_satisfy_jacobi() {
        for name in LieAlgebra::builtin_names() {
            let l = LieAlgebra::builtin(name).unwrap();
            assert!(l.jacobi_check().is_ok(), "{name}");
        }
    }

    #[test]
    fn bracket_recovers_structure_constants() {
        let l = LieAlgebra::builtin("row1").unwrap();
        let e1 = Vector::basis(7, 1);
        let e2 = Vector::basis(7, 2);
        // de^3 = e^{12} means e^3([e1,e2]) = -de^3(e1,e2) = -1.
        let br = l.bracket(&e1, &e2);
        assert_eq!(br, Vector::basis(7, 3).scale(&Rat::from_int(-1)));
        // Antisymmetry.
        let rev = l.bracket(&e2, &e1);
        assert_eq!(rev, Vector::basis(7, 3));
        // Abelian algebra brackets vanish.
        let a = LieAlgebra::builtin("abelian7").unwrap();
        assert!(a.bracket(&e1, &e2).is_zero());
    }

    #[test]
    fn betti_of_the_builtin_algebras() {
        let expect = [
            ("row1", vec![1, 2, 3, 6, 6, 3, 2, 1]),
            ("row2", vec![1, 2, 3, 6, 6, 3, 2, 1]),
            ("row3", vec![1, 3, 5, 8, 8, 5, 3, 1]),
            ("row4", vec![1, 3, 6, 8, 8, 6, 3, 1]),
            ("abelian7", vec![1, 7, 21, 35, 35, 21, 7, 1]),
        ];
        for (name, want) in expect {
            let got = LieAlgebra::builtin(name).unwrap().betti();
            assert_eq!(got.0, want, "{name}");
        }
    }

    #[test]
    fn d_matrix_shapes_and_the_rank_of_d1() {
        let l = LieAlgebra::builtin("row1").unwrap();
        let d1 = l.d_matrix(1);
        assert_eq!((d1.rows(), d1.cols()), (21, 7));
        assert_eq!(d1.rank(), 5);
        let d7 = l.d_matrix(7);
        assert_eq!((d7.rows(), d7.cols()), (0, 1));
        assert_eq!(d7.rank(), 0);
    }

    #[test]
    fn closed_two_forms_of_the_abelian_algebra_span_everything() {
        let a = LieAlgebra::builtin("abelian7").unwrap();
        assert_eq!(a.closed_forms_basis(2).len(), 21);
        let l = LieAlgebra::builtin("row1").unwrap();
        for f in l.closed_forms_basis(3) {
            assert!(l.d(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn unimodularity() {
        assert!(LieAlgebra::builtin("row1").unwrap().is_unimodular());
        assert!(LieAlgebra::builtin("abelian7").unwrap().is_unimodular());
        let affine = LieAlgebra::parse("(0, e^{12})").unwrap();
        assert!(!affine.is_unimodular());
        // Its top Betti number vanishes, as it must for a non-unimodular
        // algebra.
        assert_eq!(affine.betti().0, vec![1, 1, 0]);
    }

    #[test]
    fn catalog_parsing() {
        let text = "\n# sample catalog\nheis: (0, 0, e^{12})\nflat: (0, 0, 0)\n";
        let cat = LieAlgebra::load_catalog(text).unwrap();
        assert_eq!(cat.len(), 2);
        assert_eq!(cat[0].0, "heis");
        assert_eq!(cat[0].1.dim(), 3);
        assert!(LieAlgebra::load_catalog("oops no colon").is_err());
        let bad_jacobi = "x: (0, 0, 0, e^{12} + e^{34}, 0, 0, 0)";
        assert!(LieAlgebra::load_catalog(bad_jacobi).is_err());
    }

    #[test]
    fn wrong_degree_entries_are_rejected() {
        let e = LieAlgebra::parse("(0, e^{123}, 0)").unwrap_err();
        match e {
            LieAlgebraError::WrongDegree { entry, degree } => {
                assert_eq!((entry, degree), (2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn float_and_exact_differentials_agree() {
        let l = LieAlgebra::builtin("row4").unwrap();
        let f = parse_form::<Rat>("e^{345} - 2 e^{126}", 7).unwrap();
        let exact = l.d(&f).unwrap().to_float();
        let float = l.d_float(&f.to_float()).unwrap();
        assert_eq!(exact.sub(&float).unwrap().max_norm(), 0.0);
    }
}

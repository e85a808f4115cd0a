//! Positive 3-forms on ℝ⁷: induced metric, volume, Hodge star, and torsion.
//!
//! A 3-form φ determines a symmetric bilinear density via
//! `g(X,Y) dV = (1/6) ι_Xφ ∧ ι_Yφ ∧ φ`. Extracting the `e^{1…7}` coefficient
//! of the right side gives a matrix `B'`; in odd dimension `B'` flips sign
//! wholesale under a volume flip, so it is normalized to `det B > 0` and the
//! flip recorded as `orientation = ±1`. When `B` is positive definite, φ is
//! positive and `λ = (det B)^{1/9}`, `g = B/λ`, `dV = orientation·λ·e^{1…7}`.

use nalgebra::{Cholesky, DMatrix, SMatrix};
use serde::Serialize;
use thiserror::Error;

use crate::blade::Blade;
use crate::form::{ExteriorError, KForm, Vector};
use crate::liealg::{LieAlgebra, LieAlgebraError};
use crate::parse::parse_form;
use crate::scalar::Scalar;
use crate::tol;

/// Dense 7×7 float matrix.
pub type Mat7 = SMatrix<f64, 7, 7>;

/// Errors raised by the G2 layer.
#[derive(Debug, Error)]
pub enum G2Error {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Lie(#[from] LieAlgebraError),
    #[error("expected a degree-{expected} form in dimension {expected_dim}, got degree {degree} in dimension {dim}")]
    WrongShape {
        expected: u8,
        expected_dim: u8,
        degree: u8,
        dim: u8,
    },
    #[error("3-form is degenerate (det B = {det:.3e})")]
    Degenerate { det: f64 },
    #[error("3-form is not positive (smallest B eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },
    #[error("algebra has dimension {dim}, expected 7")]
    AlgebraDim { dim: u8 },
}

/// Text of the standard positive 3-form φ₀, whose induced metric is the
/// identity with `orientation = +1`.
pub const STANDARD_PHI: &str =
    "e^{123} + e^{145} + e^{167} + e^{246} - e^{257} - e^{347} - e^{356}";

/// The standard positive 3-form φ₀ in the requested flavor.
pub fn standard_phi<S: Scalar>() -> KForm<S> {
    parse_form(STANDARD_PHI, 7).expect("standard form literal is valid")
}

fn expect_shape(a: &KForm<f64>, degree: u8, dim: u8) -> Result<(), G2Error> {
    if a.dim() != dim || a.degree() != degree {
        return Err(G2Error::WrongShape {
            expected: degree,
            expected_dim: dim,
            degree: a.degree(),
            dim: a.dim(),
        });
    }
    Ok(())
}

/// Computes the normalized bilinear matrix `B` of a 3-form and the
/// orientation sign, so that `B_ij·(orientation) e^{1…7}` is the
/// `(1/6) ι_iφ ∧ ι_jφ ∧ φ` density and `det B > 0`.
///
/// Fails when `B` is singular relative to its own scale (degenerate φ).
pub fn bilinear_from_phi(phi: &KForm<f64>) -> Result<(Mat7, i8), G2Error> {
    expect_shape(phi, 3, 7)?;
    let iota: Vec<KForm<f64>> = (1..=7)
        .map(|i| {
            phi.interior(&Vector::basis(7, i))
                .expect("degree 3 contracts")
        })
        .collect();
    let mut raw = Mat7::zeros();
    for i in 0..7 {
        for j in i..7 {
            let pair = iota[i].wedge(&iota[j]).expect("same space");
            // Only the e^{1…7} component of pair ∧ φ is needed, so pair each
            // 4-blade with its complementary 3-blade in φ directly.
            let mut total = 0.0;
            for (b4, c4) in pair.terms() {
                let b3 = b4.complement(7);
                let cphi = phi.coefficient(b3);
                if cphi != 0.0 {
                    let (_, sign) = b4.wedge(b3).expect("complement is disjoint");
                    total += c4 * cphi * f64::from(sign);
                }
            }
            raw[(i, j)] = total / 6.0;
            raw[(j, i)] = raw[(i, j)];
        }
    }
    let scale = raw.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let det = raw.determinant();
    if scale == 0.0 || det.abs() < tol::DEGENERATE_DET * scale.powi(7) {
        return Err(G2Error::Degenerate { det });
    }
    if det < 0.0 {
        Ok((-raw, -1))
    } else {
        Ok((raw, 1))
    }
}

/// A positive 3-form with its derived metric data. Immutable; every derived
/// field is computed eagerly at construction, so values can be shared freely.
#[derive(Clone, Debug)]
pub struct G2Structure {
    phi: KForm<f64>,
    b: Mat7,
    orientation: i8,
    lam: f64,
    metric: Mat7,
    metric_inv: Mat7,
    // Coframe substitutions for the star: e^i = Σ_a to_flat[i][a] f^a maps
    // into the g-orthonormal coframe f, and from_flat maps back.
    to_flat: Mat7,
    from_flat: Mat7,
}

/// Builds the [`G2Structure`] of a positive 3-form: `λ = (det B)^{1/9}`,
/// `g = B/λ`, `dV = orientation·λ·e^{1…7}`.
///
/// Fails when φ is degenerate or `B` is not positive definite.
pub fn metric_from_phi(phi: &KForm<f64>) -> Result<G2Structure, G2Error> {
    let (b, orientation) = bilinear_from_phi(phi)?;
    let eigs = b.symmetric_eigenvalues();
    let min_eig = eigs.iter().fold(f64::INFINITY, |m, x| m.min(*x));
    if min_eig <= 0.0 {
        return Err(G2Error::NotPositive { min_eig });
    }
    let lam = b.determinant().powf(1.0 / 9.0);
    let metric = b / lam;
    let chol = Cholesky::new(metric).ok_or(G2Error::NotPositive { min_eig })?;
    let l = chol.l();
    let l_inv = l.try_inverse().expect("Cholesky factor is invertible");
    // With P = Lᵀ (so g = PᵀP), the orthonormal coframe is f = P·e, hence
    // e^i = Σ_a (L⁻¹)ᵀ[i,a] f^a and f^a = Σ_i Lᵀ[a,i] e^i.
    let to_flat = l_inv.transpose();
    let from_flat = l.transpose();
    let metric_inv = metric.try_inverse().expect("metric is positive definite");
    Ok(G2Structure {
        phi: phi.clone(),
        b,
        orientation,
        lam,
        metric,
        metric_inv,
        to_flat,
        from_flat,
    })
}

/// Rewrites a form through the coframe substitution `e^i ↦ Σ_j m[i,j] ê^j`.
/// Pullback along the linear map whose matrix is `m`: each coframe element
/// is substituted as `e^i ↦ Σ_j m[(i,j)] e^j` and the products expanded.
pub fn pullback(a: &KForm<f64>, m: &Mat7) -> KForm<f64> {
    let images: Vec<KForm<f64>> = (0..7)
        .map(|i| {
            KForm::from_terms(
                7,
                1,
                (0..7).map(|j| (Blade::from_mask(1 << j), m[(i, j)])),
            )
            .expect("1-blades are valid")
        })
        .collect();
    let one = KForm::from_terms(7, 0, [(Blade::SCALAR, 1.0)]).expect("scalar blade");
    let mut out = KForm::zero(7, a.degree());
    for (blade, coeff) in a.terms() {
        let mut prod = one.clone();
        for i in blade.indices() {
            prod = prod.wedge(&images[(i - 1) as usize]).expect("same space");
        }
        out = out.add(&prod.scale(coeff)).expect("degrees agree");
    }
    out
}

impl G2Structure {
    /// The defining 3-form.
    pub fn phi(&self) -> &KForm<f64> {
        &self.phi
    }

    /// The normalized bilinear matrix with `det B > 0`.
    pub fn b_matrix(&self) -> &Mat7 {
        &self.b
    }

    /// `+1` when φ induces the reference orientation of `e^{1…7}`, else `-1`.
    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    /// Volume coefficient `λ = (det B)^{1/9}`; `det g = λ²`.
    pub fn vol_coeff(&self) -> f64 {
        self.lam
    }

    /// The induced metric `g = B/λ`.
    pub fn metric(&self) -> &Mat7 {
        &self.metric
    }

    /// The volume form `dV = orientation·λ·e^{1…7}`.
    pub fn volume_form(&self) -> KForm<f64> {
        KForm::from_terms(7, 7, [(Blade::top(7), f64::from(self.orientation) * self.lam)])
            .expect("top blade is valid")
    }

    /// Hodge star defined by `b ∧ ∗a = ⟨b,a⟩_g dV` for all `b` of equal
    /// degree: transform to a `g`-orthonormal coframe, star by blade
    /// complement signs there, and transform back.
    pub fn hodge_star(&self, a: &KForm<f64>) -> Result<KForm<f64>, G2Error> {
        if a.dim() != 7 || a.degree() > 7 {
            return Err(G2Error::WrongShape {
                expected: a.degree().min(7),
                expected_dim: 7,
                degree: a.degree(),
                dim: a.dim(),
            });
        }
        let flat = pullback(a, &self.to_flat);
        let mut starred = KForm::zero(7, 7 - a.degree());
        for (blade, coeff) in flat.terms() {
            let comp = blade.complement(7);
            let (_, sign) = blade.wedge(comp).expect("complement is disjoint");
            let c = coeff * f64::from(sign) * f64::from(self.orientation);
            starred = starred
                .add(&KForm::basis(7, comp).scale(&c))
                .expect("degrees agree");
        }
        Ok(pullback(&starred, &self.from_flat))
    }

    /// Independent evaluation of the same star through Gram minors of
    /// `g⁻¹`: `(∗a)_{I^c} = ε(I,I^c)·orientation·λ·Σ_J a_J det (g⁻¹)_{I,J}`.
    /// Exists so the two routes can cross-check each other in tests.
    pub fn hodge_star_via_gram(&self, a: &KForm<f64>) -> Result<KForm<f64>, G2Error> {
        if a.dim() != 7 || a.degree() > 7 {
            return Err(G2Error::WrongShape {
                expected: a.degree().min(7),
                expected_dim: 7,
                degree: a.degree(),
                dim: a.dim(),
            });
        }
        let k = a.degree();
        let mut out = KForm::zero(7, 7 - k);
        for target in Blade::enumerate(7, k) {
            let rows: Vec<u8> = target.indices().collect();
            let mut total = 0.0;
            for (source, coeff) in a.terms() {
                let cols: Vec<u8> = source.indices().collect();
                let mut minor = DMatrix::zeros(rows.len(), cols.len());
                for (r, &i) in rows.iter().enumerate() {
                    for (c, &j) in cols.iter().enumerate() {
                        minor[(r, c)] = self.metric_inv[((i - 1) as usize, (j - 1) as usize)];
                    }
                }
                let det = if rows.is_empty() { 1.0 } else { minor.determinant() };
                total += coeff * det;
            }
            if total == 0.0 {
                continue;
            }
            let comp = target.complement(7);
            let (_, sign) = target.wedge(comp).expect("complement is disjoint");
            let c = total * f64::from(sign) * f64::from(self.orientation) * self.lam;
            out = out
                .add(&KForm::basis(7, comp).scale(&c))
                .expect("degrees agree");
        }
        Ok(out)
    }
}

/// Residual norms of the torsion conditions.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TorsionResiduals {
    pub dphi: f64,
    pub dstar_phi: f64,
}

/// Torsion classification of an invariant G2-structure on a Lie algebra.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TorsionReport {
    /// `dφ = 0` within `REL_TOL·‖φ‖`.
    pub closed: bool,
    /// `d(∗φ) = 0` within `REL_TOL·‖∗φ‖`; never tested via a codifferential.
    pub coclosed: bool,
    /// Both conditions hold.
    pub parallel: bool,
    pub residuals: TorsionResiduals,
}

/// Classifies the torsion of φ on `L` by the residuals of `dφ` and `d(∗φ)`.
pub fn torsion_report(l: &LieAlgebra, phi: &KForm<f64>) -> Result<TorsionReport, G2Error> {
    if l.dim() != 7 {
        return Err(G2Error::AlgebraDim { dim: l.dim() });
    }
    let structure = metric_from_phi(phi)?;
    let dphi = l.d_float(phi)?;
    let star_phi = structure.hodge_star(phi)?;
    let dstar = l.d_float(&star_phi)?;
    let closed = dphi.max_norm() < tol::REL_TOL * phi.max_norm();
    let coclosed = dstar.max_norm() < tol::REL_TOL * star_phi.max_norm();
    Ok(TorsionReport {
        closed,
        coclosed,
        parallel: closed && coclosed,
        residuals: TorsionResiduals {
            dphi: dphi.max_norm(),
            dstar_phi: dstar.max_norm(),
        },
    })
}

/// Max-norm residual of the contraction identity `ι_Xφ ∧ φ = 2 ∗(ι_Xφ)`,
/// which holds for every X on every positive φ under this crate's
/// conventions (φ₀ ↦ identity metric, `det B > 0` normalization). It drives
/// the harmonicity of `ι_Xφ` for symmetries of closed structures.
pub fn karigiannis_identity_residual(g: &G2Structure, x: &Vector<f64>) -> f64 {
    let iota = g.phi().interior(x).expect("degree 3 contracts");
    let lhs = iota.wedge(g.phi()).expect("same space");
    let star = g.hodge_star(&iota).expect("2-form stars");
    lhs.sub(&star.scale(&2.0))
        .expect("both are 5-forms")
        .max_norm()
}

/// Lifts SU(3)-structure data `(ω, ψ)` on ℝ⁶ to the 3-form `ω ∧ e⁷ + ψ`
/// on ℝ⁷.
pub fn su3_lift<S: Scalar>(omega: &KForm<S>, psi: &KForm<S>) -> Result<KForm<S>, G2Error> {
    if omega.dim() != 6 || omega.degree() != 2 {
        return Err(G2Error::WrongShape {
            expected: 2,
            expected_dim: 6,
            degree: omega.degree(),
            dim: omega.dim(),
        });
    }
    if psi.dim() != 6 || psi.degree() != 3 {
        return Err(G2Error::WrongShape {
            expected: 3,
            expected_dim: 6,
            degree: psi.degree(),
            dim: psi.dim(),
        });
    }
    // Appending e^7 to a blade of lower indices costs no sign, and ψ's
    // blades re-embed unchanged.
    let lifted = omega
        .terms()
        .map(|(b, c)| (Blade::from_mask(b.mask() | 0b100_0000), c.clone()))
        .chain(psi.terms().map(|(b, c)| (b, c.clone())));
    Ok(KForm::from_terms(7, 3, lifted)?)
}

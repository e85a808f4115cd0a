//! Infinitesimal symmetries of invariant G2-structures, the theorem-bound
//! verifier, and a seeded search for closed positive 3-forms.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::blade::Blade;
use crate::form::{ExteriorError, KForm, Vector};
use crate::g2::{
    bilinear_from_phi, metric_from_phi, torsion_report, G2Error, TorsionReport,
};
use crate::liealg::{LieAlgebra, LieAlgebraError};
use crate::ratmat::{primitive_integer, RatMat};
use crate::scalar::{Rat, Scalar};
use crate::tol;

/// Errors raised by the symmetry layer.
#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Lie(#[from] LieAlgebraError),
    #[error(transparent)]
    G2(#[from] G2Error),
    #[error("phi is not closed (residual {residual:.3e})")]
    NotClosed { residual: f64 },
    #[error("theorem hypothesis violated: non-parallel required")]
    Parallel,
    #[error("no positive closed 3-form found after {attempts} attempts (dim Z3 = {kernel_dim})")]
    NotFound { attempts: u32, kernel_dim: usize },
}

/// The symmetry algebra `s(φ) = {X : L_Xφ = 0}` of a positive 3-form.
#[derive(Clone, Debug)]
pub struct SymmetryAlgebra {
    basis: Vec<Vector<f64>>,
    basis_exact: Option<Vec<Vector<Rat>>>,
    abelian: bool,
    f_injective: bool,
    harmonic_images: Vec<KForm<f64>>,
}

impl SymmetryAlgebra {
    /// Dimension of `s(φ)`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Float basis of `s(φ)`, each vector scaled to unit max-norm.
    pub fn basis(&self) -> &[Vector<f64>] {
        &self.basis
    }

    /// Exact basis when φ was rational, as primitive integer vectors.
    pub fn basis_exact(&self) -> Option<&[Vector<Rat>]> {
        self.basis_exact.as_deref()
    }

    /// True when every pair of basis vectors brackets to zero.
    pub fn abelian(&self) -> bool {
        self.abelian
    }

    /// True when the 2-forms `ι_Xφ` over the basis are linearly independent.
    pub fn f_injective(&self) -> bool {
        self.f_injective
    }

    /// The 2-forms `ι_Xφ` for each float basis vector.
    pub fn harmonic_images(&self) -> &[KForm<f64>] {
        &self.harmonic_images
    }
}

/// Lie derivative `L_Xφ = ι_X(dφ) + d(ι_Xφ)` on invariant forms (exact).
pub fn lie_derivative_phi(
    l: &LieAlgebra,
    phi: &KForm<Rat>,
    x: &Vector<Rat>,
) -> Result<KForm<Rat>, SymmetryError> {
    let first = l.d(phi)?.interior(x)?;
    let second = l.d(&phi.interior(x)?)?;
    Ok(first.add(&second)?)
}

/// Lie derivative `L_Xφ = ι_X(dφ) + d(ι_Xφ)` on invariant forms (float).
pub fn lie_derivative_phi_float(
    l: &LieAlgebra,
    phi: &KForm<f64>,
    x: &Vector<f64>,
) -> Result<KForm<f64>, SymmetryError> {
    let first = l.d_float(phi)?.interior(x)?;
    let second = l.d_float(&phi.interior(x)?)?;
    Ok(first.add(&second)?)
}

fn require_dim7(l: &LieAlgebra) -> Result<(), SymmetryError> {
    if l.dim() != 7 {
        return Err(SymmetryError::G2(G2Error::AlgebraDim { dim: l.dim() }));
    }
    Ok(())
}

/// Solves `L_Xφ = 0` exactly over the rationals. φ must be positive on `L`;
/// the basis is returned as primitive integer vectors plus a normalized
/// float copy, with the abelian and F-injectivity flags computed exactly.
pub fn symmetry_algebra(l: &LieAlgebra, phi: &KForm<Rat>) -> Result<SymmetryAlgebra, SymmetryError> {
    require_dim7(l)?;
    let phi_float = phi.to_float();
    metric_from_phi(&phi_float)?;

    // One column per basis direction: the 35 Λ³-coefficients of L_{e_j}φ.
    let rows = Blade::enumerate(7, 3);
    let mut columns = Vec::with_capacity(7);
    for j in 1..=7 {
        let image = lie_derivative_phi(l, phi, &Vector::basis(7, j))?;
        columns.push(rows.iter().map(|b| image.coefficient(*b)).collect());
    }
    let system = RatMat::from_columns(rows.len(), &columns);
    let kernel = system.nullspace();

    let basis_exact: Vec<Vector<Rat>> = kernel
        .iter()
        .map(|v| Vector::from_components(primitive_integer(v)))
        .collect();
    let basis: Vec<Vector<f64>> = basis_exact
        .iter()
        .map(|v| {
            let f = v.to_float();
            let n = f.max_norm();
            f.scale(&(1.0 / n))
        })
        .collect();

    let zero = Vector::<Rat>::zero(7);
    let abelian = basis_exact
        .iter()
        .enumerate()
        .all(|(i, x)| basis_exact[i + 1..].iter().all(|y| l.bracket(x, y) == zero));

    // Exact rank of the images ι_Xφ decides injectivity of F.
    let two_blades = Blade::enumerate(7, 2);
    let image_cols: Vec<Vec<Rat>> = basis_exact
        .iter()
        .map(|x| {
            let img = phi.interior(x).expect("degree 3 contracts");
            two_blades.iter().map(|b| img.coefficient(*b)).collect()
        })
        .collect();
    let f_injective =
        RatMat::from_columns(two_blades.len(), &image_cols).rank() == basis_exact.len();

    let harmonic_images = basis
        .iter()
        .map(|x| phi_float.interior(x).expect("degree 3 contracts"))
        .collect();

    Ok(SymmetryAlgebra {
        basis,
        basis_exact: Some(basis_exact),
        abelian,
        f_injective,
        harmonic_images,
    })
}

/// Solves `L_Xφ = 0` in floats via an SVD nullspace with relative singular
/// value threshold [`tol::REL_TOL`]. For rational φ prefer
/// [`symmetry_algebra`], which decides the dimension exactly.
pub fn symmetry_algebra_float(
    l: &LieAlgebra,
    phi: &KForm<f64>,
) -> Result<SymmetryAlgebra, SymmetryError> {
    require_dim7(l)?;
    metric_from_phi(phi)?;

    let rows = Blade::enumerate(7, 3);
    let mut system = DMatrix::zeros(rows.len(), 7);
    for j in 1..=7 {
        let image = lie_derivative_phi_float(l, phi, &Vector::basis(7, j))?;
        for (r, blade) in rows.iter().enumerate() {
            system[(r, (j - 1) as usize)] = image.coefficient(*blade);
        }
    }
    let svd = system.svd(true, true);
    let max_sv = svd.singular_values.iter().fold(0.0f64, |m, s| m.max(*s));
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > tol::REL_TOL * max_sv.max(1.0))
        .count();
    let v_t = svd.v_t.expect("requested");
    let basis: Vec<Vector<f64>> = (rank..v_t.nrows())
        .map(|r| {
            let comps: Vec<f64> = (0..7).map(|c| v_t[(r, c)]).collect();
            let v = Vector::from_components(comps);
            let n = v.max_norm();
            v.scale(&(1.0 / n))
        })
        .collect();

    let abelian = basis.iter().enumerate().all(|(i, x)| {
        basis[i + 1..]
            .iter()
            .all(|y| l.bracket_float(x, y).max_norm() < tol::REL_TOL)
    });

    let harmonic_images: Vec<KForm<f64>> = basis
        .iter()
        .map(|x| phi.interior(x).expect("degree 3 contracts"))
        .collect();

    let two_blades = Blade::enumerate(7, 2);
    let mut image_mat = DMatrix::zeros(two_blades.len(), basis.len());
    for (c, img) in harmonic_images.iter().enumerate() {
        for (r, blade) in two_blades.iter().enumerate() {
            image_mat[(r, c)] = img.coefficient(*blade);
        }
    }
    let f_injective = if basis.is_empty() {
        true
    } else {
        image_mat.rank(tol::REL_TOL) == basis.len()
    };

    Ok(SymmetryAlgebra {
        basis,
        basis_exact: None,
        abelian,
        f_injective,
        harmonic_images,
    })
}

/// Residual norms of the harmonicity chain over the symmetry basis.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HarmonicResiduals {
    /// `max_X ‖d(ι_Xφ)‖`.
    pub max_d_iota: f64,
    /// `max_X ‖d(∗ι_Xφ)‖`.
    pub max_dstar_iota: f64,
}

/// Instance check of the theorem bounds for one closed non-parallel
/// positive φ. All five booleans must hold for the instance to confirm the
/// statement; `dim_s` is the observed value, with no sharpness claim.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub witness_phi: String,
    pub dim_s: usize,
    pub b2: usize,
    pub abelian: bool,
    pub bound_b2_ok: bool,
    pub bound_6_ok: bool,
    pub f_injective: bool,
    pub harmonic_ok: bool,
    pub harmonic_residuals: HarmonicResiduals,
    pub torsion: TorsionReport,
    pub disclaimer: String,
}

/// Fixed wording attached to every [`VerificationReport`].
pub const VERIFIER_DISCLAIMER: &str = "instance check of the invariant symmetry algebra s(phi) \
for this specific witness; not a proof of the general statement";

/// Verifies the theorem bounds on a closed non-parallel positive φ:
/// `s(φ)` abelian, `dim s(φ) ≤ min(6, b₂)`, F injective, and the images
/// `ι_Xφ` closed and `∗`-coclosed.
///
/// Fails when φ is not closed or is parallel (hypothesis violations).
pub fn verify_theorem_bounds(
    l: &LieAlgebra,
    phi: &KForm<Rat>,
) -> Result<VerificationReport, SymmetryError> {
    require_dim7(l)?;
    let phi_float = phi.to_float();
    let torsion = torsion_report(l, &phi_float)?;
    if !torsion.closed {
        return Err(SymmetryError::NotClosed {
            residual: torsion.residuals.dphi,
        });
    }
    if torsion.parallel {
        return Err(SymmetryError::Parallel);
    }

    let sym = symmetry_algebra(l, phi)?;
    let structure = metric_from_phi(&phi_float)?;
    let mut max_d_iota: f64 = 0.0;
    let mut max_dstar_iota: f64 = 0.0;
    for image in sym.harmonic_images() {
        max_d_iota = max_d_iota.max(l.d_float(image)?.max_norm());
        let star = structure.hodge_star(image)?;
        max_dstar_iota = max_dstar_iota.max(l.d_float(&star)?.max_norm());
    }
    let harmonic_ok =
        max_d_iota < tol::CLOSED_IMAGE_TOL && max_dstar_iota < tol::COCLOSED_IMAGE_TOL;

    let b2 = l.betti().b(2);
    let dim_s = sym.dim();
    Ok(VerificationReport {
        witness_phi: phi_float.to_string(),
        dim_s,
        b2,
        abelian: sym.abelian(),
        bound_b2_ok: dim_s <= b2,
        bound_6_ok: dim_s <= 6,
        f_injective: sym.f_injective(),
        harmonic_ok,
        harmonic_residuals: HarmonicResiduals {
            max_d_iota,
            max_dstar_iota,
        },
        torsion,
        disclaimer: VERIFIER_DISCLAIMER.to_string(),
    })
}

/// Searches `Z³ = ker(d: Λ³ → Λ⁴)` for a positive 3-form: each attempt
/// draws integer coefficients in `[-3, 3]` over an exact kernel basis from
/// its own PRNG stream `(seed, attempt)`, and the lowest-index attempt whose
/// `B` is positive definite wins, which keeps the result deterministic even
/// if attempts run concurrently. Borderline candidates (smallest eigenvalue
/// in `[0, BORDERLINE_EIG]`) are rejected.
///
/// Returns `NotFound` with the kernel dimension after exhausting `attempts`;
/// this never proves non-existence.
pub fn find_closed_g2(
    l: &LieAlgebra,
    seed: u64,
    attempts: u32,
) -> Result<KForm<Rat>, SymmetryError> {
    require_dim7(l)?;
    let kernel = l.closed_forms_basis(3);
    if kernel.is_empty() {
        return Err(SymmetryError::NotFound {
            attempts: 0,
            kernel_dim: 0,
        });
    }
    for attempt in 0..attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(attempt));
        let mut candidate = KForm::zero(7, 3);
        for basis_form in &kernel {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                candidate = candidate
                    .add(&basis_form.scale(&Rat::from_int(c)))
                    .expect("kernel forms share the space");
            }
        }
        if candidate.is_zero() {
            continue;
        }
        let Ok((b, _)) = bilinear_from_phi(&candidate.to_float()) else {
            continue;
        };
        let min_eig = b
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, x| m.min(*x));
        if min_eig > tol::BORDERLINE_EIG {
            return Ok(candidate);
        }
    }
    Err(SymmetryError::NotFound {
        attempts,
        kernel_dim: kernel.len(),
    })
}

//! Exterior algebra, Lie algebra cohomology, and G2-structures in dimension
//! seven.
//!
//! The crate is organized in layers:
//!
//! - [`blade`] and [`form`]: sparse exterior algebra over exchangeable
//!   coefficient flavors (exact rationals, floats), with a text format in
//!   [`parse`].
//! - [`ratmat`]: exact rational rank and nullspace computations.
//! - [`liealg`]: Lie algebras given by coframe differentials, the
//!   Chevalley–Eilenberg complex, and Betti numbers.
//! - [`g2`]: positive 3-forms, the induced metric, volume, and Hodge star,
//!   plus torsion classification of invariant structures.
//! - [`symmetry`]: infinitesimal symmetries of a structure, bound checks,
//!   and a seeded random search for closed positive 3-forms.
//! - [`torus`]: coefficient fields on the 7-torus, with finite-difference
//!   witnesses for non-parallel closed structures.
//!
//! All tolerances live in [`tol`].

pub mod blade;
pub mod form;
pub mod g2;
pub mod liealg;
pub mod parse;
pub mod ratmat;
pub mod scalar;
pub mod symmetry;
pub mod tol;
pub mod torus;

pub use blade::Blade;
pub use form::{ExteriorError, KForm, Vector};
pub use g2::{
    bilinear_from_phi, karigiannis_identity_residual, metric_from_phi, pullback, standard_phi,
    su3_lift, torsion_report, G2Error, G2Structure, Mat7, TorsionReport,
};
pub use liealg::{BettiVector, LieAlgebra, LieAlgebraError};
pub use parse::parse_form;
pub use scalar::{Rat, Scalar};
pub use symmetry::{
    find_closed_g2, lie_derivative_phi, lie_derivative_phi_float, symmetry_algebra,
    symmetry_algebra_float, verify_theorem_bounds, SymmetryAlgebra, SymmetryError,
    VerificationReport,
};
pub use torus::{
    build_torus_example, coordinate_symmetry_count, fd_d_of_derived, field_d, torus_report,
    CoeffFn, FieldForm, Point, TorusError, TorusReport,
};

//! Central numeric tolerances.
//!
//! Every floating point comparison in the crate routes through a constant
//! defined here, so the tolerance policy can be audited in one place.
//! Exact-rational code paths never consult these.

/// Relative tolerance for float residuals: a quantity counts as zero when it
/// is below `REL_TOL` times the scale of its inputs.
pub const REL_TOL: f64 = 1e-9;

/// A 3-form is degenerate when `|det B|` falls below this times `scale^7`,
/// where `scale` is the largest absolute coefficient of the form.
pub const DEGENERATE_DET: f64 = 1e-12;

/// Candidate forms whose smallest `B`-eigenvalue lies in `[0, BORDERLINE_EIG]`
/// are rejected by the random search rather than accepted as positive.
pub const BORDERLINE_EIG: f64 = 1e-10;

/// Absolute bound on `‖d(ι_Xφ)‖` for a symmetry of a closed structure.
pub const CLOSED_IMAGE_TOL: f64 = 1e-9;

/// Absolute bound on `‖d(∗ι_Xφ)‖` for a symmetry of a closed structure.
/// Looser than [`CLOSED_IMAGE_TOL`] because the star compounds rounding.
pub const COCLOSED_IMAGE_TOL: f64 = 1e-8;

/// Coefficients with absolute value below this are dropped by
/// `KForm::normalize_float`.
pub const FLOAT_NORMALIZE_EPS: f64 = 1e-14;

/// Central-difference step for all finite-difference derivatives.
pub const FD_STEP: f64 = 1e-5;

/// Gate for registering a coefficient function: supplied gradient must match
/// a central difference within this absolute tolerance.
pub const GRAD_GATE_TOL: f64 = 1e-6;

/// Gate for registering a coefficient function: values at `x` and `x + e_i`
/// must agree within this absolute tolerance.
pub const PERIODICITY_TOL: f64 = 1e-12;

/// A torus field counts as closed when `‖dφ‖` stays below this on the grid.
pub const FIELD_CLOSED_TOL: f64 = 1e-8;

/// A torus structure counts as non-parallel when the sampled `‖d(∗φ)‖`
/// exceeds this witness threshold somewhere on the grid.
pub const NONPARALLEL_WITNESS: f64 = 1e-3;

/// A coordinate field `∂_i` counts as a symmetry of a torus field when every
/// coefficient derivative in direction `i` stays below this on the grid.
pub const SYMMETRY_FIELD_TOL: f64 = 1e-8;

//! Forms with function coefficients on the 7-torus.
//!
//! Coefficients are pairs of closures (value, gradient) registered through
//! gates that enforce gradient consistency and 1-periodicity. The analytic
//! exterior derivative uses the supplied gradients; derived quantities with
//! no analytic coefficients (like ∗φ) are differentiated by central finite
//! differences.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::blade::Blade;
use crate::form::{ExteriorError, KForm};
use crate::g2::{metric_from_phi, G2Error};
use crate::tol;

/// A point on the 7-torus in `[0,1)^7` coordinates (any reals accepted).
pub type Point = [f64; 7];

/// Errors raised by the torus field layer.
#[derive(Debug, Error)]
pub enum TorusError {
    #[error("supplied gradient component {component} disagrees with finite differences: supplied {supplied:.6e}, measured {measured:.6e}")]
    GradientMismatch {
        component: u8,
        supplied: f64,
        measured: f64,
    },
    #[error("not 1-periodic in coordinate {coordinate} (drift {drift:.3e})")]
    NotPeriodic { coordinate: u8, drift: f64 },
    #[error("coefficient must depend only on x{expected}; gradient is nonzero in x{found}")]
    WrongVariable { expected: u8, found: u8 },
    #[error("blade {blade} does not fit a {degree}-form on the 7-torus")]
    InvalidBlade { blade: String, degree: u8 },
    #[error("duplicate blade {blade}")]
    DuplicateBlade { blade: String },
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    G2(#[from] G2Error),
}

fn offset(p: &Point, coord: usize, h: f64) -> Point {
    let mut q = *p;
    q[coord] += h;
    q
}

fn gate_rng() -> ChaCha8Rng {
    // Fixed seed: registration gates must be deterministic.
    ChaCha8Rng::seed_from_u64(0x6732_6761_7465)
}

type EvalFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&Point) -> [f64; 7] + Send + Sync>;

/// A smooth 1-periodic coefficient function with caller-supplied partials.
#[derive(Clone)]
pub struct CoeffFn {
    eval: EvalFn,
    grad: GradFn,
}

impl fmt::Debug for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffFn")
    }
}

impl CoeffFn {
    /// Registers a coefficient function. Two gates run at 100 seeded random
    /// points: the gradient must match central differences (step
    /// [`tol::FD_STEP`], tolerance [`tol::GRAD_GATE_TOL`]) and the value must
    /// be 1-periodic in every coordinate within [`tol::PERIODICITY_TOL`].
    pub fn new(
        eval: impl Fn(&Point) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&Point) -> [f64; 7] + Send + Sync + 'static,
    ) -> Result<CoeffFn, TorusError> {
        let f = CoeffFn {
            eval: Arc::new(eval),
            grad: Arc::new(grad),
        };
        let mut rng = gate_rng();
        for _ in 0..100 {
            let p: Point = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
            let g = f.grad(&p);
            for (i, gi) in g.iter().enumerate() {
                let fd = (f.eval(&offset(&p, i, tol::FD_STEP))
                    - f.eval(&offset(&p, i, -tol::FD_STEP)))
                    / (2.0 * tol::FD_STEP);
                if (fd - gi).abs() > tol::GRAD_GATE_TOL {
                    return Err(TorusError::GradientMismatch {
                        component: (i + 1) as u8,
                        supplied: *gi,
                        measured: fd,
                    });
                }
                let drift = (f.eval(&offset(&p, i, 1.0)) - f.eval(&p)).abs();
                if drift > tol::PERIODICITY_TOL {
                    return Err(TorusError::NotPeriodic {
                        coordinate: (i + 1) as u8,
                        drift,
                    });
                }
            }
        }
        Ok(f)
    }

    /// The constant function.
    pub fn constant(c: f64) -> CoeffFn {
        CoeffFn {
            eval: Arc::new(move |_| c),
            grad: Arc::new(|_| [0.0; 7]),
        }
    }

    /// `amplitude · sin(2π x^axis)` (1-based axis) with its exact gradient.
    pub fn scaled_sin(axis: u8, amplitude: f64) -> CoeffFn {
        assert!((1..=7).contains(&axis), "axis out of range");
        let i = (axis - 1) as usize;
        let tau = std::f64::consts::TAU;
        CoeffFn {
            eval: Arc::new(move |p| amplitude * (tau * p[i]).sin()),
            grad: Arc::new(move |p| {
                let mut g = [0.0; 7];
                g[i] = amplitude * tau * (tau * p[i]).cos();
                g
            }),
        }
    }

    /// Wraps a derived value whose gradient is taken by central finite
    /// differences; used for coefficients produced by [`field_d`], which
    /// have analytic first derivatives but no supplied second derivatives.
    fn derived(eval: EvalFn) -> CoeffFn {
        let grad_eval = eval.clone();
        CoeffFn {
            eval,
            grad: Arc::new(move |p| {
                std::array::from_fn(|i| {
                    (grad_eval(&offset(p, i, tol::FD_STEP))
                        - grad_eval(&offset(p, i, -tol::FD_STEP)))
                        / (2.0 * tol::FD_STEP)
                })
            }),
        }
    }

    /// Value at a point.
    pub fn eval(&self, p: &Point) -> f64 {
        (self.eval)(p)
    }

    /// Gradient at a point.
    pub fn grad(&self, p: &Point) -> [f64; 7] {
        (self.grad)(p)
    }

    /// Pointwise sum with analytic gradients.
    pub fn add(&self, other: &CoeffFn) -> CoeffFn {
        let (ea, eb) = (self.eval.clone(), other.eval.clone());
        let (ga, gb) = (self.grad.clone(), other.grad.clone());
        CoeffFn {
            eval: Arc::new(move |p| ea(p) + eb(p)),
            grad: Arc::new(move |p| {
                let (a, b) = (ga(p), gb(p));
                std::array::from_fn(|i| a[i] + b[i])
            }),
        }
    }

    /// Pointwise scalar multiple.
    pub fn scale(&self, c: f64) -> CoeffFn {
        let e = self.eval.clone();
        let g = self.grad.clone();
        CoeffFn {
            eval: Arc::new(move |p| c * e(p)),
            grad: Arc::new(move |p| {
                let a = g(p);
                std::array::from_fn(|i| c * a[i])
            }),
        }
    }

    /// `exp(u - v)` with the chain-rule gradient, still analytic.
    fn exp_diff(u: &CoeffFn, v: &CoeffFn) -> CoeffFn {
        let (eu, ev) = (u.eval.clone(), v.eval.clone());
        let (gu, gv) = (u.grad.clone(), v.grad.clone());
        let value = {
            let (eu, ev) = (eu.clone(), ev.clone());
            move |p: &Point| (eu(p) - ev(p)).exp()
        };
        let value_for_grad = value.clone();
        CoeffFn {
            eval: Arc::new(value),
            grad: Arc::new(move |p| {
                let e = value_for_grad(p);
                let (a, b) = (gu(p), gv(p));
                std::array::from_fn(|i| e * (a[i] - b[i]))
            }),
        }
    }

    /// `Σ sign_k · ∂_{axis_k} f_k`: the coefficient produced by `field_d`.
    /// Its value is analytic (from the parents' gradients); its own gradient
    /// is finite-difference derived.
    fn from_partials(parts: Vec<(f64, u8, CoeffFn)>) -> CoeffFn {
        CoeffFn::derived(Arc::new(move |p: &Point| {
            parts
                .iter()
                .map(|(sign, axis, f)| sign * f.grad(p)[(*axis - 1) as usize])
                .sum()
        }))
    }
}

/// A differential form on the 7-torus with [`CoeffFn`] coefficients.
#[derive(Clone, Debug)]
pub struct FieldForm {
    degree: u8,
    terms: BTreeMap<Blade, CoeffFn>,
}

impl FieldForm {
    /// The zero field of the given degree.
    pub fn zero(degree: u8) -> FieldForm {
        FieldForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a field from `(blade, coefficient)` pairs; blades must be
    /// distinct and of the right degree.
    pub fn from_terms(
        degree: u8,
        pairs: impl IntoIterator<Item = (Blade, CoeffFn)>,
    ) -> Result<FieldForm, TorusError> {
        let mut terms = BTreeMap::new();
        for (blade, f) in pairs {
            if blade.degree() != degree || blade.max_index() > 7 {
                return Err(TorusError::InvalidBlade {
                    blade: blade.to_string(),
                    degree,
                });
            }
            if terms.insert(blade, f).is_some() {
                return Err(TorusError::DuplicateBlade {
                    blade: blade.to_string(),
                });
            }
        }
        Ok(FieldForm { degree, terms })
    }

    /// Form degree.
    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// Stored terms in ascending-mask order.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, &CoeffFn)> {
        self.terms.iter().map(|(b, f)| (*b, f))
    }

    /// Evaluates to a numeric form at a point, dropping exact zeros only.
    pub fn eval_at(&self, p: &Point) -> KForm<f64> {
        KForm::from_terms(7, self.degree, self.terms().map(|(b, f)| (b, f.eval(p))))
            .expect("blades validated at construction")
    }
}

/// Analytic exterior derivative: `d(f·e^I) = Σ_i (∂_i f)·e^i ∧ e^I` using
/// the registered gradients.
pub fn field_d(a: &FieldForm) -> FieldForm {
    let mut parts: BTreeMap<Blade, Vec<(f64, u8, CoeffFn)>> = BTreeMap::new();
    for (blade, f) in a.terms() {
        for i in 1..=7u8 {
            if blade.contains(i) {
                continue;
            }
            let ei = Blade::from_indices(&[i], 7).expect("single index");
            let (merged, sign) = ei.wedge(blade).expect("disjoint by the check above");
            parts
                .entry(merged)
                .or_default()
                .push((f64::from(sign), i, f.clone()));
        }
    }
    let terms = parts
        .into_iter()
        .map(|(blade, list)| (blade, CoeffFn::from_partials(list)));
    FieldForm::from_terms(a.degree() + 1, terms).expect("wedge blades are valid")
}

/// The structured torus example: `ω = dx^{14} + dx^{25} + dx^{36}`,
/// `ψ = -e^{λ₃} dx^{126} + e^{λ₂} dx^{135} - e^{λ₁} dx^{234} + dx^{456}`
/// with `λ₁ = b - c`, `λ₂ = c - a`, `λ₃ = a - b`, and the lifted 3-form
/// `φ = ω ∧ dx⁷ + ψ`.
///
/// `a`, `b`, `c` must depend only on `x¹`, `x²`, `x³` respectively, which is
/// probed through their gradients at seeded random points.
pub fn build_torus_example(
    a: &CoeffFn,
    b: &CoeffFn,
    c: &CoeffFn,
) -> Result<(FieldForm, FieldForm, FieldForm), TorusError> {
    for (f, expected) in [(a, 1u8), (b, 2), (c, 3)] {
        let mut rng = gate_rng();
        for _ in 0..30 {
            let p: Point = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
            let g = f.grad(&p);
            for (i, gi) in g.iter().enumerate() {
                if (i + 1) as u8 != expected && gi.abs() > tol::GRAD_GATE_TOL {
                    return Err(TorusError::WrongVariable {
                        expected,
                        found: (i + 1) as u8,
                    });
                }
            }
        }
    }

    let lam1_exp = CoeffFn::exp_diff(b, c);
    let lam2_exp = CoeffFn::exp_diff(c, a);
    let lam3_exp = CoeffFn::exp_diff(a, b);

    let bl = |ix: &[u8]| Blade::from_indices(ix, 7).expect("valid indices");
    let one = CoeffFn::constant(1.0);

    let omega = FieldForm::from_terms(
        2,
        [
            (bl(&[1, 4]), one.clone()),
            (bl(&[2, 5]), one.clone()),
            (bl(&[3, 6]), one.clone()),
        ],
    )?;
    let psi = FieldForm::from_terms(
        3,
        [
            (bl(&[1, 2, 6]), lam3_exp.scale(-1.0)),
            (bl(&[1, 3, 5]), lam2_exp.clone()),
            (bl(&[2, 3, 4]), lam1_exp.scale(-1.0)),
            (bl(&[4, 5, 6]), one.clone()),
        ],
    )?;
    // φ = ω ∧ dx⁷ + ψ; appending index 7 costs no sign.
    let phi = FieldForm::from_terms(
        3,
        psi.terms()
            .map(|(b, f)| (b, f.clone()))
            .chain(omega.terms().map(|(b, f)| {
                (Blade::from_mask(b.mask() | 0b100_0000), f.clone())
            })),
    )?;
    Ok((omega, psi, phi))
}

/// Central-difference exterior derivative of a derived (non-analytic) form:
/// `d ≈ Σ_i e^i ∧ (sampler(p + h·e_i) - sampler(p - h·e_i)) / 2h`.
pub fn fd_d_of_derived(
    sampler: &dyn Fn(&Point) -> KForm<f64>,
    p: &Point,
    h: f64,
) -> KForm<f64> {
    let degree = sampler(p).degree();
    let mut out = KForm::zero(7, degree + 1);
    for i in 0..7usize {
        let plus = sampler(&offset(p, i, h));
        let minus = sampler(&offset(p, i, -h));
        let diff = plus
            .sub(&minus)
            .expect("sampler degree is constant")
            .scale(&(1.0 / (2.0 * h)));
        let ei = KForm::basis(7, Blade::from_indices(&[(i + 1) as u8], 7).expect("valid"));
        out = out
            .add(&ei.wedge(&diff).expect("same space"))
            .expect("degrees agree");
    }
    out
}

fn grid_points(grid: usize) -> Vec<Point> {
    // The example's coefficients vary only in x¹, x², x³; sample those.
    let mut points = Vec::with_capacity(grid * grid * grid);
    for i in 0..grid {
        for j in 0..grid {
            for k in 0..grid {
                let mut p = [0.0; 7];
                p[0] = i as f64 / grid as f64;
                p[1] = j as f64 / grid as f64;
                p[2] = k as f64 / grid as f64;
                points.push(p);
            }
        }
    }
    points
}

/// Counts the coordinate fields `∂_1, …, ∂_7` that preserve φ:
/// `L_{∂_i}φ` is the coefficientwise partial `∂_i`, and `∂_i` counts as a
/// symmetry when its max-norm stays below [`tol::SYMMETRY_FIELD_TOL`] on a
/// `grid³` sample over `(x¹, x², x³)` (the coordinates the example's
/// coefficients can depend on). φ is assumed closed, so these are genuine
/// infinitesimal automorphisms.
pub fn coordinate_symmetry_count(phi: &FieldForm, grid: usize) -> usize {
    let points = grid_points(grid);
    (0..7usize)
        .filter(|&i| {
            points.iter().all(|p| {
                phi.terms()
                    .map(|(_, f)| f.grad(p)[i].abs())
                    .fold(0.0f64, f64::max)
                    < tol::SYMMETRY_FIELD_TOL
            })
        })
        .count()
}

/// Grid summary of one torus structure.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TorusReport {
    /// `max_p ‖dφ(p)‖` from the analytic derivative.
    pub closed_residual: f64,
    /// `max_p ‖(d∗φ)(p)‖` by finite differences; exceeding
    /// [`tol::NONPARALLEL_WITNESS`] certifies a non-parallel structure.
    pub nonparallel_witness: f64,
    /// Number of coordinate fields preserving φ.
    pub symmetry_count: usize,
    /// Closed and no torsion witness found.
    pub parallel: bool,
    pub grid: usize,
    pub h: f64,
}

/// Runs the full torus pipeline for `a = α_a sin(2πx¹)`,
/// `b = α_b sin(2πx²)`, `c = α_c sin(2πx³)`: closedness residual,
/// finite-difference torsion witness, and coordinate symmetry count.
pub fn torus_report(
    amp_a: f64,
    amp_b: f64,
    amp_c: f64,
    grid: usize,
    h: f64,
) -> Result<TorusReport, TorusError> {
    let a = CoeffFn::scaled_sin(1, amp_a);
    let b = CoeffFn::scaled_sin(2, amp_b);
    let c = CoeffFn::scaled_sin(3, amp_c);
    let (_, _, phi) = build_torus_example(&a, &b, &c)?;

    let points = grid_points(grid);
    let dphi = field_d(&phi);
    let mut closed_residual: f64 = 0.0;
    for p in &points {
        closed_residual = closed_residual.max(dphi.eval_at(p).max_norm());
        // Pointwise positivity is part of the contract; fail loudly here
        // rather than inside the star sampler below.
        metric_from_phi(&phi.eval_at(p))?;
    }

    let sampler = move |p: &Point| {
        let value = phi.eval_at(p);
        let structure = metric_from_phi(&value)
            .expect("positivity holds on the grid and is open, so it holds at FD offsets");
        structure
            .hodge_star(&value)
            .expect("3-forms star on dimension 7")
    };
    let mut witness: f64 = 0.0;
    for p in &points {
        witness = witness.max(fd_d_of_derived(&sampler, p, h).max_norm());
    }

    let symmetry_count = coordinate_symmetry_count(
        &build_torus_example(
            &CoeffFn::scaled_sin(1, amp_a),
            &CoeffFn::scaled_sin(2, amp_b),
            &CoeffFn::scaled_sin(3, amp_c),
        )?
        .2,
        grid,
    );

    Ok(TorusReport {
        closed_residual,
        nonparallel_witness: witness,
        symmetry_count,
        parallel: closed_residual < tol::FIELD_CLOSED_TOL && witness < tol::NONPARALLEL_WITNESS,
        grid,
        h,
    })
}

//! Acceptance gate: seven end-to-end criteria, one test each. Every test
//! prints a single `criterion N: PASS/FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`) and asserts it.

use std::process::Command;
use std::time::Instant;

use g2forms::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} — {detail}");
    assert!(ok, "criterion {n}: FAIL — {detail}");
}

fn random_positive_phi(rng: &mut ChaCha8Rng) -> KForm<f64> {
    loop {
        let pert = KForm::from_terms(
            7,
            3,
            Blade::enumerate(7, 3)
                .into_iter()
                .map(|b| (b, rng.gen_range(-0.25..0.25))),
        )
        .expect("valid blades");
        let phi = standard_phi::<f64>().add(&pert).expect("same degree");
        if metric_from_phi(&phi).is_ok() {
            return phi;
        }
    }
}

#[test]
fn criterion_1_table1_betti_numbers() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_g2forms"))
        .args(["table1", "--json"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let value: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("table1 emits valid JSON");
    let b2: Vec<u64> = value["outputs"]["rows"]
        .as_array()
        .map(|rows| rows.iter().filter_map(|r| r["b2"].as_u64()).collect())
        .unwrap_or_default();
    let ok = out.status.success()
        && b2 == [3, 3, 5, 6]
        && value["outputs"]["all_pass"] == true
        && elapsed.as_secs_f64() < 5.0;
    report(
        1,
        ok,
        &format!("table1 gives b2 = {b2:?} in {:.2}s (budget 5s)", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_2_standard_form_conventions() {
    let structure = metric_from_phi(&standard_phi::<f64>()).unwrap();
    let mut max_dev: f64 = (structure.vol_coeff() - 1.0).abs();
    for i in 0..7 {
        for j in 0..7 {
            let expect = if i == j { 1.0 } else { 0.0 };
            max_dev = max_dev.max((structure.metric()[(i, j)] - expect).abs());
        }
    }
    let identity_ok = max_dev < 1e-12;

    let mut max_rel: f64 = 0.0;
    for c in [2.0f64, 0.5, 3.7] {
        let scaled = metric_from_phi(&standard_phi::<f64>().scale(&c)).unwrap();
        let factor = c.powf(2.0 / 3.0);
        for i in 0..7 {
            for j in 0..7 {
                let expect = if i == j { factor } else { 0.0 };
                let got = scaled.metric()[(i, j)];
                max_rel = max_rel.max((got - expect).abs() / factor);
            }
        }
    }
    let scaling_ok = max_rel < 1e-9;
    report(
        2,
        identity_ok && scaling_ok,
        &format!(
            "g(φ₀) = identity and vol = 1 within {max_dev:.1e} (budget 1e-12); \
             scaling law within {max_rel:.1e} relative (budget 1e-9)"
        ),
    );
}

#[test]
fn criterion_3_contraction_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let phi = random_positive_phi(&mut rng);
        let structure = metric_from_phi(&phi).unwrap();
        for _ in 0..100 {
            let x = Vector::from_components((0..7).map(|_| rng.gen_range(-1.0..1.0)).collect());
            worst = worst.max(karigiannis_identity_residual(&structure, &x));
        }
    }
    report(
        3,
        worst < 1e-9,
        &format!(
            "contraction identity residual over 10 structures × 100 vectors: \
             max {worst:.2e} (budget 1e-9)"
        ),
    );
}

#[test]
fn criterion_4_harmonicity_chain() {
    let mut worst_d: f64 = 0.0;
    let mut worst_dstar: f64 = 0.0;
    for name in ["row1", "row2", "row3", "row4"] {
        let l = LieAlgebra::builtin(name).unwrap();
        let phi = find_closed_g2(&l, 0, 100_000).unwrap();
        let verification = verify_theorem_bounds(&l, &phi).unwrap();
        worst_d = worst_d.max(verification.harmonic_residuals.max_d_iota);
        worst_dstar = worst_dstar.max(verification.harmonic_residuals.max_dstar_iota);
    }
    report(
        4,
        worst_d < 1e-9 && worst_dstar < 1e-8,
        &format!(
            "rows 1-4: max ‖d(ιφ)‖ = {worst_d:.2e} (budget 1e-9), \
             max ‖d(∗ιφ)‖ = {worst_dstar:.2e} (budget 1e-8)"
        ),
    );
}

#[test]
fn criterion_5_theorem_instance_checks() {
    let mut ok = true;
    let mut details = Vec::new();
    for name in ["row1", "row2", "row3", "row4"] {
        let l = LieAlgebra::builtin(name).unwrap();
        let start = Instant::now();
        let found = find_closed_g2(&l, 0, 100_000);
        let row_ok = match found {
            Ok(phi) => match verify_theorem_bounds(&l, &phi) {
                Ok(v) => {
                    v.abelian && v.bound_b2_ok && v.bound_6_ok && v.f_injective && v.harmonic_ok
                }
                Err(_) => false,
            },
            Err(_) => false,
        };
        let elapsed = start.elapsed().as_secs_f64();
        ok &= row_ok && elapsed < 60.0;
        details.push(format!("{name} {:.2}s", elapsed));
    }
    report(
        5,
        ok,
        &format!(
            "search + bound checks on all four algebras ({}), budget 60s each",
            details.join(", ")
        ),
    );
}

#[test]
fn criterion_6_torus_pipeline() {
    let cases = [
        ((1.0, 1.0, 1.0), 4usize, false),
        ((1.0, 1.0, 0.0), 5, false),
        ((1.0, 0.0, 0.0), 6, false),
        ((0.0, 0.0, 0.0), 7, true),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for ((a, b, c), count, parallel) in cases {
        let r = torus_report(a, b, c, 8, tol::FD_STEP).unwrap();
        let case_ok = r.symmetry_count == count
            && r.closed_residual < 1e-8
            && r.parallel == parallel
            && if parallel {
                r.nonparallel_witness < tol::NONPARALLEL_WITNESS
            } else {
                r.nonparallel_witness > 1e-3
            };
        ok &= case_ok;
        details.push(format!("amps ({a},{b},{c}) → {}", r.symmetry_count));
    }
    report(
        6,
        ok,
        &format!(
            "symmetry counts {}; closed residual < 1e-8 and torsion witness thresholds hold",
            details.join(", ")
        ),
    );
}

#[test]
fn criterion_7_structural_suites() {
    // d² = 0, exactly, on every built-in algebra and degree.
    let mut d_squared_ok = true;
    for name in LieAlgebra::builtin_names() {
        let l = LieAlgebra::builtin(name).unwrap();
        for degree in 0..=7u8 {
            for blade in Blade::enumerate(7, degree) {
                let dd = l.d(&l.d(&KForm::<Rat>::basis(7, blade)).unwrap()).unwrap();
                d_squared_ok &= dd.is_zero();
            }
        }
    }

    // ∗∗ = id on all degrees over randomly perturbed positive structures.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut star_worst: f64 = 0.0;
    for _ in 0..20 {
        let phi = random_positive_phi(&mut rng);
        let structure = metric_from_phi(&phi).unwrap();
        for degree in 0..=7u8 {
            let a = KForm::from_terms(
                7,
                degree,
                Blade::enumerate(7, degree)
                    .into_iter()
                    .map(|b| (b, rng.gen_range(-1.0..1.0))),
            )
            .unwrap();
            let round = structure
                .hodge_star(&structure.hodge_star(&a).unwrap())
                .unwrap();
            let err = round.sub(&a).unwrap().max_norm() / a.max_norm().max(1.0);
            star_worst = star_worst.max(err);
        }
    }
    let star_ok = star_worst < 1e-9;

    // Poincaré duality on the four rows.
    let mut duality_ok = true;
    for name in ["row1", "row2", "row3", "row4"] {
        let betti = LieAlgebra::builtin(name).unwrap().betti().0;
        for k in 0..=7usize {
            duality_ok &= betti[k] == betti[7 - k];
        }
    }

    // Contraction Leibniz rule on 1000 random exact cases.
    let mut antiderivation_ok = true;
    let int = |rng: &mut ChaCha8Rng| <Rat as Scalar>::from_int(rng.gen_range(-9i64..=9));
    for _ in 0..1000 {
        let k = rng.gen_range(1u8..=3);
        let l = rng.gen_range(1u8..=3);
        let a = KForm::from_terms(
            7,
            k,
            Blade::enumerate(7, k).into_iter().map(|b| (b, int(&mut rng))),
        )
        .unwrap();
        let b = KForm::from_terms(
            7,
            l,
            Blade::enumerate(7, l).into_iter().map(|b| (b, int(&mut rng))),
        )
        .unwrap();
        let x = Vector::from_components((0..7).map(|_| int(&mut rng)).collect());
        let left = a.wedge(&b).unwrap().interior(&x).unwrap();
        let sign = <Rat as Scalar>::from_int(if k % 2 == 0 { 1 } else { -1 });
        let right = a
            .interior(&x)
            .unwrap()
            .wedge(&b)
            .unwrap()
            .add(&a.wedge(&b.interior(&x).unwrap()).unwrap().scale(&sign))
            .unwrap();
        antiderivation_ok &= left == right;
    }

    report(
        7,
        d_squared_ok && star_ok && duality_ok && antiderivation_ok,
        &format!(
            "d² = 0 exact: {d_squared_ok}; ∗∗ deviation {star_worst:.1e} (budget 1e-9); \
             duality: {duality_ok}; antiderivation ×1000: {antiderivation_ok}"
        ),
    );
}

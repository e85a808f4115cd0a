//! Command-line surface for the g2forms library.
//!
//! Every command prints one deterministic report (text by default, JSON
//! with `--json`). Exit codes: 0 success, 1 input or math error, 2 when
//! the seeded search exhausts its attempt budget.

mod report;

use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use g2forms::*;
use report::Report;

#[derive(Parser)]
#[command(
    name = "g2forms",
    version,
    about = "G2-structures on 7-dimensional Lie algebras and tori",
    propagate_version = true
)]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a Lie algebra given by its coframe differentials.
    Algebra {
        #[command(subcommand)]
        sub: AlgebraCmd,
    },
    /// G2-structure computations on a 7-dimensional Lie algebra.
    G2 {
        #[command(subcommand)]
        sub: G2Cmd,
    },
    /// Betti survey of the built-in algebras with expected b₂ values.
    Table1,
    /// Torus pipeline: closedness, torsion witness, and symmetry count.
    Torus(TorusArgs),
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Verify the Jacobi identity and report unimodularity.
    Check { input: String },
    /// Compute the full Betti vector of the invariant cohomology.
    Betti { input: String },
}

#[derive(Subcommand)]
enum G2Cmd {
    /// Metric, orientation, and volume induced by a positive 3-form.
    Metric(PhiArgs),
    /// Torsion classification: closed, coclosed, parallel.
    Torsion(PhiArgs),
    /// Symmetry algebra s(φ) of a structure.
    Symmetry(PhiArgs),
    /// Seeded random search for a closed positive 3-form.
    FindClosed(SearchArgs),
    /// Search (or take) a closed structure and check the symmetry bounds.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PhiArgs {
    /// Algebra: a literal tuple "(...)", @name or bare built-in name, or a
    /// file path (single tuple or one-entry catalog).
    #[arg(long)]
    algebra: String,
    /// 3-form in coframe notation; defaults to the standard φ₀.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    /// Algebra: a literal tuple "(...)", @name or bare built-in name, or a
    /// file path (single tuple or one-entry catalog).
    #[arg(long)]
    algebra: String,
    /// Seed for the deterministic search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Attempt budget before giving up with exit code 2.
    #[arg(long, default_value_t = 100_000)]
    attempts: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// Algebra: a literal tuple "(...)", @name or bare built-in name, or a
    /// file path (single tuple or one-entry catalog).
    #[arg(long)]
    algebra: String,
    /// 3-form to verify; when omitted, the seeded search provides one.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Seed for the search when --phi is omitted.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Attempt budget for the search when --phi is omitted.
    #[arg(long, default_value_t = 100_000)]
    attempts: u32,
}

#[derive(Args)]
struct TorusArgs {
    /// Amplitude of a(x¹) = α sin(2πx¹).
    #[arg(long, default_value_t = 1.0)]
    amp_a: f64,
    /// Amplitude of b(x²) = α sin(2πx²).
    #[arg(long, default_value_t = 1.0)]
    amp_b: f64,
    /// Amplitude of c(x³) = α sin(2πx³).
    #[arg(long, default_value_t = 1.0)]
    amp_c: f64,
    /// Sample points per varying coordinate.
    #[arg(long, default_value_t = 8)]
    grid: usize,
    /// Finite-difference step for the torsion witness.
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
}

enum CliError {
    Lie(LieAlgebraError),
    G2(G2Error),
    Symmetry(SymmetryError),
    Torus(TorusError),
    Exterior(ExteriorError),
    Io { path: String, err: std::io::Error },
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lie(e) => write!(f, "{e}"),
            CliError::G2(e) => write!(f, "{e}"),
            CliError::Symmetry(e) => write!(f, "{e}"),
            CliError::Torus(e) => write!(f, "{e}"),
            CliError::Exterior(e) => write!(f, "{e}"),
            CliError::Io { path, err } => write!(f, "cannot read {path}: {err}"),
            CliError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Symmetry(SymmetryError::NotFound { .. }) => 2,
            _ => 1,
        }
    }
}

impl From<LieAlgebraError> for CliError {
    fn from(e: LieAlgebraError) -> CliError {
        CliError::Lie(e)
    }
}
impl From<G2Error> for CliError {
    fn from(e: G2Error) -> CliError {
        CliError::G2(e)
    }
}
impl From<SymmetryError> for CliError {
    fn from(e: SymmetryError) -> CliError {
        CliError::Symmetry(e)
    }
}
impl From<TorusError> for CliError {
    fn from(e: TorusError) -> CliError {
        CliError::Torus(e)
    }
}
impl From<ExteriorError> for CliError {
    fn from(e: ExteriorError) -> CliError {
        CliError::Exterior(e)
    }
}

fn main() -> ExitCode {
    // Parse by hand so usage mistakes exit 1; code 2 is reserved for an
    // exhausted search.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::FAILURE,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(report) => match report.print(cli.json) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Algebra { sub } => match sub {
            AlgebraCmd::Check { input } => cmd_algebra_check(input),
            AlgebraCmd::Betti { input } => cmd_algebra_betti(input),
        },
        Command::G2 { sub } => match sub {
            G2Cmd::Metric(args) => cmd_g2_metric(args),
            G2Cmd::Torsion(args) => cmd_g2_torsion(args),
            G2Cmd::Symmetry(args) => cmd_g2_symmetry(args),
            G2Cmd::FindClosed(args) => cmd_g2_find_closed(args),
            G2Cmd::Verify(args) => cmd_g2_verify(args),
        },
        Command::Table1 => cmd_table1(),
        Command::Torus(args) => cmd_torus(args),
    }
}

/// Resolves an algebra argument: literal tuple, `@name` or bare built-in
/// name, or a file containing a single tuple or a one-entry catalog.
fn resolve_algebra(spec: &str) -> Result<LieAlgebra, CliError> {
    let trimmed = spec.trim();
    if trimmed.starts_with('(') {
        return Ok(LieAlgebra::parse(trimmed)?);
    }
    if let Some(name) = trimmed.strip_prefix('@') {
        return LieAlgebra::builtin(name).ok_or_else(|| {
            CliError::Input(format!(
                "unknown built-in algebra @{name}; available: {}",
                LieAlgebra::builtin_names().join(", ")
            ))
        });
    }
    if let Some(algebra) = LieAlgebra::builtin(trimmed) {
        return Ok(algebra);
    }
    let text = std::fs::read_to_string(trimmed).map_err(|err| CliError::Io {
        path: trimmed.to_string(),
        err,
    })?;
    if text.trim_start().starts_with('(') {
        return Ok(LieAlgebra::parse(&text)?);
    }
    let mut entries = LieAlgebra::load_catalog(&text)?;
    match entries.len() {
        1 => Ok(entries.pop().expect("length checked").1),
        0 => Err(CliError::Input(format!("{trimmed}: catalog has no entries"))),
        n => Err(CliError::Input(format!(
            "{trimmed}: catalog has {n} entries ({}); pass a file with exactly one",
            entries
                .iter()
                .map(|(name, _)| name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

fn require_dim7(algebra: &LieAlgebra) -> Result<(), CliError> {
    if algebra.dim() == 7 {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "g2 commands need a 7-dimensional algebra, got dimension {}",
            algebra.dim()
        )))
    }
}

fn parse_phi(text: &str) -> Result<KForm<Rat>, CliError> {
    let phi: KForm<Rat> = parse_form(text, 7)?;
    if phi.degree() != 3 {
        return Err(CliError::Input(format!(
            "--phi must be a 3-form, got degree {}",
            phi.degree()
        )));
    }
    Ok(phi)
}

fn phi_or_standard(phi: &Option<String>) -> Result<KForm<Rat>, CliError> {
    match phi {
        Some(text) => parse_phi(text),
        None => Ok(standard_phi()),
    }
}

fn cmd_algebra_check(input: &str) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Outputs {
        dim: u8,
        jacobi_ok: bool,
        unimodular: bool,
    }
    let algebra = resolve_algebra(input)?;
    Ok(Report::new("algebra check")
        .input("input", input)
        .outputs(Outputs {
            dim: algebra.dim(),
            jacobi_ok: true,
            unimodular: algebra.is_unimodular(),
        }))
}

fn cmd_algebra_betti(input: &str) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Outputs {
        dim: u8,
        betti: Vec<usize>,
        b2: usize,
        unimodular: bool,
    }
    let algebra = resolve_algebra(input)?;
    let betti = algebra.betti().0;
    let b2 = betti.get(2).copied().unwrap_or(0);
    Ok(Report::new("algebra betti")
        .input("input", input)
        .outputs(Outputs {
            dim: algebra.dim(),
            betti,
            b2,
            unimodular: algebra.is_unimodular(),
        }))
}

fn metric_rows(m: &Mat7) -> Vec<Vec<f64>> {
    (0..7).map(|i| (0..7).map(|j| m[(i, j)]).collect()).collect()
}

fn cmd_g2_metric(args: &PhiArgs) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Outputs {
        phi: String,
        orientation: i8,
        vol_coeff: f64,
        metric: Vec<Vec<f64>>,
        volume_form: String,
    }
    let algebra = resolve_algebra(&args.algebra)?;
    require_dim7(&algebra)?;
    let phi = phi_or_standard(&args.phi)?.to_float();
    let structure = metric_from_phi(&phi)?;
    Ok(Report::new("g2 metric")
        .input("algebra", &args.algebra)
        .input("phi", &args.phi)
        .outputs(Outputs {
            phi: structure.phi().to_string(),
            orientation: structure.orientation(),
            vol_coeff: structure.vol_coeff(),
            metric: metric_rows(structure.metric()),
            volume_form: structure.volume_form().to_string(),
        }))
}

fn cmd_g2_torsion(args: &PhiArgs) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Outputs {
        phi: String,
        #[serde(flatten)]
        torsion: TorsionReport,
    }
    let algebra = resolve_algebra(&args.algebra)?;
    require_dim7(&algebra)?;
    let phi = phi_or_standard(&args.phi)?.to_float();
    let torsion = torsion_report(&algebra, &phi)?;
    Ok(Report::new("g2 torsion")
        .input("algebra", &args.algebra)
        .input("phi", &args.phi)
        .outputs(Outputs {
            phi: phi.to_string(),
            torsion,
        }))
}

#[derive(Serialize)]
struct SymmetryOutputs {
    phi: String,
    dim_s: usize,
    abelian: bool,
    f_injective: bool,
    basis: Vec<Vec<f64>>,
    basis_exact: Option<Vec<String>>,
}

fn symmetry_outputs(phi: &KForm<Rat>, sym: &SymmetryAlgebra) -> SymmetryOutputs {
    SymmetryOutputs {
        phi: phi.to_string(),
        dim_s: sym.dim(),
        abelian: sym.abelian(),
        f_injective: sym.f_injective(),
        basis: sym
            .basis()
            .iter()
            .map(|v| v.components().to_vec())
            .collect(),
        basis_exact: sym.basis_exact().map(|vs| {
            vs.iter()
                .map(|v| {
                    let comps: Vec<String> =
                        v.components().iter().map(|c| c.to_string()).collect();
                    format!("[{}]", comps.join(", "))
                })
                .collect()
        }),
    }
}

fn cmd_g2_symmetry(args: &PhiArgs) -> Result<Report, CliError> {
    let algebra = resolve_algebra(&args.algebra)?;
    require_dim7(&algebra)?;
    let phi = phi_or_standard(&args.phi)?;
    let sym = symmetry_algebra(&algebra, &phi)?;
    Ok(Report::new("g2 symmetry")
        .input("algebra", &args.algebra)
        .input("phi", &args.phi)
        .outputs(symmetry_outputs(&phi, &sym)))
}

fn cmd_g2_find_closed(args: &SearchArgs) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Outputs {
        phi: String,
        kernel_dim: usize,
    }
    let algebra = resolve_algebra(&args.algebra)?;
    require_dim7(&algebra)?;
    let phi = find_closed_g2(&algebra, args.seed, args.attempts)?;
    Ok(Report::new("g2 find-closed")
        .input("algebra", &args.algebra)
        .input("seed", args.seed)
        .input("attempts", args.attempts)
        .outputs(Outputs {
            phi: phi.to_string(),
            kernel_dim: algebra.closed_forms_basis(3).len(),
        }))
}

fn cmd_g2_verify(args: &VerifyArgs) -> Result<Report, CliError> {
    let algebra = resolve_algebra(&args.algebra)?;
    require_dim7(&algebra)?;
    let phi = match &args.phi {
        Some(text) => parse_phi(text)?,
        None => find_closed_g2(&algebra, args.seed, args.attempts)?,
    };
    let verification = verify_theorem_bounds(&algebra, &phi)?;
    Ok(Report::new("g2 verify")
        .input("algebra", &args.algebra)
        .input("phi", &args.phi)
        .input("seed", args.seed)
        .input("attempts", args.attempts)
        .outputs(verification))
}

const TABLE1_EXPECTED: [(&str, usize); 4] =
    [("row1", 3), ("row2", 3), ("row3", 5), ("row4", 6)];

#[derive(Serialize)]
struct Table1Row {
    algebra: String,
    betti: Vec<usize>,
    b2: usize,
    expected: usize,
    status: String,
}

#[derive(Serialize)]
struct Table1Outputs {
    rows: Vec<Table1Row>,
    all_pass: bool,
}

fn cmd_table1() -> Result<Report, CliError> {
    let mut rows = Vec::new();
    for (name, expected) in TABLE1_EXPECTED {
        let algebra = LieAlgebra::builtin(name).expect("built-in names");
        let betti = algebra.betti().0;
        let b2 = betti[2];
        rows.push(Table1Row {
            algebra: name.to_string(),
            betti,
            b2,
            expected,
            status: if b2 == expected { "PASS" } else { "FAIL" }.to_string(),
        });
    }
    let all_pass = rows.iter().all(|r| r.status == "PASS");
    Ok(Report::new("table1").outputs(Table1Outputs { rows, all_pass }))
}

fn cmd_torus(args: &TorusArgs) -> Result<Report, CliError> {
    for (flag, value) in [
        ("--amp-a", args.amp_a),
        ("--amp-b", args.amp_b),
        ("--amp-c", args.amp_c),
    ] {
        if !value.is_finite() || value < 0.0 {
            return Err(CliError::Input(format!(
                "{flag} must be a nonnegative finite number, got {value}"
            )));
        }
    }
    if args.grid < 2 {
        return Err(CliError::Input(format!(
            "--grid must be at least 2, got {}",
            args.grid
        )));
    }
    if !args.step.is_finite() || args.step <= 0.0 {
        return Err(CliError::Input(format!(
            "--step must be a positive finite number, got {}",
            args.step
        )));
    }
    let report = torus_report(args.amp_a, args.amp_b, args.amp_c, args.grid, args.step)?;
    Ok(Report::new("torus")
        .input("amp_a", args.amp_a)
        .input("amp_b", args.amp_b)
        .input("amp_c", args.amp_c)
        .input("grid", args.grid)
        .input("step", args.step)
        .outputs(report))
}
